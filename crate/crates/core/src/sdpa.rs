//! SDPA sparse format (`.dat-s`) input and output.
//!
//! SDPA solves `minimize c·x` subject to `sum_i F_i x_i - F_0 ⪰ 0`. Our problems
//! maximize `b·y` subject to `C + sum_i y_i F_i ⪰ 0`, so the file carries
//! `c = -b` and `F_0 = -C`; the solver's objective values come back negated.

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::sdp::{DataBlock, SdpData, SdpProblem};
use crate::solver::{certify_values, CertifiedBound, Provenance};
use std::fmt::Write as _;
use std::io::Write;

/// Render the problem in SDPA sparse format.
pub fn to_sdpa_string(data: &SdpData<f64>) -> String {
    let mut s = String::new();
    s.push_str("\"maximize b.y s.t. C + sum y_i F_i >= 0, written as SDPA min c.x with c = -b and F0 = -C\n");
    let _ = writeln!(s, "{}", data.num_vars);
    let _ = writeln!(s, "{}", data.blocks.len());
    let sizes: Vec<String> =
        data.blocks.iter().map(|b| if b.diagonal { format!("-{}", b.size) } else { b.size.to_string() }).collect();
    let _ = writeln!(s, "{}", sizes.join(" "));
    let c: Vec<String> = data.objective.iter().map(|&b| fmt_num(-b)).collect();
    let _ = writeln!(s, "{}", c.join(" "));
    for (k, b) in data.blocks.iter().enumerate() {
        for &(i, j, v) in &b.constant {
            let _ = writeln!(s, "0 {} {} {} {}", k + 1, i + 1, j + 1, fmt_num(-v));
        }
    }
    // Group by variable so the file lists matrices in order.
    let mut lines: Vec<(usize, usize, usize, usize, f64)> = Vec::new();
    for (k, b) in data.blocks.iter().enumerate() {
        for &(var, i, j, v) in &b.entries {
            lines.push((var + 1, k + 1, i + 1, j + 1, v));
        }
    }
    lines.sort_by_key(|l| (l.0, l.1, l.2, l.3));
    for (var, k, i, j, v) in lines {
        let _ = writeln!(s, "{var} {k} {i} {j} {}", fmt_num(v));
    }
    s
}

/// Shortest decimal that parses back to the same value; `-0` is written as `0`.
fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

pub fn write_sdpa(data: &SdpData<f64>, mut out: impl Write) -> Result<()> {
    out.write_all(to_sdpa_string(data).as_bytes())?;
    Ok(())
}

/// Write `problem` to `path` in SDPA sparse format.
pub fn emit_sdpa<C: Coeff>(problem: &SdpProblem<C>, path: &std::path::Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_sdpa(&problem.to_data::<f64>(), std::io::BufWriter::new(file))
}

/// Parse an SDPA sparse problem back into our sign convention.
pub fn parse_sdpa(text: &str) -> Result<SdpData<f64>> {
    // Tokens with their line numbers; comment lines and punctuation are skipped.
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'));
    let mut next_line = |what: &str| -> Result<(usize, Vec<String>)> {
        let (n, l) = lines.next().ok_or(Error::Parse { line: 0, msg: format!("missing {what}") })?;
        let toks = l
            .split(|c: char| c.is_whitespace() || ",{}()".contains(c))
            .filter(|t| !t.is_empty())
            .map(String::from)
            .collect();
        Ok((n, toks))
    };
    fn num<T: std::str::FromStr>(line: usize, t: &str) -> Result<T> {
        t.parse().map_err(|_| Error::Parse { line, msg: format!("bad number {t:?}") })
    }
    let (n, t) = next_line("variable count")?;
    let m: usize = num(n, t.first().ok_or(Error::Parse { line: n, msg: "empty line".into() })?)?;
    let (n, t) = next_line("block count")?;
    let nb: usize = num(n, t.first().ok_or(Error::Parse { line: n, msg: "empty line".into() })?)?;
    let (n, t) = next_line("block sizes")?;
    if t.len() < nb {
        return Err(Error::Parse { line: n, msg: format!("expected {nb} block sizes") });
    }
    let mut blocks = Vec::with_capacity(nb);
    for tok in &t[..nb] {
        let s: i64 = num(n, tok)?;
        if s == 0 {
            return Err(Error::Parse { line: n, msg: "block of size 0".into() });
        }
        blocks.push(DataBlock {
            diagonal: s < 0,
            size: s.unsigned_abs() as usize,
            constant: Vec::new(),
            entries: Vec::new(),
        });
    }
    let (n, t) = next_line("objective")?;
    if t.len() < m {
        return Err(Error::Parse { line: n, msg: format!("expected {m} objective entries") });
    }
    let objective = t[..m].iter().map(|x| num::<f64>(n, x).map(|v| -v)).collect::<Result<Vec<_>>>()?;
    while let Ok((n, t)) = next_line("entry") {
        if t.len() != 5 {
            return Err(Error::Parse { line: n, msg: "entry needs 5 fields".into() });
        }
        let var: usize = num(n, &t[0])?;
        let blk: usize = num(n, &t[1])?;
        let i: usize = num(n, &t[2])?;
        let j: usize = num(n, &t[3])?;
        let v: f64 = num(n, &t[4])?;
        if var > m || blk == 0 || blk > nb {
            return Err(Error::Parse { line: n, msg: "matrix or block index out of range".into() });
        }
        let b = &mut blocks[blk - 1];
        if i == 0 || j == 0 || i > b.size || j > b.size || (b.diagonal && i != j) {
            return Err(Error::Parse { line: n, msg: "entry position out of range".into() });
        }
        let (i, j) = (i.min(j) - 1, i.max(j) - 1);
        if var == 0 {
            b.constant.push((i, j, -v));
        } else {
            b.entries.push((var - 1, i, j, v));
        }
    }
    let mut data = SdpData { num_vars: m, objective, blocks };
    data.normalize();
    Ok(data)
}

/// Objective values reported by an SDPA-family solver, converted to our
/// convention: `(objective, dual_objective)` where the second is the upper side.
///
/// Understands SDPA's `objValPrimal`/`objValDual` lines and CSDP's
/// `Primal objective value:`/`Dual objective value:` lines. CSDP reads the same
/// file with the roles of primal and dual exchanged.
pub fn parse_sdpa_output(text: &str) -> Result<(f64, f64)> {
    let mut sdpa_primal = None;
    let mut sdpa_dual = None;
    for (n, line) in text.lines().enumerate() {
        let l = line.trim();
        let value = |rest: &str| -> Result<f64> {
            let t = rest.trim_start_matches(|c: char| c == '=' || c == ':' || c.is_whitespace());
            let t = t.split_whitespace().next().unwrap_or("");
            t.parse().map_err(|_| Error::Parse { line: n + 1, msg: format!("bad objective value {t:?}") })
        };
        if let Some(rest) = l.strip_prefix("objValPrimal") {
            sdpa_primal = Some(value(rest)?);
        } else if let Some(rest) = l.strip_prefix("objValDual") {
            sdpa_dual = Some(value(rest)?);
        } else if let Some(rest) = l.strip_prefix("Primal objective value") {
            sdpa_dual = Some(value(rest)?);
        } else if let Some(rest) = l.strip_prefix("Dual objective value") {
            sdpa_primal = Some(value(rest)?);
        }
    }
    match (sdpa_primal, sdpa_dual) {
        (Some(p), Some(d)) => Ok((-p, -d)),
        (_, None) => Err(Error::Parse { line: 0, msg: "no dual objective value found".into() }),
        (None, _) => Err(Error::Parse { line: 0, msg: "no primal objective value found".into() }),
    }
}

/// Certify an SDPA-family result file. Only the objective values are read, so
/// the guard is the reported gap alone.
pub fn certify_output(text: &str, source: &str) -> Result<CertifiedBound> {
    let (objective, dual) = parse_sdpa_output(text)?;
    certify_values(dual, dual - objective, 0.0, Provenance::ExternalFile(source.to_string()))
}
