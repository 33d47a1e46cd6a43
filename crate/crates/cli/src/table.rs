//! Side-by-side comparison with the packaged table.

use crate::store::{key, ResultsStore};
use crate::{compute_bound, BoundOutcome};
use mixedsdp::table::{doubling_bounds, table1, Marker, TableRow};
use mixedsdp::{ProblemSpec, Result, SolverOptions};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

/// Parse `3`, `3..5`, `3..=5` or `3-5`.
pub fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let s = s.trim();
    let parts: Vec<&str> = if let Some((a, b)) = s.split_once("..=") {
        vec![a, b]
    } else if let Some((a, b)) = s.split_once("..") {
        vec![a, b]
    } else if let Some((a, b)) = s.split_once('-') {
        vec![a, b]
    } else {
        vec![s, s]
    };
    let lo: usize = parts[0].trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let hi: usize = parts[1].trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

#[derive(Clone, Debug)]
pub struct Row {
    pub published: TableRow,
    pub computed: Option<std::result::Result<u64, String>>,
    pub doubled: Option<u64>,
}

impl Row {
    pub fn status(&self) -> &'static str {
        match (&self.computed, self.published.marker) {
            (None, _) => "not computed",
            (Some(Err(_)), _) => "failed",
            (Some(Ok(_)), Some(Marker::K4)) => "k=4 entry",
            (Some(Ok(_)), Some(Marker::Doubling)) => "doubling entry",
            (Some(Ok(v)), None) if *v == self.published.new_upper => "match",
            (Some(Ok(_)), None) => "MISMATCH",
        }
    }
}

/// Rows with `d` in range and length at most `max_length`. Missing bounds are
/// computed in parallel and appended to the store unless `replay` is set.
pub fn build_rows(
    d: &RangeInclusive<usize>,
    max_length: usize,
    opts: &SolverOptions,
    store: &ResultsStore,
    replay: bool,
) -> Result<Vec<Row>> {
    let picked: Vec<TableRow> = table1().into_iter().filter(|r| d.contains(&r.d) && r.length() <= max_length).collect();
    let known = store.latest()?;
    let computed: Vec<Option<std::result::Result<u64, String>>> = if replay {
        picked.iter().map(|r| known.get(&key(&r.spec())).map(|rec| Ok(rec.certified_bound))).collect()
    } else {
        picked
            .par_iter()
            .map(|r| match compute_bound(&r.spec(), opts) {
                BoundOutcome::Certified(rec) => {
                    let v = rec.certified_bound;
                    store.append(&rec).map(|_| Ok(v)).unwrap_or_else(|e| Err(e.to_string()))
                }
                BoundOutcome::Failed(e) => Err(e.to_string()),
            })
            .map(Some)
            .collect()
    };
    let derived = doubling_bounds();
    Ok(picked
        .into_iter()
        .zip(computed)
        .map(|(published, computed)| {
            let spec = published.spec();
            let doubled = derived.iter().find(|b| same_point(&b.spec, &spec)).map(|b| b.bound);
            Row { published, computed, doubled }
        })
        .collect())
}

fn same_point(a: &ProblemSpec, b: &ProblemSpec) -> bool {
    (a.n2, a.n3, a.d) == (b.n2, b.n3, b.d)
}

pub fn render(rows: &[Row]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} {:>3} {:>3} {:>8} {:>8} {:>9} {:>8} {:>8}  status",
        "n2", "n3", "d", "lower", "computed", "published", "doubled", "previous"
    );
    for r in rows {
        let computed = match &r.computed {
            Some(Ok(v)) => v.to_string(),
            Some(Err(_)) | None => "-".into(),
        };
        let doubled = r.doubled.map_or("-".into(), |v| v.to_string());
        let p = &r.published;
        let _ = write!(
            s,
            "{:>3} {:>3} {:>3} {:>8} {:>8} {:>9} {:>8} {:>8}  {}",
            p.n2,
            p.n3,
            p.d,
            p.lower,
            computed,
            p.new_upper,
            doubled,
            p.previous_upper,
            r.status()
        );
        if let Some(Err(e)) = &r.computed {
            let _ = write!(s, " ({e})");
        }
        s.push('\n');
    }
    s
}

pub fn render_derived() -> String {
    let mut s = String::new();
    for b in doubling_bounds() {
        let _ = writeln!(
            s,
            "({},{},{}) <= {} from doubling N({},{},{}) <= {}",
            b.spec.n2, b.spec.n3, b.spec.d, b.bound, b.from.n2, b.from.n3, b.from.d, b.from_bound
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert_eq!(parse_range("3..5").unwrap(), 3..=5);
        assert_eq!(parse_range("3..=5").unwrap(), 3..=5);
        assert_eq!(parse_range("4-6").unwrap(), 4..=6);
        assert!(parse_range("5-3").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn derived_lines() {
        let text = render_derived();
        assert!(text.contains("(2,12,8) <= 134"));
        assert!(text.contains("(5,3,3) <= 60"));
    }
}
