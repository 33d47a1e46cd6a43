//! Brute-force check of the block diagonalization on tiny instances.
//!
//! Builds the representative vectors and the orbit matrices explicitly over
//! the full word space, contracts them, and compares with the blocks produced
//! by [`crate::coefficients`]. Also checks that positive semidefiniteness of
//! the full matrices agrees with that of the reduced blocks at sampled points.

use crate::codes::{all_words, canonical_orbit, hamming_distance, Code, OrbitTable, ProblemSpec, Word};
use crate::coefficients::{assemble_d0, assemble_empty, factor_column, BlockSpec, Case};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Coeff;
use crate::symmetry::{build_shape_index_d0, build_shape_index_empty, weight_admissible, Tableau};
use crate::{enumerate_orbits, Rational};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Largest word space accepted by [`verify_reduction`].
pub const MAX_VERIFY_WORDS: u128 = 108;
pub const SAMPLES: usize = 50;
const SEED: u64 = 0x5eed_0001;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub spec: ProblemSpec,
    pub checks: Vec<Check>,
    /// Individual `(block, orbit, row, column)` entries compared.
    pub entries_compared: usize,
    pub mismatches: Vec<String>,
    pub psd_samples: usize,
    pub non_psd_samples: usize,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Distinct rearrangements of a row.
fn row_arrangements(row: &[u8]) -> Vec<Vec<u8>> {
    let mut cur = row.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // Next lexicographic permutation until exhausted.
    while let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) {
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

fn kron(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// `sum_{tau' ~ tau} sum_{c in C_lambda} sgn(c) ⊗_y F(tau'(c(y)))`, cells in row-concatenation order.
fn young_vector(case: Case, j: usize, tau: &Tableau) -> Vec<i64> {
    let shape = tau.shape().parts().to_vec();
    let alphabet = factor_column(case, j, 1).map(|(v, _)| v.len()).unwrap_or(1);
    let len = shape.iter().sum::<usize>();
    let mut out = vec![0i64; alphabet.pow(len as u32)];
    let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(r, &w)| (0..w).map(move |c| (r, c))).collect();
    // Row-equivalent tableaux: independent rearrangements of each row.
    let mut variants: Vec<Vec<Vec<u8>>> = vec![Vec::new()];
    for r in 0..shape.len() {
        let mut next = Vec::new();
        for v in &variants {
            for arr in row_arrangements(tau.row(r)) {
                let mut v = v.clone();
                v.push(arr);
                next.push(v);
            }
        }
        variants = next;
    }
    let tall: Vec<usize> =
        (0..shape.first().copied().unwrap_or(0)).filter(|&c| shape.len() > 1 && c < shape[1]).collect();
    for v in &variants {
        for mask in 0u32..(1 << tall.len()) {
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            let mut vec = vec![sign];
            for &(r, c) in &cells {
                // c(y): swap the two cells of a flipped height-2 column.
                let flipped = tall.iter().position(|&t| t == c).is_some_and(|k| mask >> k & 1 == 1);
                let src_row = if flipped { 1 - r } else { r };
                let value = v[src_row][c];
                let (col, _) = factor_column(case, j, value).expect("entry within factor width");
                vec = kron(&vec, col);
            }
            for (o, x) in out.iter_mut().zip(vec) {
                *o += x;
            }
        }
    }
    out
}

fn power_vector(case: Case, j: usize, l: usize) -> Vec<i64> {
    let (col, _) = factor_column(case, j, 1).expect("factor column");
    (0..l).fold(vec![1], |acc, _| kron(&acc, col))
}

fn restrict(v: &[i64], rows: &[usize]) -> Vec<i64> {
    rows.iter().map(|&r| v[r]).collect()
}

fn is_psd(m: &DenseMatrix<f64>) -> bool {
    if m.rows() == 0 {
        return true;
    }
    let scale = m.max_abs().max(1.0);
    m.min_eigenvalue() >= -1e-9 * scale
}

struct Explicit {
    /// Admissible words for the zero-word stabilizer (index into the word list).
    admissible: Vec<usize>,
    /// `orbit_zero[a][b]`: orbit-table index of `{0, x_a, x_b}`.
    orbit_zero: Vec<Vec<usize>>,
    /// `orbit_pair[x][y]`: orbit-table index of `{x, y}`.
    orbit_pair: Vec<Vec<usize>>,
}

fn explicit_orbits(spec: &ProblemSpec, words: &[Word], table: &OrbitTable) -> Result<Explicit> {
    let zero = Word::zero(spec);
    let admissible: Vec<usize> = (0..words.len()).filter(|&i| weight_admissible(spec, words[i].weight())).collect();
    let lookup = |code: Vec<Word>| -> Result<usize> {
        let id = canonical_orbit(&Code::new(code)?)?;
        table.lookup(&id).ok_or_else(|| Error::Verification(format!("orbit {id} missing from the table")))
    };
    let mut orbit_zero = Vec::new();
    for &a in &admissible {
        let mut row = Vec::new();
        for &b in &admissible {
            row.push(lookup(vec![zero.clone(), words[a].clone(), words[b].clone()])?);
        }
        orbit_zero.push(row);
    }
    let mut orbit_pair = Vec::new();
    for x in words {
        let mut row = Vec::new();
        for y in words {
            row.push(lookup(vec![x.clone(), y.clone()])?);
        }
        orbit_pair.push(row);
    }
    Ok(Explicit { admissible, orbit_zero, orbit_pair })
}

/// Compare `block` with the explicit contraction `cols[a]^T N cols[b]`, where
/// `orbit[x][y]` names the orbit of `N`'s 1-entry at `(x, y)`.
fn compare_block(
    block: &BlockSpec<Rational>,
    cols: &[Vec<i64>],
    orbit: &[Vec<usize>],
    offset: usize,
    table: &OrbitTable,
    report: &mut ReductionReport,
) {
    let n = cols.len();
    let mut explicit: std::collections::BTreeMap<usize, DenseMatrix<i128>> = Default::default();
    for a in 0..n {
        for b in 0..n {
            for (x, &ua) in cols[a].iter().enumerate() {
                if ua == 0 {
                    continue;
                }
                for (y, &ub) in cols[b].iter().enumerate() {
                    if ub == 0 {
                        continue;
                    }
                    let m = explicit.entry(orbit[x][y]).or_insert_with(|| DenseMatrix::zeros(n, n));
                    m[(a, b)] += (ua * ub) as i128;
                }
            }
        }
    }
    let mut keys: Vec<usize> = explicit.keys().chain(block.coeffs.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    for w in keys {
        for a in 0..n {
            for b in 0..n {
                let want = explicit.get(&w).map_or(0, |m| m[(a, b)]);
                let got = block.coeffs.get(&w).map_or_else(Rational::zero, |m| m[(a + offset, b + offset)].clone());
                report.entries_compared += 1;
                if got != Rational::from_int(want as i64) {
                    report.mismatches.push(format!(
                        "{:?} block {} orbit {} entry ({a},{b}): engine {got}, explicit {want}",
                        block.case,
                        block.shape,
                        table.get(w).id
                    ));
                }
            }
        }
    }
}

/// Random code with minimum distance at least `d`, grown greedily in random order.
fn random_code(words: &[Word], d: usize, rng: &mut ChaCha8Rng) -> Vec<Word> {
    let mut order: Vec<&Word> = words.iter().collect();
    order.shuffle(rng);
    let limit = rng.gen_range(1..=words.len());
    let mut code: Vec<Word> = Vec::new();
    for w in order {
        if code.len() >= limit {
            break;
        }
        if code.iter().all(|c| hamming_distance(c, w).unwrap() >= d) {
            code.push(w.clone());
        }
    }
    code
}

/// Orbit-indexed indicator average of a code (subsets of size at most three).
fn code_point(code: &[Word], table: &OrbitTable) -> Vec<f64> {
    let mut y = vec![0.0; table.len()];
    let n = code.len();
    let mut add = |c: Vec<Word>| {
        let id = canonical_orbit(&Code::new(c).unwrap()).unwrap();
        let idx = table.lookup(&id).unwrap();
        y[idx] += 1.0 / id.orbit_size() as f64;
    };
    for i in 0..n {
        add(vec![code[i].clone()]);
        for j in i + 1..n {
            add(vec![code[i].clone(), code[j].clone()]);
            for k in j + 1..n {
                add(vec![code[i].clone(), code[j].clone(), code[k].clone()]);
            }
        }
    }
    y
}

/// Run all checks for a tiny instance (`2^n2 3^n3 <= 108`).
pub fn verify_reduction(spec: &ProblemSpec) -> Result<ReductionReport> {
    if spec.word_count() > MAX_VERIFY_WORDS {
        return Err(Error::Resource(format!(
            "verification needs at most {MAX_VERIFY_WORDS} words, {spec} has {}",
            spec.word_count()
        )));
    }
    let spec = spec.with_k(3)?;
    let words: Vec<Word> = all_words(&spec).collect();
    let table = enumerate_orbits(&spec);
    let ex = explicit_orbits(&spec, &words, &table)?;
    let mut report = ReductionReport {
        spec,
        checks: Vec::new(),
        entries_compared: 0,
        mismatches: Vec::new(),
        psd_samples: 0,
        non_psd_samples: 0,
    };

    // Zero-word stabilizer: every orbit, feasible or not.
    let shapes_d0 = build_shape_index_d0(&spec);
    let blocks_d0: Vec<BlockSpec<Rational>> = assemble_d0(&shapes_d0, &table, |_| true);
    let mut dims_d0 = 0u128;
    for (shape, block) in shapes_d0.shapes.iter().zip(&blocks_d0) {
        let (l2, l3) = (shape.n.1, shape.n.2);
        let cols: Vec<Vec<i64>> = shape
            .columns
            .iter()
            .map(|t| {
                let bin = young_vector(Case::D0, 1, &t[0]);
                let ter = kron(&young_vector(Case::D0, 2, &t[1]), &young_vector(Case::D0, 3, &t[2]));
                debug_assert_eq!(ter.len(), 3usize.pow((l2 + l3) as u32));
                restrict(&kron(&bin, &ter), &ex.admissible)
            })
            .collect();
        compare_block(block, &cols, &ex.orbit_zero, 0, &table, &mut report);
        dims_d0 += shape.irrep_dimension() * shape.columns.len() as u128;
    }
    // Empty code: pairs and singletons; the augmented row is checked separately.
    let shapes_empty = build_shape_index_empty(&spec);
    let blocks_empty: Vec<BlockSpec<Rational>> =
        assemble_empty(&spec, &shapes_empty, &table, |o| o.id.size <= 2 && o.id.size > 0);
    let mut dims_empty = 1u128;
    for (shape, block) in shapes_empty.shapes.iter().zip(&blocks_empty) {
        let mut v = vec![1];
        for (j, &l) in shape.l.iter().enumerate() {
            v = kron(&v, &power_vector(Case::Empty, j + 1, l));
        }
        let offset = usize::from(shape.augmented);
        compare_block(block, &[v.clone()], &ex.orbit_pair, offset, &table, &mut report);
        if shape.augmented {
            let singleton = table.singleton_index();
            let corner = block.constant.as_ref().map(|c| c[(0, 0)].clone());
            let edge = block.coeffs.get(&singleton).map(|f| f[(0, 1)].clone());
            let want = Rational::from_int(v.iter().sum::<i64>());
            report.entries_compared += 2;
            if corner != Some(Rational::from_int(1)) || edge != Some(want.clone()) {
                report
                    .mismatches
                    .push(format!("augmented row: corner {corner:?}, edge {edge:?}, expected 1 and {want}"));
            }
        }
        dims_empty += shape.irrep_dimension();
    }
    report.checks.push(Check {
        name: "entries".into(),
        passed: report.mismatches.is_empty(),
        detail: format!("{} entries compared, {} mismatches", report.entries_compared, report.mismatches.len()),
    });

    let want_d0 = ex.admissible.len() as u128;
    let want_empty = words.len() as u128 + 1;
    report.checks.push(Check {
        name: "dimensions".into(),
        passed: dims_d0 == want_d0 && dims_empty == want_empty,
        detail: format!("zero-word stabilizer {dims_d0} of {want_d0}, empty code {dims_empty} of {want_empty}"),
    });

    // Completeness: summing every orbit's coefficient gives U^T J U.
    let mut complete = true;
    for (shape, block) in shapes_d0.shapes.iter().zip(&blocks_d0) {
        let n = block.dim();
        let sums: Vec<i64> = shape
            .columns
            .iter()
            .map(|t| {
                let v = kron(
                    &young_vector(Case::D0, 1, &t[0]),
                    &kron(&young_vector(Case::D0, 2, &t[1]), &young_vector(Case::D0, 3, &t[2])),
                );
                restrict(&v, &ex.admissible).iter().sum()
            })
            .collect();
        for a in 0..n {
            for b in 0..n {
                let total = block.coeffs.values().fold(Rational::from_int(0), |acc, f| acc + f[(a, b)].clone());
                if total != Rational::from_int(sums[a] * sums[b]) {
                    complete = false;
                }
            }
        }
    }
    report.checks.push(Check {
        name: "completeness".into(),
        passed: complete,
        detail: "sum over all orbits equals the contraction with the all-ones matrix".into(),
    });

    // PSD transport at sampled assignments supported on feasible orbits.
    let feasible_d0: Vec<BlockSpec<f64>> = blocks_d0.iter().map(|b| to_f64(b, &table)).collect();
    let feasible_empty: Vec<BlockSpec<f64>> = blocks_empty.iter().map(|b| to_f64(b, &table)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut agree = true;
    let mut disagreements = Vec::new();
    for sample in 0..SAMPLES {
        let y = sample_point(sample, &words, &spec, &table, &mut rng);
        // Full matrices.
        let na = ex.admissible.len();
        let mut full_d0 = DenseMatrix::zeros(na, na);
        for a in 0..na {
            for b in 0..na {
                full_d0[(a, b)] = y[ex.orbit_zero[a][b]];
            }
        }
        let nw = words.len();
        let mut full_empty = DenseMatrix::zeros(nw + 1, nw + 1);
        full_empty[(0, 0)] = 1.0;
        for x in 0..nw {
            full_empty[(0, x + 1)] = y[table.singleton_index()];
            full_empty[(x + 1, 0)] = y[table.singleton_index()];
            for z in 0..nw {
                full_empty[(x + 1, z + 1)] = y[ex.orbit_pair[x][z]];
            }
        }
        let reduced_d0 = feasible_d0.iter().all(|b| is_psd(&b.evaluate(&y)));
        let reduced_empty = feasible_empty.iter().all(|b| is_psd(&b.evaluate(&y)));
        let (f0, fe) = (is_psd(&full_d0), is_psd(&full_empty));
        if f0 != reduced_d0 || fe != reduced_empty {
            agree = false;
            disagreements.push(format!("sample {sample}: full ({f0},{fe}) reduced ({reduced_d0},{reduced_empty})"));
        }
        if f0 && fe {
            report.psd_samples += 1;
        } else {
            report.non_psd_samples += 1;
        }
    }
    report.checks.push(Check {
        name: "psd-transport".into(),
        passed: agree,
        detail: if agree {
            format!("{} PSD and {} non-PSD samples agree", report.psd_samples, report.non_psd_samples)
        } else {
            disagreements.join("; ")
        },
    });
    Ok(report)
}

/// Zero out infeasible orbits and convert to floats; the constant term is kept.
fn to_f64(b: &BlockSpec<Rational>, table: &OrbitTable) -> BlockSpec<f64> {
    BlockSpec {
        case: b.case,
        shape: b.shape.clone(),
        row_labels: b.row_labels.clone(),
        constant: b.constant.as_ref().map(|c| c.map(|x| x.to_float())),
        coeffs: b
            .coeffs
            .iter()
            .filter(|(&w, _)| table.get(w).feasible)
            .map(|(&w, f)| (w, f.map(|x| x.to_float())))
            .collect(),
    }
}

/// Samples alternate between mixtures of code indicators (always PSD),
/// perturbed indicators, and uniformly random values.
fn sample_point(
    sample: usize,
    words: &[Word],
    spec: &ProblemSpec,
    table: &OrbitTable,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let mut y = vec![0.0; table.len()];
    match sample % 3 {
        0 => {
            let parts = rng.gen_range(1..=3);
            let weights: Vec<f64> = (0..parts).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = weights.iter().sum();
            for w in weights {
                let p = code_point(&random_code(words, spec.d, rng), table);
                for (a, b) in y.iter_mut().zip(p) {
                    *a += w / total * b;
                }
            }
        }
        1 => {
            y = code_point(&random_code(words, spec.d, rng), table);
            let idx = rng.gen_range(1..table.len());
            y[idx] += rng.gen_range(0.0..2.0) / table.get(idx).id.orbit_size() as f64;
        }
        _ => {
            for (i, v) in y.iter_mut().enumerate().skip(1) {
                *v = rng.gen_range(0.0..1.0) / table.get(i).id.orbit_size() as f64 * words.len() as f64;
            }
        }
    }
    for (i, v) in y.iter_mut().enumerate() {
        if !table.get(i).feasible {
            *v = 0.0;
        }
    }
    y
}
