//! Exact coefficients of the reduced blocks.
//!
//! For the stabilizer of the all-zero word each block entry is
//! `u_sigma^T N_w u_tau`, read off from the polynomial `p_{sigma,tau}` in the
//! dual variables: the coefficient of a monomial is the contribution of all
//! ordered triples `(0, x, y)` with those column-pattern counts, and the
//! monomial determines the orbit `w` via [`kappa`]. The empty-code blocks are
//! handled the same way with the two-class pair patterns.

use crate::codes::{multinomial, OrbitId, OrbitInfo, OrbitTable, Pattern, ProblemSpec};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::poly::{DualMonomial, DualPoly, TERNARY_OFFSET};
use crate::scalar::Coeff;
use crate::symmetry::{Partition, ShapeD0, ShapeEmpty, ShapeIndexD0, ShapeIndexEmpty, Tableau};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// Which stabilizer a block belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// Stabilizer of the code consisting of the all-zero word.
    D0,
    /// The empty code (full isometry group).
    Empty,
}

/// Column `l` (1-based) of factor matrix `j`: `A1..A3` for [`Case::D0`], `B1..B4` for [`Case::Empty`].
/// Returns the vector and whether it lives on a ternary coordinate.
pub fn factor_column(case: Case, j: usize, l: u8) -> Option<(&'static [i64], bool)> {
    let v: &'static [i64] = match (case, j, l) {
        (Case::D0, 1, 1) => &[1, 0],
        (Case::D0, 1, 2) => &[0, 1],
        (Case::D0, 2, 1) => &[1, 0, 0],
        (Case::D0, 2, 2) => &[0, 1, 1],
        (Case::D0, 3, 1) => &[0, 1, -1],
        (Case::Empty, 1, 1) => &[1, 1],
        (Case::Empty, 2, 1) => &[1, -1],
        (Case::Empty, 3, 1) => &[1, 1, 1],
        (Case::Empty, 4, 1) => &[1, -1, 0],
        _ => return None,
    };
    Some((v, v.len() == 3))
}

/// Number of columns of factor matrix `j`.
pub fn factor_width(case: Case, j: usize) -> u8 {
    match (case, j) {
        (Case::D0, 1) | (Case::D0, 2) => 2,
        _ => 1,
    }
}

/// Expansion of `F_j(l) ⊗ F_j(m)` in the dual basis, obtained by evaluating the
/// tensor at each basis element (sums over the pattern classes).
pub fn base_change<C: Coeff>(case: Case, j: usize, l: u8, m: u8) -> Result<DualPoly<C>> {
    let (a, ternary) =
        factor_column(case, j, l).ok_or_else(|| Error::Domain(format!("no column {l} of factor {j} ({case:?})")))?;
    let (b, _) =
        factor_column(case, j, m).ok_or_else(|| Error::Domain(format!("no column {m} of factor {j} ({case:?})")))?;
    let offset = if ternary { TERNARY_OFFSET } else { 0 };
    let mut out = DualPoly::zero();
    for (i, &ai) in a.iter().enumerate() {
        for (k, &bk) in b.iter().enumerate() {
            let class = match case {
                Case::D0 => Pattern::of(0, i as u8, k as u8),
                Case::Empty if i == k => Pattern::All,
                Case::Empty => Pattern::P12_3,
            };
            out.add_term(DualMonomial::var(offset + class.index()), C::from_int(ai * bk));
        }
    }
    Ok(out)
}

/// `(case, j, l, m)`.
pub type BaseChangeKey = (Case, usize, u8, u8);

/// All base-change identities for both cases.
pub struct BaseChangeTable<C> {
    pub entries: Vec<(BaseChangeKey, DualPoly<C>)>,
}

impl<C: Coeff> BaseChangeTable<C> {
    pub fn build() -> Self {
        let mut entries = Vec::new();
        for (case, js) in [(Case::D0, 1..=3), (Case::Empty, 1..=4)] {
            for j in js {
                let w = factor_width(case, j);
                for l in 1..=w {
                    for m in 1..=w {
                        entries.push(((case, j, l, m), base_change(case, j, l, m).unwrap()));
                    }
                }
            }
        }
        BaseChangeTable { entries }
    }
}

/// Contribution of one tableau factor to `p_{sigma,tau}`.
///
/// Entries are in `{1, 2}` and the height is at most 2, so a semistandard
/// tableau has a second row of 2s. Column-stabilizer sums vanish unless the
/// first `lambda_2` cells of the rearranged first row are 1, in which case each
/// height-2 column contributes `2 (L11 L22 - L12 L21)`. The remaining cells of
/// the first row are summed over all rearrangements by counting how many
/// position pairs carry each `(tau, sigma)` value combination.
pub fn tableau_factor<C: Coeff>(
    case: Case,
    j: usize,
    lambda: &Partition,
    sigma: &Tableau,
    tau: &Tableau,
) -> Result<DualPoly<C>> {
    if sigma.shape() != lambda || tau.shape() != lambda {
        return Err(Error::Domain(format!("tableaux {sigma}, {tau} not of shape {lambda}")));
    }
    if lambda.height() > 2 {
        return Err(Error::Domain(format!("shape {lambda} has height > 2")));
    }
    if lambda.height() == 0 {
        return Ok(DualPoly::one());
    }
    let width = factor_width(case, j);
    let l = |t: u8, s: u8| base_change::<C>(case, j, t, s);
    let two_row = lambda.height() == 2;
    let b = if two_row { lambda.parts()[1] } else { 0 };
    let h = lambda.parts()[0] - b;
    for t in [sigma, tau] {
        if t.entries().iter().any(|&e| e == 0 || e > width) || (two_row && t.row(1).iter().any(|&e| e != 2)) {
            return Err(Error::Domain(format!("tableau {t} is not semistandard over 1..={width}")));
        }
    }
    let ones_s = sigma.row(0).iter().filter(|&&e| e == 1).count();
    let ones_t = tau.row(0).iter().filter(|&&e| e == 1).count();
    if ones_s < b || ones_t < b {
        return Ok(DualPoly::zero());
    }
    let (rs, rt) = (ones_s - b, ones_t - b);

    let mut out = DualPoly::one();
    if b > 0 {
        let h2 = l(1, 1)?.mul(&l(2, 2)?).sub(&l(1, 2)?.mul(&l(2, 1)?)).scale(&C::from_int(2));
        out = h2.pow(b);
    }
    // n_ts = number of free cells where tau' = t and sigma' = s.
    let mut free = DualPoly::zero();
    for n11 in 0..=rs.min(rt) {
        let n12 = rt - n11;
        let n21 = rs - n11;
        let Some(n22) = (h + n11).checked_sub(rs + rt) else { continue };
        let count = multinomial(h as u64, [n11, n12, n21, n22].into_iter().map(|x| x as u64));
        let mut term = DualPoly::monomial(DualMonomial::one(), C::from_int(count as i64));
        for ((t, s), e) in [((1, 1), n11), ((1, 2), n12), ((2, 1), n21), ((2, 2), n22)] {
            if e > 0 {
                term = term.mul(&l(t, s)?.pow(e));
            }
        }
        free = free.add(&term);
    }
    Ok(out.mul(&free))
}

/// `p_{sigma,tau}` for a shape of the all-zero-word stabilizer.
pub fn expand_p<C: Coeff>(lambda: &[Partition; 3], sigma: &[Tableau; 3], tau: &[Tableau; 3]) -> Result<DualPoly<C>> {
    let mut p = DualPoly::one();
    for j in 0..3 {
        p = p.mul(&tableau_factor(Case::D0, j + 1, &lambda[j], &sigma[j], &tau[j])?);
    }
    Ok(p)
}

/// Orbit encoded by a monomial.
///
/// For [`Case::D0`] the exponents are the column-pattern counts of an ordered
/// triple `(0, x, y)`. For [`Case::Empty`] the "unequal" exponents give the
/// binary and ternary distance of a pair.
pub fn kappa(m: &DualMonomial, case: Case) -> OrbitId {
    match case {
        Case::D0 => OrbitId::from_counts(m.binary(), m.ternary()),
        Case::Empty => {
            let (n2, n3) = (m.binary().iter().sum::<u16>() as usize, m.ternary().iter().sum::<u16>() as usize);
            OrbitId::pair(
                n2,
                n3,
                m.0[Pattern::P12_3.index()] as usize,
                m.0[TERNARY_OFFSET + Pattern::P12_3.index()] as usize,
            )
        }
    }
}

/// One reduced block: `F0 + sum_w y_w F_w`, with `F_w` keyed by orbit-table index.
#[derive(Clone, Debug)]
pub struct BlockSpec<C> {
    pub case: Case,
    pub shape: String,
    pub row_labels: Vec<String>,
    /// Constant part; only the augmented empty-code block has one.
    pub constant: Option<DenseMatrix<C>>,
    pub coeffs: BTreeMap<usize, DenseMatrix<C>>,
}

impl<C: Coeff> BlockSpec<C> {
    pub fn dim(&self) -> usize {
        self.row_labels.len()
    }

    /// Evaluate the block at an assignment indexed like the orbit table (empty orbit ignored).
    pub fn evaluate(&self, y: &[C]) -> DenseMatrix<C> {
        let n = self.dim();
        let mut out = self.constant.clone().unwrap_or_else(|| DenseMatrix::zeros(n, n));
        for (&w, f) in &self.coeffs {
            for i in 0..n {
                for j in 0..n {
                    let v = out[(i, j)].clone() + y[w].clone() * f[(i, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    /// Debug dump: `{case, shape, rowLabels, orbits: {orbit: [[p/q]]}}`.
    pub fn to_json(&self, table: &OrbitTable) -> serde_json::Value {
        let mat = |m: &DenseMatrix<C>| -> serde_json::Value {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .into()
        };
        let mut orbits = serde_json::Map::new();
        if let Some(c) = &self.constant {
            orbits.insert("empty".into(), mat(c));
        }
        for (&w, f) in &self.coeffs {
            orbits.insert(table.get(w).id.to_string(), mat(f));
        }
        serde_json::json!({
            "case": format!("{:?}", self.case),
            "shape": self.shape,
            "rowLabels": self.row_labels,
            "orbits": orbits,
        })
    }
}

struct KappaCache<'a> {
    table: &'a OrbitTable,
    cache: HashMap<([u16; 4], [u16; 5]), Option<usize>>,
}

impl KappaCache<'_> {
    fn index(&mut self, bin: [u16; 4], ter: [u16; 5]) -> Option<usize> {
        *self.cache.entry((bin, ter)).or_insert_with(|| self.table.lookup(&OrbitId::from_counts(bin, ter)))
    }
}

fn shape_label(lambda: &[Partition]) -> String {
    lambda.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

fn column_label(col: &[Tableau; 3]) -> String {
    col.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";")
}

fn split_poly<C: Coeff>(p: &DualPoly<C>) -> Vec<(DualMonomial, C)> {
    p.terms().map(|(m, c)| (*m, c.clone())).collect()
}

/// Assemble all-zero-word blocks, keeping the orbits accepted by `keep`.
pub fn assemble_d0<C: Coeff>(
    shapes: &ShapeIndexD0,
    orbits: &OrbitTable,
    keep: impl Fn(&OrbitInfo) -> bool,
) -> Vec<BlockSpec<C>> {
    let mut kappa_cache = KappaCache { table: orbits, cache: HashMap::new() };
    shapes.shapes.iter().map(|s| assemble_shape_d0(s, &mut kappa_cache, &keep)).collect()
}

fn assemble_shape_d0<C: Coeff>(
    shape: &ShapeD0,
    kappa_cache: &mut KappaCache<'_>,
    keep: &impl Fn(&OrbitInfo) -> bool,
) -> BlockSpec<C> {
    let n = shape.columns.len();
    let mut factor_cache: HashMap<(usize, Tableau, Tableau), DualPoly<C>> = HashMap::new();
    let mut factor = |j: usize, s: &Tableau, t: &Tableau| -> DualPoly<C> {
        factor_cache
            .entry((j, s.clone(), t.clone()))
            .or_insert_with(|| tableau_factor(Case::D0, j + 1, &shape.lambda[j], s, t).expect("valid tableaux"))
            .clone()
    };
    let mut coeffs: BTreeMap<usize, DenseMatrix<C>> = BTreeMap::new();
    for a in 0..n {
        for b in a..n {
            let (sig, tau) = (&shape.columns[a], &shape.columns[b]);
            let bin = split_poly(&factor(0, &sig[0], &tau[0]));
            let ter = split_poly(&factor(1, &sig[1], &tau[1]).mul(&factor(2, &sig[2], &tau[2])));
            let mut acc: HashMap<usize, C> = HashMap::new();
            for (mb, cb) in &bin {
                for (mt, ct) in &ter {
                    let Some(w) = kappa_cache.index(mb.binary(), mt.ternary()) else { continue };
                    if !keep(kappa_cache.table.get(w)) {
                        continue;
                    }
                    let v = cb.clone() * ct.clone();
                    acc.entry(w).and_modify(|x| *x = x.clone() + v.clone()).or_insert(v);
                }
            }
            for (w, v) in acc {
                if v.is_zero() {
                    continue;
                }
                let m = coeffs.entry(w).or_insert_with(|| DenseMatrix::zeros(n, n));
                m[(a, b)] = v.clone();
                m[(b, a)] = v;
            }
        }
    }
    BlockSpec {
        case: Case::D0,
        shape: format!("n=({},{},{}) lambda={}", shape.n.0, shape.n.1, shape.n.2, shape_label(&shape.lambda)),
        row_labels: shape.columns.iter().map(column_label).collect(),
        constant: None,
        coeffs,
    }
}

/// Blocks for the stabilizer of the all-zero word, feasible orbits only.
pub fn build_blocks_d0<C: Coeff>(shapes: &ShapeIndexD0, orbits: &OrbitTable) -> Vec<BlockSpec<C>> {
    assemble_d0(shapes, orbits, |o| o.feasible)
}

/// `prod_i (B_i(1) ⊗ B_i(1))^{l_i}` for an empty-code shape.
pub fn expand_p_empty<C: Coeff>(shape: &ShapeEmpty) -> DualPoly<C> {
    let mut p = DualPoly::one();
    for (j, &l) in shape.l.iter().enumerate() {
        let f = base_change::<C>(Case::Empty, j + 1, 1, 1).expect("valid factor");
        p = p.mul(&f.pow(l));
    }
    p
}

/// Assemble empty-code blocks, keeping the orbits accepted by `keep`.
pub fn assemble_empty<C: Coeff>(
    spec: &ProblemSpec,
    shapes: &ShapeIndexEmpty,
    orbits: &OrbitTable,
    keep: impl Fn(&OrbitInfo) -> bool,
) -> Vec<BlockSpec<C>> {
    let singleton = orbits.singleton_index();
    let word_count = C::from_int(i64::try_from(spec.word_count()).expect("word count fits in i64"));
    shapes
        .shapes
        .iter()
        .map(|shape| {
            let off = usize::from(shape.augmented);
            let dim = 1 + off;
            let mut coeffs: BTreeMap<usize, DenseMatrix<C>> = BTreeMap::new();
            for (m, c) in expand_p_empty::<C>(shape).terms() {
                let Some(w) = orbits.lookup(&kappa(m, Case::Empty)) else { continue };
                if !keep(orbits.get(w)) {
                    continue;
                }
                let f = coeffs.entry(w).or_insert_with(|| DenseMatrix::zeros(dim, dim));
                f[(off, off)] = f[(off, off)].clone() + c.clone();
            }
            let mut constant = None;
            let mut row_labels = vec![format!("l=({},{},{},{})", shape.l[0], shape.l[1], shape.l[2], shape.l[3])];
            if shape.augmented {
                let mut f0 = DenseMatrix::zeros(2, 2);
                f0[(0, 0)] = C::one();
                constant = Some(f0);
                let f = coeffs.entry(singleton).or_insert_with(|| DenseMatrix::zeros(2, 2));
                f[(0, 1)] = word_count.clone();
                f[(1, 0)] = word_count.clone();
                row_labels.insert(0, "empty".into());
            }
            coeffs.retain(|_, f| !f.is_zero());
            let lam: Vec<Partition> = shape.l.iter().map(|&l| Partition::row(l)).collect();
            BlockSpec { case: Case::Empty, shape: shape_label(&lam), row_labels, constant, coeffs }
        })
        .collect()
}

/// Blocks for the empty code, feasible orbits only.
pub fn build_blocks_empty<C: Coeff>(
    spec: &ProblemSpec,
    shapes: &ShapeIndexEmpty,
    orbits: &OrbitTable,
) -> Vec<BlockSpec<C>> {
    assemble_empty(spec, shapes, orbits, |o| o.feasible)
}
