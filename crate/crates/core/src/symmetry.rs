//! Partitions, semistandard Young tableaux, and the index sets of
//! representative-set columns for the two stabilizer cases (the all-zero word,
//! and the empty code).

use crate::codes::{binomial, ProblemSpec};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Integer partition, parts weakly decreasing and positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// One-row partition `(n)`; the empty partition for `n = 0`.
    pub fn row(n: usize) -> Self {
        Partition::new(vec![n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn height(&self) -> usize {
        self.0.len()
    }

    /// Length of column `c` (0-based).
    pub fn column_len(&self, c: usize) -> usize {
        self.0.iter().filter(|&&r| r > c).count()
    }

    /// Number of standard Young tableaux (hook length formula).
    pub fn standard_count(&self) -> u128 {
        let n = self.size();
        let mut num: u128 = (1..=n as u128).product();
        let mut hooks: u128 = 1;
        for (r, &len) in self.0.iter().enumerate() {
            for c in 0..len {
                let arm = len - c - 1;
                let leg = self.0[r + 1..].iter().filter(|&&l| l > c).count();
                hooks *= (arm + leg + 1) as u128;
            }
        }
        num /= hooks;
        num
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` with at most `h` rows, in decreasing lexicographic order.
pub fn partitions_up_to_height(n: usize, h: usize) -> Vec<Partition> {
    fn rec(left: usize, max: usize, rows: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if rows == 0 {
            return;
        }
        for p in (1..=left.min(max)).rev() {
            cur.push(p);
            rec(left - p, p, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, h, &mut Vec::new(), &mut out);
    out
}

/// A filling of a Ferrers diagram, stored row-major with entries in `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tableau {
    shape: Partition,
    entries: Vec<u8>,
}

impl Tableau {
    pub fn new(shape: Partition, entries: Vec<u8>) -> Option<Self> {
        (entries.len() == shape.size()).then_some(Tableau { shape, entries })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Entries of row `r`.
    pub fn row(&self, r: usize) -> &[u8] {
        let start: usize = self.shape.0[..r].iter().sum();
        &self.entries[start..start + self.shape.0[r]]
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.row(r)[c]
    }

    pub fn count(&self, value: u8) -> usize {
        self.entries.iter().filter(|&&e| e == value).count()
    }

    pub fn is_semistandard(&self) -> bool {
        let h = self.shape.height();
        (0..h).all(|r| self.row(r).windows(2).all(|w| w[0] <= w[1]))
            && (1..h).all(|r| (0..self.shape.0[r]).all(|c| self.get(r - 1, c) < self.get(r, c)))
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.shape.height() {
            if r > 0 {
                write!(f, "/")?;
            }
            for e in self.row(r) {
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}

/// Semistandard tableaux of shape `lambda` with entries in `1..=m`, sorted row-major.
pub fn semistandard_tableaux(lambda: &Partition, m: u8) -> Vec<Tableau> {
    let cells: Vec<(usize, usize)> =
        lambda.0.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let offsets: Vec<usize> = lambda
        .0
        .iter()
        .scan(0, |acc, &l| {
            let o = *acc;
            *acc += l;
            Some(o)
        })
        .collect();
    let mut out = Vec::new();
    let mut fill = vec![0u8; cells.len()];
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        offsets: &[usize],
        m: u8,
        fill: &mut Vec<u8>,
        shape: &Partition,
        out: &mut Vec<Tableau>,
    ) {
        if k == cells.len() {
            out.push(Tableau { shape: shape.clone(), entries: fill.clone() });
            return;
        }
        let (r, c) = cells[k];
        let mut lo = 1;
        if c > 0 {
            lo = lo.max(fill[k - 1]);
        }
        if r > 0 {
            lo = lo.max(fill[offsets[r - 1] + c] + 1);
        }
        for v in lo..=m {
            fill[k] = v;
            rec(k + 1, cells, offsets, m, fill, shape, out);
        }
    }
    rec(0, &cells, &offsets, m, &mut fill, lambda, &mut out);
    out
}

/// One block of the representative set for the stabilizer of the all-zero word.
///
/// `n = (n2, l2, l3)`; the three tableau factors range over `T(lambda[0], 2)`,
/// `T(lambda[1], 2)` and `T(lambda[2], 1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShapeD0 {
    pub n: (usize, usize, usize),
    pub lambda: [Partition; 3],
    /// Columns kept after the weight filter.
    pub columns: Vec<[Tableau; 3]>,
    /// Word weight of each kept column.
    pub weights: Vec<usize>,
    /// `|W_lambda|` before filtering.
    pub unfiltered: usize,
}

impl ShapeD0 {
    /// Dimension of one irreducible constituent of this isotypic type.
    pub fn irrep_dimension(&self) -> u128 {
        let n3 = self.n.1 + self.n.2;
        self.lambda[0].standard_count()
            * binomial(n3 as u64, self.n.1 as u64)
            * self.lambda[1].standard_count()
            * self.lambda[2].standard_count()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShapeIndexD0 {
    pub shapes: Vec<ShapeD0>,
}

impl ShapeIndexD0 {
    /// `sum |W'| * dim`, which must equal the number of admissible words.
    pub fn module_dimension(&self) -> u128 {
        self.shapes.iter().map(|s| s.columns.len() as u128 * s.irrep_dimension()).sum()
    }
}

/// Word weight of a column `(tau1, tau2, tau3)`: entries equal to 1 stand for the zero letter.
pub fn column_weight(spec: &ProblemSpec, col: &[Tableau; 3]) -> usize {
    spec.n2 + spec.n3 - col[0].count(1) - col[1].count(1)
}

pub fn weight_admissible(spec: &ProblemSpec, weight: usize) -> bool {
    weight == 0 || weight >= spec.d
}

pub fn build_shape_index_d0(spec: &ProblemSpec) -> ShapeIndexD0 {
    let mut shapes = Vec::new();
    for l2 in (0..=spec.n3).rev() {
        let l3 = spec.n3 - l2;
        for lam1 in partitions_up_to_height(spec.n2, 2) {
            for lam2 in partitions_up_to_height(l2, 2) {
                let lam3 = Partition::row(l3);
                let t1 = semistandard_tableaux(&lam1, 2);
                let t2 = semistandard_tableaux(&lam2, 2);
                let t3 = semistandard_tableaux(&lam3, 1);
                let mut columns = Vec::new();
                let mut weights = Vec::new();
                let mut unfiltered = 0;
                for a in &t1 {
                    for b in &t2 {
                        for c in &t3 {
                            unfiltered += 1;
                            let col = [a.clone(), b.clone(), c.clone()];
                            let wt = column_weight(spec, &col);
                            if weight_admissible(spec, wt) {
                                columns.push(col);
                                weights.push(wt);
                            }
                        }
                    }
                }
                if !columns.is_empty() {
                    shapes.push(ShapeD0 {
                        n: (spec.n2, l2, l3),
                        lambda: [lam1.clone(), lam2, lam3],
                        columns,
                        weights,
                        unfiltered,
                    });
                }
            }
        }
    }
    ShapeIndexD0 { shapes }
}

/// One block for the empty code: `l = (l1, l2, l3, l4)` with `l1 + l2 = n2`, `l3 + l4 = n3`.
/// Every shape has the single one-row tableau tuple of all ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeEmpty {
    pub l: [usize; 4],
    /// Carries the extra row for the empty code.
    pub augmented: bool,
}

impl ShapeEmpty {
    pub fn irrep_dimension(&self) -> u128 {
        let [l1, l2, l3, l4] = self.l;
        binomial((l1 + l2) as u64, l1 as u64) * binomial((l3 + l4) as u64, l3 as u64) * (1u128 << l4)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShapeIndexEmpty {
    pub shapes: Vec<ShapeEmpty>,
}

pub fn build_shape_index_empty(spec: &ProblemSpec) -> ShapeIndexEmpty {
    let mut shapes = Vec::with_capacity((spec.n2 + 1) * (spec.n3 + 1));
    for l1 in (0..=spec.n2).rev() {
        for l3 in (0..=spec.n3).rev() {
            let l = [l1, spec.n2 - l1, l3, spec.n3 - l3];
            shapes.push(ShapeEmpty { l, augmented: l1 == spec.n2 && l3 == spec.n3 });
        }
    }
    ShapeIndexEmpty { shapes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_listing() {
        assert_eq!(partitions_up_to_height(3, 2), vec![Partition::new(vec![3]), Partition::new(vec![2, 1])]);
        assert_eq!(partitions_up_to_height(0, 4), vec![Partition::new(vec![])]);
        assert_eq!(partitions_up_to_height(5, 1), vec![Partition::new(vec![5])]);
        assert_eq!(partitions_up_to_height(6, 6).len(), 11);
    }

    #[test]
    fn tableau_examples() {
        for n in 0..6 {
            assert_eq!(semistandard_tableaux(&Partition::row(n), 2).len(), n + 1);
        }
        assert!(semistandard_tableaux(&Partition::new(vec![1, 1, 1]), 2).is_empty());
        let t = semistandard_tableaux(&Partition::new(vec![2, 1]), 2);
        let shown: Vec<String> = t.iter().map(|t| t.to_string()).collect();
        assert_eq!(shown, vec!["[11/2]", "[12/2]"]);
        assert_eq!(semistandard_tableaux(&Partition::new(vec![]), 1).len(), 1);
    }

    #[test]
    fn hook_lengths() {
        assert_eq!(Partition::new(vec![2, 1]).standard_count(), 2);
        assert_eq!(Partition::new(vec![3, 2]).standard_count(), 5);
        assert_eq!(Partition::new(vec![]).standard_count(), 1);
        assert_eq!(Partition::new(vec![3, 3]).standard_count(), 5);
    }

    #[test]
    fn shape_index_d0_small() {
        let spec = ProblemSpec::k3(1, 1, 1).unwrap();
        let idx = build_shape_index_d0(&spec);
        let ns: Vec<_> = idx.shapes.iter().map(|s| s.n).collect();
        assert_eq!(ns, vec![(1, 1, 0), (1, 0, 1)]);
        assert_eq!(idx.shapes[0].columns.len(), 4);
        assert_eq!(idx.shapes[0].weights, vec![0, 1, 1, 2]);

        let spec2 = ProblemSpec::k3(1, 1, 2).unwrap();
        let idx2 = build_shape_index_d0(&spec2);
        assert_eq!(idx2.shapes[0].weights, vec![0, 2]);
        assert_eq!(idx2.shapes[0].columns[1][0].entries(), &[2]);
        assert_eq!(idx2.shapes[0].columns[1][1].entries(), &[2]);
    }

    #[test]
    fn zero_weight_column_always_present() {
        for (n2, n3, d) in [(2, 3, 4), (3, 2, 5), (1, 4, 3)] {
            let spec = ProblemSpec::k3(n2, n3, d).unwrap();
            let idx = build_shape_index_d0(&spec);
            assert_eq!(idx.shapes.iter().flat_map(|s| &s.weights).filter(|&&w| w == 0).count(), 1);
        }
    }

    #[test]
    fn shape_index_empty_counts() {
        let idx = build_shape_index_empty(&ProblemSpec::k3(1, 1, 1).unwrap());
        assert_eq!(idx.shapes.len(), 4);
        let idx = build_shape_index_empty(&ProblemSpec::k3(2, 5, 3).unwrap());
        assert_eq!(idx.shapes.len(), 18);
        assert_eq!(idx.shapes.iter().filter(|s| s.augmented).count(), 1);
        assert_eq!(idx.shapes[0].l, [2, 0, 5, 0]);
        assert!(idx.shapes[0].augmented);
    }
}
