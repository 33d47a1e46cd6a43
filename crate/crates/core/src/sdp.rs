//! Assembly of the reduced optimization problem.
//!
//! Maximize `2^n2 3^n3 y(singleton)` over orbit variables `y >= 0` subject to
//! `F0 + sum_w y_w F_w ⪰ 0` for every reduced block. The empty code's variable
//! is the constant 1 and only appears in `F0` of the augmented block.

use crate::codes::{canonical_orbit, enumerate_orbits, Code, OrbitId, OrbitTable, ProblemSpec, Word};
use crate::coefficients::{build_blocks_d0, build_blocks_empty, BlockSpec};
use crate::error::{Error, Result};
use crate::scalar::{Coeff, Real};
use crate::symmetry::{build_shape_index_d0, build_shape_index_empty};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The reduced problem with exact data. Block coefficient maps are keyed by
/// variable index (not orbit-table index).
#[derive(Clone, Debug)]
pub struct SdpProblem<C> {
    pub spec: ProblemSpec,
    pub orbits: OrbitTable,
    /// Orbit-table index of each variable.
    pub variables: Vec<usize>,
    pub objective: Vec<C>,
    pub blocks: Vec<BlockSpec<C>>,
    /// Variables carrying an explicit `y >= 0` row.
    pub nonneg: Vec<usize>,
}

impl<C: Coeff> SdpProblem<C> {
    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variable_orbit(&self, v: usize) -> &OrbitId {
        &self.orbits.get(self.variables[v]).id
    }

    pub fn variable_of_orbit(&self, id: &OrbitId) -> Option<usize> {
        let idx = self.orbits.lookup(id)?;
        self.variables.iter().position(|&o| o == idx)
    }

    /// Numerical data for the solver and the SDPA writer. Blocks of size one
    /// and the nonnegativity rows are merged into a single diagonal block.
    pub fn to_data<T: Real>(&self) -> SdpData<T> {
        let mut inexact = 0usize;
        let mut conv = |c: &C| -> T {
            if c.inexact_in_f64() {
                inexact += 1;
            }
            c.to_float()
        };
        let objective: Vec<T> = self.objective.iter().map(&mut conv).collect();
        let mut blocks = Vec::new();
        let mut diag = DataBlock { diagonal: true, size: 0, constant: Vec::new(), entries: Vec::new() };
        for b in &self.blocks {
            let n = b.dim();
            if n == 1 {
                let row = diag.size;
                diag.size += 1;
                if let Some(c) = &b.constant {
                    diag.constant.push((row, row, conv(&c[(0, 0)])));
                }
                for (&v, f) in &b.coeffs {
                    diag.entries.push((v, row, row, conv(&f[(0, 0)])));
                }
                continue;
            }
            let mut blk = DataBlock { diagonal: false, size: n, constant: Vec::new(), entries: Vec::new() };
            if let Some(c) = &b.constant {
                for i in 0..n {
                    for j in i..n {
                        if !c[(i, j)].is_zero() {
                            blk.constant.push((i, j, conv(&c[(i, j)])));
                        }
                    }
                }
            }
            for (&v, f) in &b.coeffs {
                for i in 0..n {
                    for j in i..n {
                        if !f[(i, j)].is_zero() {
                            blk.entries.push((v, i, j, conv(&f[(i, j)])));
                        }
                    }
                }
            }
            blocks.push(blk);
        }
        for &v in &self.nonneg {
            let row = diag.size;
            diag.size += 1;
            diag.entries.push((v, row, row, T::one()));
        }
        if diag.size > 0 {
            blocks.push(diag);
        }
        if inexact > 0 {
            log::warn!("{inexact} coefficients lost precision in conversion to floating point");
        }
        let mut data = SdpData { num_vars: self.num_vars(), objective, blocks };
        data.normalize();
        data
    }

    /// Evaluate every block at `y` (variable-indexed), returning the minimum eigenvalue per block
    /// together with the smallest variable value.
    pub fn min_eigenvalues(&self, y: &[f64]) -> (Vec<f64>, f64) {
        let eig = self
            .blocks
            .iter()
            .map(|b| {
                let fb: BlockSpec<f64> = BlockSpec {
                    case: b.case,
                    shape: String::new(),
                    row_labels: b.row_labels.clone(),
                    constant: b.constant.as_ref().map(|c| c.map(|x| x.to_float())),
                    coeffs: b.coeffs.iter().map(|(&k, f)| (k, f.map(|x| x.to_float()))).collect(),
                };
                fb.evaluate(y).min_eigenvalue()
            })
            .collect();
        let min_y = self.nonneg.iter().map(|&v| y[v]).fold(f64::INFINITY, f64::min);
        (eig, min_y)
    }

    pub fn objective_value(&self, y: &[f64]) -> f64 {
        self.objective.iter().zip(y).map(|(c, &v)| c.to_float::<f64>() * v).sum()
    }

    pub fn variable_labels(&self) -> Vec<String> {
        (0..self.num_vars()).map(|v| self.variable_orbit(v).to_string()).collect()
    }

    /// JSON rendering: variables with orbit descriptions, blocks as sparse rational triplets.
    pub fn to_json(&self) -> serde_json::Value {
        let blocks: Vec<serde_json::Value> = self
            .blocks
            .iter()
            .map(|b| {
                let mut triplets = Vec::new();
                let n = b.dim();
                if let Some(c) = &b.constant {
                    for i in 0..n {
                        for j in i..n {
                            if !c[(i, j)].is_zero() {
                                triplets.push(serde_json::json!([0, i, j, c[(i, j)].to_string()]));
                            }
                        }
                    }
                }
                for (&v, f) in &b.coeffs {
                    for i in 0..n {
                        for j in i..n {
                            if !f[(i, j)].is_zero() {
                                triplets.push(serde_json::json!([v + 1, i, j, f[(i, j)].to_string()]));
                            }
                        }
                    }
                }
                serde_json::json!({
                    "case": format!("{:?}", b.case),
                    "shape": b.shape,
                    "size": n,
                    "entries": triplets,
                })
            })
            .collect();
        serde_json::json!({
            "spec": self.spec,
            "variables": self.variable_labels(),
            "objective": self.objective.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "nonneg": self.nonneg,
            "blocks": blocks,
        })
    }
}

/// Solver-facing problem: maximize `objective · y` subject to
/// `C_b + sum_i y_i A_{b,i} ⪰ 0` per block. Entries are upper-triangle triplets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpData<T> {
    pub num_vars: usize,
    pub objective: Vec<T>,
    pub blocks: Vec<DataBlock<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataBlock<T> {
    /// Diagonal blocks are sets of scalar inequalities.
    pub diagonal: bool,
    pub size: usize,
    /// `(i, j, value)` with `i <= j`.
    pub constant: Vec<(usize, usize, T)>,
    /// `(variable, i, j, value)` with `i <= j`.
    pub entries: Vec<(usize, usize, usize, T)>,
}

impl<T: Real> SdpData<T> {
    /// Sort triplets and merge duplicates so that equal problems compare equal.
    pub fn normalize(&mut self) {
        for b in &mut self.blocks {
            let mut c: BTreeMap<(usize, usize), T> = BTreeMap::new();
            for &(i, j, v) in &b.constant {
                let k = (i.min(j), i.max(j));
                let e = c.entry(k).or_insert(T::zero());
                *e = *e + v;
            }
            b.constant = c.into_iter().filter(|(_, v)| *v != T::zero()).map(|((i, j), v)| (i, j, v)).collect();
            let mut e: BTreeMap<(usize, usize, usize), T> = BTreeMap::new();
            for &(var, i, j, v) in &b.entries {
                let k = (var, i.min(j), i.max(j));
                let x = e.entry(k).or_insert(T::zero());
                *x = *x + v;
            }
            b.entries = e.into_iter().filter(|(_, v)| *v != T::zero()).map(|((var, i, j), v)| (var, i, j, v)).collect();
        }
    }

    pub fn total_dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// Multiply every matrix of one block by `k > 0`; the feasible set is unchanged.
    pub fn scale_block(&mut self, block: usize, k: T) {
        let b = &mut self.blocks[block];
        for e in &mut b.constant {
            e.2 = e.2 * k;
        }
        for e in &mut b.entries {
            e.3 = e.3 * k;
        }
    }

    /// Fix variable `v` to zero by deleting it; higher indices shift down.
    pub fn without_variable(&self, v: usize) -> Self {
        let mut out = self.clone();
        out.num_vars -= 1;
        out.objective.remove(v);
        for b in &mut out.blocks {
            b.entries.retain(|e| e.0 != v);
            for e in &mut b.entries {
                if e.0 > v {
                    e.0 -= 1;
                }
            }
        }
        out
    }
}

fn finish<C: Coeff>(spec: ProblemSpec, orbits: OrbitTable, raw_blocks: Vec<BlockSpec<C>>) -> SdpProblem<C> {
    // Variables: every orbit referenced by some block, plus every feasible nonempty orbit.
    let mut used: Vec<usize> = raw_blocks.iter().flat_map(|b| b.coeffs.keys().copied()).collect();
    used.sort_unstable();
    used.dedup();
    let variables = used;
    let pos: BTreeMap<usize, usize> = variables.iter().enumerate().map(|(v, &o)| (o, v)).collect();
    let blocks = raw_blocks
        .into_iter()
        .map(|b| BlockSpec { coeffs: b.coeffs.into_iter().map(|(o, f)| (pos[&o], f)).collect(), ..b })
        .collect();
    let singleton = orbits.singleton_index();
    let words = C::from_int(i64::try_from(spec.word_count()).expect("word count fits in i64"));
    let objective = variables.iter().map(|&o| if o == singleton { words.clone() } else { C::zero() }).collect();
    let nonneg = (0..variables.len()).collect();
    SdpProblem { spec, orbits, variables, objective, blocks, nonneg }
}

/// The level-3 problem: all-zero-word blocks, empty-code blocks, nonnegativity.
pub fn build_sdp<C: Coeff>(spec: &ProblemSpec) -> Result<SdpProblem<C>> {
    if spec.k != 3 {
        return Err(Error::InvalidSpec(format!("build_sdp needs k=3, got k={}", spec.k)));
    }
    let orbits = enumerate_orbits(spec);
    let mut blocks = build_blocks_d0(&build_shape_index_d0(spec), &orbits);
    blocks.extend(build_blocks_empty(spec, &build_shape_index_empty(spec), &orbits));
    let problem = finish(*spec, orbits, blocks);
    let missing = problem.orbits.orbits().iter().skip(1).filter(|o| o.feasible).count() - problem.num_vars();
    debug_assert_eq!(missing, 0, "feasible orbit without a block");
    Ok(problem)
}

/// The level-2 problem: empty-code blocks only, which leaves a linear program in
/// the singleton and pair variables.
pub fn build_lp_k2<C: Coeff>(spec: &ProblemSpec) -> Result<SdpProblem<C>> {
    if spec.k != 2 {
        return Err(Error::InvalidSpec(format!("build_lp_k2 needs k=2, got k={}", spec.k)));
    }
    let orbits = enumerate_orbits(spec);
    let blocks = build_blocks_empty(spec, &build_shape_index_empty(spec), &orbits);
    Ok(finish(*spec, orbits, blocks))
}

/// Dispatch on `spec.k`.
pub fn build_model<C: Coeff>(spec: &ProblemSpec) -> Result<SdpProblem<C>> {
    match spec.k {
        3 => build_sdp(spec),
        2 => build_lp_k2(spec),
        k => Err(Error::InvalidSpec(format!("unsupported level k={k}"))),
    }
}

/// `N(n2+1, n3, d) <= 2 N(n2, n3, d)`: a bound for one more binary coordinate.
pub fn derived_doubling_bound(spec: &ProblemSpec, known_bound: u64) -> (ProblemSpec, u64) {
    let next = ProblemSpec { n2: spec.n2 + 1, ..*spec };
    (next, 2 * known_bound)
}

/// Orbit average of the indicator function of the subsets of `code`:
/// `y(w) = #{C ⊆ code : C ∈ w} / |w|`, indexed by variable.
///
/// For a code with minimum distance at least `d` this is a feasible point with
/// objective `|code|`.
pub fn code_assignment<C: Coeff>(problem: &SdpProblem<C>, code: &[Word]) -> Result<Vec<f64>> {
    let mut hits: BTreeMap<OrbitId, u128> = BTreeMap::new();
    let n = code.len();
    let mut subsets: Vec<Vec<Word>> = Vec::new();
    for i in 0..n {
        subsets.push(vec![code[i].clone()]);
        for j in i + 1..n {
            subsets.push(vec![code[i].clone(), code[j].clone()]);
            if problem.spec.k == 3 {
                for k in j + 1..n {
                    subsets.push(vec![code[i].clone(), code[j].clone(), code[k].clone()]);
                }
            }
        }
    }
    for s in subsets {
        *hits.entry(canonical_orbit(&Code::new(s)?)?).or_default() += 1;
    }
    let mut y = vec![0.0; problem.num_vars()];
    for (id, count) in hits {
        let size = id.orbit_size() as f64;
        match problem.variable_of_orbit(&id) {
            Some(v) => y[v] = count as f64 / size,
            None => {
                return Err(Error::Domain(format!("code contains a subset in orbit {id} which is not a variable")));
            }
        }
    }
    Ok(y)
}
