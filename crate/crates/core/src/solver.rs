//! Primal-dual interior-point method for block-diagonal semidefinite programs.
//!
//! The problem is taken in the form of [`SdpData`]:
//!
//! ```text
//! maximize  b·y   subject to  C_b + sum_i y_i F_{b,i} ⪰ 0  for every block b.
//! ```
//!
//! Writing `A_i = -F_i`, this is the dual of `minimize <C, X>` subject to
//! `<A_i, X> = b_i`, `X ⪰ 0`, and `<C, X>` at a feasible `X` bounds the
//! maximum from above. Search directions are HKM with a Mehrotra
//! predictor-corrector; diagonal blocks are treated as linear inequalities.

use crate::codes::ProblemSpec;
use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, DenseMatrix};
use crate::scalar::Real;
use crate::sdp::{build_model, SdpData, SdpProblem};
use crate::Rational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Target for the relative gap and the relative infeasibilities.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-8, max_iter: 500 }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolverOptions { tol, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    /// Stopped early; the last iterate is usable but misses the tolerance.
    Inaccurate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub status: Status,
    /// `b·y` at the returned `y` (a lower estimate of the optimum).
    pub objective: f64,
    /// `<C, X>` at the returned `X` (an upper estimate of the optimum).
    pub dual_objective: f64,
    pub y: Vec<f64>,
    /// `dual_objective - objective`.
    pub gap: f64,
    /// Gap relative to `1 + |objective| + |dual_objective|`.
    pub rel_gap: f64,
    /// Largest relative equality violation of `X`.
    pub primal_infeasibility: f64,
    /// Largest relative violation of `Z = C + sum y F`.
    pub dual_infeasibility: f64,
    /// Smallest eigenvalue over all blocks of `C + sum y F` evaluated on the unscaled data.
    pub min_eigenvalue: f64,
    pub iterations: usize,
    pub log: Vec<String>,
}

impl Solution {
    pub fn feasibility_residual(&self) -> f64 {
        self.primal_infeasibility.max(self.dual_infeasibility)
    }
}

/// Sparse symmetric matrix stored as full (both triangle) coordinate lists.
#[derive(Clone, Debug)]
struct SparseSym<T> {
    entries: Vec<(usize, usize, T)>,
}

impl<T: Real> SparseSym<T> {
    fn from_upper(upper: impl Iterator<Item = (usize, usize, T)>) -> Self {
        let mut entries = Vec::new();
        for (i, j, v) in upper {
            entries.push((i, j, v));
            if i != j {
                entries.push((j, i, v));
            }
        }
        SparseSym { entries }
    }

    fn dot(&self, m: &DenseMatrix<T>) -> T {
        self.entries.iter().fold(T::zero(), |acc, &(i, j, v)| acc + v * m[(i, j)])
    }

    fn add_to(&self, m: &mut DenseMatrix<T>, k: T) {
        for &(i, j, v) in &self.entries {
            m[(i, j)] = m[(i, j)] + k * v;
        }
    }

    fn norm(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, &(_, _, v)| acc + v * v).sqrt()
    }

    fn max_abs(&self) -> T {
        self.entries.iter().fold(T::zero(), |m, &(_, _, v)| m.max(v.abs()))
    }

    /// `X * self * Zinv`, exploiting the few nonzero rows of `self`.
    fn sandwich(&self, x: &DenseMatrix<T>, zinv: &DenseMatrix<T>) -> DenseMatrix<T> {
        let n = x.rows();
        let mut rows: Vec<usize> = self.entries.iter().map(|e| e.0).collect();
        rows.sort_unstable();
        rows.dedup();
        // t = self * zinv restricted to the nonzero rows.
        let mut t = DenseMatrix::zeros(rows.len(), n);
        for &(i, j, v) in &self.entries {
            let r = rows.binary_search(&i).unwrap();
            for c in 0..n {
                t[(r, c)] = t[(r, c)] + v * zinv[(j, c)];
            }
        }
        let mut g = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for (r, &k) in rows.iter().enumerate() {
                let a = x[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for c in 0..n {
                    g[(i, c)] = g[(i, c)] + a * t[(r, c)];
                }
            }
        }
        g
    }
}

struct SdpBlock<T> {
    n: usize,
    c: DenseMatrix<T>,
    /// `(variable, A_i)`.
    a: Vec<(usize, SparseSym<T>)>,
}

struct LpBlock<T> {
    c: Vec<T>,
    /// Per variable: `(row, A_i[row])`.
    a: Vec<Vec<(usize, T)>>,
}

/// Scaled internal copy of the problem.
struct Scaled<T> {
    m: usize,
    b: Vec<T>,
    sdp: Vec<SdpBlock<T>>,
    lp: LpBlock<T>,
    /// Original `y_i = col_scale[i] * scaled y_i`.
    col_scale: Vec<T>,
    /// Scaled objective = `obj_scale * b·y`.
    obj_scale: T,
}

fn scale_problem<T: Real>(data: &SdpData<T>) -> Scaled<T> {
    let m = data.num_vars;
    let mut sdp = Vec::new();
    let mut lp = LpBlock { c: Vec::new(), a: vec![Vec::new(); m] };
    for blk in &data.blocks {
        if blk.diagonal {
            let off = lp.c.len();
            let mut c = vec![T::zero(); blk.size];
            let mut rowmax = vec![T::zero(); blk.size];
            for &(i, _, v) in &blk.constant {
                c[i] = v;
                rowmax[i] = rowmax[i].max(v.abs());
            }
            for &(_, i, _, v) in &blk.entries {
                rowmax[i] = rowmax[i].max(v.abs());
            }
            let s: Vec<T> = rowmax.iter().map(|&r| if r > T::zero() { T::one() / r } else { T::one() }).collect();
            lp.c.extend(c.iter().zip(&s).map(|(&c, &s)| c * s));
            for &(var, i, _, v) in &blk.entries {
                lp.a[var].push((off + i, -v * s[i]));
            }
            continue;
        }
        let n = blk.size;
        let mut diag = vec![T::zero(); n];
        for &(i, j, v) in &blk.constant {
            if i == j {
                diag[i] = diag[i].max(v.abs());
            }
        }
        for &(_, i, j, v) in &blk.entries {
            if i == j {
                diag[i] = diag[i].max(v.abs());
            }
        }
        let d: Vec<T> = diag.iter().map(|&x| if x > T::zero() { T::one() / x.sqrt() } else { T::one() }).collect();
        let mut c = DenseMatrix::zeros(n, n);
        for &(i, j, v) in &blk.constant {
            c[(i, j)] = v * d[i] * d[j];
            c[(j, i)] = c[(i, j)];
        }
        let mut per_var: Vec<Vec<(usize, usize, T)>> = vec![Vec::new(); m];
        for &(var, i, j, v) in &blk.entries {
            per_var[var].push((i, j, -v * d[i] * d[j]));
        }
        let a = per_var
            .into_iter()
            .enumerate()
            .filter(|(_, e)| !e.is_empty())
            .map(|(var, e)| (var, SparseSym::from_upper(e.into_iter())))
            .collect();
        sdp.push(SdpBlock { n, c, a });
    }
    // Column scaling: every variable's largest coefficient becomes 1.
    let mut colmax = vec![T::zero(); m];
    for blk in &sdp {
        for (var, a) in &blk.a {
            colmax[*var] = colmax[*var].max(a.max_abs());
        }
    }
    for (var, col) in lp.a.iter().enumerate() {
        for &(_, v) in col {
            colmax[var] = colmax[var].max(v.abs());
        }
    }
    let col_scale: Vec<T> = colmax.iter().map(|&x| if x > T::zero() { T::one() / x } else { T::one() }).collect();
    for blk in &mut sdp {
        for (var, a) in &mut blk.a {
            for e in &mut a.entries {
                e.2 = e.2 * col_scale[*var];
            }
        }
    }
    for (var, col) in lp.a.iter_mut().enumerate() {
        for e in col.iter_mut() {
            e.1 = e.1 * col_scale[var];
        }
    }
    // The objective keeps its original units so that the relative gap is meaningful.
    let obj_scale = T::one();
    let b = data.objective.iter().zip(&col_scale).map(|(&b, &s)| b * s).collect();
    Scaled { m, b, sdp, lp, col_scale, obj_scale }
}

#[derive(Clone)]
struct Iterate<T> {
    x: Vec<DenseMatrix<T>>,
    z: Vec<DenseMatrix<T>>,
    xl: Vec<T>,
    zl: Vec<T>,
    y: Vec<T>,
}

struct Direction<T> {
    dy: Vec<T>,
    dx: Vec<DenseMatrix<T>>,
    dz: Vec<DenseMatrix<T>>,
    dxl: Vec<T>,
    dzl: Vec<T>,
}

struct Residuals<T> {
    rp: Vec<T>,
    rd: Vec<DenseMatrix<T>>,
    rdl: Vec<T>,
    pobj: T,
    dobj: T,
    pinf: T,
    dinf: T,
    rel_gap: T,
    mu: T,
}

impl<T: Real> Scaled<T> {
    fn total_dim(&self) -> usize {
        self.sdp.iter().map(|b| b.n).sum::<usize>() + self.lp.c.len()
    }

    fn initial(&self) -> Iterate<T> {
        let ten = T::of(10.0);
        let bnorm_max = self.b.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        let mut x = Vec::new();
        let mut z = Vec::new();
        for blk in &self.sdp {
            let nf = T::of(blk.n as f64);
            let anorm = blk.a.iter().fold(T::zero(), |m, (_, a)| m.max(a.norm()));
            let xi = ten.max(nf.sqrt()).max(nf * (T::one() + bnorm_max) / (T::one() + anorm));
            let eta = ten.max(nf.sqrt()).max(anorm).max(blk.c.frobenius_norm());
            x.push(DenseMatrix::identity(blk.n).scaled(xi));
            z.push(DenseMatrix::identity(blk.n).scaled(eta));
        }
        let nl = self.lp.c.len();
        let cmax = self.lp.c.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        let xi = ten.max(T::one() + bnorm_max);
        let eta = ten.max(T::one() + cmax);
        Iterate { x, z, xl: vec![xi; nl], zl: vec![eta; nl], y: vec![T::zero(); self.m] }
    }

    fn residuals(&self, it: &Iterate<T>) -> Residuals<T> {
        let mut rp = self.b.clone();
        let mut rd = Vec::new();
        let mut pobj = T::zero();
        let mut dinf = T::zero();
        let mut nz = T::zero();
        for (k, blk) in self.sdp.iter().enumerate() {
            pobj = pobj + blk.c.dot(&it.x[k]);
            nz = nz + it.x[k].dot(&it.z[k]);
            let mut r = blk.c.clone();
            r.add_scaled(-T::one(), &it.z[k]);
            for (var, a) in &blk.a {
                rp[*var] = rp[*var] - a.dot(&it.x[k]);
                a.add_to(&mut r, -it.y[*var]);
            }
            dinf = dinf.max(r.frobenius_norm() / (T::one() + blk.c.frobenius_norm()));
            rd.push(r);
        }
        let mut rdl: Vec<T> = self.lp.c.iter().zip(&it.zl).map(|(&c, &z)| c - z).collect();
        for (var, col) in self.lp.a.iter().enumerate() {
            for &(row, v) in col {
                rp[var] = rp[var] - v * it.xl[row];
                rdl[row] = rdl[row] - v * it.y[var];
            }
        }
        for (i, &c) in self.lp.c.iter().enumerate() {
            pobj = pobj + c * it.xl[i];
            nz = nz + it.xl[i] * it.zl[i];
        }
        let lnorm = rdl.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        let cl = self.lp.c.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        dinf = dinf.max(lnorm / (T::one() + cl));
        let bnorm = self.b.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        let pinf = rp.iter().fold(T::zero(), |a, &x| a + x * x).sqrt() / (T::one() + bnorm);
        let dobj = self.b.iter().zip(&it.y).fold(T::zero(), |a, (&b, &y)| a + b * y);
        let rel_gap = (pobj - dobj).abs() / (T::one() + pobj.abs() + dobj.abs());
        let mu = nz / T::of(self.total_dim().max(1) as f64);
        Residuals { rp, rd, rdl, pobj, dobj, pinf, dinf, rel_gap, mu }
    }
}

/// Largest `alpha` with `P + alpha dP ⪰ 0`, given the Cholesky factor of `P`.
fn max_step_sdp<T: Real>(l: &DenseMatrix<T>, dp: &DenseMatrix<T>) -> T {
    let li = l.lower_inverse();
    let mut w = li.matmul(dp).matmul(&li.transpose());
    w.symmetrize();
    let lmin = w.min_eigenvalue();
    if lmin < T::zero() {
        -T::one() / lmin
    } else {
        T::infinity()
    }
}

fn max_step_lp<T: Real>(p: &[T], dp: &[T]) -> T {
    p.iter().zip(dp).fold(T::infinity(), |a, (&p, &d)| if d < T::zero() { a.min(-p / d) } else { a })
}

struct Factored<T> {
    zinv: Vec<DenseMatrix<T>>,
    lx: Vec<DenseMatrix<T>>,
    lz: Vec<DenseMatrix<T>>,
    schur: DenseMatrix<T>,
}

fn factor<T: Real>(p: &Scaled<T>, it: &Iterate<T>) -> Result<Factored<T>> {
    let m = p.m;
    let mut schur = DenseMatrix::zeros(m, m);
    let mut zinv = Vec::new();
    let mut lx = Vec::new();
    let mut lz = Vec::new();
    for (k, blk) in p.sdp.iter().enumerate() {
        let lzk = it.z[k].cholesky().ok_or_else(|| Error::Conditioning("dual slack lost definiteness".into()))?;
        let lxk = it.x[k].cholesky().ok_or_else(|| Error::Conditioning("primal matrix lost definiteness".into()))?;
        let zi = DenseMatrix::spd_inverse_from_cholesky(&lzk);
        for (jv, aj) in &blk.a {
            let g = aj.sandwich(&it.x[k], &zi);
            for (iv, ai) in &blk.a {
                schur[(*iv, *jv)] = schur[(*iv, *jv)] + ai.dot(&g);
            }
        }
        zinv.push(zi);
        lx.push(lxk);
        lz.push(lzk);
    }
    let ratio: Vec<T> = it.xl.iter().zip(&it.zl).map(|(&x, &z)| x / z).collect();
    // LP contribution: A diag(x/z) A^T, with A stored by column (variable).
    let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); p.lp.c.len()];
    for (var, col) in p.lp.a.iter().enumerate() {
        for &(row, v) in col {
            rows[row].push((var, v));
        }
    }
    for (row, entries) in rows.iter().enumerate() {
        for &(i, vi) in entries {
            for &(j, vj) in entries {
                schur[(i, j)] = schur[(i, j)] + vi * vj * ratio[row];
            }
        }
    }
    schur.symmetrize();
    Ok(Factored { zinv, lx, lz, schur })
}

/// Solve for a direction given the complementarity target `T_b = target - X` on each block.
fn direction<T: Real>(
    p: &Scaled<T>,
    it: &Iterate<T>,
    res: &Residuals<T>,
    f: &Factored<T>,
    chol: &DenseMatrix<T>,
    targets: &[DenseMatrix<T>],
    targets_lp: &[T],
) -> Direction<T> {
    // rhs_i = rp_i - <A_i, T - X Rd Zinv>
    let mut rhs = res.rp.clone();
    let mut base = Vec::new();
    for (k, blk) in p.sdp.iter().enumerate() {
        let mut t = targets[k].clone();
        let xrz = it.x[k].matmul(&res.rd[k]).matmul(&f.zinv[k]);
        t.add_scaled(-T::one(), &xrz);
        for (var, a) in &blk.a {
            rhs[*var] = rhs[*var] - a.dot(&t);
        }
        base.push(t);
    }
    let base_lp: Vec<T> = (0..p.lp.c.len()).map(|r| targets_lp[r] - it.xl[r] * res.rdl[r] / it.zl[r]).collect();
    for (var, col) in p.lp.a.iter().enumerate() {
        for &(row, v) in col {
            rhs[var] = rhs[var] - v * base_lp[row];
        }
    }
    let dy = cholesky_solve(chol, &rhs);
    let mut dx = Vec::new();
    let mut dz = Vec::new();
    for (k, blk) in p.sdp.iter().enumerate() {
        let mut dzk = res.rd[k].clone();
        for (var, a) in &blk.a {
            a.add_to(&mut dzk, -dy[*var]);
        }
        let mut dxk = targets[k].clone();
        dxk.add_scaled(-T::one(), &it.x[k].matmul(&dzk).matmul(&f.zinv[k]));
        dxk.symmetrize();
        dx.push(dxk);
        dz.push(dzk);
    }
    let mut dzl = res.rdl.clone();
    for (var, col) in p.lp.a.iter().enumerate() {
        for &(row, v) in col {
            dzl[row] = dzl[row] - v * dy[var];
        }
    }
    let dxl: Vec<T> = (0..p.lp.c.len()).map(|r| targets_lp[r] - it.xl[r] * dzl[r] / it.zl[r]).collect();
    Direction { dy, dx, dz, dxl, dzl }
}

fn step_lengths<T: Real>(it: &Iterate<T>, f: &Factored<T>, d: &Direction<T>) -> (T, T) {
    let mut ap = max_step_lp(&it.xl, &d.dxl);
    let mut ad = max_step_lp(&it.zl, &d.dzl);
    for k in 0..it.x.len() {
        ap = ap.min(max_step_sdp(&f.lx[k], &d.dx[k]));
        ad = ad.min(max_step_sdp(&f.lz[k], &d.dz[k]));
    }
    (ap, ad)
}

fn complementarity<T: Real>(it: &Iterate<T>, d: &Direction<T>, ap: T, ad: T) -> T {
    let mut s = T::zero();
    for k in 0..it.x.len() {
        let mut x = it.x[k].clone();
        x.add_scaled(ap, &d.dx[k]);
        let mut z = it.z[k].clone();
        z.add_scaled(ad, &d.dz[k]);
        s = s + x.dot(&z);
    }
    for r in 0..it.xl.len() {
        s = s + (it.xl[r] + ap * d.dxl[r]) * (it.zl[r] + ad * d.dzl[r]);
    }
    s
}

fn schur_factor<T: Real>(schur: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if let Some(l) = schur.cholesky() {
        return Ok(l);
    }
    let m = schur.rows();
    let dmax = (0..m).fold(T::zero(), |a, i| a.max(schur[(i, i)].abs()));
    let mut reg = dmax * T::epsilon() * T::of(1e2);
    for _ in 0..6 {
        let mut s = schur.clone();
        for i in 0..m {
            s[(i, i)] = s[(i, i)] + reg;
        }
        if let Some(l) = s.cholesky() {
            return Ok(l);
        }
        reg = reg * T::of(100.0);
    }
    Err(Error::Conditioning("Schur complement is not positive definite".into()))
}

/// Solve the problem. Deterministic: the same input yields bit-identical output.
pub fn solve<T: Real>(data: &SdpData<T>, opts: &SolverOptions) -> Result<Solution> {
    if data.objective.len() != data.num_vars {
        return Err(Error::Shape(format!(
            "{} objective entries for {} variables",
            data.objective.len(),
            data.num_vars
        )));
    }
    for blk in &data.blocks {
        let bad = blk.constant.iter().any(|e| e.0 >= blk.size || e.1 >= blk.size)
            || blk.entries.iter().any(|e| e.0 >= data.num_vars || e.1 >= blk.size || e.2 >= blk.size);
        if bad {
            return Err(Error::Shape("block entry out of range".into()));
        }
    }
    let p = scale_problem(data);
    let tol = T::of(opts.tol);
    let mut it = p.initial();
    let mut log = Vec::new();
    let mut best: Option<(T, Iterate<T>)> = None;
    let mut failure: Option<Error> = None;
    let mut iterations = 0;
    let mut converged = false;
    let gamma = T::of(0.95);
    for iter in 0..=opts.max_iter {
        iterations = iter;
        let res = p.residuals(&it);
        let merit = res.rel_gap.max(res.pinf).max(res.dinf);
        log.push(format!(
            "{iter:4} pobj {:+.10e} dobj {:+.10e} gap {:.2e} pinf {:.2e} dinf {:.2e} mu {:.2e}",
            res.pobj, res.dobj, res.rel_gap, res.pinf, res.dinf, res.mu
        ));
        log::debug!("{}", log.last().unwrap());
        if best.as_ref().is_none_or(|(m, _)| merit < *m) {
            best = Some((merit, it.clone()));
        }
        if res.rel_gap <= tol && res.pinf <= tol && res.dinf <= tol {
            converged = true;
            break;
        }
        if iter == opts.max_iter {
            break;
        }
        let f = match factor(&p, &it) {
            Ok(f) => f,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        let chol = match schur_factor(&f.schur) {
            Ok(c) => c,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        // Predictor: affine scaling direction.
        let neg_x: Vec<DenseMatrix<T>> = it.x.iter().map(|x| x.scaled(-T::one())).collect();
        let neg_xl: Vec<T> = it.xl.iter().map(|&x| -x).collect();
        let pred = direction(&p, &it, &res, &f, &chol, &neg_x, &neg_xl);
        let (ap, ad) = step_lengths(&it, &f, &pred);
        let (ap, ad) = (ap.min(T::one()), ad.min(T::one()));
        let n = T::of(p.total_dim().max(1) as f64);
        let mu_aff = complementarity(&it, &pred, ap, ad) / n;
        let ratio = (mu_aff / res.mu).max(T::zero()).min(T::one());
        let sigma = ratio * ratio * ratio;
        // Corrector: centering plus second-order term.
        let sm = sigma * res.mu;
        let targets: Vec<DenseMatrix<T>> = (0..p.sdp.len())
            .map(|k| {
                let mut t = DenseMatrix::identity(p.sdp[k].n).scaled(sm);
                t.add_scaled(-T::one(), &pred.dx[k].matmul(&pred.dz[k]));
                let mut t = t.matmul(&f.zinv[k]);
                t.add_scaled(-T::one(), &it.x[k]);
                t
            })
            .collect();
        let targets_lp: Vec<T> =
            (0..p.lp.c.len()).map(|r| (sm - pred.dxl[r] * pred.dzl[r]) / it.zl[r] - it.xl[r]).collect();
        let corr = direction(&p, &it, &res, &f, &chol, &targets, &targets_lp);
        let (ap, ad) = step_lengths(&it, &f, &corr);
        let ap = (gamma * ap).min(T::one());
        let ad = (gamma * ad).min(T::one());
        if ap < T::of(1e-12) && ad < T::of(1e-12) {
            failure = Some(Error::Conditioning("step length collapsed".into()));
            break;
        }
        for k in 0..p.sdp.len() {
            it.x[k].add_scaled(ap, &corr.dx[k]);
            it.x[k].symmetrize();
            it.z[k].add_scaled(ad, &corr.dz[k]);
            it.z[k].symmetrize();
        }
        for r in 0..p.lp.c.len() {
            it.xl[r] = it.xl[r] + ap * corr.dxl[r];
            it.zl[r] = it.zl[r] + ad * corr.dzl[r];
        }
        for i in 0..p.m {
            it.y[i] = it.y[i] + ad * corr.dy[i];
        }
    }
    let (merit, chosen) = if converged { (T::zero(), it) } else { best.expect("at least one iterate") };
    let res = p.residuals(&chosen);
    if !converged {
        let loose = T::of(opts.tol * 100.0);
        if merit > loose {
            return Err(failure.unwrap_or(Error::NonConvergence {
                iterations,
                gap: res.rel_gap.to_f64().unwrap_or(f64::NAN),
                infeas: res.pinf.max(res.dinf).to_f64().unwrap_or(f64::NAN),
            }));
        }
        log::warn!("solver stopped at iteration {iterations} short of tolerance (merit {merit:.2e})");
    }
    let y: Vec<f64> = chosen.y.iter().zip(&p.col_scale).map(|(&y, &s)| (y * s).to_f64().unwrap()).collect();
    let objective: f64 = data.objective.iter().zip(&y).map(|(b, y)| b.to_f64().unwrap() * y).sum();
    let dual_objective = (res.pobj / p.obj_scale).to_f64().unwrap();
    let min_eigenvalue = min_block_eigenvalue(data, &y);
    Ok(Solution {
        status: if converged { Status::Optimal } else { Status::Inaccurate },
        objective,
        dual_objective,
        gap: dual_objective - objective,
        rel_gap: res.rel_gap.to_f64().unwrap(),
        y,
        primal_infeasibility: res.pinf.to_f64().unwrap(),
        dual_infeasibility: res.dinf.to_f64().unwrap(),
        min_eigenvalue,
        iterations,
        log,
    })
}

/// Smallest eigenvalue of `C_b + sum_i y_i F_{b,i}` over all blocks (diagonal blocks entrywise).
pub fn min_block_eigenvalue<T: Real>(data: &SdpData<T>, y: &[f64]) -> f64 {
    let mut worst = f64::INFINITY;
    for blk in &data.blocks {
        let n = blk.size;
        let mut m: DenseMatrix<f64> = DenseMatrix::zeros(n, n);
        for &(i, j, v) in &blk.constant {
            m[(i, j)] += v.to_f64().unwrap();
            if i != j {
                m[(j, i)] += v.to_f64().unwrap();
            }
        }
        for &(var, i, j, v) in &blk.entries {
            let x = v.to_f64().unwrap() * y[var];
            m[(i, j)] += x;
            if i != j {
                m[(j, i)] += x;
            }
        }
        let e = if blk.diagonal { (0..n).map(|i| m[(i, i)]).fold(f64::INFINITY, f64::min) } else { m.min_eigenvalue() };
        worst = worst.min(e);
    }
    worst
}

/// Where a certified bound came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Solver,
    /// Objective values read from an external solver's output file.
    ExternalFile(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedBound {
    pub value: u64,
    pub guard: f64,
    pub dual_objective: f64,
    pub provenance: Provenance,
}

/// Round an upper estimate down to an integer bound after adding a safety
/// margin `guard = max(|gap|, 10 * feasibility * |dual_objective|)`.
/// Refuses when the margin reaches 0.5.
pub fn certify_values(
    dual_objective: f64,
    gap: f64,
    feasibility: f64,
    provenance: Provenance,
) -> Result<CertifiedBound> {
    let guard = gap.abs().max(10.0 * feasibility.abs() * dual_objective.abs());
    if !guard.is_finite() || !dual_objective.is_finite() || guard >= 0.5 {
        return Err(Error::Certification { guard, objective: dual_objective });
    }
    let v = (dual_objective + guard).floor();
    if v < 0.0 {
        return Err(Error::Certification { guard, objective: dual_objective });
    }
    Ok(CertifiedBound { value: v as u64, guard, dual_objective, provenance })
}

pub fn certify(s: &Solution) -> Result<CertifiedBound> {
    if s.status != Status::Optimal {
        log::warn!("certifying an iterate that stopped short of tolerance");
    }
    certify_values(s.dual_objective, s.gap, s.feasibility_residual(), Provenance::Solver)
}

/// Solver statistics kept alongside a stored bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolverStats {
    pub status: Status,
    pub iterations: usize,
    pub rel_gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub min_eigenvalue: f64,
    pub tol: f64,
    pub seconds: f64,
}

/// A certified bound together with what produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundRecord {
    pub spec: ProblemSpec,
    pub sdp_objective: f64,
    pub certified_bound: u64,
    pub guard: f64,
    pub provenance: Provenance,
    /// Absent for bounds read from an external solver's output.
    pub solver_stats: Option<SolverStats>,
}

impl BoundRecord {
    pub fn new(spec: ProblemSpec, s: &Solution, b: &CertifiedBound, tol: f64, seconds: f64) -> Self {
        BoundRecord {
            spec,
            sdp_objective: s.dual_objective,
            certified_bound: b.value,
            guard: b.guard,
            provenance: b.provenance.clone(),
            solver_stats: Some(SolverStats {
                status: s.status,
                iterations: s.iterations,
                rel_gap: s.rel_gap,
                primal_infeasibility: s.primal_infeasibility,
                dual_infeasibility: s.dual_infeasibility,
                min_eigenvalue: s.min_eigenvalue,
                tol,
                seconds,
            }),
        }
    }

    /// Record for a bound certified from an external solver's objective values.
    pub fn external(spec: ProblemSpec, b: &CertifiedBound) -> Self {
        BoundRecord {
            spec,
            sdp_objective: b.dual_objective,
            certified_bound: b.value,
            guard: b.guard,
            provenance: b.provenance.clone(),
            solver_stats: None,
        }
    }
}

/// Build the model for `spec` (level from `spec.k`) and solve it in double precision.
pub fn solve_spec(spec: &ProblemSpec, opts: &SolverOptions) -> Result<Solution> {
    let problem: SdpProblem<Rational> = build_model(spec)?;
    solve(&problem.to_data::<f64>(), opts)
}

/// Solve and certify in one step.
pub fn certified_bound(spec: &ProblemSpec, opts: &SolverOptions) -> Result<(Solution, CertifiedBound)> {
    let s = solve_spec(spec, opts)?;
    let b = certify(&s)?;
    Ok((s, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::DataBlock;

    /// maximize y subject to [[1, y], [y, 1]] ⪰ 0.
    fn toy() -> SdpData<f64> {
        SdpData {
            num_vars: 1,
            objective: vec![1.0],
            blocks: vec![DataBlock {
                diagonal: false,
                size: 2,
                constant: vec![(0, 0, 1.0), (1, 1, 1.0)],
                entries: vec![(0, 0, 1, 1.0)],
            }],
        }
    }

    #[test]
    fn toy_problem() {
        let s = solve(&toy(), &SolverOptions::default()).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-7, "{}", s.objective);
        assert!((s.dual_objective - 1.0).abs() < 1e-7);
        assert!(s.dual_objective >= s.objective - 1e-9);
    }

    #[test]
    fn linear_program() {
        // maximize y1 + 2 y2 with y1 + y2 <= 3, y2 <= 1, y >= 0.
        let data = SdpData {
            num_vars: 2,
            objective: vec![1.0, 2.0],
            blocks: vec![DataBlock {
                diagonal: true,
                size: 4,
                constant: vec![(0, 0, 3.0), (1, 1, 1.0)],
                entries: vec![(0, 0, 0, -1.0), (1, 0, 0, -1.0), (1, 1, 1, -1.0), (0, 2, 2, 1.0), (1, 3, 3, 1.0)],
            }],
        };
        let s = solve(&data, &SolverOptions::default()).unwrap();
        assert!((s.objective - 4.0).abs() < 1e-6, "{}", s.objective);
        assert!((s.y[0] - 2.0).abs() < 1e-5 && (s.y[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn scaling_does_not_change_the_optimum() {
        let mut d = toy();
        d.scale_block(0, 1e3);
        let s = solve(&d, &SolverOptions::default()).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-7);
    }

    #[test]
    fn deterministic() {
        let a = solve(&toy(), &SolverOptions::default()).unwrap();
        let b = solve(&toy(), &SolverOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_precision() {
        let d = toy();
        let d32 = SdpData {
            num_vars: 1,
            objective: vec![1.0f32],
            blocks: d
                .blocks
                .iter()
                .map(|b| DataBlock {
                    diagonal: b.diagonal,
                    size: b.size,
                    constant: b.constant.iter().map(|&(i, j, v)| (i, j, v as f32)).collect(),
                    entries: b.entries.iter().map(|&(k, i, j, v)| (k, i, j, v as f32)).collect(),
                })
                .collect(),
        };
        let s = solve(&d32, &SolverOptions::with_tol(1e-4)).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-3);
    }

    #[test]
    fn certification() {
        let b = certify_values(65.0000001, 1e-8, 0.0, Provenance::Solver).unwrap();
        assert_eq!(b.value, 65);
        assert!(matches!(certify_values(65.2, 0.6, 0.0, Provenance::Solver), Err(Error::Certification { .. })));
        // A tiny negative overshoot below an integer is lifted by the guard.
        assert_eq!(certify_values(8.9999999, 2e-7, 0.0, Provenance::Solver).unwrap().value, 9);
        let s = solve(&toy(), &SolverOptions::default()).unwrap();
        assert_eq!(certify(&s).unwrap().value, 1);
    }

    #[test]
    fn smallest_instance() {
        let spec = ProblemSpec::k3(1, 1, 1).unwrap();
        let (s, b) = certified_bound(&spec, &SolverOptions::default()).unwrap();
        assert!((s.objective - 6.0).abs() < 1e-6);
        assert_eq!(b.value, 6);
    }

    #[test]
    fn shape_errors() {
        let mut d = toy();
        d.objective.push(1.0);
        assert!(matches!(solve(&d, &SolverOptions::default()), Err(Error::Shape(_))));
    }
}
