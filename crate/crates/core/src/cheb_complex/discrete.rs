//! Certified discrete complex Chebyshev problem
//! `min over monic p of max_j |p(z_j)|`.
//!
//! Each working set is solved as a second-order cone program with a
//! log-barrier path-following method. The barrier multipliers give dual
//! weights `λ`; the weighted least-squares value `min_p (Σ λ_j |p(z_j)|²)^½`
//! is a rigorous lower bound for the optimum, and `max_j |p(z_j)|` over the
//! full set is an upper bound. Points violating the working-set level are
//! exchanged in until the two bounds meet.

use super::basis::{ArnoldiBasis, BasisPoly};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::sets::DiscreteSet;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const FULL_SET_LIMIT: usize = 600;
const MAX_ROUNDS: usize = 40;
const LAWSON_STEPS: usize = 400;
/// Relative band below the maximum treated as active.
const ACTIVE_BAND: f64 = 1e-3;
/// Barrier weight, relative to the largest, that marks a row as active.
const KKT_SUPPORT: f64 = 1e-4;
const KKT_STEPS: usize = 30;

#[derive(Debug, Clone)]
pub struct ComplexMinimaxSolution {
    pub poly: Poly,
    pub norm: f64,
    /// Points with `|p(z)| ≥ norm (1 - gap)`, with their moduli.
    pub active_points: Vec<(Complex64, f64)>,
    /// `(index into the set, λ)`, `λ ≥ 0`, summing to one.
    pub dual_witness: Vec<(usize, f64)>,
    pub gap: f64,
    pub evaluator: BasisPoly,
}

impl ComplexMinimaxSolution {
    /// Stable evaluation of the minimiser.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.evaluator.eval(z)
    }
}

/// Scaled problem data: `r_j(c) = b_j + sum_k a_jk c_k`.
struct Rows {
    b: Vec<Complex64>,
    a: DMatrix<Complex64>,
}

impl Rows {
    fn residuals(&self, c: &[Complex64]) -> Vec<Complex64> {
        (0..self.b.len())
            .map(|j| {
                let mut r = self.b[j];
                for (k, ck) in c.iter().enumerate() {
                    r += self.a[(j, k)] * ck;
                }
                r
            })
            .collect()
    }
}

struct BarrierOutcome {
    c: Vec<Complex64>,
    t: f64,
    lambda: Vec<f64>,
}

fn unpack(y: &DVector<f64>, n: usize) -> (Vec<Complex64>, f64) {
    let c = (0..n).map(|k| Complex64::new(y[k], y[n + k])).collect();
    (c, y[2 * n])
}

fn slacks(rows: &Rows, y: &DVector<f64>, n: usize) -> Option<(Vec<Complex64>, Vec<f64>)> {
    let (c, t) = unpack(y, n);
    let r = rows.residuals(&c);
    let mut s = Vec::with_capacity(r.len());
    for rj in &r {
        let m = rj.norm();
        if !(t > m) {
            return None;
        }
        s.push((t - m) * (t + m));
    }
    Some((r, s))
}

fn objective(kappa: f64, t: f64, s: &[f64]) -> f64 {
    kappa * t - s.iter().map(|v| v.ln()).sum::<f64>()
}

/// Minimise `t` subject to `|r_j(c)| ≤ t` by following the central path of
/// `κ t - Σ log(t² - |r_j|²)` until the barrier gap bound `2N/κ` is below
/// `gap_abs`.
fn barrier_solve(rows: &Rows, c0: &[Complex64], gap_abs: f64) -> Result<BarrierOutcome> {
    let n = c0.len();
    let m = rows.b.len();
    let dim = 2 * n + 1;
    let mut y = DVector::<f64>::zeros(dim);
    for k in 0..n {
        y[k] = c0[k].re;
        y[n + k] = c0[k].im;
    }
    let r0 = rows.residuals(c0);
    let rmax = r0.iter().map(|r| r.norm()).fold(0.0, f64::max);
    y[2 * n] = 1.5 * rmax + 1e-3;

    let (_, s0) = slacks(rows, &y, n).unwrap();
    let mut kappa: f64 = s0.iter().map(|s| 2.0 * y[2 * n] / s).sum();
    let mut bmat = DMatrix::<f64>::zeros(3 * m, dim);
    let mut grad = DVector::<f64>::zeros(dim);

    'path: loop {
        let final_stage = 2.0 * m as f64 / kappa <= gap_abs;
        let stop_dec = if final_stage { 1e-18 } else { 1e-6 };
        for _newton in 0..200 {
            let (r, s) = slacks(rows, &y, n).expect("iterate stays strictly feasible");
            let t = y[2 * n];
            grad.fill(0.0);
            grad[2 * n] = kappa;
            for j in 0..m {
                let (rr, ri, sj) = (r[j].re, r[j].im, s[j]);
                // Gradient of -log s in (t, ρ).
                let gu = [-2.0 * t / sj, 2.0 * rr / sj, 2.0 * ri / sj];
                // Hessian in (t, ρ): -2Q/s + 4 (Qu)(Qu)^T / s^2.
                let qu = [t, -rr, -ri];
                let mut hu = [[0.0; 3]; 3];
                for a in 0..3 {
                    for b in 0..3 {
                        hu[a][b] = 4.0 * qu[a] * qu[b] / (sj * sj);
                    }
                }
                hu[0][0] -= 2.0 / sj;
                hu[1][1] += 2.0 / sj;
                hu[2][2] += 2.0 / sj;
                let l = chol3(&hu);
                // Rows of M_j: t -> e_t, ρ1 -> (Re a, -Im a, 0), ρ2 -> (Im a, Re a, 0).
                for row in 0..3 {
                    // B_j = L^T M_j; row `row` of L^T combines M rows row..3.
                    let (w0, w1, w2) = (
                        if row == 0 { l[0][0] } else { 0.0 },
                        if row <= 1 { l[1][row] } else { 0.0 },
                        l[2][row],
                    );
                    let out = 3 * j + row;
                    for k in 0..n {
                        let ajk = rows.a[(j, k)];
                        bmat[(out, k)] = w1 * ajk.re + w2 * ajk.im;
                        bmat[(out, n + k)] = -w1 * ajk.im + w2 * ajk.re;
                    }
                    bmat[(out, 2 * n)] = w0;
                }
                for k in 0..n {
                    let ajk = rows.a[(j, k)];
                    grad[k] += gu[1] * ajk.re + gu[2] * ajk.im;
                    grad[n + k] += -gu[1] * ajk.im + gu[2] * ajk.re;
                }
                grad[2 * n] += gu[0];
            }
            let hess = bmat.tr_mul(&bmat);
            // Near the cone boundary the blocks lose accuracy; keep the
            // current iterate, the certificate does not depend on it.
            let Ok(step) = solve_spd(hess, &grad) else {
                break 'path;
            };
            let dec = -grad.dot(&step);
            if dec / 2.0 <= stop_dec {
                break;
            }
            let f0 = objective(kappa, t, &s);
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let trial = &y + &step * alpha;
                if let Some((_, st)) = slacks(rows, &trial, n) {
                    if objective(kappa, trial[2 * n], &st) <= f0 - 0.25 * alpha * dec {
                        y = trial;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if final_stage {
            break;
        }
        kappa *= 8.0;
    }

    let (c, t) = unpack(&y, n);
    let (_, s) = slacks(rows, &y, n).unwrap();
    let mut lambda: Vec<f64> = s.iter().map(|sj| 2.0 * t / (kappa * sj)).collect();
    let total: f64 = lambda.iter().sum();
    lambda.iter_mut().for_each(|v| *v /= total);
    Ok(BarrierOutcome { c, t, lambda })
}

/// Lower Cholesky factor of a symmetric positive definite 3×3 matrix.
fn chol3(a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut l = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..=i {
            let mut sum = a[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                l[i][i] = sum.max(1e-300).sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    l
}

fn solve_spd(mut h: DMatrix<f64>, g: &DVector<f64>) -> Result<DVector<f64>> {
    if h.iter().chain(g.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence("non-finite Newton system".into()));
    }
    let scale = (0..h.nrows()).map(|i| h[(i, i)]).fold(0.0, f64::max);
    let mut shift = 0.0;
    for _ in 0..8 {
        if let Some(ch) = h.clone().cholesky() {
            return Ok(-ch.solve(g));
        }
        shift = if shift == 0.0 { 1e-14 * scale } else { shift * 100.0 };
        for i in 0..h.nrows() {
            h[(i, i)] += shift;
        }
    }
    Err(Error::NonConvergence("singular Newton system".into()))
}

/// `min_c Σ λ_j |b_j + a_j c|²` and its minimiser.
fn weighted_least_squares(rows: &Rows, lambda: &[f64]) -> (f64, Vec<Complex64>) {
    let m = rows.b.len();
    let n = rows.a.ncols();
    if n == 0 {
        let v = (0..m).map(|j| lambda[j] * rows.b[j].norm_sqr()).sum();
        return (v, Vec::new());
    }
    let mut a = DMatrix::<Complex64>::zeros(m, n);
    let mut rhs = DVector::<Complex64>::zeros(m);
    for j in 0..m {
        let w = lambda[j].max(0.0).sqrt();
        for k in 0..n {
            a[(j, k)] = rows.a[(j, k)] * w;
        }
        rhs[j] = -rows.b[j] * w;
    }
    let svd = a.svd(true, true);
    let c = svd
        .solve(&rhs, 1e-14 * svd.singular_values.max())
        .expect("SVD computed with both factors");
    let c: Vec<Complex64> = c.iter().copied().collect();
    let r = rows.residuals(&c);
    let v = (0..m).map(|j| lambda[j] * r[j].norm_sqr()).sum();
    (v, c)
}

/// Lawson reweighting `λ_j ← λ_j |r_j|` of the least-squares dual. The
/// value `Σ λ_j |r_j|²` at the weighted least-squares solution never
/// decreases, so the best iterate is a valid lower bound.
fn lawson_polish(rows: &Rows, mut lambda: Vec<f64>, upper: f64, tol: f64) -> (f64, Vec<Complex64>, Vec<f64>) {
    let mut best: Option<(f64, Vec<Complex64>, Vec<f64>)> = None;
    for _ in 0..LAWSON_STEPS {
        let (psi, c) = weighted_least_squares(rows, &lambda);
        let lower = psi.max(0.0).sqrt();
        let improved = best.as_ref().is_none_or(|b| lower > b.0);
        if improved {
            best = Some((lower, c.clone(), lambda.clone()));
        }
        let r = rows.residuals(&c);
        let upper_ls = r.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if (upper / lower - 1.0 <= 0.5 * tol && upper_ls / lower - 1.0 <= 0.5 * tol) || !improved {
            break;
        }
        for (l, rj) in lambda.iter_mut().zip(r.iter()) {
            *l *= rj.norm();
        }
        let total: f64 = lambda.iter().sum();
        lambda.iter_mut().for_each(|v| *v /= total);
    }
    best.unwrap()
}

/// Dual weights on the near-active rows of `c` that best satisfy the
/// stationarity conditions `Σ λ_j conj(r_j) a_jk = 0`, `Σ λ_j = 1`.
fn active_dual(rows: &Rows, c: &[Complex64]) -> Option<Vec<f64>> {
    let r = rows.residuals(c);
    let top = r.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let active: Vec<usize> = (0..r.len()).filter(|&j| r[j].norm() >= top * (1.0 - ACTIVE_BAND)).collect();
    let n = c.len();
    let mut m = DMatrix::<f64>::zeros(2 * n + 1, active.len());
    for (col, &j) in active.iter().enumerate() {
        for k in 0..n {
            let v = r[j].conj() * rows.a[(j, k)] / top;
            m[(k, col)] = v.re;
            m[(n + k, col)] = v.im;
        }
        m[(2 * n, col)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(2 * n + 1);
    rhs[2 * n] = 1.0;
    let svd = m.svd(true, true);
    let x = svd.solve(&rhs, 1e-13 * svd.singular_values.max()).ok()?;
    let mut lambda = vec![0.0; r.len()];
    for (col, &j) in active.iter().enumerate() {
        lambda[j] = x[col].max(0.0);
    }
    let total: f64 = lambda.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    lambda.iter_mut().for_each(|v| *v /= total);
    Some(lambda)
}

/// Newton iteration on the optimality conditions restricted to an active
/// set: `|r_j|² = t²`, `Σ μ_j conj(r_j) a_jk = 0`, `Σ μ_j = 1`. Solved in
/// the least-squares sense, so repeated points and extra rows are
/// tolerated. Returns `(c, t, μ)` with `μ` on the active rows.
fn kkt_newton(rows: &Rows, active: &[usize], c0: &[Complex64], t0: f64, mu0: &[f64]) -> Option<(Vec<Complex64>, f64, Vec<f64>)> {
    let n = c0.len();
    let k = active.len();
    let dim = 2 * n + 1 + k;
    let mut x = DVector::<f64>::zeros(dim);
    for i in 0..n {
        x[i] = c0[i].re;
        x[n + i] = c0[i].im;
    }
    x[2 * n] = t0;
    for (i, m) in mu0.iter().enumerate() {
        x[2 * n + 1 + i] = *m;
    }
    let eqs = k + 2 * n + 1;
    for _ in 0..KKT_STEPS {
        let (c, t) = unpack(&x, n);
        let r: Vec<Complex64> = active
            .iter()
            .map(|&j| rows.b[j] + (0..n).map(|i| rows.a[(j, i)] * c[i]).sum::<Complex64>())
            .collect();
        let mu = &x.as_slice()[2 * n + 1..];
        let mut f = DVector::<f64>::zeros(eqs);
        let mut jac = DMatrix::<f64>::zeros(eqs, dim);
        for (row, &j) in active.iter().enumerate() {
            f[row] = r[row].norm_sqr() - t * t;
            for i in 0..n {
                let v = r[row].conj() * rows.a[(j, i)];
                jac[(row, i)] = 2.0 * v.re;
                jac[(row, n + i)] = -2.0 * v.im;
            }
            jac[(row, 2 * n)] = -2.0 * t;
        }
        for i in 0..n {
            let mut g = Complex64::new(0.0, 0.0);
            for (q, &j) in active.iter().enumerate() {
                let aji = rows.a[(j, i)];
                g += r[q].conj() * aji * mu[q];
                let d = r[q].conj() * aji;
                jac[(k + i, 2 * n + 1 + q)] = d.re;
                jac[(k + n + i, 2 * n + 1 + q)] = d.im;
                for l in 0..n {
                    let h = rows.a[(j, l)].conj() * aji * mu[q];
                    // d/dRe c_l and d/dIm c_l of conj(r_j) a_ji.
                    jac[(k + i, l)] += h.re;
                    jac[(k + n + i, l)] += h.im;
                    jac[(k + i, n + l)] += h.im;
                    jac[(k + n + i, n + l)] -= h.re;
                }
            }
            f[k + i] = g.re;
            f[k + n + i] = g.im;
        }
        f[eqs - 1] = mu.iter().sum::<f64>() - 1.0;
        for q in 0..k {
            jac[(eqs - 1, 2 * n + 1 + q)] = 1.0;
        }
        if f.iter().any(|v| !v.is_finite()) {
            return None;
        }
        if f.amax() <= 1e-15 * t * t {
            break;
        }
        let svd = jac.svd(true, true);
        let step = svd.solve(&f, 1e-13 * svd.singular_values.max()).ok()?;
        x -= step;
    }
    let (c, t) = unpack(&x, n);
    Some((c, t, x.as_slice()[2 * n + 1..].to_vec()))
}

/// Dual weights from Newton on the optimality conditions, started on the
/// rows carrying barrier weight.
fn kkt_dual(rows: &Rows, c0: &[Complex64], t0: f64, lambda: &[f64]) -> Option<Vec<f64>> {
    let top = lambda.iter().copied().fold(0.0, f64::max);
    let mut active: Vec<usize> = (0..lambda.len()).filter(|&j| lambda[j] >= KKT_SUPPORT * top).collect();
    let cap = 4 * (2 * c0.len() + 1);
    if active.len() > cap {
        active.sort_by(|&a, &b| lambda[b].total_cmp(&lambda[a]));
        active.truncate(cap);
        active.sort_unstable();
    }
    let mass: f64 = active.iter().map(|&j| lambda[j]).sum();
    let mu0: Vec<f64> = active.iter().map(|&j| lambda[j] / mass).collect();
    let (_, _, mu) = kkt_newton(rows, &active, c0, t0, &mu0)?;
    let mut full = vec![0.0; lambda.len()];
    for (i, &j) in active.iter().enumerate() {
        full[j] = mu[i].max(0.0);
    }
    let total: f64 = full.iter().sum();
    (total > 0.0 && total.is_finite()).then(|| full.into_iter().map(|v| v / total).collect())
}

fn rows_for(basis: &ArnoldiBasis, idx: &[usize], scale: f64) -> Rows {
    let n = basis.degree();
    let mut a = DMatrix::<Complex64>::zeros(idx.len(), n);
    let mut b = Vec::with_capacity(idx.len());
    for (row, &j) in idx.iter().enumerate() {
        b.push(basis.lead * basis.q[(j, n)] / scale);
        for k in 0..n {
            a[(row, k)] = basis.q[(j, k)];
        }
    }
    Rows { b, a }
}

fn moduli(basis: &ArnoldiBasis, c: &[Complex64], scale: f64) -> Vec<f64> {
    let all: Vec<usize> = (0..basis.q.nrows()).collect();
    rows_for(basis, &all, scale)
        .residuals(c)
        .iter()
        .map(|r| r.norm())
        .collect()
}

/// Certified solution of the discrete complex Chebyshev problem of degree
/// `n` on `set`; the returned `gap` bounds `norm / optimum - 1` and is at
/// most `tol`.
pub fn solve_discrete_minimax(set: &DiscreteSet, n: usize, tol: f64) -> Result<ComplexMinimaxSolution> {
    solve_on_points(&set.points, n, tol)
}

pub fn solve_on_points(points: &[Complex64], n: usize, tol: f64) -> Result<ComplexMinimaxSolution> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    // Repeated points (a star's centre lies on every ray) leave the problem
    // unchanged but make its dual degenerate.
    let mut seen = std::collections::HashMap::new();
    let mut distinct = Vec::with_capacity(points.len());
    let mut origin = Vec::with_capacity(points.len());
    for (j, z) in points.iter().enumerate() {
        let key = ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits());
        seen.entry(key).or_insert_with(|| {
            distinct.push(*z);
            origin.push(j);
        });
    }
    let mut sol = solve_distinct(&distinct, n, tol)?;
    for w in &mut sol.dual_witness {
        w.0 = origin[w.0];
    }
    Ok(sol)
}

fn solve_distinct(points: &[Complex64], n: usize, tol: f64) -> Result<ComplexMinimaxSolution> {
    let basis = ArnoldiBasis::new(points, n)?;
    let big_n = points.len();
    let zero_c = vec![Complex64::new(0.0, 0.0); n];

    // The least-squares monic polynomial is lead · q_n; use it for scaling.
    let scale = (0..big_n)
        .map(|j| (basis.lead * basis.q[(j, n)]).norm())
        .fold(0.0, f64::max);
    if n == 0 {
        return Ok(package(points, &basis, Vec::new(), 1.0, 0.0, (0..big_n).map(|j| (j, 1.0 / big_n as f64)).collect()));
    }

    let mut working: Vec<usize> = if big_n <= FULL_SET_LIMIT {
        (0..big_n).collect()
    } else {
        initial_working_set(&moduli(&basis, &zero_c, scale), n)
    };
    let mut c = zero_c;
    let mut barrier_tol = 0.05 * tol;
    let mut best: Option<Candidate> = None;

    for _round in 0..MAX_ROUNDS {
        let rows = rows_for(&basis, &working, scale);
        let out = barrier_solve(&rows, &c, barrier_tol)?;
        c = out.c.clone();
        let mods = moduli(&basis, &c, scale);
        let upper = mods.iter().copied().fold(0.0, f64::max);
        let duals = [kkt_dual(&rows, &c, out.t, &out.lambda), active_dual(&rows, &c)];
        // Polish the best sparse candidate and the full-support barrier
        // weights; reweighting cannot revive a zero weight.
        let sparse = duals
            .into_iter()
            .flatten()
            .map(|l| (weighted_least_squares(&rows, &l).0, l))
            .max_by(|a, b| a.0.total_cmp(&b.0));
        let mut polished = lawson_polish(&rows, out.lambda, upper, tol);
        if let Some((_, l)) = sparse {
            let second = lawson_polish(&rows, l, upper, tol);
            if second.0 > polished.0 {
                polished = second;
            }
        }
        let (lower, c_ls, lambda) = polished;
        let witness: Vec<(usize, f64)> = working
            .iter()
            .zip(lambda.iter())
            .filter(|(_, &l)| l > 0.0)
            .map(|(&j, &l)| (j, l))
            .collect();

        // The witness certifies `c_ls` exactly, so it wins whenever it meets
        // the tolerance; the barrier iterate is the fallback.
        let mods_ls = moduli(&basis, &c_ls, scale);
        let gap_ls = mods_ls.iter().copied().fold(0.0, f64::max) / lower - 1.0;
        let gap_b = upper / lower - 1.0;
        let candidate = if gap_ls <= tol || gap_ls <= gap_b {
            Candidate { gap: gap_ls, c: c_ls, witness, exact: true }
        } else {
            Candidate { gap: gap_b, c: c.clone(), witness, exact: false }
        };
        if best.as_ref().is_none_or(|b| candidate.beats(b, tol)) {
            best = Some(candidate);
        }
        if best.as_ref().is_some_and(|b| b.exact && b.gap <= tol) {
            break;
        }

        let level = out.t * (1.0 + 0.25 * tol);
        let in_set: std::collections::HashSet<usize> = working.iter().copied().collect();
        let mut added: Vec<usize> = (0..big_n)
            .filter(|j| !in_set.contains(j) && mods[*j] > level)
            .collect();
        if added.is_empty() {
            if barrier_tol < 1e-14 {
                break;
            }
            barrier_tol *= 0.1;
        } else {
            working.append(&mut added);
            working.sort_unstable();
        }
    }

    let Candidate { gap, c: c_best, witness, .. } = best.unwrap();
    if !(gap <= tol) {
        return Err(Error::NonConvergence(format!(
            "discrete minimax gap {gap:.3e} exceeds {tol:.3e}"
        )));
    }
    Ok(package(points, &basis, c_best, scale, gap.max(0.0), witness))
}

struct Candidate {
    gap: f64,
    c: Vec<Complex64>,
    witness: Vec<(usize, f64)>,
    exact: bool,
}

impl Candidate {
    fn beats(&self, other: &Candidate, tol: f64) -> bool {
        let ok = |c: &Candidate| c.gap <= tol;
        match (ok(self), ok(other)) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => (self.exact && !other.exact) || (self.exact == other.exact && self.gap < other.gap),
            (false, false) => self.gap < other.gap,
        }
    }
}

fn initial_working_set(mods: &[f64], n: usize) -> Vec<usize> {
    let top = mods.iter().copied().fold(0.0, f64::max);
    let want = (8 * (n + 1)).min(mods.len());
    let mut frac = 0.5;
    loop {
        let idx: Vec<usize> = (0..mods.len()).filter(|&j| mods[j] >= frac * top).collect();
        if idx.len() >= want || frac < 1e-6 {
            return idx;
        }
        frac *= 0.5;
    }
}

fn package(
    points: &[Complex64],
    basis: &ArnoldiBasis,
    c_scaled: Vec<Complex64>,
    scale: f64,
    gap: f64,
    witness: Vec<(usize, f64)>,
) -> ComplexMinimaxSolution {
    let n = basis.degree();
    let coeffs: Vec<Complex64> = if n == 0 { Vec::new() } else { c_scaled.iter().map(|c| c * scale).collect() };
    let evaluator = BasisPoly {
        basis: basis.clone(),
        coeffs,
    };
    let values = evaluator.values();
    let norm = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let active_points = points
        .iter()
        .zip(values.iter())
        .filter(|(_, v)| v.norm() >= norm * (1.0 - gap))
        .map(|(z, v)| (*z, v.norm()))
        .collect();
    let total: f64 = witness.iter().map(|w| w.1).sum();
    let dual_witness = witness.into_iter().map(|(j, l)| (j, l / total)).collect();
    ComplexMinimaxSolution {
        poly: evaluator.to_poly(),
        norm,
        active_points,
        dual_witness,
        gap,
        evaluator,
    }
}

/// `min ‖q‖` over monic `q` of degree `n` in `L²(Σ λ_j δ_{z_j})`: the
/// product of the subdiagonal of a Lanczos–Arnoldi run on `diag(z)` started
/// from `sqrt(λ)`, with full reorthogonalisation.
fn monic_l2_minimum(z: &[Complex64], lambda: &[f64], n: usize) -> f64 {
    let mut basis: Vec<Vec<Complex64>> = vec![lambda.iter().map(|l| Complex64::new(l.sqrt(), 0.0)).collect()];
    let norm0: f64 = basis[0].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    basis[0].iter_mut().for_each(|v| *v /= norm0);
    let mut prod = norm0;
    for k in 0..n {
        let mut v: Vec<Complex64> = basis[k].iter().zip(z).map(|(q, z)| q * z).collect();
        for _ in 0..2 {
            for q in &basis {
                let h: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(x, a)| *x -= a * h);
            }
        }
        let h: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        prod *= h;
        if h == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|x| *x /= h);
        basis.push(v);
    }
    prod
}

/// Check the dual certificate against `points`: the witness is a
/// probability vector, the lower bound it implies, recomputed from scratch,
/// satisfies `lower ≤ norm ≤ lower (1 + gap)`, the stored norm is the
/// maximum over the points, and the active points reach the level.
pub fn audit_dual_witness(
    sol: &ComplexMinimaxSolution,
    points: &[Complex64],
) -> std::result::Result<(), String> {
    let n = sol.poly.degree();
    let total: f64 = sol.dual_witness.iter().map(|w| w.1).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(format!("witness weights sum to {total}"));
    }
    if sol.dual_witness.iter().any(|w| w.1 < 0.0 || w.0 >= points.len()) {
        return Err("invalid witness entry".into());
    }
    let z: Vec<Complex64> = sol.dual_witness.iter().map(|w| points[w.0]).collect();
    let lambda: Vec<f64> = sol.dual_witness.iter().map(|w| w.1).collect();
    let lower = monic_l2_minimum(&z, &lambda, n);
    let rel = 1e-9;
    if sol.norm > lower * (1.0 + sol.gap) * (1.0 + rel) {
        return Err(format!("norm {} exceeds certified bound {} · (1 + {:e})", sol.norm, lower, sol.gap));
    }
    if lower > sol.norm * (1.0 + rel) {
        return Err(format!("lower bound {lower} exceeds the norm {}", sol.norm));
    }
    let top = points.iter().map(|p| sol.eval(*p).norm()).fold(0.0, f64::max);
    if (top - sol.norm).abs() > 1e-12 * sol.norm {
        return Err(format!("stored norm {} differs from the maximum {top}", sol.norm));
    }
    for &(z, v) in &sol.active_points {
        if v < sol.norm * (1.0 - sol.gap) * (1.0 - 1e-12) {
            return Err(format!("active point {z} below level"));
        }
    }
    Ok(())
}
