use super::{reduce_negative, Weight};
use crate::error::{Error, Result};
use crate::poly::Poly;
use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_ITER: usize = 200;

/// Monic weighted minimiser of degree `n` on `[-1, 1]`.
///
/// The polynomial is held in barycentric form on the final reference;
/// `poly` is the monomial expansion, which loses accuracy for large degree
/// and is meant for display and structural checks.
#[derive(Debug, Clone)]
pub struct MinimaxSolution {
    pub poly: Poly,
    pub norm: f64,
    /// Alternation points `(x, w(x) p(x))` of the reduced problem.
    pub extrema: Vec<(f64, f64)>,
    pub gap: f64,
    pub iterations: usize,
    /// Factors `(x - b)^m` forced by negative integer exponents.
    pub forced: Vec<(f64, usize)>,
    cleaned: Weight,
    nodes: Vec<f64>,
    bary: Vec<f64>,
    values: Vec<f64>,
}

impl MinimaxSolution {
    /// Degree of the problem after removing forced factors.
    pub fn reduced_degree(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    /// The monic minimiser at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let forced: f64 = self.forced.iter().map(|&(b, m)| (x - b).powi(m as i32)).product();
        forced * bary_eval(&self.nodes, &self.bary, &self.values, x)
    }

    /// `w(x) p(x)`, evaluated without the cancelling singular factors.
    pub fn eval_weighted(&self, x: f64) -> f64 {
        let sign: f64 = self
            .forced
            .iter()
            .map(|&(b, m)| (x - b).signum().powi(m as i32))
            .product();
        sign * self.cleaned.eval(x) * bary_eval(&self.nodes, &self.bary, &self.values, x)
    }
}

fn bary_weights(nodes: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|i| {
            let prod: f64 = (0..nodes.len())
                .filter(|&j| j != i)
                .map(|j| 2.0 * (nodes[i] - nodes[j]))
                .product();
            1.0 / prod
        })
        .collect()
}

fn bary_eval(nodes: &[f64], bary: &[f64], values: &[f64], x: f64) -> f64 {
    if nodes.len() == 1 {
        return values[0];
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..nodes.len() {
        let d = x - nodes[i];
        if d == 0.0 {
            return values[i];
        }
        let t = bary[i] / d;
        num += t * values[i];
        den += t;
    }
    num / den
}

/// Level `h` and values of the monic polynomial with
/// `w(x_i) p(x_i) = (-1)^(n-i) h` on the reference.
fn levelled(nodes: &[f64], wvals: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = nodes.len() - 1;
    let bary = bary_weights(nodes);
    // Leading coefficient of the interpolant is 2^n sum values_i bary_i
    // (the weights carry a factor 2 per node difference).
    let sign = |i: usize| if (n - i) % 2 == 0 { 1.0 } else { -1.0 };
    let s: f64 = (0..=n).map(|i| sign(i) * bary[i] / wvals[i]).sum();
    let h = 2f64.powi(-(n as i32)) / s;
    let values = (0..=n).map(|i| sign(i) * h / wvals[i]).collect();
    (bary, values)
}

fn nudge_off_zeros(nodes: &mut [f64], w: &Weight) {
    let n = nodes.len();
    for i in 0..n {
        let mut tries = 0;
        while !(w.eval(nodes[i]) > 0.0 && w.eval(nodes[i]).is_finite()) && tries < 60 {
            let toward = if i + 1 < n { nodes[i + 1] } else { nodes[i - 1] };
            let toward = if i > 0 && i + 1 == n { nodes[i - 1] } else { toward };
            nodes[i] = 0.5 * (nodes[i] + toward);
            tries += 1;
        }
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Local maxima of `|e|`, one per maximal run of constant sign, refined by
/// golden-section search between grid neighbours.
fn signed_extrema<F: Fn(f64) -> f64>(e: &F, grid: &[f64]) -> Vec<(f64, f64)> {
    let vals: Vec<f64> = grid.iter().map(|&x| e(x)).collect();
    let mut runs: Vec<(usize, f64)> = Vec::new(); // (grid index of max, sign)
    for (k, &v) in vals.iter().enumerate() {
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        let sg = v.signum();
        match runs.last_mut() {
            Some((idx, s)) if *s == sg => {
                if v.abs() > vals[*idx].abs() {
                    *idx = k;
                }
            }
            _ => runs.push((k, sg)),
        }
    }
    let abs_e = |x: f64| e(x).abs();
    runs.into_iter()
        .map(|(k, _)| {
            let lo = grid[k.saturating_sub(1)];
            let hi = grid[(k + 1).min(grid.len() - 1)];
            let (x, v) = golden_max(&abs_e, lo, hi);
            if v > vals[k].abs() {
                (x, e(x))
            } else {
                (grid[k], vals[k])
            }
        })
        .collect()
}

/// Keep `count` alternating points, dropping the smaller end point or the
/// adjacent pair with the smallest larger member.
fn trim_alternating(mut pts: Vec<(f64, f64)>, count: usize) -> Vec<(f64, f64)> {
    while pts.len() > count {
        let excess = pts.len() - count;
        let last = pts.len() - 1;
        if excess == 1 {
            if pts[0].1.abs() < pts[last].1.abs() {
                pts.remove(0);
            } else {
                pts.pop();
            }
            continue;
        }
        let mut best = (0, f64::INFINITY);
        for i in 0..last {
            let m = pts[i].1.abs().max(pts[i + 1].1.abs());
            if m < best.1 {
                best = (i, m);
            }
        }
        let ends = pts[0].1.abs().max(pts[last].1.abs());
        if ends < best.1 {
            pts.pop();
            pts.remove(0);
        } else {
            pts.drain(best.0..best.0 + 2);
        }
    }
    pts
}

fn search_grid(n: usize) -> Vec<f64> {
    let k = (40 * (n + 1)).max(2000);
    (0..k)
        .map(|i| -(PI * i as f64 / (k - 1) as f64).cos())
        .collect()
}

/// Monic degree-`n` polynomial minimising `max_{[-1,1]} w |p|`, by
/// multi-point Remez exchange in barycentric form.
///
/// Stops once the levelled-error ratio `max |e| / min_ref |e| - 1` is at
/// most `tol`. Singular factors with exponent `-m` (integer) are split off
/// as a forced factor `(x - b)^m`; other negative singular exponents are
/// rejected.
pub fn remez_weighted(w: &Weight, n: usize, tol: f64) -> Result<MinimaxSolution> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let (cleaned, forced) = reduce_negative(w)?;
    let removed: usize = forced.iter().map(|f| f.1).sum();
    if removed > n {
        return Err(Error::Domain(format!(
            "degree {n} is below the forced factor degree {removed}"
        )));
    }
    let d = n - removed;
    let grid = search_grid(d);

    if d == 0 {
        let e = |x: f64| cleaned.eval(x);
        let top = signed_extrema(&e, &grid)
            .into_iter()
            .fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        return Ok(finish(
            vec![0.0],
            vec![1.0],
            vec![1.0],
            top.1,
            vec![top],
            0.0,
            0,
            forced,
            cleaned,
        ));
    }

    let mut nodes: Vec<f64> = (0..=d).map(|i| -(PI * i as f64 / d as f64).cos()).collect();
    nudge_off_zeros(&mut nodes, &cleaned);

    let mut last_gap = f64::INFINITY;
    let mut stall = 0;
    for iter in 1..=MAX_ITER {
        let wvals: Vec<f64> = nodes.iter().map(|&x| cleaned.eval(x)).collect();
        let (bary, values) = levelled(&nodes, &wvals);
        let e = |x: f64| cleaned.eval(x) * bary_eval(&nodes, &bary, &values, x);

        let mut search: Vec<f64> = grid.clone();
        search.extend(nodes.iter().copied());
        search.sort_by(|a, b| a.partial_cmp(b).unwrap());
        search.dedup();
        let cands = signed_extrema(&e, &search);
        if cands.len() < d + 1 {
            return Err(Error::NonConvergence(format!(
                "only {} sign changes for degree {d}",
                cands.len()
            )));
        }
        let norm = cands.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
        let chosen = trim_alternating(cands, d + 1);
        let min_ref = chosen.iter().map(|c| c.1.abs()).fold(f64::INFINITY, f64::min);
        let gap = norm / min_ref - 1.0;

        if gap <= tol {
            return Ok(finish(nodes, values, bary, norm, chosen, gap, iter, forced, cleaned));
        }
        if gap >= 0.999 * last_gap {
            stall += 1;
        } else {
            stall = 0;
        }
        if stall >= 8 {
            return Err(Error::NonConvergence(format!(
                "Remez stalled at gap {gap:.3e} (degree {d})"
            )));
        }
        last_gap = gap;
        nodes = chosen.iter().map(|c| c.0).collect();
    }
    Err(Error::NonConvergence(format!(
        "Remez exceeded {MAX_ITER} iterations (degree {d})"
    )))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    nodes: Vec<f64>,
    values: Vec<f64>,
    bary: Vec<f64>,
    norm: f64,
    extrema: Vec<(f64, f64)>,
    gap: f64,
    iterations: usize,
    forced: Vec<(f64, usize)>,
    cleaned: Weight,
) -> MinimaxSolution {
    let mut poly = monomial_form(&nodes, &values);
    for &(b, m) in &forced {
        for _ in 0..m {
            poly = &poly * &Poly::from_real(&[-b, 1.0]);
        }
    }
    MinimaxSolution {
        poly,
        norm,
        extrema,
        gap,
        iterations,
        forced,
        cleaned,
        nodes,
        bary,
        values,
    }
}

/// Newton divided differences expanded into monomial coefficients.
fn monomial_form(nodes: &[f64], values: &[f64]) -> Poly {
    let n = nodes.len();
    let mut dd = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - j]);
        }
    }
    let mut p = Poly::constant(Complex64::new(dd[n - 1], 0.0));
    for i in (0..n - 1).rev() {
        p = &(&p * &Poly::from_real(&[-nodes[i], 1.0])) + &Poly::from_real(&[dd[i]]);
    }
    p
}

/// Check the alternation certificate of a Remez solution: `n + 1` points
/// (of the reduced problem) with alternating signs, every value within
/// `[norm (1 - gap), norm]`, and no grid point above the norm.
pub fn audit_equioscillation(sol: &MinimaxSolution, w: &Weight) -> std::result::Result<(), String> {
    let d = sol.reduced_degree();
    if sol.extrema.len() != d + 1 {
        return Err(format!("{} extrema for reduced degree {d}", sol.extrema.len()));
    }
    for pair in sol.extrema.windows(2) {
        if d > 0 && pair[0].1.signum() == pair[1].1.signum() {
            return Err(format!("no sign change between {} and {}", pair[0].0, pair[1].0));
        }
    }
    let slack = 1e-12 * sol.norm;
    for &(x, v) in &sol.extrema {
        let again = sol.eval_weighted(x);
        // The forced factor may flip the sign relative to the reduced problem.
        if (again.abs() - v.abs()).abs() > 1e-9 * sol.norm {
            return Err(format!("stored extremum value at {x} does not reproduce"));
        }
        if v.abs() < sol.norm * (1.0 - sol.gap) - slack || v.abs() > sol.norm + slack {
            return Err(format!("extremum {v} outside [norm(1-gap), norm]"));
        }
    }
    let grid = search_grid(3 * d + 7);
    // Independent evaluation through the original weight.
    let top = grid
        .iter()
        .map(|&x| (w.eval(x) * sol.eval(x)).abs())
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    if top > sol.norm * (1.0 + 1e-8) {
        return Err(format!("grid maximum {top} exceeds norm {}", sol.norm));
    }
    Ok(())
}
