//! Widom factors `‖T_n‖ / Cap^n` and their L² analogue on stars, exact
//! limits, and the Gamma-function closed form of the orthogonal norms.

use crate::cheb_complex::{quadratic_odd_norm, solve_discrete_minimax, star_norm, star_odd_norm, ReducedNorm, ReductionRoute};
use crate::error::{Error, Result};
use crate::poly::{solve_roots, Poly};
use crate::potential::joukowski_exterior;
use crate::quad::integrate;
use crate::sets::{discretize_seeded, Clustering, SetSpec};
use crate::special::{ln_gamma, ln_gamma_ratio};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Sup,
    L2Squared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Exact,
    Remez,
    Discrete,
    GammaFormula,
    Quadrature,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Exact => "exact",
            Route::Remez => "remez",
            Route::Discrete => "discrete",
            Route::GammaFormula => "gamma-formula",
            Route::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidomRecord {
    pub degree: usize,
    /// Sup norm, or squared L² norm for [`Flavor::L2Squared`].
    pub norm: f64,
    pub capacity: f64,
    pub factor: f64,
    pub flavor: Flavor,
    pub route: Route,
    /// Certified relative gap of the solver (0 for closed forms).
    pub gap: f64,
}

/// One entry of a series; failures keep their degree.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesEntry {
    pub degree: usize,
    pub result: Result<WidomRecord>,
}

#[derive(Debug, Clone)]
pub struct SeriesOptions {
    pub tol: f64,
    /// Points per edge for the discrete route; `None` uses the set default.
    pub per_edge: Option<usize>,
    pub clustering: Clustering,
    pub seed: u64,
}

impl SeriesOptions {
    pub fn with_tol(tol: f64) -> Self {
        SeriesOptions {
            tol,
            per_edge: None,
            clustering: Clustering::Arcsine,
            seed: 0x5eed_0f_7007,
        }
    }
}

/// Sup-norm Widom factors at the given degrees, in the same order.
pub fn widom_inf_series(spec: &SetSpec, degrees: &[usize], tol: f64) -> Result<Vec<SeriesEntry>> {
    widom_inf_series_with(spec, degrees, &SeriesOptions::with_tol(tol))
}

pub fn widom_inf_series_with(spec: &SetSpec, degrees: &[usize], opts: &SeriesOptions) -> Result<Vec<SeriesEntry>> {
    if degrees.is_empty() {
        return Err(Error::Domain("no degrees requested".into()));
    }
    spec.validate()?;
    let capacity = spec.capacity()?.value;
    Ok(degrees
        .par_iter()
        .map(|&degree| SeriesEntry {
            degree,
            result: widom_inf_single(spec, degree, capacity, opts),
        })
        .collect())
}

fn record(degree: usize, norm: f64, capacity: f64, route: Route, gap: f64) -> WidomRecord {
    WidomRecord {
        degree,
        norm,
        capacity,
        factor: norm / capacity.powi(degree as i32),
        flavor: Flavor::Sup,
        route,
        gap,
    }
}

fn from_reduced(degree: usize, r: ReducedNorm, capacity: f64) -> WidomRecord {
    let route = match r.route {
        ReductionRoute::Exact => Route::Exact,
        ReductionRoute::Remez => Route::Remez,
    };
    record(degree, r.norm, capacity, route, r.gap)
}

fn widom_inf_single(spec: &SetSpec, degree: usize, capacity: f64, opts: &SeriesOptions) -> Result<WidomRecord> {
    if degree == 0 {
        return Ok(record(0, 1.0, capacity, Route::Exact, 0.0));
    }
    match spec {
        SetSpec::Interval { a, b } => {
            let half = (b - a) / 4.0;
            Ok(record(degree, 2.0 * half.powi(degree as i32), capacity, Route::Exact, 0.0))
        }
        SetSpec::StarEven { m } => Ok(from_reduced(degree, star_norm(*m, degree, opts.tol)?, capacity)),
        SetSpec::StarOdd { m } => Ok(from_reduced(degree, star_odd_norm(*m, degree, opts.tol)?, capacity)),
        SetSpec::QuadraticPreimage { .. } if degree % 2 == 0 => Ok(record(degree, 2.0, capacity, Route::Exact, 0.0)),
        SetSpec::QuadraticPreimage { .. } => {
            let c = spec.quadratic_c().unwrap();
            Ok(from_reduced(degree, quadratic_odd_norm(c, degree / 2, opts.tol)?, capacity))
        }
        SetSpec::CircularArc { .. } | SetSpec::PolyPreimage { .. } | SetSpec::SpikedCircle { .. } => {
            let per_edge = match opts.per_edge {
                Some(p) => p,
                None => spec.default_per_edge(degree)?,
            };
            let set = discretize_seeded(spec, per_edge, opts.clustering, opts.seed)?;
            let sol = solve_discrete_minimax(&set, degree, opts.tol)?;
            Ok(record(degree, sol.norm, capacity, Route::Discrete, sol.gap))
        }
    }
}

/// Closed-form limit of the sup-norm Widom factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Limit {
    Single { value: f64, conjecture: bool },
    /// Limits along even and odd degrees.
    EvenOdd { even: f64, odd: f64 },
}

/// `sqrt(2 |c + sqrt(c^2 - 4)|)` with the exterior branch.
pub fn quadratic_odd_limit(c: Complex64) -> f64 {
    (2.0 * joukowski_exterior(c).norm()).sqrt()
}

pub fn widom_limit(spec: &SetSpec) -> Result<Limit> {
    spec.validate()?;
    match spec {
        SetSpec::Interval { .. } | SetSpec::StarEven { .. } | SetSpec::StarOdd { .. } => Ok(Limit::Single {
            value: 2.0,
            conjecture: false,
        }),
        SetSpec::QuadraticPreimage { .. } => Ok(Limit::EvenOdd {
            even: 2.0,
            odd: quadratic_odd_limit(spec.quadratic_c().unwrap()),
        }),
        SetSpec::CircularArc { alpha } => Ok(Limit::Single {
            value: 2.0 * (alpha / 4.0).cos().powi(2),
            conjecture: false,
        }),
        SetSpec::PolyPreimage { .. } => {
            let (p, target) = spec.as_preimage().unwrap();
            if is_tree_polynomial(&p, target)? {
                Ok(Limit::Single {
                    value: 2.0,
                    conjecture: true,
                })
            } else {
                Err(Error::Unsupported(
                    "no limit is known for preimages with critical values off the target endpoints".into(),
                ))
            }
        }
        SetSpec::SpikedCircle { .. } => Err(Error::Unsupported("no closed-form limit for spiked circles".into())),
    }
}

/// All critical values of `p` are endpoints of the target.
fn is_tree_polynomial(p: &Poly, [lo, hi]: [f64; 2]) -> Result<bool> {
    if p.degree() < 2 {
        return Ok(true);
    }
    let crit = solve_roots(&p.derivative(), 1e-12)?;
    let width = hi - lo;
    Ok(crit.roots.iter().all(|(z, _)| {
        let v = p.eval(*z);
        let close = |t: f64| (v - Complex64::new(t, 0.0)).norm() <= 1e-8 * width.max(1.0);
        close(lo) || close(hi)
    }))
}

/// `γ_n(s) = 2 Γ(2n+1) Γ(2n+2s) / ((2n+s) Γ(2n+s)^2)`, the squared L²
/// Widom factor of the star of order `m` at degree `2nm + l`, `s = l/m`.
pub fn gamma_ratio(n: usize, s: f64) -> f64 {
    assert!(s >= 0.0, "gamma_ratio needs s ≥ 0");
    let x = 2.0 * n as f64;
    if s == 0.0 {
        return 2.0;
    }
    if n == 0 {
        return 2.0 * (ln_gamma(2.0 * s) - 2.0 * ln_gamma(s)).exp() / s;
    }
    let ln = ln_gamma_ratio(x, 1.0, s) + ln_gamma_ratio(x, 2.0 * s, s);
    2.0 * ln.exp() / (x + s)
}

/// `γ_{n+1}(s) / γ_n(s)` as a rational function.
pub fn gamma_step(n: usize, s: f64) -> f64 {
    let x = 2.0 * n as f64;
    (x + 1.0) * (x + 2.0) * (x + 2.0 * s) * (x + 2.0 * s + 1.0)
        / ((x + s) * (x + s + 1.0).powi(2) * (x + s + 2.0))
}

/// Squared L² norm, against the equilibrium measure of the star of order
/// `m`, of the monic orthogonal polynomial of degree `2nm + l`, from the
/// Jacobi recurrence with `(α, β) = (-1/2, l/m - 1/2)` moved to `[0, 4]`.
pub fn ortho_norm_direct(m: usize, degree: usize) -> f64 {
    assert!(m >= 1, "star order must be positive");
    let n = degree / (2 * m);
    let l = degree % (2 * m);
    let s = l as f64 / m as f64;
    let (a, b) = (-0.5, s - 0.5);
    // Total mass of x^{s-1/2} (4-x)^{-1/2} dx / π on [0, 4].
    let mu0 = 2f64.powf(2.0 * s + 1.0) / PI * integrate(|phi| phi.sin().powf(2.0 * s), 0.0, FRAC_PI_2, 1e-15);
    let mut norm = mu0;
    for k in 1..=n {
        let kf = k as f64;
        let beta = if k == 1 {
            4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0).powi(2) * (a + b + 3.0))
        } else {
            let t = 2.0 * kf + a + b;
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (t * t * (t + 1.0) * (t - 1.0))
        };
        norm *= 4.0 * beta;
    }
    norm
}

/// Squared L² Widom factors of the star of order `m` (capacity 1).
pub fn widom_l2_series(m: usize, degrees: &[usize]) -> Vec<WidomRecord> {
    degrees
        .iter()
        .map(|&degree| {
            let n = degree / (2 * m);
            let s = (degree % (2 * m)) as f64 / m as f64;
            let (norm, route) = if n >= 1 {
                (gamma_ratio(n, s), Route::GammaFormula)
            } else {
                (ortho_norm_direct(m, degree), Route::Quadrature)
            };
            WidomRecord {
                degree,
                norm,
                capacity: 1.0,
                factor: norm,
                flavor: Flavor::L2Squared,
                route,
                gap: 0.0,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_ratio(3, 0.0), 2.0);
        assert!((gamma_ratio(5, 1.0) - 2.0).abs() < 1e-13);
        assert!((gamma_step(7, 1.0) - 1.0).abs() < 1e-15);
        assert!((gamma_step(1, 0.5) - 144.0 / 137.8125).abs() < 1e-14);
    }

    #[test]
    fn small_degree_l2_is_monomial_moment() {
        // Degree 1 on the star of order 2: ∫ |z|^2 dμ = μ_0 with s = 1/2.
        assert!((ortho_norm_direct(2, 1) - 4.0 / PI).abs() < 1e-13);
        assert!((gamma_ratio(0, 0.5) - 4.0 / PI).abs() < 1e-13);
    }

    #[test]
    fn tree_polynomial_detection() {
        let (p, t) = SetSpec::shabat().as_preimage().unwrap();
        assert!(is_tree_polynomial(&p, t).unwrap());
        assert!(!is_tree_polynomial(&Poly::from_real(&[0.0, 0.0, 0.0, 1.0, 0.5]), [-2.0, 2.0]).unwrap());
    }
}
