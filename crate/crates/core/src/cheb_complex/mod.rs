//! Chebyshev polynomials of compact plane sets: a certified discrete
//! minimax solver, plus exact reductions for polynomial preimages (the
//! composition law) and for stars and quadratic preimages (reduction to a
//! weighted problem on `[-1, 1]`).

mod basis;
mod discrete;

pub use basis::{ArnoldiBasis, BasisPoly};
pub use discrete::{audit_dual_witness, solve_discrete_minimax, solve_on_points, ComplexMinimaxSolution};

use crate::cheb_real::{remez_weighted, MinimaxSolution, Weight};
use crate::error::{Error, Result};
use crate::poly::{chebyshev_pm2, Poly};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Base interval of a composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseInterval {
    /// `[-2, 2]`
    Symmetric,
    /// `[0, 4]`
    ZeroFour,
}

/// Chebyshev polynomial of degree `n` on the base interval.
pub fn interval_chebyshev(n: usize, base: BaseInterval) -> Poly {
    let t = chebyshev_pm2(n);
    match base {
        BaseInterval::Symmetric => t,
        BaseInterval::ZeroFour => t.compose(&Poly::from_real(&[-2.0, 1.0])),
    }
}

/// `T_{n·deg P}` of `P^{-1}(base)` as `T_n^{base} ∘ P / a^n`, with its norm
/// `2 / |a|^n` where `a` is the leading coefficient of `P`.
pub fn compose_chebyshev(inner: &Poly, n: usize, base: BaseInterval) -> Result<(Poly, f64)> {
    if inner.degree() < 1 {
        return Err(Error::Domain("inner polynomial must be nonconstant".into()));
    }
    let a = inner.leading();
    let outer = interval_chebyshev(n, base);
    let p = outer.compose(inner).scale(a.powu(n as u32).inv());
    let mut c = p.coeffs().to_vec();
    *c.last_mut().unwrap() = Complex64::new(1.0, 0.0);
    let norm = if n == 0 { 1.0 } else { 2.0 / a.norm().powi(n as i32) };
    Ok((Poly::new(c), norm))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionRoute {
    Exact,
    Remez,
}

/// Norm of a Chebyshev polynomial obtained by an exact reduction.
#[derive(Debug, Clone)]
pub struct ReducedNorm {
    pub norm: f64,
    pub poly: Option<Poly>,
    pub route: ReductionRoute,
    /// Relative certification gap of the underlying Remez run (0 if exact).
    pub gap: f64,
    /// Weighted solution on `[-1, 1]` when the Remez route ran.
    pub reduced: Option<MinimaxSolution>,
}

impl ReducedNorm {
    fn exact(norm: f64, poly: Poly) -> Self {
        ReducedNorm {
            norm,
            poly: Some(poly),
            route: ReductionRoute::Exact,
            gap: 0.0,
            reduced: None,
        }
    }
}

/// Lift `p(x)` (monic, degree `n`) to `z^l · 2^n p(z^k / 2 - 1)`.
fn lift(p: &Poly, n: usize, l: usize, k: usize) -> Poly {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); l + k * n + 1];
    let inner = Poly::from_real(&[-1.0, 0.5]);
    let q = p.compose(&inner).scale(Complex64::new(2f64.powi(n as i32), 0.0));
    for (j, c) in q.coeffs().iter().enumerate() {
        coeffs[l + k * j] = *c;
    }
    *coeffs.last_mut().unwrap() = Complex64::new(1.0, 0.0);
    Poly::new(coeffs)
}

fn star_reduced(m: usize, degree: usize, tol: f64, period: usize, exponent_scale: f64) -> Result<ReducedNorm> {
    if m == 0 || degree == 0 {
        return Err(Error::Domain(format!("need m ≥ 1 and degree ≥ 1, got m = {m}, degree = {degree}")));
    }
    let n = degree / period;
    let l = degree % period;
    let s = exponent_scale * l as f64 / period as f64;
    if n == 0 {
        return Ok(ReducedNorm::exact(2f64.powf(2.0 * s), Poly::monomial(l)));
    }
    let w = Weight::endpoint_power(s);
    let sol = remez_weighted(&w, n, tol)?;
    let norm = 2f64.powf(n as f64 + s) * sol.norm;
    Ok(ReducedNorm {
        norm,
        poly: Some(lift(&sol.poly, n, l, period)),
        route: ReductionRoute::Remez,
        gap: sol.gap,
        reduced: Some(sol),
    })
}

/// `‖T_degree‖` on the star `{z : z^m ∈ [-2, 2]}`.
///
/// Writing `degree = 2nm + l`, `0 ≤ l < 2m`, the Chebyshev polynomial is
/// `z^l Q(z^{2m})` and the problem reduces to weight `(1 + x)^{l/2m}` of
/// degree `n` on `[-1, 1]`. Degrees that are multiples of `m` and degrees
/// below `2m` are exact.
pub fn star_norm(m: usize, degree: usize, tol: f64) -> Result<ReducedNorm> {
    if m >= 1 && degree >= 1 && degree % m == 0 {
        let (p, norm) = compose_chebyshev(&Poly::monomial(m), degree / m, BaseInterval::Symmetric)?;
        return Ok(ReducedNorm::exact(norm, p));
    }
    star_reduced(m, degree, tol, 2 * m, 1.0)
}

/// `‖T_degree‖` on the star `{z : z^m ∈ [0, 4]}`: `degree = nm + l`,
/// weight `(1 + x)^{l/m}`.
pub fn star_odd_norm(m: usize, degree: usize, tol: f64) -> Result<ReducedNorm> {
    if m >= 1 && degree >= 1 && degree % m == 0 {
        let (p, norm) = compose_chebyshev(&Poly::monomial(m), degree / m, BaseInterval::ZeroFour)?;
        return Ok(ReducedNorm::exact(norm, p));
    }
    star_reduced(m, degree, tol, m, 1.0)
}

/// Weight `|x - c/2|^{1/2}` of the odd-degree quadratic reduction.
pub fn quadratic_odd_weight(c: Complex64) -> Weight {
    Weight::one().with_complex_factor(c / 2.0, 0.5)
}

/// `‖T_{2n+1}‖` on `{z : z^2 + c ∈ [-2, 2]}`, equal to
/// `2^{n + 1/2} min max |x - c/2|^{1/2} |p_n(x)|`.
pub fn quadratic_odd_norm(c: Complex64, n: usize, tol: f64) -> Result<ReducedNorm> {
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite parameter {c}")));
    }
    let w = quadratic_odd_weight(c);
    let sol = remez_weighted(&w, n, tol)?;
    let norm = 2f64.powf(n as f64 + 0.5) * sol.norm;
    // z Q(z^2) with z^2 = 2x - c.
    let inner = Poly::new(vec![c / 2.0, Complex64::new(0.5, 0.0)]);
    let q = sol.poly.compose(&inner).scale(Complex64::new(2f64.powi(n as i32), 0.0));
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 2];
    for (j, v) in q.coeffs().iter().enumerate() {
        coeffs[2 * j + 1] = *v;
    }
    coeffs[2 * n + 1] = Complex64::new(1.0, 0.0);
    Ok(ReducedNorm {
        norm,
        poly: Some(Poly::new(coeffs)),
        route: ReductionRoute::Remez,
        gap: sol.gap,
        reduced: Some(sol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_examples() {
        let (p, norm) = compose_chebyshev(&Poly::monomial(3), 2, BaseInterval::Symmetric).unwrap();
        assert_eq!(p, Poly::from_real(&[-2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]));
        assert_eq!(norm, 2.0);
        let (p, norm) = compose_chebyshev(&Poly::from_real(&[1.0, 0.0, 1.0]), 1, BaseInterval::Symmetric).unwrap();
        assert_eq!(p, Poly::from_real(&[1.0, 0.0, 1.0]));
        assert_eq!(norm, 2.0);
        let (p, _) = compose_chebyshev(&Poly::monomial(1), 5, BaseInterval::Symmetric).unwrap();
        assert_eq!(p, chebyshev_pm2(5));
    }

    #[test]
    fn nonmonic_inner_scales_norm() {
        let (p, norm) = compose_chebyshev(&Poly::from_real(&[0.0, 2.0]), 3, BaseInterval::Symmetric).unwrap();
        assert!((norm - 0.25).abs() < 1e-15);
        assert_eq!(p.degree(), 3);
        // T_3(2z)/8 on [-1, 1] reaches 1/4.
        let v = p.eval_real(1.0).norm();
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn low_star_degrees_are_monomials() {
        let r = star_norm(3, 4, 1e-10).unwrap();
        assert!((r.norm - 2f64.powf(4.0 / 3.0)).abs() < 1e-14);
        assert_eq!(r.route, ReductionRoute::Exact);
        let r = star_norm(2, 4, 1e-10).unwrap();
        assert_eq!(r.norm, 2.0);
    }

    #[test]
    fn lifted_polynomial_has_star_support() {
        let r = star_norm(2, 9, 1e-12).unwrap();
        let p = r.poly.unwrap();
        for (k, c) in p.coeffs().iter().enumerate() {
            if k % 4 != 1 {
                assert_eq!(c.norm(), 0.0);
            }
        }
        // |p| on the star matches the reduced norm.
        let top = (0..2001)
            .map(|i| {
                let t = 2f64.sqrt() * i as f64 / 2000.0;
                p.eval(Complex64::new(t, 0.0)).norm().max(p.eval(Complex64::new(0.0, t)).norm())
            })
            .fold(0.0, f64::max);
        assert!((top - r.norm).abs() < 1e-6 * r.norm, "{top} vs {}", r.norm);
    }
}
