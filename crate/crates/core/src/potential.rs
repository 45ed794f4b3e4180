//! Closed-form potential theory for intervals and their polynomial
//! preimages: Green functions, capacities, logarithmic potentials,
//! harmonic measure and the equilibrium density of stars.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityRoute {
    PreimageFormula,
    IntervalFormula,
    ArcFormula,
    SpikedCircleReduction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub value: f64,
    pub route: CapacityRoute,
}

/// Exterior inverse Joukowski map `z + sqrt(z^2 - 4)` onto `|w| ≥ 2`.
///
/// On the cut `[-2, 2]` both branches have modulus 2; the limit from the
/// upper half-plane is returned.
pub fn joukowski_exterior(z: Complex64) -> Complex64 {
    let s = (z * z - 4.0).sqrt();
    let w1 = z + s;
    let w2 = z - s;
    let (n1, n2) = (w1.norm(), w2.norm());
    let tie = (n1 - n2).abs() <= 1e-14 * n1.max(n2).max(1.0);
    if tie {
        if w1.im >= w2.im {
            w1
        } else {
            w2
        }
    } else if n1 > n2 {
        w1
    } else {
        w2
    }
}

/// Green function of `C \ [a, b]` with pole at infinity; zero on `[a, b]`.
pub fn green_interval(z: Complex64, a: f64, b: f64) -> f64 {
    assert!(b > a, "interval must satisfy a < b");
    let v = (z * 2.0 - (a + b)) * (2.0 / (b - a));
    if v.im == 0.0 && v.re.abs() <= 2.0 {
        return 0.0;
    }
    (joukowski_exterior(v).norm() / 2.0).ln().max(0.0)
}

pub fn cap_interval(a: f64, b: f64) -> f64 {
    (b - a) / 4.0
}

/// Capacity of `P^{-1}(E)` for `P` of degree `m` with leading coefficient
/// of modulus `lead_abs`.
pub fn cap_preimage(cap_e: f64, lead_abs: f64, m: usize) -> f64 {
    assert!(m >= 1 && lead_abs > 0.0);
    (cap_e / lead_abs).powf(1.0 / m as f64)
}

/// `(1/π) ∫_{-1}^{1} log|x - z| / sqrt(1 - x^2) dx`, equal to
/// `log(|z + sqrt(z^2 - 1)| / 2)`; exactly `-log 2` on `[-1, 1]`.
pub fn log_potential_interval(z: Complex64) -> f64 {
    if z.im == 0.0 && z.re.abs() <= 1.0 {
        return -std::f64::consts::LN_2;
    }
    (joukowski_exterior(z * 2.0).norm() / 4.0).ln()
}

/// Equilibrium measure of `[a, b]` carried by `[a, s]`.
pub fn interval_harmonic_measure(a: f64, b: f64, s: f64) -> Result<f64> {
    if !(b > a) || s < a || s > b || !s.is_finite() {
        return Err(Error::Domain(format!("{s} outside [{a}, {b}]")));
    }
    let arg = ((a + b - 2.0 * s) / (b - a)).clamp(-1.0, 1.0);
    Ok(arg.acos() / PI)
}

/// Density of the equilibrium measure of `{z : z^m ∈ [-2, 2]}` with respect
/// to arc length: `|z|^(m-1) / (π sqrt(4 - z^(2m)))`.
pub fn equilibrium_density_star(m: usize, z: Complex64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let w = z.powu(m as u32);
    let scale = w.norm().max(1.0);
    if w.im.abs() > 1e-10 * scale || w.re.abs() > 2.0 + 1e-10 {
        return Err(Error::Domain(format!("{z} is not on the star")));
    }
    if (w.norm() - 2.0).abs() <= 1e-8 {
        return Err(Error::EndpointSingularity(format!("{z}")));
    }
    let t = w.re;
    Ok(z.norm().powi(m as i32 - 1) / (PI * (4.0 - t * t).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn joukowski_on_cut_takes_upper_limit() {
        let w = joukowski_exterior(Complex64::new(1.0, 0.0));
        assert_abs_diff_eq!(w.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w.im, 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn green_vanishes_on_interval() {
        assert_eq!(green_interval(Complex64::new(0.5, 0.0), -1.0, 3.0), 0.0);
    }
}
