use super::Weight;
use crate::error::{Error, Result};
use crate::potential::log_potential_interval;
use num_complex::Complex64;
use std::f64::consts::PI;

const SMOOTH_NODES: usize = 2048;

/// `2^(1-n) exp{(1/π) ∫ log w(x) / sqrt(1 - x^2) dx}`.
///
/// The smooth part is integrated by the midpoint rule in `θ` with `x = cos θ`
/// (spectrally accurate for analytic integrands); each factor
/// `|x - c|^α` contributes `exp(α · log_potential_interval(c))`.
pub fn bernstein_predict(w: &Weight, n: usize) -> f64 {
    let mean_log: f64 = (0..SMOOTH_NODES)
        .map(|j| {
            let theta = (j as f64 + 0.5) * PI / SMOOTH_NODES as f64;
            w.smooth_part(theta.cos()).ln()
        })
        .sum::<f64>()
        / SMOOTH_NODES as f64;
    let singular: f64 = w
        .factors
        .iter()
        .map(|f| f.exponent * log_potential_interval(f.center))
        .sum();
    2f64.powi(1 - n as i32) * (mean_log + singular).exp()
}

/// Validated poles padded with `∞` to even length.
fn padded_poles(a: &[f64]) -> Result<Vec<f64>> {
    let mut poles = Vec::with_capacity(a.len() + 1);
    for &ak in a {
        if ak.is_nan() || (ak.is_finite() && ak.abs() <= 1.0) {
            return Err(Error::Domain(format!("pole {ak} lies in [-1, 1]")));
        }
        poles.push(ak);
    }
    if poles.is_empty() {
        return Err(Error::Domain("empty pole list".into()));
    }
    if poles.len() % 2 == 1 {
        poles.push(f64::INFINITY);
    }
    Ok(poles)
}

fn check_degree(poles: &[f64], n: usize) -> Result<usize> {
    let m = poles.len() / 2;
    if n <= m {
        return Err(Error::Domain(format!("degree {n} must exceed {m}")));
    }
    Ok(m)
}

/// `prod_k (1 - x/a_k)^(-1/2)`; infinite `a_k` contribute the factor 1.
pub fn achieser_weight(a: &[f64]) -> Result<Weight> {
    let poles = padded_poles(a)?;
    let finite: Vec<f64> = poles.into_iter().filter(|p| p.is_finite()).collect();
    let bound = finite
        .iter()
        .map(|&ak| (1.0 - 1.0 / ak.abs()).powf(-0.5))
        .product();
    Ok(Weight::smooth(
        move |x| finite.iter().map(|&ak| (1.0 - x / ak).powf(-0.5)).product(),
        bound,
    ))
}

/// Exact norm `2^(1-n) exp{(1/π) ∫ log w / sqrt(1-x^2)}` for the weight of
/// `achieser_weight(a)`, valid for `n > m` where `2m` is the padded length.
pub fn achieser_norm(a: &[f64], n: usize) -> Result<f64> {
    let poles = padded_poles(a)?;
    check_degree(&poles, n)?;
    // log|1 - x/a| = log|x - a| - log|a|.
    let log_mean: f64 = poles
        .iter()
        .filter(|p| p.is_finite())
        .map(|&ak| -0.5 * (log_potential_interval(Complex64::new(ak, 0.0)) - ak.abs().ln()))
        .sum();
    Ok(2f64.powi(1 - n as i32) * log_mean.exp())
}

/// `w(x) T_n^w(x)` in closed form: with `x = cos θ`, `z = e^{iθ}` and
/// `a_k = (ρ_k + 1/ρ_k)/2`, `|ρ_k| < 1`, it equals
/// `2^(1-n) prod sqrt(1+ρ_k^2) cos((n-m)θ + ½ Σ arg((z-ρ_k)/(1-ρ_k z)))`.
pub fn achieser_eval(a: &[f64], n: usize, x: f64) -> Result<f64> {
    let poles = padded_poles(a)?;
    let m = check_degree(&poles, n)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("{x} outside [-1, 1]")));
    }
    let rhos: Vec<f64> = poles
        .iter()
        .map(|&ak| {
            if ak.is_infinite() {
                0.0
            } else {
                ak - ak.signum() * (ak * ak - 1.0).sqrt()
            }
        })
        .collect();
    let theta = x.acos();
    let z = Complex64::from_polar(1.0, theta);
    // On the upper half circle both arguments are continuous with the
    // principal branch: Im(z - ρ) ≥ 0 and Re(1 - ρ z) > 0.
    let phase: f64 = rhos
        .iter()
        .map(|&r| (z - r).arg() - (Complex64::new(1.0, 0.0) - z * r).arg())
        .sum();
    let amp: f64 = rhos.iter().map(|&r| (1.0 + r * r).sqrt()).product();
    Ok(2f64.powi(1 - n as i32) * amp * ((n - m) as f64 * theta + 0.5 * phase).cos())
}
