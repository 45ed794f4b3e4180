//! Weighted Chebyshev polynomials on `[-1, 1]`: a Remez exchange solver,
//! Bernstein's asymptotic norm, and Achieser's exact solutions for weights
//! `prod (1 - x/a_k)^(-1/2)`.

mod asymptotics;
mod remez;

pub use asymptotics::{achieser_eval, achieser_norm, achieser_weight, bernstein_predict};
pub use remez::{audit_equioscillation, remez_weighted, MinimaxSolution};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// Factor `|x - center|^exponent`. A real centre in `[-1, 1]` makes it a
/// genuine singularity; other centres give smooth factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factor {
    pub center: Complex64,
    pub exponent: f64,
}

impl Factor {
    pub fn is_singular(&self) -> bool {
        self.center.im == 0.0 && self.center.re.abs() <= 1.0
    }

    fn eval(&self, x: f64) -> f64 {
        (Complex64::new(x, 0.0) - self.center).norm().powf(self.exponent)
    }
}

type SmoothFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `w(x) = smooth(x) · prod |x - center_k|^exponent_k` on `[-1, 1]`.
#[derive(Clone)]
pub struct Weight {
    smooth: SmoothFn,
    /// Upper bound for the smooth part on `[-1, 1]`.
    pub bound: f64,
    pub factors: Vec<Factor>,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Weight")
            .field("bound", &self.bound)
            .field("factors", &self.factors)
            .finish()
    }
}

impl Weight {
    pub fn one() -> Self {
        Weight {
            smooth: Arc::new(|_| 1.0),
            bound: 1.0,
            factors: Vec::new(),
        }
    }

    /// Smooth positive part with the given upper bound.
    pub fn smooth<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F, bound: f64) -> Self {
        Weight {
            smooth: Arc::new(f),
            bound,
            factors: Vec::new(),
        }
    }

    /// Multiply by `|x - center|^exponent` with a real centre.
    pub fn with_factor(self, center: f64, exponent: f64) -> Self {
        self.with_complex_factor(Complex64::new(center, 0.0), exponent)
    }

    pub fn with_complex_factor(mut self, center: Complex64, exponent: f64) -> Self {
        self.factors.push(Factor { center, exponent });
        self
    }

    /// `(1 + x)^alpha`.
    pub fn endpoint_power(alpha: f64) -> Self {
        Weight::one().with_factor(-1.0, alpha)
    }

    pub fn smooth_part(&self, x: f64) -> f64 {
        (self.smooth)(x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.factors
            .iter()
            .fold(self.smooth_part(x), |acc, f| acc * f.eval(x))
    }

    fn check_supported(&self) -> Result<()> {
        for f in &self.factors {
            if f.is_singular() && f.exponent < 0.0 && f.exponent.fract() != 0.0 {
                return Err(Error::UnsupportedWeight(format!(
                    "non-integer negative exponent {} at {}",
                    f.exponent, f.center.re
                )));
            }
        }
        Ok(())
    }
}

/// Split off singular factors with negative integer exponent `-m`: the
/// minimiser of degree `n` then contains `(x - b)^m`, and the remaining
/// problem has degree `n - m` with the cleaned weight.
pub fn reduce_negative(w: &Weight) -> Result<(Weight, Vec<(f64, usize)>)> {
    w.check_supported()?;
    let mut cleaned = w.clone();
    let mut forced = Vec::new();
    cleaned.factors.retain(|f| {
        if f.is_singular() && f.exponent < 0.0 {
            forced.push((f.center.re, (-f.exponent) as usize));
            false
        } else {
            true
        }
    });
    Ok((cleaned, forced))
}
