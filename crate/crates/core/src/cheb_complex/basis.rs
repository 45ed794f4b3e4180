//! Discrete orthonormal polynomial basis built by Arnoldi iteration, so that
//! monic polynomials of high degree on large sets stay well conditioned.

use crate::error::{Error, Result};
use crate::poly::Poly;
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct ArnoldiBasis {
    /// `q_k(z_j)` with `sum_j |q_k(z_j)|^2 = N`.
    pub q: DMatrix<Complex64>,
    /// Upper Hessenberg recurrence coefficients, `(n + 1) × n`.
    pub h: DMatrix<Complex64>,
    /// `prod h[k+1, k]`, so that `lead · q_n` is monic.
    pub lead: Complex64,
}

impl ArnoldiBasis {
    pub fn new(points: &[Complex64], n: usize) -> Result<Self> {
        let big_n = points.len();
        let rows = big_n as f64;
        let mut q = DMatrix::<Complex64>::zeros(big_n, n + 1);
        let mut h = DMatrix::<Complex64>::zeros(n + 1, n);
        for j in 0..big_n {
            q[(j, 0)] = Complex64::new(1.0, 0.0);
        }
        let mut lead = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let mut v: Vec<Complex64> = (0..big_n).map(|j| points[j] * q[(j, k)]).collect();
            // Two passes of Gram-Schmidt keep the columns orthogonal to
            // working precision.
            for _ in 0..2 {
                for i in 0..=k {
                    let dot: Complex64 = (0..big_n).map(|j| q[(j, i)].conj() * v[j]).sum::<Complex64>() / rows;
                    h[(i, k)] += dot;
                    for j in 0..big_n {
                        v[j] -= dot * q[(j, i)];
                    }
                }
            }
            let norm = (v.iter().map(|x| x.norm_sqr()).sum::<f64>() / rows).sqrt();
            let scale = (0..big_n).map(|j| (points[j] * q[(j, k)]).norm()).fold(0.0, f64::max);
            if !(norm > 1e-13 * scale.max(1e-300)) {
                return Err(Error::DegenerateSet(format!(
                    "fewer than {} distinct points",
                    n + 1
                )));
            }
            h[(k + 1, k)] = Complex64::new(norm, 0.0);
            lead *= norm;
            for j in 0..big_n {
                q[(j, k + 1)] = v[j] / norm;
            }
        }
        Ok(ArnoldiBasis { q, h, lead })
    }

    pub fn degree(&self) -> usize {
        self.h.ncols()
    }

    /// `q_0(z), ..., q_n(z)` through the Arnoldi recurrence.
    pub fn eval_all(&self, z: Complex64) -> Vec<Complex64> {
        let n = self.degree();
        let mut out = Vec::with_capacity(n + 1);
        out.push(Complex64::new(1.0, 0.0));
        for k in 0..n {
            let mut v = z * out[k];
            for i in 0..=k {
                v -= self.h[(i, k)] * out[i];
            }
            out.push(v / self.h[(k + 1, k)]);
        }
        out
    }

    /// Monomial coefficients of every basis polynomial.
    pub fn monomials(&self) -> Vec<Poly> {
        let n = self.degree();
        let z = Poly::monomial(1);
        let mut out = vec![Poly::constant(Complex64::new(1.0, 0.0))];
        for k in 0..n {
            let mut v = &z * &out[k];
            for i in 0..=k {
                v = &v - &out[i].scale(self.h[(i, k)]);
            }
            out.push(v.scale(self.h[(k + 1, k)].inv()));
        }
        out
    }
}

/// Monic polynomial `lead · q_n + sum_k c_k q_k` over an Arnoldi basis.
#[derive(Debug, Clone)]
pub struct BasisPoly {
    pub basis: ArnoldiBasis,
    pub coeffs: Vec<Complex64>,
}

impl BasisPoly {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let qs = self.basis.eval_all(z);
        let n = self.basis.degree();
        let mut acc = self.basis.lead * qs[n];
        for k in 0..n {
            acc += self.coeffs[k] * qs[k];
        }
        acc
    }

    /// Values on the points the basis was built from.
    pub fn values(&self) -> Vec<Complex64> {
        let n = self.basis.degree();
        (0..self.basis.q.nrows())
            .map(|j| {
                let mut acc = self.basis.lead * self.basis.q[(j, n)];
                for k in 0..n {
                    acc += self.coeffs[k] * self.basis.q[(j, k)];
                }
                acc
            })
            .collect()
    }

    pub fn to_poly(&self) -> Poly {
        let mons = self.basis.monomials();
        let n = self.basis.degree();
        let mut p = mons[n].scale(self.basis.lead);
        for k in 0..n {
            p = &p + &mons[k].scale(self.coeffs[k]);
        }
        // The leading coefficient is one by construction; make it exact.
        let mut c = p.coeffs().to_vec();
        if let Some(last) = c.last_mut() {
            *last = Complex64::new(1.0, 0.0);
        }
        Poly::new(c)
    }
}
