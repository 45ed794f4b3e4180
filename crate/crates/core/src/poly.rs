//! Dense complex polynomials: evaluation, composition and root finding.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::ops::{Add, Mul, Neg, Sub};

const DEFAULT_SEED: u64 = 0x5eed_0f_7007;

/// Polynomial with complex coefficients, lowest degree first.
///
/// The coefficient vector never ends in an exact zero, except for the zero
/// polynomial which is stored as a single zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Poly { coeffs: c }
    }

    /// Polynomial with the given roots and leading coefficient one.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Poly::constant(Complex64::new(1.0, 0.0));
        for &r in roots {
            p = &p * &Poly::new(vec![-r, Complex64::new(1.0, 0.0)]);
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::constant(Complex64::new(0.0, 0.0));
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// Horner evaluation; for `|z| > 1` the reversed polynomial in `1/z` is
    /// used so intermediate values stay bounded.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let n = self.degree();
        if z.norm() <= 1.0 || n == 0 {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in self.coeffs.iter().rev() {
                acc = acc * z + c;
            }
            acc
        } else {
            let w = z.inv();
            let mut acc = Complex64::new(0.0, 0.0);
            for c in self.coeffs.iter() {
                acc = acc * w + c;
            }
            acc * z.powu(n as u32)
        }
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    /// `sum |c_k| |z|^k`, the natural rounding scale of `eval` at `z`.
    pub fn magnitude_at(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c.norm();
        }
        acc
    }

    /// Newton correction `p(z)/p'(z)`, computed without forming `z^n`.
    fn newton_ratio(&self, z: Complex64) -> Complex64 {
        let n = self.degree();
        if z.norm() <= 1.0 {
            let mut p = Complex64::new(0.0, 0.0);
            let mut dp = Complex64::new(0.0, 0.0);
            for c in self.coeffs.iter().rev() {
                dp = dp * z + p;
                p = p * z + c;
            }
            p / dp
        } else {
            // p(z) = z^n q(w), w = 1/z, so p/p' = z q / (n q - w q').
            let w = z.inv();
            let mut q = Complex64::new(0.0, 0.0);
            let mut dq = Complex64::new(0.0, 0.0);
            for c in self.coeffs.iter() {
                dq = dq * w + q;
                q = q * w + c;
            }
            z * q / (q * n as f64 - w * dq)
        }
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::constant(Complex64::new(0.0, 0.0));
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(*c);
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

pub fn eval(p: &Poly, z: Complex64) -> Complex64 {
    p.eval(z)
}

pub fn compose(outer: &Poly, inner: &Poly) -> Poly {
    outer.compose(inner)
}

/// Monic Chebyshev polynomial of `[-2, 2]`: `2 cos(n t)` at `x = 2 cos t`.
pub fn chebyshev_pm2(n: usize) -> Poly {
    if n == 0 {
        return Poly::constant(Complex64::new(1.0, 0.0));
    }
    let x = Poly::monomial(1);
    let mut prev = Poly::from_real(&[2.0]);
    let mut cur = x.clone();
    for _ in 1..n {
        let next = &(&x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Distinct roots with multiplicities; `residual` is the largest
/// `|p(root)|`, scaled by `max(1, sum |c_k| |root|^k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<(Complex64, usize)>,
    pub residual: f64,
}

impl RootSet {
    /// Roots repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|&(r, m)| std::iter::repeat_n(r, m))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.1).sum()
    }
}

fn scaled_residual(p: &Poly, z: Complex64) -> f64 {
    p.eval(z).norm() / p.magnitude_at(z).max(1.0)
}

pub fn solve_roots(p: &Poly, tol: f64) -> Result<RootSet> {
    solve_roots_seeded(p, tol, DEFAULT_SEED)
}

/// All roots of `p` by Aberth–Ehrlich simultaneous iteration started from
/// randomly rotated roots of unity. Nearby approximations are merged into a
/// multiple root when the merged centre still meets `tol`; the merge radius
/// for a cluster of `k` roots is `2 tol^(1/k)`.
pub fn solve_roots_seeded(p: &Poly, tol: f64, seed: u64) -> Result<RootSet> {
    if p.degree() == 0 {
        return Err(Error::Domain("constant polynomial has no roots".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    let low = p.coeffs.iter().take_while(|c| **c == zero).count();
    let lead = p.leading();
    let q = Poly::new(p.coeffs[low..].iter().map(|c| c / lead).collect());
    let d = q.degree();

    let mut approx: Vec<Complex64> = Vec::with_capacity(d);
    if d == 1 {
        approx.push(-q.coeffs[0]);
    } else if d > 1 {
        approx = aberth(&q, seed);
    }

    let mut clusters: Vec<(Complex64, usize)> = approx.iter().map(|&z| (z, 1)).collect();
    merge_clusters(p, &mut clusters, tol);
    if low > 0 {
        clusters.push((zero, low));
    }

    let residual = clusters
        .iter()
        .map(|&(z, _)| scaled_residual(p, z))
        .fold(0.0, f64::max);
    if !(residual <= tol) {
        return Err(Error::NonConvergence(format!(
            "root residual {residual:.3e} exceeds {tol:.3e}"
        )));
    }
    clusters.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
    });
    Ok(RootSet {
        roots: clusters,
        residual,
    })
}

fn aberth(q: &Poly, seed: u64) -> Vec<Complex64> {
    let d = q.degree();
    let c0 = q.coeffs[0].norm();
    let radius = if c0 > 0.0 { c0.powf(1.0 / d as f64) } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = 2.0 * std::f64::consts::PI / d as f64;
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let jitter: f64 = rng.gen_range(-0.25..0.25);
            let r = radius * (1.0 + rng.gen_range(-0.05..0.05));
            Complex64::from_polar(r, step * (k as f64 + 0.4 + jitter))
        })
        .collect();

    let mut still = vec![true; d];
    for _ in 0..2000 {
        let mut moved = false;
        for k in 0..d {
            if !still[k] {
                continue;
            }
            let ratio = q.newton_ratio(z[k]);
            if !ratio.is_finite() {
                still[k] = false;
                continue;
            }
            let s: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .filter(|v| v.is_finite())
                .sum();
            let corr = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !corr.is_finite() {
                still[k] = false;
                continue;
            }
            z[k] -= corr;
            if corr.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(1e-300) {
                still[k] = false;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    // Newton polish, kept only where it lowers the residual.
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let ratio = q.newton_ratio(*zk);
            if !ratio.is_finite() {
                break;
            }
            let cand = *zk - ratio;
            if q.eval(cand).norm() < q.eval(*zk).norm() {
                *zk = cand;
            } else {
                break;
            }
        }
    }
    z
}

fn merge_clusters(p: &Poly, clusters: &mut Vec<(Complex64, usize)>, tol: f64) {
    // Repeatedly merge the closest admissible pair: within the radius for
    // the merged size and with an acceptable residual at the merged centre.
    loop {
        let mut best: Option<(usize, usize, f64, Complex64)> = None;
        for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let (a, ka) = clusters[i];
                let (b, kb) = clusters[j];
                let k = ka + kb;
                let dist = (a - b).norm();
                let scale = a.norm().max(b.norm()).max(1.0);
                if dist > 2.0 * tol.powf(1.0 / k as f64) * scale
                    || best.is_some_and(|(_, _, bd, _)| dist >= bd)
                {
                    continue;
                }
                let centre = (a * ka as f64 + b * kb as f64) / k as f64;
                if scaled_residual(p, centre) <= tol {
                    best = Some((i, j, dist, centre));
                }
            }
        }
        let Some((i, j, _, centre)) = best else { return };
        clusters[i] = (centre, clusters[i].1 + clusters[j].1);
        clusters.swap_remove(j);
    }
}

/// For each target `t`, the `deg p` solutions of `p(z) = t` counted with
/// multiplicity.
pub fn preimage_points(p: &Poly, targets: &[Complex64], tol: f64) -> Result<Vec<Vec<Complex64>>> {
    preimage_points_seeded(p, targets, tol, DEFAULT_SEED)
}

pub fn preimage_points_seeded(
    p: &Poly,
    targets: &[Complex64],
    tol: f64,
    seed: u64,
) -> Result<Vec<Vec<Complex64>>> {
    if p.degree() == 0 {
        return Err(Error::Domain("constant polynomial".into()));
    }
    targets
        .iter()
        .map(|&t| {
            let shifted = p - &Poly::constant(t);
            Ok(solve_roots_seeded(&shifted, tol, seed)?.expanded())
        })
        .collect()
}
