//! Symbolic compact sets, their discretisations, capacities, the spiked
//! circles and the exterior map of the plus-shaped set `{z : z^2 ∈ [-2, 2]}`.

use crate::error::{Error, Result};
use crate::poly::{preimage_points_seeded, solve_roots, Poly};
use crate::potential::{
    cap_interval, cap_preimage, interval_harmonic_measure, joukowski_exterior, CapacityResult,
    CapacityRoute,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const ROOT_TOL: f64 = 1e-10;

/// JSON form of complex numbers: a bare number or a `[re, im]` pair.
pub mod complex_json {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
    }

    fn to_repr(z: &Complex64) -> Repr {
        if z.im == 0.0 {
            Repr::Real(z.re)
        } else {
            Repr::Pair([z.re, z.im])
        }
    }

    fn from_repr(r: Repr) -> Complex64 {
        match r {
            Repr::Real(x) => Complex64::new(x, 0.0),
            Repr::Pair([re, im]) => Complex64::new(re, im),
        }
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Repr::deserialize(d).map(from_repr)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
            Vec::<Repr>::deserialize(d).map(|v| v.into_iter().map(from_repr).collect())
        }
    }
}

/// A compact subset of the plane described symbolically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Interval {
        a: f64,
        b: f64,
    },
    /// `{e^{iθ} : |θ| ≤ alpha}`.
    #[serde(rename = "arc")]
    CircularArc { alpha: f64 },
    /// `{z : z^m ∈ [-2, 2]}`.
    StarEven { m: usize },
    /// `{z : z^m ∈ [0, 4]}`.
    StarOdd { m: usize },
    /// Preimage of `[-2, 2]` under `z^2 + a z + b`.
    #[serde(rename = "quadratic")]
    QuadraticPreimage {
        #[serde(with = "complex_json")]
        a: Complex64,
        #[serde(with = "complex_json")]
        b: Complex64,
    },
    /// Preimage of `[target[0], target[1]]` under the polynomial with the
    /// given coefficients (lowest degree first).
    PolyPreimage {
        #[serde(with = "complex_json::vec")]
        coeffs: Vec<Complex64>,
        target: [f64; 2],
    },
    /// Unit circle with `4(2n + l - 1)` radial slits `[1, R]`.
    SpikedCircle { n: usize, l: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clustering {
    Uniform,
    Arcsine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSet {
    pub points: Vec<Complex64>,
    pub source: SetSpec,
    pub per_edge_count: usize,
    pub clustering: Clustering,
}

/// `8/729 (z + 1)(z^2 - 3z/2 + 9/2)^3`, a degree-7 tree polynomial whose
/// critical values are exactly 0 and 1.
pub fn shabat_poly() -> Poly {
    let lin = Poly::from_real(&[1.0, 1.0]);
    let quad = Poly::from_real(&[4.5, -1.5, 1.0]);
    let cube = &(&quad * &quad) * &quad;
    (&lin * &cube).scale(Complex64::new(8.0 / 729.0, 0.0))
}

impl SetSpec {
    pub fn shabat() -> SetSpec {
        SetSpec::PolyPreimage {
            coeffs: shabat_poly().coeffs().to_vec(),
            target: [0.0, 1.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSet(msg));
        match self {
            SetSpec::Interval { a, b } if !(a < b) || !a.is_finite() || !b.is_finite() => {
                bad(format!("interval needs a < b, got [{a}, {b}]"))
            }
            SetSpec::CircularArc { alpha } if !(*alpha > 0.0 && *alpha < PI) => {
                bad(format!("arc half-angle must lie in (0, π), got {alpha}"))
            }
            SetSpec::StarEven { m } | SetSpec::StarOdd { m } if *m == 0 => {
                bad("star order must be positive".into())
            }
            SetSpec::QuadraticPreimage { a, b } if !(a.is_finite() && b.is_finite()) => {
                bad("quadratic coefficients must be finite".into())
            }
            SetSpec::PolyPreimage { coeffs, target } => {
                let p = Poly::new(coeffs.clone());
                if p.degree() == 0 {
                    return bad("preimage polynomial must have degree ≥ 1".into());
                }
                if !(target[0] < target[1]) {
                    return bad(format!("target needs lo < hi, got {target:?}"));
                }
                Ok(())
            }
            SetSpec::SpikedCircle { n, l } if *n == 0 || !(*l == 1 || *l == 3) => {
                bad(format!("spiked circle needs n ≥ 1 and l ∈ {{1, 3}}, got ({n}, {l})"))
            }
            _ => Ok(()),
        }
    }

    /// Critical value `b - a^2/4` of a quadratic preimage.
    pub fn quadratic_c(&self) -> Option<Complex64> {
        match self {
            SetSpec::QuadraticPreimage { a, b } => Some(b - a * a / 4.0),
            _ => None,
        }
    }

    /// For quadratic preimages: connected iff `c ∈ [-2, 2]`.
    pub fn is_connected(&self) -> Option<bool> {
        self.quadratic_c()
            .map(|c| c.im.abs() <= 1e-14 && (-2.0..=2.0).contains(&c.re))
    }

    /// Whether the set is a subset of the real line.
    pub fn is_real(&self) -> bool {
        match self {
            SetSpec::Interval { .. } => true,
            SetSpec::StarEven { m } => *m == 1,
            SetSpec::StarOdd { m } => *m <= 2,
            SetSpec::QuadraticPreimage { a, b } => {
                let c = b - a * a / 4.0;
                a.im == 0.0 && b.im == 0.0 && c.re <= -2.0
            }
            _ => false,
        }
    }

    /// The polynomial `P` and target interval when the set is `P^{-1}(I)`.
    pub fn as_preimage(&self) -> Option<(Poly, [f64; 2])> {
        let one = Complex64::new(1.0, 0.0);
        match self {
            SetSpec::Interval { a, b } => Some((Poly::monomial(1), [*a, *b])),
            SetSpec::StarEven { m } => Some((Poly::monomial(*m), [-2.0, 2.0])),
            SetSpec::StarOdd { m } => Some((Poly::monomial(*m), [0.0, 4.0])),
            SetSpec::QuadraticPreimage { a, b } => Some((Poly::new(vec![*b, *a, one]), [-2.0, 2.0])),
            SetSpec::PolyPreimage { coeffs, target } => Some((Poly::new(coeffs.clone()), *target)),
            SetSpec::CircularArc { .. } | SetSpec::SpikedCircle { .. } => None,
        }
    }

    /// Number of edges used by `discretize`.
    pub fn edge_count(&self) -> Result<usize> {
        self.validate()?;
        Ok(match self {
            SetSpec::Interval { .. } | SetSpec::CircularArc { .. } => 1,
            SetSpec::StarEven { m } => 2 * m,
            SetSpec::StarOdd { m } => *m,
            SetSpec::QuadraticPreimage { .. } | SetSpec::PolyPreimage { .. } => {
                let (p, target) = self.as_preimage().unwrap();
                p.degree() * preimage_subintervals(&p, target)?.len()
            }
            SetSpec::SpikedCircle { n, l } => 2 * spike_count(*n, *l),
        })
    }

    /// Residual of the defining relation at `z` (zero on the set).
    pub fn defect(&self, z: Complex64) -> f64 {
        match self {
            SetSpec::CircularArc { alpha } => {
                let r = (z.norm() - 1.0).abs();
                r + (z.arg().abs() - alpha).max(0.0)
            }
            SetSpec::SpikedCircle { n, l } => {
                let on_circle = (z.norm() - 1.0).abs();
                let nn = spike_count(*n, *l);
                let rho = spiked_rho(*n, *l);
                let w = z.powu(nn as u32);
                let on_spike = w.im.abs() / w.norm().max(1.0)
                    + (1.0 - w.re).max(0.0)
                    + (w.re - rho).max(0.0) / rho;
                on_circle.min(on_spike)
            }
            _ => {
                let (p, [lo, hi]) = self.as_preimage().unwrap();
                let w = p.eval(z);
                let scale = p.magnitude_at(z).max(1.0);
                w.im.abs() / scale + (lo - w.re).max(0.0) / scale + (w.re - hi).max(0.0) / scale
            }
        }
    }

    pub fn capacity(&self) -> Result<CapacityResult> {
        self.validate()?;
        let pre = |v: f64| CapacityResult {
            value: v,
            route: CapacityRoute::PreimageFormula,
        };
        Ok(match self {
            SetSpec::Interval { a, b } => CapacityResult {
                value: cap_interval(*a, *b),
                route: CapacityRoute::IntervalFormula,
            },
            SetSpec::CircularArc { alpha } => CapacityResult {
                value: (alpha / 2.0).sin(),
                route: CapacityRoute::ArcFormula,
            },
            SetSpec::SpikedCircle { n, l } => cap_spiked_circle(*n, *l),
            _ => {
                let (p, [lo, hi]) = self.as_preimage().unwrap();
                pre(cap_preimage(cap_interval(lo, hi), p.leading().norm(), p.degree()))
            }
        })
    }

    /// `max(100, ceil(60 · degree / edges))`.
    pub fn default_per_edge(&self, degree: usize) -> Result<usize> {
        let edges = self.edge_count()?;
        Ok((60 * degree).div_ceil(edges).max(100))
    }
}

/// Real critical values of `p` strictly inside the target split it into
/// the sub-intervals returned here.
fn preimage_subintervals(p: &Poly, [lo, hi]: [f64; 2]) -> Result<Vec<[f64; 2]>> {
    let mut cuts = vec![lo, hi];
    if p.degree() >= 2 {
        let crit = solve_roots(&p.derivative(), ROOT_TOL)?;
        let width = hi - lo;
        for (zeta, _) in crit.roots {
            let v = p.eval(zeta);
            if v.im.abs() <= 1e-10 * width && v.re > lo + 1e-12 * width && v.re < hi - 1e-12 * width {
                cuts.push(v.re);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (hi - lo));
    Ok(cuts.windows(2).map(|w| [w[0], w[1]]).collect())
}

/// Parameter samples in `[0, 1]`, endpoints included.
fn unit_samples(count: usize, clustering: Clustering) -> Vec<f64> {
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i == 0 {
                0.0
            } else if i == count - 1 {
                1.0
            } else {
                match clustering {
                    Clustering::Uniform => i as f64 / last,
                    Clustering::Arcsine => 0.5 * (1.0 - (PI * i as f64 / last).cos()),
                }
            }
        })
        .collect()
}

fn lerp(a: f64, b: f64, s: f64) -> f64 {
    if s == 1.0 {
        b
    } else {
        a + (b - a) * s
    }
}

/// All solutions of `z^m = t` for real `t`.
fn real_roots_of_power(m: usize, t: f64) -> Vec<Complex64> {
    let r = t.abs().powf(1.0 / m as f64);
    let offset = if t < 0.0 { PI / m as f64 } else { 0.0 };
    (0..m)
        .map(|k| Complex64::from_polar(r, offset + 2.0 * PI * k as f64 / m as f64))
        .collect()
}

pub fn discretize(spec: &SetSpec, per_edge: usize, clustering: Clustering) -> Result<DiscreteSet> {
    discretize_seeded(spec, per_edge, clustering, 0x5eed_0f_7007)
}

/// Samples every edge at `per_edge` parameter values (Chebyshev–Lobatto
/// points of the edge's target sub-interval for arcsine clustering) and maps
/// them onto the set; the point count is `per_edge × edge_count`.
pub fn discretize_seeded(
    spec: &SetSpec,
    per_edge: usize,
    clustering: Clustering,
    seed: u64,
) -> Result<DiscreteSet> {
    spec.validate()?;
    if per_edge < 8 {
        return Err(Error::Domain(format!("per_edge must be ≥ 8, got {per_edge}")));
    }
    let s = unit_samples(per_edge, clustering);
    let mut points = Vec::with_capacity(per_edge * spec.edge_count()?);
    match spec {
        SetSpec::Interval { a, b } => points.extend(s.iter().map(|&u| Complex64::new(lerp(*a, *b, u), 0.0))),
        SetSpec::CircularArc { alpha } => {
            points.extend(s.iter().map(|&u| Complex64::from_polar(1.0, lerp(-alpha, *alpha, u))))
        }
        SetSpec::StarEven { m } => {
            for [lo, hi] in [[-2.0, 0.0], [0.0, 2.0]] {
                for &u in &s {
                    points.extend(real_roots_of_power(*m, lerp(lo, hi, u)));
                }
            }
        }
        SetSpec::StarOdd { m } => {
            for &u in &s {
                points.extend(real_roots_of_power(*m, 4.0 * u));
            }
        }
        SetSpec::QuadraticPreimage { a, .. } => {
            let c = spec.quadratic_c().unwrap();
            let (p, target) = spec.as_preimage().unwrap();
            for [lo, hi] in preimage_subintervals(&p, target)? {
                for &u in &s {
                    let t = lerp(lo, hi, u);
                    let root = (Complex64::new(t, 0.0) - c).sqrt();
                    points.push(-a / 2.0 + root);
                    points.push(-a / 2.0 - root);
                }
            }
        }
        SetSpec::PolyPreimage { .. } => {
            let (p, target) = spec.as_preimage().unwrap();
            for [lo, hi] in preimage_subintervals(&p, target)? {
                let ts: Vec<Complex64> = s.iter().map(|&u| Complex64::new(lerp(lo, hi, u), 0.0)).collect();
                for group in preimage_points_seeded(&p, &ts, ROOT_TOL, seed)? {
                    points.extend(group);
                }
            }
        }
        SetSpec::SpikedCircle { n, l } => {
            let nn = spike_count(*n, *l);
            let radius = spiked_circle_radius(*n, *l);
            let step = 2.0 * PI / nn as f64;
            for k in 0..nn {
                let base = step * k as f64;
                points.extend(s.iter().map(|&u| Complex64::from_polar(1.0, base + step * u)));
                points.extend(s.iter().map(|&u| Complex64::from_polar(lerp(1.0, radius, u), base)));
            }
        }
    }
    Ok(DiscreteSet {
        points,
        source: spec.clone(),
        per_edge_count: per_edge,
        clustering,
    })
}

/// Number of slits `4(2n + l - 1)` of the spiked circle.
pub fn spike_count(n: usize, l: usize) -> usize {
    4 * (2 * n + l - 1)
}

fn spiked_target_c(n: usize, l: usize) -> f64 {
    // Equilibrium mass of [-2, 2] inside [-2, c] is arccos((c - 6)/(c + 2))/π.
    let f = (2 * n + 1) as f64 / (4 * n + l) as f64;
    let q = (PI * f).cos();
    (6.0 + 2.0 * q) / (1.0 - q)
}

fn spiked_rho(n: usize, l: usize) -> f64 {
    let c = spiked_target_c(n, l);
    0.5 * (c + (c * c - 4.0).sqrt())
}

/// Equilibrium mass carried by the unit circle of the spiked circle with
/// slit length `radius - 1`, via the power map and `v ↦ v + 1/v`.
pub fn spiked_circle_circle_mass(n: usize, l: usize, radius: f64) -> f64 {
    let rho = radius.powi(spike_count(n, l) as i32);
    let c = rho + 1.0 / rho;
    interval_harmonic_measure(-2.0, c, 2.0).expect("c exceeds 2")
}

/// Slit length `R` for which the unit circle carries mass
/// `(2n + 1)/(4n + l)`.
pub fn spiked_circle_radius(n: usize, l: usize) -> f64 {
    assert!(n >= 1 && (l == 1 || l == 3), "spiked circle needs n ≥ 1, l ∈ {{1, 3}}");
    spiked_rho(n, l).powf(1.0 / spike_count(n, l) as f64)
}

pub fn cap_spiked_circle(n: usize, l: usize) -> CapacityResult {
    assert!(n >= 1 && (l == 1 || l == 3), "spiked circle needs n ≥ 1, l ∈ {{1, 3}}");
    let c = spiked_target_c(n, l);
    CapacityResult {
        value: ((2.0 + c) / 4.0).powf(1.0 / spike_count(n, l) as f64),
        route: CapacityRoute::SpikedCircleReduction,
    }
}

/// Exterior conformal map of the plus-shaped set onto `|w| > 1`,
/// `sqrt(z^2/2 + sqrt((z^2/2)^2 - 1))`, normalised so that `Φ(z) ~ z`.
pub fn phi_star(z: Complex64) -> Complex64 {
    let w = joukowski_exterior(z * z) / 2.0;
    let r = w.sqrt();
    if (r.conj() * z).re >= 0.0 {
        r
    } else {
        -r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shabat_critical_values_are_endpoints() {
        let p = shabat_poly();
        let crit = solve_roots(&p.derivative(), 1e-10).unwrap();
        for (z, _) in crit.roots {
            let v = p.eval(z);
            assert!(v.norm() < 1e-9 || (v - 1.0).norm() < 1e-9, "critical value {v}");
        }
    }

    #[test]
    fn unknown_json_keys_are_rejected() {
        let ok: SetSpec = serde_json::from_str(r#"{"kind":"star_even","m":7}"#).unwrap();
        assert_eq!(ok, SetSpec::StarEven { m: 7 });
        assert!(serde_json::from_str::<SetSpec>(r#"{"kind":"star_even","m":7,"x":1}"#).is_err());
    }
}
