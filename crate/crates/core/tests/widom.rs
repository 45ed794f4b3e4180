use std::f64::consts::PI;
use widomlab_core::sets::SetSpec;
use widomlab_core::special::ln_gamma;
use widomlab_core::widom::*;
use widomlab_core::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn gamma_ratio_examples() {
    for n in [1, 2, 7, 100, 12345] {
        assert_eq!(gamma_ratio(n, 0.0), 2.0);
        assert!(rel(gamma_ratio(n, 1.0), 2.0) < 1e-12, "n = {n}");
    }
    let g25 = 0.75 * PI.sqrt();
    assert!(rel(gamma_ratio(1, 0.5), 8.0 / (2.5 * g25 * g25)) < 1e-12);
    assert!((gamma_ratio(1, 0.5) - 1.8108295747).abs() < 1e-9);
    let g35 = 15.0 * PI.sqrt() / 8.0;
    assert!(rel(gamma_ratio(1, 1.5), 96.0 / (3.5 * g35 * g35)) < 1e-12);
}

#[test]
fn gamma_step_examples() {
    for n in [1, 5, 40] {
        assert_eq!(gamma_step(n, 1.0), 1.0);
    }
    assert!((gamma_step(1, 0.5) - 144.0 / 137.8125).abs() < 1e-14);
    assert!((gamma_step(1, 0.5) - 1.044898).abs() < 1e-6);
    for s in [0.1, 0.5, 0.9, 1.3, 1.9] {
        for n in [1, 2, 10, 500] {
            assert!(rel(gamma_ratio(n + 1, s) / gamma_ratio(n, s), gamma_step(n, s)) < 1e-12, "s = {s}, n = {n}");
            let step = gamma_step(n, s);
            assert_eq!(step > 1.0, s < 1.0);
        }
    }
}

#[test]
fn orthogonal_norm_examples() {
    assert!(rel(ortho_norm_direct(2, 4), 2.0) < 1e-12);
    assert!(rel(ortho_norm_direct(2, 5), gamma_ratio(1, 0.5)) < 1e-12);
    let g35 = 15.0 * PI.sqrt() / 8.0;
    assert!(rel(ortho_norm_direct(2, 7), 96.0 / (3.5 * g35 * g35)) < 1e-12);
    assert!((ortho_norm_direct(2, 7) - 2.483416).abs() < 1e-5);
    assert!(rel(ortho_norm_direct(2, 0), 1.0) < 1e-14);
}

#[test]
fn recurrence_product_matches_gamma_closed_form() {
    // s = l/m for (m, l).
    for (m, l) in [(2usize, 0usize), (4, 1), (2, 1), (2, 2), (2, 3), (3, 1), (5, 7)] {
        let s = l as f64 / m as f64;
        for n in 1..=20 {
            let direct = ortho_norm_direct(m, 2 * n * m + l);
            assert!(rel(direct, gamma_ratio(n, s)) < 1e-10, "m = {m}, l = {l}, n = {n}");
        }
    }
}

#[test]
fn gamma_ratio_is_monotone_toward_two() {
    for s in [0.1, 0.25, 0.5, 0.75, 0.9, 1.1, 1.25, 1.5, 1.75, 1.9] {
        let mut prev = gamma_ratio(1, s);
        for n in 2..=10_000 {
            let g = gamma_ratio(n, s);
            if s < 1.0 {
                assert!(g > prev && g < 2.0, "s = {s}, n = {n}");
            } else {
                assert!(g < prev && g > 2.0, "s = {s}, n = {n}");
            }
            prev = g;
        }
    }
    for s in [0.25, 0.5, 1.5, 1.75] {
        assert!((gamma_ratio(1_000_000, s) - 2.0).abs() <= 1e-3);
    }
}

#[test]
fn ln_gamma_matches_factorials() {
    let mut ln_fact = 0.0f64;
    for k in 1..=170u32 {
        // ln Γ(k) = ln (k-1)!
        let err = (ln_gamma(k as f64) - ln_fact).abs();
        assert!(err <= 1e-13 * ln_fact.abs().max(1.0), "k = {k}: {err:e}");
        ln_fact += (k as f64).ln();
    }
}

#[test]
fn ln_gamma_satisfies_duplication() {
    // Γ(x) Γ(x + 1/2) = 2^{1-2x} sqrt(π) Γ(2x)
    let mut x = 1.0f64;
    while x < 1e7 {
        let lhs = ln_gamma(x) + ln_gamma(x + 0.5);
        let rhs = (1.0 - 2.0 * x) * 2f64.ln() + 0.5 * PI.ln() + ln_gamma(2.0 * x);
        assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0), "x = {x}");
        x *= 1.37;
    }
}

#[test]
fn l2_series_routes_and_limits() {
    for m in [2usize, 3, 5] {
        let degrees: Vec<usize> = (0..3 * 2 * m).chain([4000 * m + 1, 4000 * m + m]).collect();
        let recs = widom_l2_series(m, &degrees);
        for r in &recs {
            assert_eq!(r.flavor, Flavor::L2Squared);
            assert!(r.factor > 0.0, "m = {m}, degree {}", r.degree);
            // Below degree 2m the factor is a moment of the arcsine law and
            // can exceed 4; from n = 1 on it stays in (0, 4).
            if r.degree >= 2 * m {
                assert!(r.factor < 4.0, "m = {m}, degree {}", r.degree);
            }
            let expect = if r.degree < 2 * m { Route::Quadrature } else { Route::GammaFormula };
            assert_eq!(r.route, expect);
        }
        for r in &recs[recs.len() - 2..] {
            assert!((r.factor - 2.0).abs() < 1e-3);
        }
        assert_eq!(widom_limit(&SetSpec::StarEven { m }).unwrap(), Limit::Single { value: 2.0, conjecture: false });
    }
}

/// `‖T_5‖` on the star of order 2 through the `n = 1` alternation system
/// for the weight `(1+x)^{1/4}`: extremum at `(b-4)/5` balancing `x = 1`.
fn star_degree_five_oracle() -> f64 {
    let f = |b: f64| 0.8 * (b + 1.0) * ((b + 1.0) / 5.0).powf(0.25) - 2f64.powf(0.25) * (1.0 - b);
    let (mut lo, mut hi) = (-1.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = 0.5 * (lo + hi);
    2f64.powf(1.25) * 2f64.powf(0.25) * (1.0 - b)
}

#[test]
fn sup_series_examples() {
    let recs = widom_inf_series(&SetSpec::Interval { a: -2.0, b: 2.0 }, &[1, 2, 9, 50], 1e-8).unwrap();
    for e in &recs {
        let r = e.result.as_ref().unwrap();
        assert_eq!((r.factor, r.route), (2.0, Route::Exact));
    }
    let recs = widom_inf_series(&SetSpec::Interval { a: 1.0, b: 4.0 }, &[3, 20], 1e-8).unwrap();
    for e in &recs {
        assert!(rel(e.result.as_ref().unwrap().factor, 2.0) < 1e-12);
    }

    let recs = widom_inf_series(&SetSpec::StarEven { m: 4 }, &[7], 1e-10).unwrap();
    let r = recs[0].result.as_ref().unwrap();
    assert!(rel(r.factor, 2f64.powf(2.0 - 0.25)) < 1e-12);
    assert!((r.factor - 3.363586).abs() < 1e-6);

    let recs = widom_inf_series(&SetSpec::StarEven { m: 2 }, &[5], 1e-12).unwrap();
    let r = recs[0].result.as_ref().unwrap();
    assert_eq!(r.route, Route::Remez);
    assert!((r.norm - star_degree_five_oracle()).abs() < 1e-10);
    assert!((r.norm - 1.8466618350).abs() < 1e-9);
}

#[test]
fn series_keeps_order_and_reports_errors() {
    let degrees = [9, 2, 5, 0, 13];
    let recs = widom_inf_series(&SetSpec::StarEven { m: 3 }, &degrees, 1e-10).unwrap();
    let got: Vec<usize> = recs.iter().map(|e| e.degree).collect();
    assert_eq!(got, degrees);
    assert!(widom_inf_series(&SetSpec::StarEven { m: 3 }, &[], 1e-10).is_err());
    assert!(widom_inf_series(&SetSpec::CircularArc { alpha: 4.0 }, &[3], 1e-10).is_err());
    // A tolerance the solver rejects shows up per degree.
    let recs = widom_inf_series(&SetSpec::StarEven { m: 2 }, &[4, 5], -1.0).unwrap();
    assert!(recs[0].result.is_ok());
    assert!(recs[1].result.is_err());
}

#[test]
fn sup_factors_respect_lower_bounds() {
    let cases = [
        (SetSpec::StarEven { m: 2 }, false),
        (SetSpec::StarEven { m: 3 }, false),
        (SetSpec::StarOdd { m: 2 }, true),
        (SetSpec::StarOdd { m: 3 }, false),
        (SetSpec::QuadraticPreimage { a: c(0.0, 0.0), b: c(3.0, 0.0) }, false),
        (SetSpec::QuadraticPreimage { a: c(0.0, 0.0), b: c(-3.0, 0.0) }, true),
        (SetSpec::QuadraticPreimage { a: c(0.0, 0.0), b: c(0.0, 0.5) }, false),
        (SetSpec::QuadraticPreimage { a: c(0.0, 0.0), b: c(-1.5, 0.0) }, false),
        (SetSpec::Interval { a: 0.0, b: 1.0 }, true),
    ];
    let degrees: Vec<usize> = (1..=25).collect();
    for (spec, real) in &cases {
        assert_eq!(spec.is_real(), *real, "{spec:?}");
        for e in widom_inf_series(spec, &degrees, 1e-10).unwrap() {
            let r = e.result.unwrap();
            assert!(r.factor >= 1.0 - 1e-12, "{spec:?} degree {}", r.degree);
            if *real {
                assert!(r.factor >= 2.0 - 1e-9, "{spec:?} degree {}: {}", r.degree, r.factor);
            }
        }
    }
}

#[test]
fn limit_examples() {
    let q = |b: Complex64| SetSpec::QuadraticPreimage { a: c(0.0, 0.0), b };
    assert_eq!(widom_limit(&q(c(-1.5, 0.0))).unwrap(), Limit::EvenOdd { even: 2.0, odd: 2.0 });
    match widom_limit(&q(c(3.0, 0.0))).unwrap() {
        Limit::EvenOdd { even, odd } => {
            assert_eq!(even, 2.0);
            assert!((odd - (1.0 + 5f64.sqrt())).abs() < 1e-14);
        }
        other => panic!("{other:?}"),
    }
    assert!((quadratic_odd_limit(c(0.0, 0.5)) - (1.0 + 17f64.sqrt()).sqrt()).abs() < 1e-14);
    assert!((quadratic_odd_limit(c(0.0, 0.5)) - 2.263436).abs() < 1e-5);
    match widom_limit(&SetSpec::CircularArc { alpha: PI / 2.0 }).unwrap() {
        Limit::Single { value, conjecture } => {
            assert!((value - (2.0 + 2f64.sqrt()) / 2.0).abs() < 1e-15);
            assert!(!conjecture);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(widom_limit(&SetSpec::Interval { a: 0.0, b: 1.0 }).unwrap(), Limit::Single { value: 2.0, conjecture: false });
    assert_eq!(widom_limit(&SetSpec::shabat()).unwrap(), Limit::Single { value: 2.0, conjecture: true });
    assert!(matches!(widom_limit(&SetSpec::SpikedCircle { n: 1, l: 1 }), Err(Error::Unsupported(_))));
    // z^3 - z has critical values ±2/(3√3), inside [-1, 1].
    let cubic = SetSpec::PolyPreimage { coeffs: vec![c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], target: [-1.0, 1.0] };
    assert!(matches!(widom_limit(&cubic), Err(Error::Unsupported(_))));
}

#[test]
fn degree_zero_is_trivial() {
    let recs = widom_inf_series(&SetSpec::CircularArc { alpha: 1.0 }, &[0], 1e-6).unwrap();
    let r = recs[0].result.as_ref().unwrap();
    assert_eq!((r.norm, r.factor), (1.0, 1.0));
}
