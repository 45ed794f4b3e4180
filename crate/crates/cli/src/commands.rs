use crate::config::{Emit, ExperimentConfig, SHABAT_MAX_DEGREE};
use crate::format::fmt_g;
use crate::svg::{scatter, Series};
use std::fmt::Write as _;
use std::path::PathBuf;
use widomlab_core::cheb_complex::{compose_chebyshev, star_norm, BaseInterval};
use widomlab_core::poly::{preimage_points_seeded, Poly};
use widomlab_core::sets::{phi_star, Clustering, SetSpec};
use widomlab_core::widom::{widom_inf_series_with, widom_limit, Limit, SeriesEntry, SeriesOptions};
use widomlab_core::Complex64;

pub const NORMS_HEADER: &str = "degree,route,norm,capacity,widom_factor,gap";

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Run(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Run(_) => 1,
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum Completion {
    Full,
    Partial,
}

pub struct RunSettings {
    pub out: Option<String>,
    pub seed: u64,
    pub tol: Option<f64>,
}

pub struct Artifacts {
    pub csv: String,
    pub svg: Option<String>,
    pub completion: Completion,
}

fn options(cfg: &ExperimentConfig, run: &RunSettings) -> SeriesOptions {
    SeriesOptions {
        tol: run.tol.unwrap_or(cfg.tol),
        per_edge: cfg.per_edge,
        clustering: Clustering::Arcsine,
        seed: run.seed,
    }
}

pub fn norms_csv(entries: &[SeriesEntry]) -> (String, Completion) {
    let mut csv = String::new();
    csv.push_str(NORMS_HEADER);
    csv.push('\n');
    let mut completion = Completion::Full;
    for e in entries {
        match &e.result {
            Ok(r) => {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    r.degree,
                    r.route.as_str(),
                    fmt_g(r.norm),
                    fmt_g(r.capacity),
                    fmt_g(r.factor),
                    fmt_g(r.gap)
                );
            }
            Err(err) => {
                eprintln!("degree {}: {err}", e.degree);
                let _ = writeln!(csv, "{},error,,,,", e.degree);
                completion = Completion::Partial;
            }
        }
    }
    (csv, completion)
}

/// Residue classes used to colour a norms plot.
fn period(spec: &SetSpec) -> usize {
    match spec {
        SetSpec::StarEven { m } => 2 * m,
        SetSpec::StarOdd { m } => *m,
        SetSpec::QuadraticPreimage { .. } => 2,
        SetSpec::PolyPreimage { coeffs, .. } => Poly::new(coeffs.clone()).degree().max(1),
        _ => 1,
    }
}

fn norms_svg(spec: &SetSpec, entries: &[SeriesEntry], title: &str) -> String {
    let k = period(spec);
    let series: Vec<Series> = (0..k)
        .map(|r| Series {
            label: if k == 1 { "all degrees".into() } else { format!("n ≡ {r} mod {k}") },
            points: entries
                .iter()
                .filter(|e| e.degree % k == r)
                .filter_map(|e| e.result.as_ref().ok())
                .map(|rec| (rec.degree as f64, rec.factor))
                .collect(),
        })
        .collect();
    scatter(title, "degree", "Widom factor", &series, false)
}

pub fn cmd_norms(cfg: &ExperimentConfig, run: &RunSettings) -> Result<Artifacts, Failure> {
    let spec = cfg.require_set().map_err(Failure::Config)?.clone();
    let degrees = cfg.degree_list().map_err(Failure::Config)?;
    series_artifacts(&spec, &degrees, cfg, run, "Widom factors")
}

fn series_artifacts(
    spec: &SetSpec,
    degrees: &[usize],
    cfg: &ExperimentConfig,
    run: &RunSettings,
    title: &str,
) -> Result<Artifacts, Failure> {
    let entries = widom_inf_series_with(spec, degrees, &options(cfg, run)).map_err(|e| Failure::Config(e.to_string()))?;
    let (csv, completion) = norms_csv(&entries);
    let svg = cfg.emit.contains(&Emit::Svg).then(|| norms_svg(spec, &entries, title));
    Ok(Artifacts { csv, svg, completion })
}

pub fn cmd_shabat(cfg: &ExperimentConfig, run: &RunSettings) -> Result<Artifacts, Failure> {
    let spec = match &cfg.set {
        None => SetSpec::shabat(),
        Some(s @ SetSpec::PolyPreimage { .. }) => s.clone(),
        Some(_) => return Err(Failure::Config("shabat mode needs a polynomial preimage set".into())),
    };
    let degrees = cfg.degree_list().map_err(Failure::Config)?;
    if let Some(&top) = degrees.iter().max() {
        if top > SHABAT_MAX_DEGREE {
            return Err(Failure::Config(format!("shabat mode allows degrees up to {SHABAT_MAX_DEGREE}, got {top}")));
        }
    }
    let art = series_artifacts(&spec, &degrees, cfg, run, "Widom factors of a tree preimage")?;
    // Degrees that are multiples of the preimage degree are exactly 2.
    let k = period(&spec);
    for line in art.csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if let (Ok(d), Ok(w)) = (fields[0].parse::<usize>(), fields[4].parse::<f64>()) {
            if d % k == 0 && (w - 2.0).abs() > 1e-3 {
                eprintln!("degree {d}: factor {w} differs from the exact value 2 by more than 1e-3");
            }
        }
    }
    Ok(art)
}

pub fn cmd_limits(cfg: &ExperimentConfig) -> Result<Artifacts, Failure> {
    let spec = cfg.require_set().map_err(Failure::Config)?;
    let limit = widom_limit(spec).map_err(|e| Failure::Run(e.to_string()))?;
    let mut csv = String::from("quantity,value,conjecture\n");
    match limit {
        Limit::Single { value, conjecture } => {
            let _ = writeln!(csv, "limit,{},{conjecture}", fmt_g(value));
        }
        Limit::EvenOdd { even, odd } => {
            let _ = writeln!(csv, "even_limit,{},false", fmt_g(even));
            let _ = writeln!(csv, "odd_limit,{},false", fmt_g(odd));
        }
    }
    Ok(Artifacts {
        csv,
        svg: None,
        completion: Completion::Full,
    })
}

/// Points `t · dir` for `t` on Chebyshev–Lobatto nodes of `[lo, hi]`.
fn segment_samples(lo: f64, hi: f64, dir: Complex64, samples: usize) -> Vec<Complex64> {
    (0..samples)
        .map(|i| {
            let c = -(std::f64::consts::PI * i as f64 / (samples - 1) as f64).cos();
            dir * (0.5 * (lo + hi) + 0.5 * (hi - lo) * c)
        })
        .collect()
}

/// The Chebyshev polynomial of `spec` at `degree` and the segments
/// containing its image of the set.
fn cloud_source(spec: &SetSpec, degree: usize, tol: f64) -> Result<(Poly, Vec<Complex64>), String> {
    match spec {
        SetSpec::StarEven { m } => {
            let r = star_norm(*m, degree, tol).map_err(|e| e.to_string())?;
            let p = r.poly.ok_or("no polynomial for this degree")?;
            let l = degree % (2 * m);
            // T(ωz) = ω^l T(z) with ω = e^{iπ/m}: the image lies on the lines
            // through e^{iπkl/m}.
            let mut dirs: Vec<Complex64> = Vec::new();
            for k in 0..2 * m {
                let d = Complex64::from_polar(1.0, std::f64::consts::PI * (k * l) as f64 / *m as f64);
                if !dirs.iter().any(|e| (e - d).norm() < 1e-12 || (e + d).norm() < 1e-12) {
                    dirs.push(d);
                }
            }
            Ok((p, dirs.into_iter().map(|d| d * r.norm).collect()))
        }
        SetSpec::QuadraticPreimage { .. } | SetSpec::PolyPreimage { .. } => {
            let (p, target) = spec.as_preimage().unwrap();
            if degree == 0 || degree % p.degree() != 0 {
                return Err(format!("degree {degree} is not a multiple of the preimage degree {}", p.degree()));
            }
            // Move the target onto [-2, 2]; the monic T then maps the set
            // onto the segment [-2, 2] / L^k, L the leading coefficient.
            let (lo, hi) = (target[0], target[1]);
            let a = 4.0 / (hi - lo);
            let shifted = &p.scale(Complex64::new(a, 0.0)) + &Poly::from_real(&[-2.0 - a * lo]);
            let k = degree / p.degree();
            let (t, _) = compose_chebyshev(&shifted, k, BaseInterval::Symmetric).map_err(|e| e.to_string())?;
            let end = shifted.leading().powu(k as u32).inv() * 2.0;
            Ok((t, vec![end]))
        }
        _ => Err("point clouds need a star or a polynomial preimage".into()),
    }
}

pub fn cmd_preimage(cfg: &ExperimentConfig, run: &RunSettings) -> Result<Artifacts, Failure> {
    let spec = cfg.require_set().map_err(Failure::Config)?;
    let degrees = cfg.degree_list().map_err(Failure::Config)?;
    let tol = run.tol.unwrap_or(cfg.tol);
    let mut csv = String::from("degree,kind,re,im\n");
    let mut completion = Completion::Full;
    let mut cloud = Vec::new();
    let mut phis = Vec::new();
    for &degree in &degrees {
        let result = cloud_source(spec, degree, tol).and_then(|(p, ends)| {
            let targets: Vec<Complex64> = ends.iter().flat_map(|&e| segment_samples(-1.0, 1.0, e, cfg.samples)).collect();
            preimage_points_seeded(&p, &targets, 1e-8, run.seed)
                .map(|v| v.into_iter().flatten().collect::<Vec<_>>())
                .map_err(|e| e.to_string())
        });
        match result {
            Ok(points) => {
                for z in &points {
                    let _ = writeln!(csv, "{degree},preimage,{},{}", fmt_g(z.re), fmt_g(z.im));
                    cloud.push((z.re, z.im));
                }
                if *spec == (SetSpec::StarEven { m: 2 }) {
                    for z in &points {
                        let w = phi_star(*z);
                        let _ = writeln!(csv, "{degree},phi,{},{}", fmt_g(w.re), fmt_g(w.im));
                        phis.push((w.re, w.im));
                    }
                }
            }
            Err(e) => {
                eprintln!("degree {degree}: {e}");
                let _ = writeln!(csv, "{degree},error,,");
                completion = Completion::Partial;
            }
        }
    }
    let svg = cfg.emit.contains(&Emit::Svg).then(|| {
        let mut series = vec![Series {
            label: "preimage".into(),
            points: cloud,
        }];
        if !phis.is_empty() {
            series.push(Series {
                label: "image under Φ".into(),
                points: phis,
            });
        }
        scatter("Preimage point cloud", "Re z", "Im z", &series, true)
    });
    Ok(Artifacts { csv, svg, completion })
}

/// Write the artifacts to `<prefix>.csv` / `<prefix>.svg`, or the CSV to
/// stdout without a prefix.
pub fn deliver(art: &Artifacts, cfg: &ExperimentConfig, run: &RunSettings) -> Result<(), Failure> {
    let prefix = run.out.clone().or_else(|| cfg.output.clone());
    match prefix {
        None => {
            if art.svg.is_some() {
                return Err(Failure::Config("svg output needs an output prefix".into()));
            }
            print!("{}", art.csv);
        }
        Some(prefix) => {
            let write = |ext: &str, body: &str| {
                let path = PathBuf::from(format!("{prefix}.{ext}"));
                std::fs::write(&path, body).map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display())))
            };
            if cfg.emit.contains(&Emit::Csv) {
                write("csv", &art.csv)?;
            }
            if let Some(svg) = &art.svg {
                write("svg", svg)?;
            }
        }
    }
    Ok(())
}
