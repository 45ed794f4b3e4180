use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use widomlab_core::sets::SetSpec;
use widomlab_core::Complex64;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_widomlab")).args(args).output().unwrap()
}

fn run_config(mode: &str, config: &Path) -> Output {
    run(&[mode, "--config", config.to_str().unwrap()])
}

fn write_config(dir: &tempfile::TempDir, body: &str) -> PathBuf {
    let path = dir.path().join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// `(degree, route, norm, factor)` for every data row.
fn rows(csv: &str) -> Vec<(usize, String, f64, f64)> {
    csv.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            (f[0].parse().unwrap(), f[1].to_string(), f[2].parse().unwrap(), f[4].parse().unwrap())
        })
        .collect()
}

#[test]
fn norms_match_the_golden_files() {
    for name in ["star2", "star3", "interval"] {
        let out = stdout(&run_config("norms", &golden(&format!("{name}.json"))));
        let expect = std::fs::read_to_string(golden(&format!("{name}.csv"))).unwrap();
        assert_eq!(out, expect, "{name}");
    }
    for name in ["limits_quadratic", "limits_arc", "limits_star7"] {
        let out = stdout(&run_config("limits", &golden(&format!("{name}.json"))));
        let expect = std::fs::read_to_string(golden(&format!("{name}.csv"))).unwrap();
        assert_eq!(out, expect, "{name}");
    }
}

#[test]
fn norm_rows_hold_the_known_values() {
    let csv = stdout(&run_config("norms", &golden("star2.json")));
    assert!(csv.starts_with("degree,route,norm,capacity,widom_factor,gap\n"));
    let r = rows(&csv);
    assert_eq!(r.len(), 12);
    for (d, _, norm, factor) in &r {
        assert!(*factor >= 1.0 - 1e-9);
        if d % 2 == 0 {
            assert_eq!(*norm, 2.0);
        }
    }
    assert!((r[0].2 - 2f64.sqrt()).abs() < 1e-11);
    assert!((r[2].2 - 2f64.powf(1.5)).abs() < 1e-10);
    assert!((r[4].2 - 1.846661835).abs() < 2e-3);

    let r = rows(&stdout(&run_config("norms", &golden("star3.json"))));
    for (d, _, norm, _) in &r {
        let expect = 2f64.powf(*d as f64 / 3.0);
        assert!((norm - expect).abs() < 1e-10 * expect, "degree {d}");
    }
    let r = rows(&stdout(&run_config("norms", &golden("interval.json"))));
    assert!(r.iter().all(|row| row.3 == 2.0));
}

#[test]
fn limits_hold_the_closed_forms() {
    let value = |name: &str, key: &str| -> f64 {
        let csv = stdout(&run_config("limits", &golden(name)));
        let line = csv.lines().find(|l| l.starts_with(key)).unwrap();
        line.split(',').nth(1).unwrap().parse().unwrap()
    };
    assert!((value("limits_quadratic.json", "odd_limit") - (1.0 + 5f64.sqrt())).abs() < 1e-10);
    assert_eq!(value("limits_quadratic.json", "even_limit"), 2.0);
    assert!((value("limits_arc.json", "limit") - 1.707107).abs() < 1e-6);
    assert_eq!(value("limits_star7.json", "limit"), 2.0);
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"set":{"kind":"arc","alpha":1.2},"degrees":[2,5,9],"per_edge":40}"#);
    let a = stdout(&run_config("norms", &cfg));
    let b = stdout(&run_config("norms", &cfg));
    assert_eq!(a, b);
    assert!(rows(&a).iter().all(|r| r.1 == "discrete" && r.3 >= 1.0 - 1e-9));

    let cfg = write_config(&dir, r#"{"set":{"kind":"star_even","m":2},"degrees":[9],"samples":12}"#);
    let a = stdout(&run_config("preimage", &cfg));
    let b = stdout(&run_config("preimage", &cfg));
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"degres":[1]}"#);
    assert_eq!(run_config("norms", &cfg).status.code(), Some(2));
    let cfg = write_config(&dir, r#"{"set":{"kind":"star_even","m":2},"degrees":[1],"tol":0.5}"#);
    assert_eq!(run_config("norms", &cfg).status.code(), Some(2));
    let cfg = write_config(&dir, r#"{"set":{"kind":"star_even","m":2},"degrees":[401]}"#);
    assert_eq!(run_config("norms", &cfg).status.code(), Some(2));
    assert_eq!(run(&["norms"]).status.code(), Some(2));
    let missing = dir.path().join("absent.json");
    assert_eq!(run_config("norms", &missing).status.code(), Some(2));

    // An odd degree has no composed preimage: that row fails, the rest is kept.
    let cfg = write_config(&dir, r#"{"set":{"kind":"quadratic","a":0,"b":3},"degrees":[2,3],"samples":4}"#);
    let out = run_config("preimage", &cfg);
    assert_eq!(out.status.code(), Some(1));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().any(|l| l == "3,error,,"));
    assert!(csv.lines().any(|l| l.starts_with("2,preimage,")));
}

#[test]
fn files_are_written_under_the_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"set":{"kind":"star_even","m":3},"degrees":{"from":1,"to":7},"emit":["csv","svg"]}"#);
    let prefix = dir.path().join("run");
    let out = run(&["norms", "--config", cfg.to_str().unwrap(), "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    assert_eq!(rows(&csv).len(), 7);
    let svg = std::fs::read_to_string(prefix.with_extension("svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    // SVG needs a prefix.
    assert_eq!(run_config("norms", &cfg).status.code(), Some(2));
}

#[test]
fn even_degree_preimage_stays_on_the_cross() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"set":{"kind":"star_even","m":2},"degrees":[4],"samples":16}"#);
    let csv = stdout(&run_config("preimage", &cfg));
    let star = SetSpec::StarEven { m: 2 };
    let mut count = 0;
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f[1] != "preimage" {
            continue;
        }
        let z = Complex64::new(f[2].parse().unwrap(), f[3].parse().unwrap());
        assert!(star.defect(z) <= 1e-8, "{z}");
        count += 1;
    }
    assert_eq!(count, 4 * 16);
}

#[test]
fn tree_mode_reproduces_the_composition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"degrees":[3,7,14]}"#);
    let r = rows(&stdout(&run_config("shabat", &cfg)));
    assert_eq!(r.iter().map(|x| x.0).collect::<Vec<_>>(), vec![3, 7, 14]);
    for (d, _, _, factor) in &r {
        assert!(*factor >= 1.0 - 1e-9);
        if d % 7 == 0 {
            assert!((factor - 2.0).abs() <= 1e-3, "degree {d}: {factor}");
        }
    }
    let cfg = write_config(&dir, r#"{"degrees":[41]}"#);
    assert_eq!(run_config("shabat", &cfg).status.code(), Some(2));
    let cfg = write_config(&dir, r#"{"set":{"kind":"star_even","m":2},"degrees":[3]}"#);
    assert_eq!(run_config("shabat", &cfg).status.code(), Some(2));
}
