use std::path::Path;
use std::process::{Command, Output};

use subdiffusion::eval_ml_neg;
use subdiffusion::inverse::{compute_lambda1, compute_t0, RecoverySpec};

fn subdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subdiff")).args(args).output().expect("spawn subdiff")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn recovered(dir: &Path, key: &str) -> f64 {
    let text = std::fs::read_to_string(dir.join("recovery.csv")).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("{key} missing from {text}"))
        .parse()
        .unwrap()
}

/// `|phi_hat(xi)|` of the default unit Gaussian in one dimension.
fn gaussian_hat(xi: f64) -> f64 {
    (-0.5 * xi * xi).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

#[test]
fn ml_prints_value_regime_error() {
    let o = subdiff(&["ml", "--rho", "1", "--z", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    let fields: Vec<&str> = line.trim().split(',').collect();
    assert_eq!(fields.len(), 3);
    assert!((fields[0].parse::<f64>().unwrap() - (-1f64).exp()).abs() < 1e-15);
    assert_eq!(fields[1], "exponential");

    // E_{1/2}(-1) = e erfc(1)
    let o = subdiff(&["ml", "--rho", "0.5", "--lambda", "1", "--t", "1"]);
    let v: f64 = stdout(&o).split(',').next().unwrap().parse().unwrap();
    assert!((v - 0.427_583_576_155_807).abs() < 1e-14);
}

#[test]
fn ml_usage_errors() {
    let o = subdiff(&["ml", "--rho", "1.5", "--z", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(0, 1]"));
    assert_eq!(subdiff(&["ml", "--rho", "0.5", "--z", "-1", "--lambda", "1", "--t", "1"]).status.code(), Some(2));
    assert_eq!(subdiff(&["nonsense"]).status.code(), Some(2));
    assert_eq!(subdiff(&["--help"]).status.code(), Some(0));
}

#[test]
fn forward_heat_matches_closed_form_and_reruns() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("heat");
    let o = subdiff(&["forward", "--rho", "1", "--times", "0.1,1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for (i, t) in [0.1f64, 1.0].iter().enumerate() {
        let text = std::fs::read_to_string(out.join(format!("solution_{i:03}.csv"))).unwrap();
        let mut rows = 0;
        for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
            let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            let s = 1.0 + 2.0 * t;
            let exact = (-v[1] * v[1] / (2.0 * s)).exp() / s.sqrt();
            assert!((v[2] - exact).abs() < 1e-8 && v[3].abs() < 1e-8);
            rows += 1;
        }
        assert_eq!(rows, 256);
    }
    let meta = std::fs::read_to_string(out.join("meta.txt")).unwrap();
    assert!(meta.contains("symbol.hash = ") && meta.contains("boundary_decay.000"));

    let cfg = out.join("resolved.cfg");
    let again = tmp.path().join("again");
    let o = subdiff(&["forward", "--config", cfg.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["solution_000.csv", "solution_001.csv", "meta.txt"] {
        assert_eq!(std::fs::read(out.join(name)).unwrap(), std::fs::read(again.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn forward_validation_and_warnings() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().to_str().unwrap();
    let o = subdiff(&["forward", "--rho", "0.5", "--times", "", "--out", d]);
    assert_eq!(o.status.code(), Some(2));
    let o = subdiff(&["forward", "--rho", "0.5", "--times", "1", "--set", "grid.n=100", "--out", d]);
    assert_eq!(o.status.code(), Some(2));

    let coarse = tmp.path().join("coarse");
    let o = subdiff(&["forward", "--rho", "0.5", "--times", "1", "--n", "8", "--out", coarse.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let meta = std::fs::read_to_string(coarse.join("meta.txt")).unwrap();
    assert!(meta.contains("warning = GridTooCoarse"), "{meta}");
    let o = subdiff(&["forward", "--rho", "0.5", "--times", "1", "--n", "8", "--strict", "--out", d]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("GridTooCoarse"));
}

#[test]
fn forward_with_symbol_file() {
    let tmp = tempfile::tempdir().unwrap();
    let sym = tmp.path().join("a.sym");
    std::fs::write(&sym, "# anisotropic\n2 0 1.0\n0 2 2.0\n").unwrap();
    let out = tmp.path().join("o");
    let o = subdiff(&[
        "forward", "--rho", "0.7", "--sigma", "0.5", "--times", "0.5", "--dim", "2", "--n", "32",
        "--half-extent", "10", "--symbol", sym.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cfg = std::fs::read_to_string(out.join("resolved.cfg")).unwrap();
    assert!(cfg.contains("symbol.terms = 0 2 2; 2 0 1"), "{cfg}");

    std::fs::write(&sym, "1 1 1.0\n").unwrap();
    let o = subdiff(&["forward", "--rho", "0.7", "--times", "0.5", "--dim", "2", "--n", "32", "--symbol", sym.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NotElliptic"));
}

#[test]
fn inverse_rho_round_trip_and_refusal() {
    let tmp = tempfile::tempdir().unwrap();
    let obs = tmp.path().join("obs.csv");
    let d = eval_ml_neg(0.6, 1.0, 2.0).unwrap().value * gaussian_hat(1.0);
    std::fs::write(&obs, format!("xi_1,t,d\n1,2,{d}\n")).unwrap();
    let out = tmp.path().join("rho");
    let o = subdiff(&["inverse", "--observations", obs.to_str().unwrap(), "--rho0", "0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!((recovered(&out, "rho") - 0.6).abs() < 1e-8);
    assert_eq!(recovered(&out, "T0"), 2.0);
    assert!(stdout(&o).contains("rho_step.lower"));

    std::fs::write(&obs, format!("1,2,{}\n", 2.0 * gaussian_hat(1.0))).unwrap();
    let o = subdiff(&["inverse", "--observations", obs.to_str().unwrap(), "--rho0", "0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let msg = stderr(&o);
    assert!(msg.contains("SolvabilityFailed") && msg.contains("interval ("), "{msg}");
}

#[test]
fn inverse_rho_sigma_round_trip() {
    let (rho, sigma) = (0.6, 0.8);
    let spec = RecoverySpec::new(0.5, 0.5);
    let t0 = compute_t0(1.0, 0.5, &spec).unwrap();
    let lambda1 = 1.1 * compute_lambda1(rho, 0.5, 2.0).unwrap();
    let xi1 = lambda1.sqrt();
    let d0 = eval_ml_neg(rho, 1.0, t0).unwrap().value * gaussian_hat(1.0);
    let d1 = eval_ml_neg(rho, lambda1.powf(sigma), 2.0).unwrap().value * gaussian_hat(xi1);
    let tmp = tempfile::tempdir().unwrap();
    let obs = tmp.path().join("obs.csv");
    std::fs::write(&obs, format!("1,{t0},{d0}\n{xi1},2,{d1}\n")).unwrap();
    let out = tmp.path().join("rs");
    let o = subdiff(&[
        "inverse", "--mode", "rho-sigma", "--observations", obs.to_str().unwrap(), "--rho0", "0.5",
        "--sigma0", "0.5", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!((recovered(&out, "rho") - rho).abs() < 1e-6);
    assert!((recovered(&out, "sigma") - sigma).abs() < 1e-6);
    assert!(recovered(&out, "Lambda1") > 1.0);

    // one observation row is not enough for two parameters
    std::fs::write(&obs, format!("1,{t0},{d0}\n")).unwrap();
    let o = subdiff(&["inverse", "--mode", "rho-sigma", "--observations", obs.to_str().unwrap(), "--rho0", "0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_quick_report() {
    let tmp = tempfile::tempdir().unwrap();
    let start = std::time::Instant::now();
    let o = subdiff(&["verify", "--quick", "--out", tmp.path().to_str().unwrap()]);
    assert!(start.elapsed().as_secs_f64() < 10.0);
    let report = std::fs::read_to_string(tmp.path().join("report.csv")).unwrap();
    let mut lines = report.lines();
    assert_eq!(lines.next(), Some("check,grid,samples,max_violation,pass"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 5));
    let failing: Vec<&str> = rows
        .iter()
        .filter(|r| r[4] == "false" && !r[0].ends_with(":expected_failure"))
        .map(|r| r[0])
        .collect();
    // the stated moment constants are exceeded near rho = 1; everything else holds
    assert_eq!(failing, vec!["lemma4_stated_C0", "lemma4_stated_C1", "lemma4_stated_C2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(rows.iter().any(|r| r[0].ends_with(":expected_failure") && r[4] == "false"));
}
