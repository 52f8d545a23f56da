use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_twokaon");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn rows(out: &Output) -> Vec<Vec<f64>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn evolve_with_equal_times_returns_input() {
    let out = run(&[
        "evolve", "--state", "phi3", "--t0", "0.7", "--t1", "0.7", "--steps", "2",
    ]);
    assert!(out.status.success());
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for row in rows(&out) {
        assert_eq!(&row[1..9], &[0.0, 0.0, h, 0.0, h, 0.0, 0.0, 0.0]);
    }
}

#[test]
fn evolve_norm_and_round_trip() {
    let out = run(&[
        "evolve",
        "--amps",
        "0.6,0,0,0.8,0,0,0,0",
        "--t1",
        "4",
        "--steps",
        "40",
        "--sign",
        "minus",
    ]);
    assert!(out.status.success());
    for row in rows(&out) {
        assert!((row[9] - 1.0).abs() < 1e-12);
        assert!(row[11] < 1e-6);
    }
    let summary = String::from_utf8(out.stderr).unwrap();
    let line = summary
        .lines()
        .find(|l| l.starts_with("round-trip"))
        .unwrap();
    let err: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(err < 1e-12);
}

#[test]
fn unnormalized_state_is_a_config_error() {
    let out = run(&["evolve", "--amps", "1,0,1,0,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(run(&["oscillate", "--gamma-l", "-0.1"]).status.code() == Some(2));
    assert!(run(&["sweep-phi", "--grid", "1"]).status.code() == Some(2));
    assert!(run(&["verify", "--tol", "0"]).status.code() == Some(2));
}

#[test]
fn oscillate_table() {
    let out = run(&["oscillate"]);
    let r = rows(&out);
    assert_eq!(r.len(), 500);
    assert_eq!(r[0], vec![0.0, 1.0, 0.0, 1.0]);
    assert_eq!(r[499][0], 12.0);
    assert!(r
        .iter()
        .all(|x| (0.0..=1.0).contains(&x[1]) && (0.0..=1.0).contains(&x[2])));

    let stable = run(&[
        "oscillate",
        "--gamma-s",
        "0",
        "--gamma-l",
        "0",
        "--dm",
        "0.9",
    ]);
    for x in rows(&stable) {
        assert!((x[2] - (0.9 * x[0] / 2.0).sin().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn sweep_endpoints() {
    let r = rows(&run(&["sweep-phi", "--grid", "3"]));
    assert_eq!(r[0][0], 0.0);
    assert!((r[1][5] + 1.0).abs() < 1e-12);
    assert!((r[1][1] - 1.0).abs() < 1e-12);
}

#[test]
fn rho_report_at_unit_time() {
    let out = run(&["rho-report", "--grid", "3", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let cols: Vec<&str> = v["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    let row = &v["rows"][1];
    let at = |name: &str| &row[cols.iter().position(|c| *c == name).unwrap()];
    assert_eq!(at("t").as_f64(), Some(1.0));
    assert_eq!(at("scalar_re").as_f64(), Some(4.0));
    assert_eq!(at("candidate_re").as_f64(), Some(0.0));
    assert_eq!(at("is_scalar").as_str(), Some("true"));
    assert_eq!(v["meta"]["command"], "rho-report");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("table.csv");
    std::fs::write(
        &cfg,
        "# sweep settings\ngrid = 5\nsign = minus\nformat = json\n",
    )
    .unwrap();
    let status = run(&[
        "sweep-phi",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("phi,c1,c2,c3,c4,corr_cp,corr_s\n"));
    assert_eq!(text.lines().count(), 6);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(
        run(&["bell", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn loose_tolerance_does_not_rescue_broken_matrix() {
    let out = run(&["verify", "--uncorrected-b", "--tol", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("FAIL braid_relation"));
}
