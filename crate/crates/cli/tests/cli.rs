use revolve_core::constructors::make_m0;
use revolve_core::geodesic::half_periods;
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn revolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revolve")).args(args).env_remove("REVOLVE_THREADS").output().expect("spawn revolve")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|c| if c.is_empty() { f64::NAN } else { c.parse().unwrap() }).collect()).collect()
}

#[test]
fn check_m0_m5m6_writes_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verdict.json");
    let o = revolve(&["check", "--family", "m0", "--set", "M5M6", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["parameters"]["lambda"], 1.0);
    assert!((v["parameters"]["r_dc"].as_f64().unwrap() - 7f64.sqrt()).abs() < 1e-12);
}

#[test]
fn failing_check_exits_one() {
    let o = revolve(&["check", "--family", "euclidean", "--set", "M5M6"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "fail");
}

#[test]
fn half_period_table_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hp.csv");
    let o = revolve(&["half-period", "--family", "m0", "--nu", "0.05:0.45:41", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "nu,phi,psi,dphi,dpsi");
    let table = rows(&text);
    assert_eq!(table.len(), 41);
    let m0 = make_m0();
    for r in &table {
        let hp = half_periods(&m0, r[0]).unwrap();
        assert_eq!(r[1], hp.phi);
        assert_eq!(r[2], hp.psi.unwrap());
        assert!(r[3] > 0.0 && r[4] < 0.0);
    }
    for w in table.windows(2) {
        assert!(w[1][1] > w[0][1] && w[1][2] < w[0][2]);
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = revolve(&["half-period", "--family", "m-alpha", "--alpha", "0.25", "--nu", "0.1:0.4:7"]);
    let b = revolve(&["half-period", "--family", "m-alpha", "--alpha", "0.25", "--nu", "0.1:0.4:7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cut_locus_m0_is_opposite_meridian_subarc() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cl.json");
    let o = revolve(&["cut-locus", "--family", "m0", "--r0", "2", "--fan", "1024", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    assert_eq!(v["classification"], "opposite-meridian-subarc");
    for p in v["points"].as_array().unwrap() {
        let th = p["theta"].as_f64().unwrap();
        assert!((std::f64::consts::PI - th.abs()).abs() <= 1e-3);
    }
}

#[test]
fn verify_gvm_on_euclidean_plane() {
    let o = revolve(&["verify-gvm", "--family", "euclidean", "--radii", "0.5,2", "--fan", "64"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r["classification"], "empty");
    }
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&revolve(&["no-such-command"])), 64);
    assert_eq!(code(&revolve(&["check", "--family", "m0"])), 64);
    assert_eq!(code(&revolve(&["check", "--family", "m0", "--set", "M9"])), 64);
    assert_eq!(code(&revolve(&["half-period", "--family", "m0", "--nu", "0.1:0.2"])), 64);
    assert_eq!(code(&revolve(&["check", "--family", "m-alpha", "--alpha", "-1", "--set", "M5M6"])), 64);
    assert_eq!(code(&revolve(&["check", "--family", "m0", "--set", "A1A3"])), 64);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"family": "m0", "set": "M5M6", "fan_size": 3}"#).unwrap();
    assert_eq!(code(&revolve(&["check", "--config", cfg.to_str().unwrap()])), 64);
    std::fs::write(&cfg, "{not json").unwrap();
    assert_eq!(code(&revolve(&["check", "--config", cfg.to_str().unwrap()])), 64);

    let o = Command::new(env!("CARGO_BIN_EXE_revolve")).args(["lambda0", "--alpha", "0.5"]).env("REVOLVE_THREADS", "many").output().unwrap();
    assert_eq!(code(&o), 64);
}

#[test]
fn numeric_failure_exits_two() {
    // ν above m(1) = 1/2 has no turning point
    let o = revolve(&["half-period", "--family", "m0", "--nu", "0.6:0.7:2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"family": "m0", "set": "M5M6"}"#).unwrap();
    let o = revolve(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = revolve(&["check", "--config", cfg.to_str().unwrap(), "--family", "euclidean"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["family"], "euclidean");
}

#[test]
fn built_profile_reloads_identically() {
    let dir = tempfile::tempdir().unwrap();
    let built = dir.path().join("osc.json");
    let o = revolve(&["build", "oscillating", "--alpha", "0.25", "--n0", "4", "--out", built.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&built);
    assert_eq!(v["family"], "oscillating");
    assert_eq!(v["params"]["bumps"].as_array().unwrap().len(), 9);

    let o = revolve(&["profile", "--profile", built.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let desc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let bumps = &desc["profile"]["params"]["bumps"];
    assert_eq!(bumps, &v["params"]["bumps"]);
    let tc = desc["total_curvature"]["value"].as_f64().unwrap();
    assert!((tc - 2.0 * std::f64::consts::PI * 0.75).abs() < 1e-12);
}

#[test]
fn sphere_build_and_check() {
    let o = revolve(&["lambda0", "--alpha", "0.5"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let l0 = v["lambda0"].as_f64().unwrap();
    assert!((l0 - 0.0343).abs() < 1e-4);

    let half = format!("{}", l0 / 2.0);
    let o = revolve(&["check", "--family", "sphere", "--alpha", "0.5", "--lambda", &half, "--set", "A1A3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn curvature_plot_crosses_zero_at_sqrt3() {
    let o = revolve(&["plot", "--kind", "curvature", "--family", "m0"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,K,dK");
    let t = rows(&text);
    assert_eq!(t.len(), 1001);
    let cross: Vec<f64> = t.windows(2).filter(|w| w[0][1] > 0.0 && w[1][1] <= 0.0).map(|w| w[1][0]).collect();
    assert_eq!(cross.len(), 1);
    assert!((cross[0] - 3f64.sqrt()).abs() < 0.01);
}

#[test]
fn half_period_plot_of_round_sphere_is_flat() {
    let o = revolve(&["plot", "--kind", "half-period", "--family", "round-sphere", "--nu", "0.1:0.9:9"]);
    assert_eq!(code(&o), 0);
    for r in rows(&String::from_utf8(o.stdout).unwrap()) {
        assert!((r[1] - std::f64::consts::PI).abs() < 1e-9);
        assert!((r[2] - std::f64::consts::PI).abs() < 1e-9);
    }
}

#[test]
fn oscillating_curvature_trace_is_not_monotone() {
    let o = revolve(&[
        "plot", "--kind", "curvature", "--family", "oscillating", "--alpha", "0.25", "--n0", "4", "--x-min", "7", "--x-max", "9", "--points", "2001",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let t = rows(&String::from_utf8(o.stdout).unwrap());
    let pos = t.iter().any(|r| r[2] > 0.0);
    let neg = t.iter().any(|r| r[2] < 0.0);
    assert!(pos && neg);
}

#[test]
fn geodesic_csv_on_the_plane() {
    let o = revolve(&["geodesic", "--family", "euclidean", "--r0", "1", "--angle", "0", "--length", "3"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,r,theta,rprime,thetaprime,nu");
    for r in rows(&text) {
        assert!((r[1] - 1.0 - r[0]).abs() < 1e-12);
        assert_eq!(r[2], 0.0);
    }
}
