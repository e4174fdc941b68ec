use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_confine"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn p(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

#[test]
fn base_single_level() {
    let o = run(&["base", "--J", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "j,energy,slope\n1,2.338107410460,1.000000000000\n");
}

#[test]
fn base_zero_levels_is_usage_error() {
    let o = run(&["base", "--J", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn base_six_levels_match_golden() {
    let o = run(&["base", "--J", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text, std::fs::read_to_string(golden("base_6.csv")).unwrap());
    let r = rows(&text);
    assert_eq!(r.len(), 6);
    assert!(r.windows(2).all(|w| w[1][1] > w[0][1]));
}

#[test]
fn forward_linear_matches_base() {
    let fwd = rows(&stdout(&run(&["forward", "linear", "--J", "3"])));
    let base = rows(&stdout(&run(&["base", "--J", "3"])));
    for (a, b) in fwd.iter().zip(&base) {
        assert_eq!(a[0], b[0]);
        assert!((a[1] - b[1]).abs() < 1e-5 && (a[2] - b[2]).abs() < 1e-5);
    }
}

#[test]
fn zero_amplitude_is_linear() {
    let a = run(&["forward", "linear+exp:0,1", "--J", "4"]);
    let b = run(&["forward", "linear", "--J", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn forward_exp_matches_golden_and_first_order_shift() {
    let o = run(&["forward", "linear+exp:0.3,1", "--J", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text, std::fs::read_to_string(golden("forward_exp_0.3_1.csv")).unwrap());
    let r = rows(&text);
    assert_eq!(r.len(), 8);
    // first-order shift 0.3 ∫ e^{-r} u_1² dr with u_1 the ground state of q = r
    let g = confine::sturm::RadialGrid::new(20.0, 4001).unwrap();
    let b = confine::baseline::base_spectrum(1, g).unwrap();
    let w: Vec<f64> = g
        .nodes()
        .zip(&b.eigenfunctions[0].phi)
        .map(|(x, u)| 0.3 * (-x).exp() * u * u)
        .collect();
    let shift = confine::sturm::trapezoid(g.spacing(), &w);
    let de = r[0][1] - b.levels[0].energy;
    assert!(de > 0.0);
    assert!((de - shift).abs() < 0.1 * shift, "{de} vs {shift}");
}

#[test]
fn inverting_base_table_is_null() {
    let dir = tempfile::tempdir().unwrap();
    let data = p(&dir, "base.csv");
    assert!(run(&["base", "--J", "6", "--out", &data]).status.success());
    let pot = p(&dir, "pot.csv");
    let report = p(&dir, "rep.json");
    let o = run(&["invert", &data, "--out", &pot, "--report", &report]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&std::fs::read_to_string(&pot).unwrap());
    assert_eq!(r.len(), 3201);
    assert!(r.iter().all(|row| row[2].abs() <= 1e-8));
    let rep = json_file(Path::new(&report));
    assert_eq!(rep["J"], 6);
    assert!(rep["null_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(rep["domain_limit"], "report");
}

#[test]
fn single_level_flag_matches_general_solver() {
    let dir = tempfile::tempdir().unwrap();
    let data = p(&dir, "one.csv");
    std::fs::write(&data, "j,energy,slope\n0,1.0,1.0\n").unwrap();
    let closed = p(&dir, "closed.csv");
    let general = p(&dir, "general.csv");
    let rep = p(&dir, "rep.json");
    assert!(run(&["invert", &data, "--single-level", "--out", &closed, "--report", &rep]).status.success());
    assert!(run(&["invert", &data, "--out", &general, "--report", &rep]).status.success());
    let c = rows(&std::fs::read_to_string(&closed).unwrap());
    let g = rows(&std::fs::read_to_string(&general).unwrap());
    assert!(g.len() < c.len());
    for (a, b) in g.iter().zip(&c) {
        assert_eq!(a[0], b[0]);
        assert!((a[2] - b[2]).abs() <= 1e-8, "r = {}", a[0]);
    }
}

#[test]
fn inverting_exp_data_reproduces_levels() {
    let dir = tempfile::tempdir().unwrap();
    let pot = p(&dir, "pot.csv");
    let report = p(&dir, "rep.json");
    let data = golden("forward_exp_0.3_1.csv").display().to_string();
    assert!(run(&["invert", &data, "--out", &pot, "--report", &report]).status.success());
    let rep = json_file(Path::new(&report));
    let res = rep["data_space_residuals"].as_array().unwrap();
    assert_eq!(res.len(), 8);
    for d in res {
        assert!(d["energy_error"].as_f64().unwrap().abs() <= 5e-3);
        assert!(d["slope_error"].as_f64().unwrap().abs() <= 1e-2);
    }
    assert!(rep["max_condition"].as_f64().unwrap() < 1e6);
}

#[test]
fn roundtrip_linear_is_exact() {
    let o = run(&["roundtrip", "linear", "--J", "6"]);
    assert!(o.status.success());
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    for d in rep["discrepancies"].as_array().unwrap() {
        assert!(d["energy_error"].as_f64().unwrap().abs() <= 1e-6);
        assert!(d["slope_error"].as_f64().unwrap().abs() <= 1e-6);
    }
}

#[test]
fn roundtrip_exp_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let report = p(&dir, "rt.json");
    assert!(run(&["roundtrip", "linear+exp:0.3,1", "--J", "8", "--report", &report]).status.success());
    let rep = json_file(Path::new(&report));
    assert!(rep["max_energy_error"].as_f64().unwrap() <= 5e-3);
    assert_eq!(rep["input"].as_array().unwrap().len(), 8);
    assert_eq!(rep["recovered"].as_array().unwrap().len(), 8);
}

#[test]
fn roundtrip_gauss_is_well_formed() {
    let o = run(&["roundtrip", "linear+gauss:0.2,1.0,0.5", "--J", "8"]);
    assert!(o.status.success());
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["potential"], "linear+gauss:0.2,1,0.5");
    for key in [
        "max_energy_error",
        "max_slope_error",
        "potential_sup_error",
        "max_condition",
        "retained_r_max",
    ] {
        assert!(rep[key].as_f64().unwrap().is_finite(), "{key}");
    }
    assert_eq!(rep["discrepancies"].as_array().unwrap().len(), 8);
}

#[test]
fn tabulated_potential_matches_formula() {
    let dir = tempfile::tempdir().unwrap();
    let table = p(&dir, "p.csv");
    let mut text = String::from("r,p\n");
    for i in 0..=2000 {
        let r = i as f64 * 0.01;
        text.push_str(&format!("{r},{}\n", 0.3 * (-r).exp()));
    }
    std::fs::write(&table, text).unwrap();
    let a = rows(&stdout(&run(&["forward", &table, "--J", "4"])));
    let b = rows(&stdout(&run(&["forward", "linear+exp:0.3,1", "--J", "4"])));
    for (x, y) in a.iter().zip(&b) {
        assert!((x[1] - y[1]).abs() < 1e-4 && (x[2] - y[2]).abs() < 1e-4);
    }
}

#[test]
fn usage_and_numerical_exit_codes() {
    assert_eq!(run(&["forward", "quadratic", "--J", "2"]).status.code(), Some(2));
    assert_eq!(run(&["forward", "linear+exp:0.3", "--J", "2"]).status.code(), Some(2));
    assert_eq!(run(&["forward", "linear"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = run(&["forward", "linear", "--J", "10", "--rmax", "8", "--n", "801"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("r_max"));

    let dir = tempfile::tempdir().unwrap();
    let bad = p(&dir, "bad.csv");
    std::fs::write(&bad, "j,energy,slope\n1,2.0,1.0\n2,2.0,1.0\n").unwrap();
    assert_eq!(run(&["invert", &bad]).status.code(), Some(2));
    std::fs::write(&bad, "j,energy\n1,2.0\n").unwrap();
    assert_eq!(run(&["invert", &bad]).status.code(), Some(2));
    std::fs::write(&bad, "j,energy,slope\n1,2.5,1.0\n").unwrap();
    assert_eq!(run(&["invert", &bad, "--single-level"]).status.code(), Some(2));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = p(&dir, "cfg.json");
    std::fs::write(&cfg, r#"{"J": 2, "precision": 6, "n": 2001}"#).unwrap();
    let o = run(&["base", "--config", &cfg]);
    assert_eq!(stdout(&o), "j,energy,slope\n1,2.338107,1.000000\n2,4.087949,1.000000\n");
    let o = run(&["base", "--config", &cfg, "--J", "1"]);
    assert_eq!(stdout(&o), "j,energy,slope\n1,2.338107,1.000000\n");
    std::fs::write(&cfg, r#"{"levels": 2}"#).unwrap();
    assert_eq!(run(&["base", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let a = run(&["roundtrip", "linear+exp:0.3,1", "--J", "5"]);
    let b = run(&["roundtrip", "linear+exp:0.3,1", "--J", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
