use std::path::Path;
use std::process::{Command, Output};

fn thinfilm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thinfilm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn spectrum_json_schema() {
    let v = json(&thinfilm(&["spectrum", "--dim", "2", "--mu-max", "40"]));
    assert_eq!(v["dim"], 2);
    let entries = v["entries"].as_array().unwrap();
    let mus: Vec<i64> = entries.iter().map(|e| e["mu"].as_i64().unwrap()).collect();
    assert_eq!(&mus[..3], &[0, 8, 24]);
    let m = &entries[1]["modes"][0];
    for key in ["l", "n", "k", "lambda"] {
        assert!(m.get(key).is_some());
    }
}

#[test]
fn molien_csv_for_cyclic_three() {
    let out = thinfilm(&["molien", "--group", "cyclic:3", "--dim", "2", "--lmax", "6", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let dims: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(dims, ["1", "0", "0", "2", "0", "0", "2"]);
}

#[test]
fn molien_rejects_unknown_group() {
    let out = thinfilm(&["molien", "--group", "heptagonal", "--lmax", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_then_fit_center_of_mass() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj");
    let t = traj.to_str().unwrap();
    let sim = json(&thinfilm(&[
        "simulate", "--init", "shift:0.05", "--T", "1.5", "--h", "0.0078125", "--dt", "0.001", "--every", "0.5",
        "--out", t,
    ]));
    assert!(sim["mass_drift"].as_f64().unwrap() < 1e-10);
    assert!(traj.join("snapshot_0003.csv").exists() && traj.join("steps.csv").exists());
    let rate = json(&thinfilm(&[
        "rates", "--dir", t, "--observable", "com", "--target", "1,0", "--window", "amp:1e-6,1e-3",
    ]));
    assert_eq!(rate["target_mu"], 6);
    let k = rate["fitted_exponent"].as_f64().unwrap();
    assert!((k / 6.0 - 1.0).abs() < 0.02, "{k}");
}

#[test]
fn transform_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj");
    let t = traj.to_str().unwrap();
    json(&thinfilm(&["simulate", "--init", "dilate:1.01", "--T", "0.01", "--h", "0.00390625", "--every", "0.01", "--out", t]));
    let v = traj.join("snapshot_0000.csv");
    let w = dir.path().join("w.csv");
    let back = dir.path().join("v.csv");
    for (op, input, out) in [("v2w", &v, &w), ("w2v", &w, &back)] {
        let o = thinfilm(&["transform", "--op", op, "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(back.with_extension("json")).unwrap()).unwrap();
    let m0 = mass_of(&v);
    let m1 = side["frame"]["M"].as_f64().unwrap();
    assert!((m1 / m0 - 1.0).abs() < 1e-4, "{m0} {m1}");
    let norms = json(&thinfilm(&["norms", "--input", w.to_str().unwrap()]));
    assert!(norms["sup"].as_f64().unwrap() < 0.02);
}

fn mass_of(csv: &Path) -> f64 {
    std::fs::read_to_string(csv)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            f[1] * f[2]
        })
        .sum()
}

#[test]
fn experiment_reports_are_deterministic() {
    let a = thinfilm(&["experiment", "--builtin", "centered", "--h", "0.0078125"]);
    let b = thinfilm(&["experiment", "--builtin", "centered", "--h", "0.0078125", "--jobs", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "thinfilm.rate-report/1");
    assert_eq!(v["target"]["mu"], 30);
}

#[test]
fn failing_experiment_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    // same experiment with an impossible tolerance
    let spec = r#"{"schema":"thinfilm.experiment/1","name":"strict","dim":1,
        "init":{"kind":"dilate","lambda":1.02},"target":[0,1],"observable":{"kind":"rho_norm"},
        "reference":"discrete_equilibrium",
        "solver":{"dim":1,"h":0.0078125,"dt":0.00048828125,"dt_min":1e-8,"half_width":1.5,
                  "newton":{"abs_tol":1e-14,"rel_tol":1e-11,"max_iter":30,"negative_tol":1e-10}},
        "t_end":0.8,"sample_every":0.01,"window":{"kind":"amplitude","lo":1e-9,"hi":1e-2},
        "quadrature_degree":40,"inversion":{"theta":0.5,"tol":1e-12,"max_iter":200,"smallness":0.1},
        "rel_tolerance":1e-6,"min_r_squared":0.99}"#;
    let path = dir.path().join("strict.json");
    std::fs::write(&path, spec).unwrap();
    let out = thinfilm(&["experiment", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
}
