use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fuzzball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzball"))
        .args(args)
        .env("FUZZBALL_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json_file(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn entry(m: &Value, k: usize) -> (f64, f64) {
    let z = &m["data"][k];
    (z[0].as_f64().unwrap(), z[1].as_f64().unwrap())
}

#[test]
fn gen_grvv_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json");
    let o = fuzzball(&["gen", "grvv", "--n", "2", "--out", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json_file(&f);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["partition"], serde_json::json!([2]));
    assert_eq!(v["dressed"], false);
    let g1: Vec<_> = (0..4).map(|k| entry(&v["g1"], k)).collect();
    let g2: Vec<_> = (0..4).map(|k| entry(&v["g2"], k)).collect();
    assert_eq!(g1, vec![(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    assert_eq!(g2, vec![(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
}

#[test]
fn gen_rejects_bad_sizes() {
    assert_eq!(code(&fuzzball(&["gen", "grvv", "--n", "0"])), 2);
    assert_eq!(code(&fuzzball(&["gen", "grvv"])), 2);
    assert_eq!(code(&fuzzball(&["gen", "grvv", "--n", "4", "--partition", "2,3"])), 2);
    assert_eq!(code(&fuzzball(&["gen", "su2", "--dims", "2,0"])), 2);
}

#[test]
fn gen_su2_and_gamma() {
    let o = fuzzball(&["gen", "su2", "--dims", "2,3"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["partition"], serde_json::json!([2, 3]));
    assert_eq!(v["j3"]["rows"], 5);

    let o = fuzzball(&["gen", "gamma", "--group", "so9"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["gammas"].as_array().unwrap().len(), 9);
    assert_eq!(v["gammas"][0]["rows"], 16);
}

#[test]
fn dressed_solution_verifies_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json");
    let fs = f.to_str().unwrap();
    assert_eq!(code(&fuzzball(&["gen", "grvv", "--n", "5", "--dress", "7", "--out", fs])), 0);
    assert_eq!(json_file(&f)["dressed"], true);
    let rep = dir.path().join("r.json");
    let o = fuzzball(&["verify", "--suite", "grvv", "--solution", fs, "--out", rep.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_file(&rep);
    assert_eq!(v["n_list"], serde_json::json!([5]));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["subject"] == "file"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&fuzzball(&["verify", "--suite", "grvv", "--solution", bad.to_str().unwrap()])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&fuzzball(&["verify", "--suite", "grvv", "--solution", missing.to_str().unwrap()])), 2);
}

#[test]
fn verify_all_passes() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("report.json");
    let o = fuzzball(&["verify", "--suite", "all", "--n-list", "2,3,4,8", "--out", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_file(&f);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    for suite in ["grvv", "u2", "covariance", "intertwiner", "harmonics", "superalgebra", "equivalence", "geometry"] {
        assert!(checks.iter().any(|c| c["suite"] == suite), "{suite} missing");
    }
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_fuzzball"))
            .args(["verify", "--suite", "harmonics", "--n-list", "2,3,5", "--seed", "11"])
            .env("FUZZBALL_THREADS", threads)
            .output()
            .unwrap();
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("threads");
        v
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn bad_thread_count_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_fuzzball"))
        .args(["verify", "--suite", "grvv", "--n-list", "2"])
        .env("FUZZBALL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn unreachable_tolerance_fails() {
    let o = fuzzball(&["verify", "--suite", "grvv", "--n-list", "16", "--tol", "1e-30"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn verify_usage_errors() {
    assert_eq!(code(&fuzzball(&["verify", "--suite", "nope"])), 2);
    assert_eq!(code(&fuzzball(&["verify", "--suite", "grvv", "--n-list", "0"])), 2);
    assert_eq!(code(&fuzzball(&["verify", "--suite", "geometry", "--grid", "64by128"])), 2);
    assert_eq!(code(&fuzzball(&["verify", "--suite", "grvv", "--tol", "-1"])), 2);
}

#[test]
fn verify_geometry_grid() {
    let o = fuzzball(&["verify", "--suite", "geometry", "--grid", "64x128", "--n-list", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["grid"], serde_json::json!([64, 128]));
    let orders: Vec<f64> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|c| c["order"].as_f64())
        .collect();
    assert_eq!(orders.len(), 4);
    assert!(orders.iter().all(|o| (o - 2.0).abs() <= 0.1));
}

#[test]
fn laplacian_csv() {
    let o = fuzzball(&["spectrum", "laplacian", "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "eigenvalue,multiplicity\n0,1\n8,3\n24,5\n");
    assert_eq!(code(&fuzzball(&["spectrum", "laplacian", "--n", "100000"])), 2);
}

#[test]
fn kinetic_csv() {
    let o = fuzzball(&["spectrum", "kinetic", "--n", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "eigenvalue,multiplicity,family\n1,3,spinor\n5,1,spinor\n7,3,vector\n11,5,spinor\n"
    );
    assert_eq!(code(&fuzzball(&["spectrum", "kinetic", "--n", "500"])), 2);
}

#[test]
fn commutator_decay_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.csv");
    let o = fuzzball(&["converge", "commutator", "--n-list", "3,99", "--out", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&f).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!((rows[0][1] - 0.5).abs() < 1e-13);
    assert!((rows[1][1] - 0.02).abs() < 1e-13);
}

#[test]
fn mode_convergence_csv() {
    let o = fuzzball(&["converge", "modes", "--n-list", "4,8,16", "--l", "2", "--m", "-1", "--grid", "8x16"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let errs: Vec<f64> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(errs.len(), 3);
    assert!(errs.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn decompose_own_doublet() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    assert_eq!(code(&fuzzball(&["gen", "grvv", "--n", "4", "--out", g.to_str().unwrap()])), 0);
    let v = json_file(&g);
    let r1 = dir.path().join("r1.json");
    let r2 = dir.path().join("r2.json");
    std::fs::write(&r1, v["g1"].to_string()).unwrap();
    std::fs::write(&r2, v["g2"].to_string()).unwrap();
    let out = dir.path().join("modes.json");
    let m = format!("{},{}", r1.display(), r2.display());
    let o = fuzzball(&["decompose", "--solution", g.to_str().unwrap(), "--matrix", &m, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let modes = json_file(&out);
    assert_eq!(modes["schema"], 1);
    let r = modes["r"].as_array().unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!((r[0][0].as_u64(), r[0][1].as_i64()), (Some(0), Some(0)));
    assert!((r[0][2].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(modes["s"].as_array().unwrap().is_empty());
    assert!(modes["t"].as_array().unwrap().is_empty());

    assert_eq!(code(&fuzzball(&["decompose", "--solution", g.to_str().unwrap(), "--matrix", r1.to_str().unwrap()])), 2);
}
