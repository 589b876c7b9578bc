use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minitori"))
        .args(args)
        .env_remove("MINITORI_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn solve_rect_golden_values() {
    let out = run(&["solve", "rect", "--R", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let sol = &v["solution"];
    for (key, want) in [("u", 0.08), ("c", 0.989), ("t2", 0.075), ("s", 3.272), ("d", 6.523), ("v", 0.012)] {
        let got = sol[key].as_f64().unwrap();
        assert!((got - want).abs() <= 5e-3, "{key}: {got}");
    }
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-9);
    assert!(v["params"]["a"]["re"].is_f64() && v["params"]["a"]["im"].is_f64());
}

#[test]
fn output_is_byte_identical() {
    for args in [&["solve", "rect", "--R", "1.7"][..], &["--seed", "3", "residuals", "--kind", "rect", "--R", "1.3"]] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
    let text = String::from_utf8(run(&["solve", "rect", "--R", "2"]).stdout).unwrap();
    assert!(text.contains("\"R\":2.0000000000000000e0"));
}

#[test]
fn small_r_goes_through_the_reciprocal() {
    let v = json(&run(&["solve", "rect", "--R", "0.5"]));
    assert_eq!(v["solved_r"].as_f64(), Some(2.0));
    assert!(v["note"].as_str().unwrap().contains("R = 2"));
}

#[test]
fn table_csv() {
    let out = run(&["table", "--k", "5..14"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[0].starts_with("k,r1,r2,bound"));
    let first: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!((first + 2.27).abs() <= 0.02);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "rect"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "rect", "--R", "1"]).status.code(), Some(1));
    assert_eq!(run(&["residuals", "--kind", "rect"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let out = run(&["residuals", "--kind", "square", "--lambda", "2", "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("conformality residual"));
    // the report is still printed
    assert!(json(&out)["max_conformality"].as_f64().unwrap() < 1e-12);
}

#[test]
fn invariants_routes() {
    let v = json(&run(&["invariants", "--tau", "-0.5,0.8660254037844386"]));
    assert_eq!(v["route"], "lattice-sum");
    assert!(v["invariants"]["g2"]["re"].as_f64().unwrap().abs() < 1e-10);
    let v = json(&run(&["invariants", "--R", "1"]));
    assert!((v["invariants"]["eta1"]["re"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-10);
}

#[test]
fn certify_and_scan() {
    let v = json(&run(&["certify", "--from", "1.001", "--to", "3"]));
    assert_eq!(v["all_negative"], true);
    let out = run(&["scan-type1", "--points", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["min_abs_residual"].as_f64().unwrap() > 0.0);
}

#[test]
fn uniqueness_small() {
    let v = json(&run(&["--seed", "7", "uniqueness", "--starts", "20"]));
    assert_eq!(v["other"], 0);
    assert_eq!(v["converged"], v["cg_family"]);
}

#[test]
fn mesh_uses_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_minitori"))
        .args(["mesh", "--kind", "rect", "--R", "2", "--n", "16", "--stem", "t"])
        .env("MINITORI_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["vertices"], 256);
    let obj = std::fs::read_to_string(dir.path().join("t.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 256);
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(csv.starts_with("u,v,x1,x2,x3,x4"));
}

#[test]
fn report_and_writhe() {
    let out = run(&["report", "--R", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["end"]["n"], 3);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);

    let out = run(&["writhe", "--kind", "nodes", "--expect", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["writhe"]["value"].as_i64().map(i64::abs), Some(4));
    assert_eq!(v["braid"]["algebraic_length"], v["writhe"]["value"]);
}
