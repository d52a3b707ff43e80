//! End-to-end tests of the command-line interface: output formats, byte
//! stability, exit codes.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xordimer"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn gen_emits_loadable_embedding_json() {
    let text = stdout(&["gen", "--graph", "torus_square:2,3"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["darts"], 24);
    assert_eq!(v["labels"]["kind"], "torus_square:2,3");
    // and it can be consumed again through file:
    let dir = std::env::temp_dir().join("xordimer-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t23.json");
    std::fs::write(&path, &text).unwrap();
    let spec = format!("file:{}", path.display());
    let again = stdout(&["gen", "--graph", &spec]);
    assert_eq!(text, again);
}

#[test]
fn verify_duality_passes_on_t1() {
    let out = run(&["verify", "duality", "--graph", "torus_square:1,1", "--fields", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn verify_duality_with_holes() {
    let out = run(&[
        "verify",
        "duality",
        "--graph",
        "torus_square:2,2",
        "--holes",
        "0",
        "--fields",
        "2",
    ]);
    assert!(out.status.success());
}

#[test]
fn ising_duality_reports_are_json() {
    let text = stdout(&[
        "ising",
        "duality",
        "--graph",
        "torus_square:1,1",
        "--fields",
        "1",
    ]);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["equal"], true);
        assert_eq!(v["mode"], "exact");
        assert!(v["lhs"].is_string() && v["rhs"].is_string());
    }
}

#[test]
fn export_distributions_agree_and_are_byte_stable() {
    // the headline equality in law, at the level of exported files
    let args_x = [
        "export",
        "xor-dist",
        "--graph",
        "torus_square:2,2",
        "--weights",
        "x=2/5",
    ];
    let args_d = [
        "export",
        "dimer-dist",
        "--graph",
        "torus_square:2,2",
        "--weights",
        "x=2/5",
    ];
    let x1 = stdout(&args_x);
    let x2 = stdout(&args_x);
    let d = stdout(&args_d);
    assert_eq!(x1, x2, "byte stability");
    assert_eq!(x1, d, "XOR and dimer distributions are the same file");
    assert!(x1.starts_with("polygon_hex,probability\n"));
    assert_eq!(x1.lines().count(), 9);
}

#[test]
fn heights_csv_has_tagged_rows() {
    let text = stdout(&[
        "export",
        "heights",
        "--graph",
        "planar_patch:2,3",
        "--matching",
        "1",
    ]);
    assert!(text.starts_with("face,tag,value\n"));
    assert!(text.contains("primal_vertex:"));
    assert!(text.contains("dual_vertex:"));
    assert!(text.contains("edge:"));
}

#[test]
fn render_produces_svg_with_loops() {
    let text = stdout(&[
        "render",
        "--graph",
        "torus_square:2,2",
        "--primal",
        "0f",
    ]);
    assert!(text.starts_with("<svg"));
    assert!(text.contains("#cc2222"));
}

#[test]
fn sixv_routes_agree() {
    let text = stdout(&["sixv", "--graph", "torus_square:2,2", "--weights", "x=1/3"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["equal"], true);
}

#[test]
fn dimer_sectors_match() {
    let text = stdout(&["dimer", "sectors", "--graph", "torus_square:1,1", "--weights", "x=1/2"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["equal"], true);
    assert_eq!(v["by_enumeration"].as_array().unwrap().len(), 4);
}

#[test]
fn kasteleyn_export_shape() {
    let text = stdout(&[
        "dimer",
        "kasteleyn",
        "--graph",
        "torus_square:1,1",
        "--class",
        "1",
        "--weights",
        "x=1/2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rows_white"], 4);
    assert_eq!(v["sign"].as_array().unwrap().len(), 4);
    assert_eq!(v["weight"].as_array().unwrap().len(), 4);
}

#[test]
fn size_guard_exits_with_code_3() {
    let out = run(&["ising", "partition", "--graph", "torus_square:5,5"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("size guard"), "message names the guard: {err}");
    assert!(err.contains("24"), "message carries the bound: {err}");
}

#[test]
fn usage_errors_exit_with_code_2() {
    let out = run(&["gen", "--graph", "klein_bottle:2,2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "height", "--graph", "torus_square:2,2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["export", "xor-dist", "--graph", "torus_square:2,2", "--weights", "critical"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn float_mode_accepts_critical_weights() {
    let text = stdout(&[
        "dimer",
        "count",
        "--graph",
        "torus_square:1,1",
        "--weights",
        "critical",
        "--mode",
        "float",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["mode"], "float");
    assert!(v["z"].as_f64().unwrap() > 0.0);
}
