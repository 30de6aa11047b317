use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bv-plateau"));
    c.env_remove("BV_PLATEAU_OUT_DIR");
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn tv_of_the_triple_junction() {
    let dir = TempDir::new().unwrap();
    let out = run(&["tv", "--builtin", "triple"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path());
    let d = &r["result"]["decomposition"];
    assert_eq!((num(&d["ac_mass"]), num(&d["cantor_mass"])), (0.0, 0.0));
    assert!((num(&d["jump_mass"]) - 3.0).abs() < 1e-12);
    assert_eq!(r["config"]["curve_source"], "builtin:triple");
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("ac_mass,jump_mass,cantor_mass,total\n"));
}

#[test]
fn curve_files_match_builtins() {
    for name in ["vortex", "triple", "constant"] {
        let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
        let file = data(&format!("{name}.json"));
        assert!(run(&["tv", "--curve", file.to_str().unwrap()], a.path()).status.success());
        assert!(run(&["tv", "--builtin", name], b.path()).status.success());
        let (ra, rb) = (report(a.path()), report(b.path()));
        for key in ["ac_mass", "jump_mass", "cantor_mass", "total"] {
            let (x, y) = (num(&ra["result"]["decomposition"][key]), num(&rb["result"]["decomposition"][key]));
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0), "{name} {key}: {x} vs {y}");
        }
    }
}

#[test]
fn constant_curve_has_zero_plateau_value() {
    let dir = TempDir::new().unwrap();
    let out = run(&["plateau", "--builtin", "constant"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let c = &report(dir.path())["result"]["certificate"];
    assert_eq!((num(&c["lower"]), num(&c["upper"])), (0.0, 0.0));
}

#[test]
fn vortex_relaxed_area() {
    let dir = TempDir::new().unwrap();
    let out = run(&["area", "--builtin", "vortex", "--h", "0.1"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &report(dir.path())["result"];
    let graph = PI * (2f64.sqrt() + 1f64.asinh());
    assert!((num(&r["graph_area_term"]) - graph).abs() < 1e-9 * graph);
    assert_eq!(num(&r["singular_term"]), 0.0);
    let want = graph + PI;
    assert!((num(&r["relaxed_area_lower"]) - want).abs() < 1e-3 * want);
}

#[test]
fn polyline_input_reproduces_the_completed_curve() {
    let dir = TempDir::new().unwrap();
    assert!(run(&["complete", "--curve", data("half_square.json").to_str().unwrap()], dir.path()).status.success());
    let poly = dir.path().join("report.csv");
    let other = TempDir::new().unwrap();
    let out = run(&["plateau", "--polyline", poly.to_str().unwrap(), "--h", "0.1"], other.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &report(other.path())["result"];
    assert!((num(&r["certificate"]["lower"]) - 1.0).abs() < 1e-12);
    assert_eq!(r["grid_agrees"], true);
}

#[test]
fn figures_are_written_on_request() {
    let dir = TempDir::new().unwrap();
    let out = run(&["plateau", "--polyline", data("pentagram.csv").to_str().unwrap(), "--h", "0.2", "--svg"], dir.path());
    assert!(out.status.code() == Some(0) || out.status.code() == Some(3));
    for f in ["curve.svg", "mesh.svg"] {
        let s = std::fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"), "{f}");
    }
    assert!(std::fs::read_to_string(dir.path().join("curve.svg")).unwrap().contains("fill-opacity"));
}

#[test]
fn invalid_parameters_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["plateau", "--builtin", "triple", "--h", "1.5"][..],
        &["area", "--builtin", "vortex", "--delta", "0.01,0.1"],
        &["tv"],
        &["tangential", "--builtin", "vortex", "--eps", "2"],
        &["verify-recovery", "--builtin", "triple", "--ks", "2,4", "--mollify-ks", "2"],
    ] {
        let out = run(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{args:?}");
    }
}

#[test]
fn malformed_curve_file_reports_its_position() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"pieces\": [\n  {\"type\": \"arc\", \"theta0\": 0,}\n]}").unwrap();
    let out = run(&["tv", "--curve", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("line 2"), "{err}");
}

#[test]
fn iteration_cap_exits_with_code_three_and_still_writes() {
    let dir = TempDir::new().unwrap();
    let out = run(&["plateau", "--builtin", "triple", "--h", "0.2", "--max-iters", "2"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(dir.path())["result"]["certificate"]["converged"], false);
}

#[test]
fn unwritable_output_directory_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("plain-file");
    std::fs::write(&file, "").unwrap();
    let out = run(&["tv", "--builtin", "vortex"], &file.join("sub"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_directory_from_environment() {
    let dir = TempDir::new().unwrap();
    let out = bin().args(["tv", "--builtin", "vortex"]).env("BV_PLATEAU_OUT_DIR", dir.path()).output().unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn reports_are_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = ["plateau", "--builtin", "figure-eight", "--h", "0.2", "--seed", "7"];
    let (oa, ob) = (run(&args, a.path()), run(&args, b.path()));
    assert_eq!(oa.status.code(), ob.status.code());
    let read = |d: &Path| std::fs::read_to_string(d.join("report.json")).unwrap();
    let strip = |s: String, d: &Path| s.replace(&d.display().to_string(), "OUT");
    assert_eq!(strip(read(a.path()), a.path()), strip(read(b.path()), b.path()));
}

#[test]
fn tangential_and_slicing_agree() {
    let dir = TempDir::new().unwrap();
    assert!(run(&["tangential", "--builtin", "cantor-arc", "--eps", "0.5"], dir.path()).status.success());
    let t = num(&report(dir.path())["result"]["tangential_variation"]);
    assert!(run(&["slice-check", "--builtin", "cantor-arc", "--eps", "0.5", "--n-radii", "64"], dir.path()).status.success());
    let r = &report(dir.path())["result"];
    assert!((num(&r["exact"]) - t).abs() <= 1e-12 * t);
    assert!(num(&r["relative_error"]) < 1e-3);
    let rows = std::fs::read_to_string(dir.path().join("report.csv")).unwrap().lines().count();
    assert_eq!(rows, 65);
}

#[test]
fn recovery_report_for_the_triple_junction() {
    let dir = TempDir::new().unwrap();
    let out = run(&["verify-recovery", "--builtin", "triple", "--ks", "2,4", "--h", "0.2", "--svg"], dir.path());
    assert!(matches!(out.status.code(), Some(0) | Some(3)), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &report(dir.path())["result"];
    assert_eq!(r["rows"].as_array().unwrap().len(), 2);
    assert_eq!(r["tv_bounded"], true);
    assert!((num(&r["tv_target"]) - 3.0).abs() < 1e-12);
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("k,k_mollify,"));
    assert!(std::fs::read_to_string(dir.path().join("mesh.svg")).unwrap().starts_with("<svg"));
}
