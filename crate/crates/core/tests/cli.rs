use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TORUS: &str = r#"{"kind": "tube", "curve": {"family": "circle", "params": {"kappa": 1.0}}, "radius": 0.5}"#;
const HELIX_TUBE: &str = r#"{"kind": "tube", "curve": {"family": "helix", "params": {"a": 1.0, "c": 1.0}}, "radius": 0.5}"#;

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn tubular(args: &[&str], spec: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tubular"))
        .args(args)
        .arg("--spec")
        .arg(spec)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv(o: &Output) -> Vec<Vec<String>> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn frenet_circle_rows() {
    let d = TempDir::new().unwrap();
    let spec = write(&d, "c.json", r#"{"family": "circle", "params": {"kappa": 1.0}}"#);
    let o = tubular(&["frenet", "--grid", "16"], &spec);
    assert_eq!(code(&o), 0);
    let rows = csv(&o);
    assert_eq!(rows[0][10..], ["kappa".to_string(), "tau".to_string()]);
    assert_eq!(rows.len(), 17);
    for r in &rows[1..] {
        assert!((r[10].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
        assert!(r[11].parse::<f64>().unwrap().abs() < 1e-12);
    }
}

#[test]
fn frenet_helix_constant_columns() {
    let d = TempDir::new().unwrap();
    let spec = write(&d, "h.json", r#"{"family": "helix", "params": {"a": 1.0, "c": 1.0}}"#);
    let o = tubular(&["frenet", "--format", "json"], &spec);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    for row in v["rows"].as_array().unwrap() {
        assert!((row["kappa"].as_f64().unwrap() - 0.5).abs() < 1e-12);
        assert!((row["tau"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn frenet_line_like_curve_exits_3() {
    let d = TempDir::new().unwrap();
    for body in [
        r#"{"family": "helix", "params": {"a": 0.0, "c": 1.0}}"#,
        r#"{"family": "circle", "params": {"kappa": 0.0}}"#,
    ] {
        let o = tubular(&["frenet"], &write(&d, "l.json", body));
        assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn verify_tubes_pass() {
    let d = TempDir::new().unwrap();
    for body in [TORUS, HELIX_TUBE] {
        let o = tubular(&["verify"], &write(&d, "t.json", body));
        assert_eq!(code(&o), 0);
        let v = json(&o);
        assert_eq!(v["passed"], true);
        let ids = v["identities"].as_array().unwrap();
        assert_eq!(ids.len(), 9);
        assert!(ids.iter().all(|c| c["status"] == "pass" && c["points"] == 1024));
    }
}

#[test]
fn verify_without_band_exits_4() {
    let d = TempDir::new().unwrap();
    let o = tubular(&["verify", "--eps-band", "0"], &write(&d, "t.json", TORUS));
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular band"));
}

#[test]
fn verify_failure_exits_1_with_worst_point() {
    let d = TempDir::new().unwrap();
    let cfg = format!(r#"{{"surface": {TORUS}, "tolerances": {{"third_form": 1e-300}}}}"#);
    let o = tubular(&["verify", "--grid", "8x8"], &write(&d, "t.json", &cfg));
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["passed"], false);
    assert_eq!(v["identities"][0]["status"], "fail");
    assert!(v["identities"][0]["worst"].is_array());
    assert!(String::from_utf8_lossy(&o.stderr).contains("third_form failed"));
}

#[test]
fn fit_reports() {
    let d = TempDir::new().unwrap();
    let o = tubular(&["fit", "--form", "II"], &write(&d, "t.json", TORUS));
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], "infinite-type");
    assert_eq!(v["case"], "I");
    assert!((v["a33_spread"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["normalized_residual"].as_f64().unwrap() > 0.1);
    assert!(v["min_singular_value"].as_f64().unwrap() > 0.0);
    assert_eq!(v["A"].as_array().unwrap().len(), 3);
    assert_eq!(v["config"]["form"], "II");
    assert_eq!(v["config"]["grid"]["eps_band"], 0.15);
    assert_eq!(v["config"]["spec"]["kind"], "tube");

    let o = tubular(&["fit"], &write(&d, "h.json", HELIX_TUBE));
    let v = json(&o);
    assert_eq!((v["verdict"].as_str(), v["case"].as_str()), (Some("infinite-type"), Some("II")));
    assert!(v.get("a33_spread").is_none());

    let o = tubular(&["fit", "--form", "I"], &write(&d, "s.json", r#"{"kind": "sphere"}"#));
    let v = json(&o);
    assert_eq!(v["verdict"], "finite-type");
    assert!(v.get("case").is_none());
}

#[test]
fn fit_csv_lists_samples() {
    let d = TempDir::new().unwrap();
    let o = tubular(&["fit", "--grid", "4x6", "--format", "csv"], &write(&d, "t.json", TORUS));
    assert_eq!(code(&o), 0);
    let rows = csv(&o);
    assert_eq!(rows.len(), 25);
    assert_eq!(rows[0].len(), 10);
}

#[test]
fn reports_are_byte_stable_and_written_to_out() {
    let d = TempDir::new().unwrap();
    let spec = write(&d, "t.json", HELIX_TUBE);
    let out = d.path().join("report.json");
    let a = tubular(&["fit", "--grid", "12x12"], &spec);
    let b = tubular(&["fit", "--grid", "12x12", "--out", out.to_str().unwrap()], &spec);
    assert_eq!(code(&b), 0);
    assert!(b.stdout.is_empty());
    assert_eq!(a.stdout, std::fs::read(&out).unwrap());
    for cmd in ["tube-report", "verify", "grid-export"] {
        let x = tubular(&[cmd, "--grid", "6x6"], &spec);
        let y = tubular(&[cmd, "--grid", "6x6"], &spec);
        assert_eq!(x.stdout, y.stdout, "{cmd}");
    }
}

#[test]
fn tube_report_marks_band() {
    let d = TempDir::new().unwrap();
    let o = tubular(&["tube-report", "--grid", "4x8"], &write(&d, "t.json", TORUS));
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 32);
    for p in pts {
        let banded = p["in_band"].as_bool().unwrap();
        assert_eq!(banded, p["residuals"]["laplacian_components"].is_null());
        assert!(p["residuals"]["first_form"].as_f64().unwrap() < 1e-9);
        if !banded {
            assert!(p["residuals"]["laplacian_operator"].as_f64().unwrap() < 1e-6);
        }
    }
    assert_eq!(pts.iter().filter(|p| p["in_band"] == true).count(), 8);
}

#[test]
fn grid_export_rows() {
    let d = TempDir::new().unwrap();
    let o = tubular(&["grid-export", "--grid", "5x7"], &write(&d, "e.json", r#"{"kind": "ellipsoid", "a": 1.0, "b": 1.3, "c": 0.7}"#));
    assert_eq!(code(&o), 0);
    let rows = csv(&o);
    assert_eq!(rows[0], ["v1", "v2", "x", "y", "z", "N1", "N2", "N3", "K", "H"]);
    assert_eq!(rows.len(), 36);
    assert!(rows[1..].iter().all(|r| r.iter().all(|x| x.parse::<f64>().unwrap().is_finite())));
}

#[test]
fn invalid_input_exits_2() {
    let d = TempDir::new().unwrap();
    let torus = write(&d, "t.json", TORUS);
    for (args, spec) in [
        (vec!["fit"], write(&d, "bad.json", "{not json")),
        (vec!["fit"], write(&d, "k.json", r#"{"kind": "klein"}"#)),
        (vec!["fit"], write(&d, "r.json", r#"{"kind": "tube", "curve": {"family": "circle", "params": {"kappa": 1.0}}, "radius": 2.0}"#)),
        (vec!["fit", "--grid", "1x8"], torus.clone()),
        (vec!["fit", "--grid", "ax8"], torus.clone()),
        (vec!["fit", "--eps-band", "1.6"], torus.clone()),
        (vec!["fit", "--form", "IV"], torus.clone()),
        (vec!["tube-report"], write(&d, "s.json", r#"{"kind": "sphere"}"#)),
        (vec!["fit"], d.path().join("missing.json")),
    ] {
        let o = tubular(&args, &spec);
        assert_eq!(code(&o), 2, "{args:?} {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn singular_sampling_exits_4() {
    let d = TempDir::new().unwrap();
    // K = 0 everywhere on a cylinder: the second form is degenerate
    let o = tubular(&["fit", "--form", "II"], &write(&d, "c.json", r#"{"kind": "cylinder", "radius": 0.7}"#));
    assert_eq!(code(&o), 4);
}

#[test]
fn help_documents_csv_columns() {
    let o = Command::new(env!("CARGO_BIN_EXE_tubular")).args(["grid-export", "--help"]).output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("CSV columns: v1, v2, x, y, z"));
}
