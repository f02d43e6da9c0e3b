use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_strongring"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn assert_golden_json(args: &[&str], name: &str) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let got: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let want: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(golden(name)).unwrap()).unwrap();
    assert_eq!(got, want, "{name}");
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("strongring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn invariants_of_named_element() {
    assert_golden_json(&["invariants", "C4 - 2*K3 + L2*L3", "--betti", "--curvature"], "invariants_named.json");
    let o = run(&["invariants", "C4 - 2*K3 + L2*L3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["chi"], -1);
    assert!(v.get("curvature").is_none());
    assert!(v["betti"].is_null());
}

#[test]
fn invariants_of_sphere_product() {
    assert_golden_json(&["invariants", "Oct * Susp(Oct)", "--betti"], "invariants_sphere_product.json");
    let o = run(&["invariants", "Oct * Susp(Oct)", "--betti"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["betti"], serde_json::json!([1, 0, 1, 1, 0, 1]));
}

#[test]
fn invariants_with_orders_and_interaction() {
    assert_golden_json(&["invariants", "K3", "--interaction", "40", "--wu", "2", "--wu", "3"], "invariants_k3.json");
}

#[test]
fn parse_errors_exit_2() {
    for args in [&["invariants", "("][..], &["invariants", "K3 + Q2"], &["verify", "nosuch"], &["frobnicate"]] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn caps_exit_3() {
    assert_eq!(run(&["spectrum", "C4*C4*C4*C4", "L", "--cap", "100"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "massgap", "--n", "3000"]).status.code(), Some(3));
}

#[test]
fn verify_energy_passes() {
    let o = run(&["verify", "energy", "--seed", "7", "--count", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS energy::complex[")).count(), 50);
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_json_is_deterministic() {
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("runtime_ms");
        }
        v
    };
    let a = strip(run(&["verify", "gaussbonnet", "--seed", "3", "--count", "5", "--json"]));
    let b = strip(run(&["verify", "gaussbonnet", "--seed", "3", "--count", "5", "--json"]));
    assert_eq!(a, b);
    assert!(a["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn thread_count_does_not_change_results() {
    let go = |threads: &str| {
        let o = bin()
            .args(["verify", "poincarehopf", "--seed", "5", "--count", "3", "--json"])
            .env("STRONGRING_THREADS", threads)
            .output()
            .unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("runtime_ms");
        }
        v
    };
    assert_eq!(go("1"), go("4"));
}

#[test]
fn mass_gap_of_torus() {
    let o = run(&["verify", "massgap", "--n", "400", "--d", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["checks"][0]["witness"]["gap"].as_f64().unwrap() >= 0.04);
}

#[test]
fn export_matches_golden() {
    let path = scratch("k2k2.mtx");
    let o = run(&["export", "K2*K2", "L", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let got = std::fs::read_to_string(&path).unwrap();
    assert_eq!(got, std::fs::read_to_string(golden("k2k2_L.mtx")).unwrap());
    assert!(got.lines().nth(1).unwrap().starts_with("9 9 "));
    let cells: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{}.cells.json", path.display())).unwrap()).unwrap();
    assert_eq!(cells.as_array().unwrap().len(), 9);
}

#[test]
fn spectrum_csv() {
    let o = run(&["spectrum", "C4", "H"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,eigenvalue"));
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let want = [0.0, 0.0, 2.0, 2.0, 2.0, 2.0, 4.0, 4.0];
    assert_eq!(values.len(), 8);
    assert!(values.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-10));
    assert_eq!(stdout(&run(&["spectrum", "C4", "H"])), text);
}

#[test]
fn limit_table() {
    assert_golden_json(&["limit", "C4", "--levels", "3", "--op", "kirchhoff"], "limit_c4.json");
    assert_eq!(run(&["limit", "C4*C4"]).status.code(), Some(2));
}

#[test]
fn flow_csv() {
    let path = scratch("flow.csv");
    let o = run(&["flow", "C4", "--t-end", "0.5", "--dt", "0.01", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("t,spectral_drift,d_norm,d2_residual"));
    assert_eq!(text.lines().count(), 52);
    let d_norms: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(d_norms.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert_eq!(run(&["flow", "C4", "--dt", "0.5", "--t-end", "5"]).status.code(), Some(1));
}

#[test]
fn facet_file_input() {
    let path = scratch("hollow.json");
    std::fs::write(&path, r#"{"facets": [[0, 1], [1, 2], [0, 2]]}"#).unwrap();
    let expr = format!("@{} * K2", path.display());
    let o = run(&["invariants", &expr, "--betti"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["chi"], 0);
    assert_eq!(v["betti"], serde_json::json!([1, 1]));
}
