use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bianchi-qe")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Leading JSON document of the output, before the status line.
fn json_prefix(text: &str) -> Value {
    let end = text.rfind('}').expect("json object");
    serde_json::from_str(&text[..=end]).expect("valid json")
}

const SMALL_SCAN: &str = r#"{
  "d": -5, "cusp_j": 0,
  "t_grid": {"min": 10, "max": 11, "step": 1},
  "boxes": [
    {"x": [0, 0.4], "y": [0, 0.4], "r": [1.1, 1.4], "label": "A"},
    {"x": [1, 1.4], "y": [0, 0.4], "r": [1.1, 1.4], "label": "A+1"}
  ],
  "quad_order": 16, "tol": 1e-8, "seed": 3, "out": null
}"#;

#[test]
fn field_reports_discriminant() {
    let o = run(&["field", "--d", "-5"]);
    assert!(o.status.success());
    let v = json_prefix(&stdout(&o));
    assert_eq!(v["disc"], -20);
    assert_eq!(v["units"], 2);
}

#[test]
fn classgroup_of_minus_21_is_klein() {
    let o = run(&["classgroup", "--d", "-21"]);
    assert!(o.status.success());
    let v = json_prefix(&stdout(&o));
    assert_eq!(v["h"], 4);
    assert_eq!(v["orders"], serde_json::json!([2, 2]));
    assert_eq!(v["characters"].as_array().unwrap().len(), 4);
}

#[test]
fn lfun_matches_library() {
    let o = run(&["lfun", "--d", "-5", "--chi", "1", "--s", "2,0"]);
    assert!(o.status.success());
    let v = json_prefix(&stdout(&o));
    let re = v["result"]["value"][0].as_f64().unwrap();
    assert!((re - 0.6468653476015).abs() < 1e-12, "{re}");
}

#[test]
fn eisenstein_fourier_and_direct_agree() {
    let base = ["eisenstein", "--d", "-5", "--i", "1", "--j", "0", "--point", "-0.2,0.3,0.9", "--s", "4,0"];
    let f = json_prefix(&stdout(&run(&base)));
    let mut args = base.to_vec();
    args.push("--direct");
    let d = json_prefix(&stdout(&run(&args)));
    let a = f["result"]["value"][0].as_f64().unwrap();
    let b = d["result"]["value"][0].as_f64().unwrap();
    assert!(((a - b) / a).abs() < 1e-6, "{a} vs {b}");
}

#[test]
fn verify_passes_with_exit_zero() {
    let o = run(&["verify", "residue"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().last().unwrap().starts_with("PASS"));
}

#[test]
fn verify_json_is_deterministic() {
    let a = run(&["verify", "adelic", "--seed", "7", "--json"]);
    let b = run(&["verify", "adelic", "--seed", "7", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json_prefix(&stdout(&a));
    assert_eq!(v["check"], "adelic");
    assert!(v["details"].is_array());
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["field", "--d", "7"]).status.code(), Some(2));
    assert_eq!(run(&["lfun", "--d", "-5", "--chi", "9", "--s", "2,0"]).status.code(), Some(2));
    assert_eq!(run(&["lfun", "--d", "-5", "--chi", "0", "--s", "2"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "scan", "--kind", "nope", "--d", "-5", "--t-min", "3", "--t-max", "4", "--t-step", "1"]).status.code(), Some(2));
    assert_eq!(run(&["qe", "scan", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"d": -5}"#).unwrap();
    assert_eq!(run(&["qe", "scan", "--config", p.to_str().unwrap()]).status.code(), Some(2));
    // a box too low to be certified injective
    let low = SMALL_SCAN.replace("[1.1, 1.4], \"label\": \"A\"", "[0.2, 0.4], \"label\": \"A\"");
    std::fs::write(&p, low).unwrap();
    assert_eq!(run(&["qe", "scan", "--config", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn qe_scan_writes_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.json");
    std::fs::write(&cfg, SMALL_SCAN).unwrap();
    let mut csvs = vec![];
    for k in 0..2 {
        let out = dir.path().join(format!("out{k}.csv"));
        let o = run(&["qe", "scan", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).trim_end().ends_with("PASS qe scan"));
        csvs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    let text = String::from_utf8(csvs[0].clone()).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,box_label,mu,vol,ratio_to_first,vol_ratio_to_first,rel_dev,est_err");
    assert_eq!(lines.len(), 5);
    // translating by 1 leaves mu unchanged
    let dev: f64 = lines[2].split(',').nth(6).unwrap().parse().unwrap();
    assert!(dev < 1e-4, "{dev}");
}

#[test]
fn qe_scan_without_out_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.json");
    std::fs::write(&cfg, SMALL_SCAN).unwrap();
    let o = run(&["qe", "scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("t,box_label,"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS qe scan"));
}

#[test]
fn bounds_scan_csv() {
    let o = run(&["bounds", "scan", "--kind", "subconvexity", "--d", "-23", "--t-min", "5", "--t-max", "7", "--t-step", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,chi,value,bound_shape");
    // three t values, three characters
    assert_eq!(lines.len(), 1 + 9);
}
