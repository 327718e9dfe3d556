use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fatou(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fatou"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn as_f64(v: &Value) -> f64 {
    v.as_f64()
        .or_else(|| v.as_str().and_then(|s| s.parse().ok()))
        .unwrap_or_else(|| v.to_string().parse().unwrap())
}

#[test]
fn analyze_exp_has_order_one() {
    let dir = TempDir::new().unwrap();
    let o = fatou(
        dir.path(),
        &["analyze", "--function", "exp", "--grid", "1:5:33"],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let j = read_json(&dir.path().join("exponents.json"));
    assert!(j["config_hash"].as_str().unwrap().len() == 64);
    let rho = as_f64(&j["report"]["exponents"]["result"]["rho"]);
    assert!((rho - 1.0).abs() < 0.02, "rho = {rho}");
    assert!(j["report"]["transcendental"].as_bool().unwrap());
    assert!(dir.path().join("profile.csv").exists());
}

#[test]
fn polynomial_is_not_transcendental() {
    let dir = TempDir::new().unwrap();
    let o = fatou(
        dir.path(),
        &[
            "analyze",
            "--function",
            "monomial(c=3,n=2)",
            "--grid",
            "0:4:17",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let j = read_json(&dir.path().join("exponents.json"));
    assert!(!j["report"]["transcendental"].as_bool().unwrap());
    assert!(!j["report"]["corollary"]["qualifies"].as_bool().unwrap());
}

#[test]
fn exp_violates_min_modulus_hypothesis() {
    let dir = TempDir::new().unwrap();
    let o = fatou(
        dir.path(),
        &[
            "hypothesis",
            "--function",
            "exp",
            "--grid",
            "1:5:33",
            "--epsilon",
            "0.1",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let j = read_json(&dir.path().join("hypothesis.json"));
    assert_eq!(j["report"]["hypothesis"]["verdict"], "violates");
    let csv = std::fs::read_to_string(dir.path().join("hypothesis.csv")).unwrap();
    assert!(csv.starts_with("log_r,exceptional"));
    assert_eq!(csv.lines().count(), 34);
}

#[test]
fn small_seed_exits_with_guidance() {
    let dir = TempDir::new().unwrap();
    let o = fatou(
        dir.path(),
        &[
            "sequences",
            "--function",
            "exp",
            "--alpha",
            "2",
            "--log-r1",
            "4",
            "--log-s1",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("log_r1"));
}

#[test]
fn sequences_write_summary_table() {
    let dir = TempDir::new().unwrap();
    let o = fatou(
        dir.path(),
        &[
            "sequences",
            "--function",
            "gap_squares",
            "--grid",
            "1:5:33",
            "--curve",
            "exact",
            "--log-r1",
            "32",
            "--log-s1",
            "1",
            "--variant",
            "quarter-alpha",
            "--n-max",
            "3",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let txt = std::fs::read_to_string(dir.path().join("sequences.txt")).unwrap();
    assert!(txt.contains("summary"));
    let j = read_json(&dir.path().join("sequences.json"));
    assert_eq!(j["report"]["pair"]["n1"], 1);
    assert!(
        j["report"]["lemma1"]["result"]["records"]
            .as_array()
            .unwrap()
            .len()
            >= 2
    );
}

#[test]
fn closed_form_curve_is_exp_only() {
    let dir = TempDir::new().unwrap();
    let o = fatou(
        dir.path(),
        &[
            "sequences",
            "--function",
            "cos_sqrt",
            "--curve",
            "closed-form",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn render_writes_field_files() {
    let dir = TempDir::new().unwrap();
    let o = fatou(
        dir.path(),
        &[
            "render",
            "--function",
            "monomial(c=1,n=2)",
            "--width",
            "48",
            "--height",
            "32",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let pgm = std::fs::read_to_string(dir.path().join("field.pgm")).unwrap();
    let mut head = pgm.split_whitespace();
    assert_eq!(head.next(), Some("P2"));
    assert_eq!(head.next(), Some("48"));
    assert_eq!(head.next(), Some("32"));
    let csv = std::fs::read_to_string(dir.path().join("field.csv")).unwrap();
    assert_eq!(csv.lines().count(), 48 * 32 + 1);
    let comps = read_json(&dir.path().join("components.json"));
    assert_eq!(comps["report"]["components"].as_array().unwrap().len(), 1);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    let o = fatou(dir.path(), &["--set", "colour=blue", "analyze"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_is_read() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# exp on a short grid\nfunction = exp\ngrid = 1:3:17\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_fatou"))
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .arg("analyze")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    assert_eq!(csv.lines().count(), 18);
}

#[test]
fn verify_all_is_reproducible() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let oa = fatou(a.path(), &["verify-all"]);
    let ob = fatou(b.path(), &["verify-all"]);
    assert_eq!(
        oa.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&oa.stdout)
    );
    assert_eq!(ob.status.code(), Some(0));
    let sa = std::fs::read_to_string(a.path().join("verify_summary.json")).unwrap();
    let sb = std::fs::read_to_string(b.path().join("verify_summary.json")).unwrap();
    assert_eq!(sa, sb);
    let stdout = String::from_utf8_lossy(&oa.stdout);
    assert_eq!(
        stdout
            .lines()
            .filter(|l| l.starts_with("criterion"))
            .count(),
        12
    );
}

#[test]
fn empty_corpus_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let o = fatou(dir.path(), &["--set", "corpus=", "verify-all"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tightened_tolerance_names_the_failure() {
    let dir = TempDir::new().unwrap();
    let o = fatou(
        dir.path(),
        &["--set", "baker_order_tol=0.001", "verify-all"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("baker order"));
}
