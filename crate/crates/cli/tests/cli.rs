use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantagg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn valid_quantale_file_exits_zero() {
    let o = run(&["check-quantale", &data("three.quantale")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn missing_tensor_entry_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.quantale");
    let text = std::fs::read_to_string(data("three.quantale")).unwrap();
    std::fs::write(&path, text.replace("  (x, top): x,\n", "")).unwrap();
    let o = run(&["check-quantale", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn non_associative_table_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.quantale");
    let text = "elements = [0, a, b, 1]
leq = [(0, a), (a, b), (b, 1)]
tensor = {
  (0, 0): 0, (0, a): 0, (0, b): 0, (0, 1): 0,
  (a, a): 0, (a, b): a, (a, 1): a,
  (b, b): a, (b, 1): b,
  (1, 1): 1,
}
unit = 1
";
    std::fs::write(&path, text).unwrap();
    let o = run(&["--format", "json", "check-quantale", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("assoc"), "{out}");
}

#[test]
fn swap_map_is_symmetric_but_not_preserving() {
    let o = run(&[
        "--format",
        "json",
        "classify",
        "--from",
        &data("three.quantale"),
        "--to",
        &data("three.quantale"),
        "--map",
        &data("swap.map"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdicts"]["symmetrically_preserving"], "holds_exhaustive");
    assert_eq!(v["verdicts"]["preserving"], "fails");
    assert_eq!(v["mode"], "exhaustive");
}

#[test]
fn sum_on_lawvere_square_holds() {
    let o = run(&["classify", "--from", "lawvere:3x2", "--to", "lawvere:3", "--rule", "sum"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn sampled_runs_are_deterministic_per_seed() {
    let args = [
        "--format", "json", "--seed", "7", "--samples", "100", "classify", "--from", "ddf:minx2", "--to",
        "ddf:min", "--rule", "min",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["samples"], 100);
}

#[test]
fn massanet_valero_aggregate_violates_triangle() {
    let o = run(&["aggregate", "--rule", "massanet-valero", &data("mv-d1.csv"), &data("mv-d2.csv")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("x1") && out.contains("x3"), "{out}");
}

#[test]
fn fuzzy_min_aggregate_is_valid_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("agg.json");
    let o = run(&[
        "--out",
        out.to_str().unwrap(),
        "aggregate",
        "--rule",
        "min",
        &data("fuzzy-a.json"),
        &data("fuzzy-b.json"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let written = std::fs::read_to_string(&out).unwrap();
    assert!(!written.trim().is_empty());
}

#[test]
fn convolve_reports_exact_values() {
    let o = run(&["--format", "json", "convolve", "--tnorm", "min", &data("f_half.json"), &data("f_third.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["steps"].is_array(), "{v}");
}

#[test]
fn min_aggregator_verdict_names_disjoint_support_witness() {
    let o = run(&["aggregator-verdict", "--rule", "min", "--arity", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("(0,5)") && out.contains("(5,0)"), "{out}");
}

#[test]
fn dump_quantale_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dump.quantale");
    let o = run(&["--out", path.to_str().unwrap(), "dump-quantale", "lawvere:2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check-quantale", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_theorems_on_one_pair() {
    let o = run(&["verify-theorems", "--pair", "three-paper=three-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn unknown_rule_is_an_input_error() {
    let o = run(&["classify", "--from", "two", "--to", "two", "--rule", "median"]);
    assert_eq!(o.status.code(), Some(2));
}
