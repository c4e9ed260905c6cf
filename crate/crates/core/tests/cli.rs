use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nearly_kahler::report::{Report, Verdict};
use nearly_kahler::spec_io::SpaceSpec;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nearly-kahler"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_passes_with_exit_zero() {
    for space in ["cp3", "s6", "cone", "ledger-obata"] {
        let o = run(&["verify", space, "--samples", "10"]);
        assert_eq!(o.status.code(), Some(0), "{space}: {}", stdout(&o));
        assert!(stdout(&o).contains(": PASS"));
    }
}

#[test]
fn verify_s3xs3_reports_mu_and_fails_on_displayed_value() {
    let o = run(&["verify", "s3xs3", "--samples", "20", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.scalars["mu_exact"], "1/18·√3");
    let failed: Vec<_> = r.checks.iter().filter(|c| c.verdict == Verdict::Fail).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].condition.as_deref(), Some("displayed mu = 1/(2√3)"));
}

#[test]
fn verify_flag_small_grid() {
    let o = run(&["verify", "flag", "--grid", "3", "--json"]);
    let r = Report::from_json(&stdout(&o)).unwrap();
    let grid = r.checks.iter().find(|c| c.name.starts_with("grid")).unwrap();
    assert_eq!(grid.verdict, Verdict::Pass);
    assert_eq!(r.details["grid"].as_array().unwrap().len(), 27);
    let off_diagonal_nk = r.details["grid"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["rst"][0] != p["rst"][1] || p["rst"][1] != p["rst"][2])
        .filter(|p| p["nk_verdict"] == true)
        .count();
    assert_eq!(off_diagonal_nk, 0);
}

#[test]
fn unknown_space_is_usage_error() {
    let o = run(&["verify", "torus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown space"));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn check_fixtures() {
    let ok = run(&["check", fixture("s3xs3.json").to_str().unwrap(), "--cone"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let float = run(&["check", fixture("flag.json").to_str().unwrap(), "--scalar", "float"]);
    assert_eq!(float.status.code(), Some(0), "{}", stdout(&float));
    let bad = run(&["check", fixture("s3xs3_lambda_112.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("psi-stable"));
}

#[test]
fn malformed_documents_are_parse_errors_with_lines() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"dimension\": 2,\n  \"labels\": [\"A\", \"B\"],,\n}").unwrap();
    let o = run(&["check", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let jacobi = dir.path().join("jacobi.json");
    std::fs::write(
        &jacobi,
        r#"{
  "dimension": 4,
  "labels": ["A", "B", "C", "D"],
  "structure_constants": [[0, 1, 2, "1"], [2, 3, 0, "1"]],
  "h_indices": [],
  "m_indices": [0, 1, 2, 3]
}"#,
    )
    .unwrap();
    let o = run(&["check", jacobi.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains("Jacobi") && err.contains("line 4"), "{err}");
}

#[test]
fn table_json_round_trips() {
    let o = run(&["table", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.checks.len(), 8);
    let again = Report::from_json(&r.to_json()).unwrap();
    assert_eq!(again.checks, r.checks);
    assert!(stdout(&run(&["table"])).contains("14 − 8 = 6"));
}

#[test]
fn emit_matches_shipped_fixtures() {
    for name in ["s3xs3", "flag", "cp3"] {
        let o = run(&["emit", name]);
        assert_eq!(o.status.code(), Some(0));
        let emitted = SpaceSpec::from_json(&stdout(&o)).unwrap();
        let shipped = SpaceSpec::from_json(&std::fs::read_to_string(fixture(&format!("{name}.json"))).unwrap()).unwrap();
        assert_eq!(emitted, shipped, "{name}");
    }
}

#[test]
fn reports_are_deterministic_for_fixed_seed() {
    let a = Report::from_json(&stdout(&run(&["verify", "s6", "--seed", "9", "--samples", "15", "--json"]))).unwrap();
    let b = Report::from_json(&stdout(&run(&["verify", "s6", "--seed", "9", "--samples", "15", "--json"]))).unwrap();
    assert_eq!(a.checks, b.checks);
    assert_eq!(a.residuals, b.residuals);
}

#[test]
fn threads_flag() {
    let o = run(&["solve-s3xs3", "--threads", "2", "--sweep-denominator", "2", "--sweep-max", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
