use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walkguess"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn catalan(n: usize) -> Vec<u128> {
    let mut c = vec![1u128];
    for m in 0..n - 1 {
        let next = c[m] * (4 * m as u128 + 2) / (m as u128 + 2);
        c.push(next);
    }
    c
}

fn write_lines(dir: &Path, name: &str, values: &[String]) {
    fs::write(dir.join(name), values.join("\n") + "\n").unwrap();
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("dyck.toml"), "dim = 1\nsteps = [[-1], [1]]\n").unwrap();
    let terms: Vec<String> = catalan(50).iter().map(u128::to_string).collect();
    write_lines(dir.path(), "catalan.txt", &terms);
    fs::write(dir.path().join("rec.txt"), "(n+2)*a(n+1) + (-4*n-2)*a(n) = 0\n").unwrap();
    dir
}

fn data_lines(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(str::to_string)
        .collect()
}

#[test]
fn enum_aerated_catalan() {
    let dir = setup();
    let o = run(&["enum", "--steps", "dyck.toml", "--mode", "zero", "-N", "8"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(data_lines(&stdout(&o)), ["1", "0", "1", "0", "2", "0", "5", "0", "14"]);
    assert!(stdout(&o).starts_with("# "));
}

#[test]
fn enum_length_zero_to_file() {
    let dir = setup();
    let o = run(&["enum", "--steps", "dyck.toml", "--mode", "any", "-N", "0", "--out", "t.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("t.txt")).unwrap();
    assert_eq!(data_lines(&text), ["1"]);
}

#[test]
fn enum_bad_stepset_is_positioned() {
    let dir = setup();
    fs::write(dir.path().join("bad.toml"), "dim = 1\nsteps = [[-1], [1]\n").unwrap();
    let o = run(&["enum", "--steps", "bad.toml", "-N", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("parse error at 3:1"), "{err}");
}

#[test]
fn guess_algebraic_writes_report() {
    let dir = setup();
    let o = run(
        &["guess", "--terms", "catalan.txt", "--ansatz", "alg", "--out", "r.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("(t)*C^2 + (-1)*C + (1) = 0"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(json["body"]["status"], "verified-conjecture");
}

#[test]
fn guess_from_steps_auto() {
    let dir = setup();
    let o = run(
        &["guess", "--steps", "dyck.toml", "--mode", "zero", "--max-terms", "60"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("(n+2)*a(n+1) + (-4*n-2)*a(n) = 0"), "{out}");
}

#[test]
fn guess_all_zero_is_flagged() {
    let dir = setup();
    write_lines(dir.path(), "z.txt", &vec!["0".to_string(); 20]);
    let o = run(&["guess", "--terms", "z.txt"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("degenerate"));
}

#[test]
fn guess_insufficient_terms_states_minimum() {
    let dir = setup();
    write_lines(dir.path(), "s.txt", &["1".into(), "2".into(), "5".into()]);
    let o = run(&["guess", "--terms", "s.txt", "--ansatz", "rec"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("need at least"));
}

#[test]
fn guess_no_fit_exit_code() {
    let dir = setup();
    let noise: Vec<String> = (0..40u64).map(|k| ((k * k * 7919 + 13) % 101).to_string()).collect();
    write_lines(dir.path(), "noise.txt", &noise);
    let o = run(
        &["guess", "--terms", "noise.txt", "--ansatz", "rec", "--max-order", "2", "--max-degree", "2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn check_full_depth() {
    let dir = setup();
    let o = run(&["check", "--relation", "rec.txt", "--terms", "catalan.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("depth: 49 of 49"), "{out}");
    assert!(out.contains("status: full"));
}

#[test]
fn check_corrupted_terms() {
    let dir = setup();
    let mut terms: Vec<String> = catalan(50).iter().map(u128::to_string).collect();
    terms[9] = "4863".into();
    write_lines(dir.path(), "bad.txt", &terms);
    let o = run(&["check", "--relation", "rec.txt", "--terms", "bad.txt"], dir.path());
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("first failing equation at n = 8"));

    terms[0] = "7".into();
    write_lines(dir.path(), "bad0.txt", &terms);
    let o = run(&["check", "--relation", "rec.txt", "--terms", "bad0.txt"], dir.path());
    assert_eq!(o.status.code(), Some(6));
    assert!(stdout(&o).contains("status: failed"));
}

#[test]
fn check_rejects_trivial_relation() {
    let dir = setup();
    fs::write(dir.path().join("triv.txt"), "C - C = 0\n").unwrap();
    let o = run(&["check", "--relation", "triv.txt", "--terms", "catalan.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trivial"));
}

#[test]
fn replicate_fast_examples() {
    let dir = setup();
    for id in ["gauss", "catalan-theorem", "gambler-101", "probability"] {
        let o = run(&["replicate", id], dir.path());
        assert_eq!(o.status.code(), Some(0), "{id}: {}", stdout(&o));
        assert!(!stdout(&o).contains("MISMATCH"));
    }
}

#[test]
fn replicate_unknown_id() {
    let dir = setup();
    let o = run(&["replicate", "nope"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn replicate_s123_reports_resource_exceeded_under_tiny_cap() {
    let dir = setup();
    let o = run(&["replicate", "s-123", "--budget-seconds", "0.001"], dir.path());
    assert_eq!(o.status.code(), Some(7), "{}", stdout(&o));
    assert!(stdout(&o).contains("resource-exceeded"), "{}", stdout(&o));
}
