//! End-to-end tests of the `lc` binary: exit codes and output formats.

use lcalc::cli::{EXIT_FUEL, EXIT_NOT_EQUIV, EXIT_OK, EXIT_PARSE, EXIT_TYPE, PRELUDE_ENV};
use lcalc::parser::parse_program;
use lcalc::typecheck::check;
use std::path::{Path, PathBuf};
use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn lc(args: &[&str]) -> Run {
    lc_env(args, None)
}

fn lc_env(args: &[&str], prelude: Option<&Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lc"));
    cmd.args(args).env_remove(PRELUDE_ENV);
    if let Some(p) = prelude {
        cmd.env(PRELUDE_ENV, p);
    }
    let out = cmd.output().expect("lc runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn source(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bundled_prelude_typechecks() {
    let prelude = concat!(env!("CARGO_MANIFEST_DIR"), "/prelude.lc");
    let r = lc(&["check", prelude]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.contains("cnot : qubit * qubit -o qubit * qubit"));
    assert!(r
        .stdout
        .contains("teleport : B(qubit) -o B(qubit * qubit * qubit)"));
}

#[test]
fn check_reports_type_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(&dir, "w.lc", "pure def w : 1 -o 1 = \\x. x\n");
    let r = lc(&["check", path(&f)]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout.trim(), "w : 1 -o 1");
    let r = lc(&["check", path(&f), "--json"]);
    let v: serde_json::Value = serde_json::from_str(r.stdout.trim()).unwrap();
    assert_eq!(v["definition"], "w");
    assert_eq!(v["type"], "1 -o 1");
    assert_eq!(v["fragment"], "pure");
}

#[test]
fn duplicated_variable_is_a_type_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(
        &dir,
        "dup.lc",
        "pure def f : qubit -o qubit * qubit = \\x. x @ x\n",
    );
    let r = lc(&["check", path(&f)]);
    assert_eq!(r.code, EXIT_TYPE);
    let v: serde_json::Value = serde_json::from_str(r.stdout.trim()).unwrap();
    assert_eq!(v["error"], "type");
    assert_eq!(v["definition"], "f");
    assert!(v["detail"]["message"]
        .as_str()
        .unwrap()
        .contains("used twice"));
    assert_eq!(v["detail"]["span"]["line"], 1);
}

#[test]
fn open_term_under_bang_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(
        &dir,
        "open.lc",
        "mixed def f : B(qubit -o qubit) = \\y. B(\\x. y)\n",
    );
    let r = lc(&["check", path(&f)]);
    assert_eq!(r.code, EXIT_PARSE);
    assert!(r.stdout.contains("undefined name `y`"));
}

#[test]
fn syntax_error_exits_with_parse_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(&dir, "bad.lc", "pure def x : 1 = (((\n");
    let r = lc(&["check", path(&f)]);
    assert_eq!(r.code, EXIT_PARSE);
    let v: serde_json::Value = serde_json::from_str(r.stdout.trim()).unwrap();
    assert_eq!(v["error"], "parse");
    assert_eq!(v["detail"]["kind"], "syntax");
}

#[test]
fn missing_file_and_unknown_definition() {
    assert_eq!(lc(&["check", "/nonexistent/x.lc"]).code, EXIT_PARSE);
    let dir = tempfile::tempdir().unwrap();
    let f = source(&dir, "u.lc", "pure def u : 1 = *\n");
    assert_eq!(
        lc(&["normalize", path(&f), "--def", "nope"]).code,
        EXIT_PARSE
    );
}

#[test]
fn normalize_beta_redex_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(&dir, "b.lc", "pure def u : 1 = (\\x. x) *\n");
    let r = lc(&["normalize", path(&f)]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout.trim(), "*");
    let r = lc(&["normalize", path(&f), "--trace", "--json"]);
    assert_eq!(r.code, EXIT_OK);
    let lines: Vec<serde_json::Value> = r
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["kind"], "arrow");
    assert_eq!(lines[0]["rule"], 2);
    assert_eq!(lines[0]["after"], "*");
    assert_eq!(lines[1]["steps"], 1);
    assert_eq!(lines[1]["value"], "*");
}

#[test]
fn fuel_exhaustion_exits_with_fuel_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(&dir, "f.lc", "pure def u : 1 = (\\x. x) ((\\y. y) *)\n");
    assert_eq!(lc(&["normalize", path(&f), "--fuel", "1"]).code, EXIT_FUEL);
    assert_eq!(lc(&["normalize", path(&f), "--fuel", "2"]).code, EXIT_OK);
}

#[test]
fn last_definition_is_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(
        &dir,
        "two.lc",
        "pure def a : 1 = *\npure def b : 1 = 3 . *\n",
    );
    assert_eq!(lc(&["normalize", path(&f)]).stdout.trim(), "3 . *");
    assert_eq!(
        lc(&["normalize", path(&f), "--def", "a"]).stdout.trim(),
        "*"
    );
}

#[test]
fn equiv_separates_scalar_multiples() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(
        &dir,
        "e.lc",
        "pure def l : 1 = *\npure def r : 1 = 2 . *\npure def s : 1 = (\\x. x) *\n",
    );
    let r = lc(&["equiv", path(&f), "--left", "l", "--right", "r"]);
    assert_eq!(r.code, EXIT_NOT_EQUIV);
    let r = lc(&["equiv", path(&f), "--left", "l", "--right", "s"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stdout);
}

#[test]
fn equiv_of_different_types_is_a_type_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(
        &dir,
        "t.lc",
        "pure def l : 1 = *\npure def r : qubit = ket0\n",
    );
    assert_eq!(
        lc(&["equiv", path(&f), "--left", "l", "--right", "r"]).code,
        EXIT_TYPE
    );
}

#[test]
fn denote_ket0_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(&dir, "k.lc", "pure def a : qubit = ket0\n");
    let r = lc(&["denote", path(&f), "--json"]);
    assert_eq!(r.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(r.stdout.trim()).unwrap();
    assert_eq!(v["matrix"]["rows"], 2);
    assert_eq!(v["matrix"]["cols"], 1);
    assert_eq!(
        v["matrix"]["entries"],
        serde_json::json!([[1.0, 0.0], [0.0, 0.0]])
    );
    assert_eq!(v["target"]["category"], "FHilb");
}

#[test]
fn denote_bang_squares_the_scalar() {
    let dir = tempfile::tempdir().unwrap();
    let f = source(&dir, "m.lc", "mixed def m : B(1) = B(0.5 . *)\n");
    let r = lc(&["denote", path(&f)]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout.lines().nth(1), Some("[0.25]"));
}

#[test]
fn prelude_can_be_replaced() {
    let dir = tempfile::tempdir().unwrap();
    let prelude = source(&dir, "p.lc", "pure def one : 1 = 5 . *\n");
    let f = source(&dir, "u.lc", "pure def u : 1 = one\n");
    let r = lc_env(&["normalize", path(&f)], Some(&prelude));
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(r.stdout.trim(), "5 . *");
    // ket0 lives only in the bundled prelude
    let g = source(&dir, "k.lc", "pure def a : qubit = ket0\n");
    assert_eq!(
        lc_env(&["check", path(&g)], Some(&prelude)).code,
        EXIT_PARSE
    );
}

#[test]
fn gen_is_deterministic_and_well_typed() {
    let a = lc(&["gen", "--count", "5", "--seed", "42"]);
    let b = lc(&["gen", "--count", "5", "--seed", "42"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(
        a.stdout,
        lc(&["gen", "--count", "5", "--seed", "43"]).stdout
    );
    let prog = parse_program(&a.stdout).expect("generated output parses");
    assert_eq!(prog.definitions.len(), 5);
    for d in &prog.definitions {
        check(&[], &d.term, &d.prop).unwrap_or_else(|e| panic!("{}: {}", d.name, e.message));
    }
}

#[test]
fn generated_definitions_pass_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = lc(&["gen", "--count", "20", "--seed", "7", "--max-depth", "4"]).stdout;
    let f = source(&dir, "g.lc", &out);
    let r = lc(&["check", path(&f)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stdout);
    assert_eq!(r.stdout.lines().count(), 20);
}
