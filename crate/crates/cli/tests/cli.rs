use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use inception_cli::corpus::default_root;

fn inception(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inception"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn example(name: &str, file: &str) -> String {
    default_root().join("examples").join(name).join(file).display().to_string()
}

#[test]
fn classify_reports_depth_and_exit_codes() {
    let o = inception(&["classify", "box(dia(p) o p) o dia(p) <= p"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("depth: 1"), "{}", stdout(&o));
    let o = inception(&["classify", "box(dia(p)) <= dia(box(p))"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("inductive: false"));
    let o = inception(&["classify", "p <="]);
    assert_eq!(o.status.code(), Some(2));
    let o = inception(&["classify", "--epsilon", "p:1", "dia(box(p)) <= box(dia(box(p)))"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("certificate: accepted"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(inception(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(inception(&["check"]).status.code(), Some(2));
}

#[test]
fn alba_trace_lists_every_step() {
    let o = inception(&["alba", "--trace", "p <= dia(box(dia(box(dia(p)))))"]);
    let out = stdout(&o);
    assert!(o.status.success());
    for kind in ["[first-approx]", "[ackermann]", "[unravel]"] {
        assert!(out.contains(kind), "{kind} missing in {out}");
    }
    assert_eq!(out.lines().filter(|l| l.starts_with("clause: ")).count(), 1);
}

#[test]
fn gen_rules_writes_a_loadable_rules_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rules.json");
    let o = inception(&["gen-rules", "dia(p) star p <= p", "--name", "R", "--out", out.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    for name in ["R (depth 1)", "R.c1.r1 (depth 0)", "R.c1.r2 (depth 0)"] {
        assert!(text.contains(name), "{name} missing in {text}");
    }
    let sig = inception_cli::corpus::load_signature(&default_root().join("signatures/le.json")).unwrap();
    let file = inception::rulegen::RulesFile::from_json(&fs::read_to_string(&out).unwrap(), &sig).unwrap();
    assert_eq!(file.rules.len(), 1);
    assert_eq!(file.rules[0].depth, 1);
}

#[test]
fn check_accepts_and_rejects() {
    let o = inception(&["check", &example("ex35", "derivation.json"), "--calculus", &example("ex35", "calculus.json")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("depth: 2"));
    let o = inception(&["check", &example("ex32", "derivation.json"), "--calculus", &example("ex36", "calculus.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rejected at /p1/p1/p1/p1 [unknown-rule]"), "{}", stdout(&o));
}

#[test]
fn cut_elim_trace_starts_with_the_rebuilding_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cut_free.json");
    let o = inception(&[
        "cut-elim",
        &example("ex410", "derivation.json"),
        "--calculus",
        &example("ex410", "calculus.json"),
        "--trace",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("step 1: parametric"), "{first}");
    assert!(first.contains("rebuild dream"), "{first}");
    assert!(text.contains("cut-free: true"));
    let o = inception(&["check", out.to_str().unwrap(), "--calculus", &example("ex410", "calculus.json")]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn oracle_is_deterministic() {
    let args = ["oracle", "dia(p) star p <= p", "--seed", "1", "--random", "50"];
    let a = inception(&args);
    let b = inception(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("mismatches: 0"));
    assert_eq!(stdout(&a).lines().filter(|l| l.trim_start().starts_with("algebra ")).count(), 50);
}

fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for e in fs::read_dir(from).unwrap() {
        let e = e.unwrap();
        let target = to.join(e.file_name());
        if e.path().is_dir() {
            copy_dir(&e.path(), &target);
        } else {
            fs::copy(e.path(), target).unwrap();
        }
    }
}

#[test]
fn selftest_names_a_corrupted_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&default_root(), dir.path());
    let clause = dir.path().join("examples/ex35/clause.txt");
    fs::write(&clause, "forall @j %m (@j <= %m => @j <= %m)\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_inception"))
        .args(["selftest", "--random", "5"])
        .env(inception_cli::corpus::CORPUS_ENV, dir.path())
        .output()
        .unwrap();
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{text}");
    let line = text.lines().find(|l| l.starts_with("criterion 1 ")).unwrap();
    assert!(line.contains("FAIL") && line.contains("ex35"), "{line}");
    assert!(text.contains("criterion 2 PASS"), "{text}");
}
