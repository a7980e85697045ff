mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::fixtures;

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_congruence-kit")).args(args).env_remove("CONGRUENCE_KIT_MIRROR").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fx(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Copy of the fixtures with `from` replaced by `to` in `file`.
fn tampered(dir: &Path, file: &str, from: &str, to: &str) -> PathBuf {
    let out = dir.join("fixtures");
    std::fs::create_dir_all(out.join("mirror")).unwrap();
    for e in std::fs::read_dir(fixtures()).unwrap().chain(std::fs::read_dir(fixtures().join("mirror")).unwrap()) {
        let e = e.unwrap();
        if e.file_type().unwrap().is_file() {
            let rel = e.path().strip_prefix(fixtures()).unwrap().to_path_buf();
            std::fs::copy(e.path(), out.join(rel)).unwrap();
        }
    }
    let text = std::fs::read_to_string(out.join(file)).unwrap();
    assert!(text.contains(from));
    std::fs::write(out.join(file), text.replacen(from, to, 1)).unwrap();
    out
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&kit(&[])), 2);
    assert_eq!(code(&kit(&["primes"])), 2);
    assert_eq!(code(&kit(&["genus", "--seed", "builtin:nonesuch"])), 2);
    let o = kit(&["verify", "--left", &fx("f79.tbl"), "--right", &fx("h79.tbl"), "--residue", "mod7"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn io_and_format_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = kit(&["verify", "--left", "/nonexistent/f.tbl", "--right", &fx("h79.tbl")]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("/nonexistent/f.tbl"));
    let bad = dir.path().join("bad.tbl");
    std::fs::write(&bad, "form: x weight 2,2 level 79\nprime 4:0:2 ev 1\n").unwrap();
    let o = kit(&["verify", "--left", s(&bad), "--right", &fx("h79.tbl")]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let cfg = dir.path().join("kit.conf");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(code(&kit(&["--config", s(&cfg), "sturm"])), 3);
}

#[test]
fn tampered_table_names_the_failing_prime() {
    let dir = tempfile::tempdir().unwrap();
    let fix = tampered(dir.path(), "f79.tbl", "prime 11:1:-3 ev 0 0", "prime 11:1:-3 ev 1 0");
    let o = kit(&["verify", "--left", s(&fix.join("f79.tbl")), "--right", &fx("h79.tbl"), "--exclude", "sqrt5"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("11:1:-3"), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("verdict: fail"));
}

#[test]
fn certificates_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for (r, threads) in [(&a, "1"), (&b, "3")] {
        let o = kit(&["--threads", threads, "verify", "--left", &fx("h79.tbl"), "--right", &fx("g79.tbl"), "--exclude", "sqrt5", "--twist", "--report", s(r)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn genus_and_hecke_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for threads in ["1", "2", "4"] {
        let g = dir.path().join(format!("g{threads}.json"));
        let h = dir.path().join(format!("h{threads}.json"));
        assert_eq!(code(&kit(&["--threads", threads, "genus", "--seed", "builtin:q79", "--out", s(&g)])), 0);
        assert_eq!(code(&kit(&["--threads", threads, "hecke", "--genus", s(&g), "--p", "3", "--out", s(&h)])), 0);
        outs.push((std::fs::read(&g).unwrap(), std::fs::read(&h).unwrap()));
    }
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
    let o = kit(&["--json", "genus", "--seed", "q79"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class_count"], 9);
}

#[test]
fn json_and_text_output() {
    let o = kit(&["--json", "primes", "--ell", "5", "--exclude", "sqrt5"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 1313);
    assert_eq!(v["trace_bound"], 97);
    let o = kit(&["sturm"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("l = 5: bound 96") && text.contains("l = 2: bound 144"), "{text}");
}

#[test]
fn config_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("kit.conf");
    std::fs::write(&cfg, format!("threads = 2\nfixtures = {}\n", fixtures().display())).unwrap();
    let primes = dir.path().join("p.json");
    assert_eq!(code(&kit(&["--config", s(&cfg), "primes", "--trace-bound", "145", "--out", s(&primes)])), 0);
    let o = kit(&["--config", s(&cfg), "curve", "--f", &fx("f79.tbl"), "--primes", s(&primes)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = kit(&["--config", s(&cfg), "curve", "--f", &fx("f79.tbl"), "--primes", s(&primes), "--label", "2.2.5.1-79.1-z9"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn pipeline_is_deterministic_and_reports_failures() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let o = kit(&["--threads", "1", "pipeline", "--out", s(&a)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = kit(&["--threads", "2", "pipeline", "--out", s(&b)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 15);
    for n in &names {
        assert_eq!(std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap(), "{n:?}");
    }

    // a broken h79 value at a prime of norm 11 fails the main certificate
    let fix = tampered(dir.path(), "h79.tbl", "prime 11:1:-3 ev 63 24 331/8 157/8 -15/4 -13/8", "prime 11:1:-3 ev 1 0 0 0 0 0");
    let c = dir.path().join("c");
    let genus = a.join("genus.json");
    let o = kit(&["pipeline", "--out", s(&c), "--fixtures", s(&fix), "--genus", s(&genus), "--scalar-primes", "2,3"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(stderr(&o).contains("main") && stderr(&o).contains("11:1:-3"), "{}", stderr(&o));
    let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(c.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], false);
}
