use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

use ukruskal::orders::FinPoset;
use ukruskal_cli::profile::{DEFAULT, TINY};
use ukruskal_cli::suite::{self, Config};

fn ukruskal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ukruskal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {name}");
}

#[test]
fn validate_builtin() {
    let o = ukruskal(&["validate", "seq:3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("normal = true") && out.contains("monotone = true"));
    golden("validate_seq3.txt", &out);
}

#[test]
fn validate_json() {
    let o = ukruskal(&["validate", "fixture:discrete-unary", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["monotone"], false);
    assert_eq!(v["unary"], true);
    assert!(v["monotone_witness"].as_str().unwrap().contains("token u"));
}

#[test]
fn validate_rigged_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flipped.json");
    let o = ukruskal(&["export", "fixture:flipped-seq3"]);
    assert_eq!(code(&o), 0);
    std::fs::write(&path, stdout(&o)).unwrap();
    let o = ukruskal(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("transitivity")).unwrap();
    assert!(line.contains("FAIL"));
    // the witness is a triple x <= y <= z with x not below z
    assert_eq!(line.matches(" <= ").count(), 3, "{line}");
    assert!(out.contains("valid = false"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"n_max\": 1").unwrap();
    assert_eq!(code(&ukruskal(&["validate", path.to_str().unwrap()])), 2);
    assert_eq!(code(&ukruskal(&["validate", "/nonexistent/dilator.json"])), 2);
    assert_eq!(code(&ukruskal(&["validate", "seq:x"])), 2);
    assert_eq!(code(&ukruskal(&["term", "cmp", "seq:2", "(empty", "(empty:)"])), 2);
    assert_eq!(code(&ukruskal(&["tree", "cmp", "2", "3", "0*(", "0*()"])), 2);
    assert_eq!(code(&ukruskal(&["suite", "--profile", "huge"])), 2);
    assert_eq!(code(&ukruskal(&["no-such-command"])), 2);
}

#[test]
fn export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq2.json");
    let first = stdout(&ukruskal(&["export", "seq:2"]));
    std::fs::write(&path, &first).unwrap();
    let o = ukruskal(&["export", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), first);
    assert_eq!(code(&ukruskal(&["validate", path.to_str().unwrap()])), 0);
}

#[test]
fn term_enum_golden() {
    let o = ukruskal(&["term", "enum", "seq:2", "--height", "1"]);
    assert_eq!(code(&o), 0);
    golden("enum_seq2_h1.txt", &stdout(&o));
    let o = ukruskal(&["term", "enum", "seq:3", "--height", "2"]);
    golden("enum_seq3_h2.txt", &stdout(&o));
    let o = ukruskal(&["term", "enum", "wz:2", "--height", "2"]);
    golden("enum_wz2_h2.txt", &stdout(&o));
    let o = ukruskal(&["term", "enum", "seq:3", "--height", "3", "--max", "10"]);
    assert!(stdout(&o).ends_with("10 terms, truncated\n"));
}

fn enumerated(dilator: &str, height: &str) -> Vec<String> {
    let out = stdout(&ukruskal(&["term", "enum", dilator, "--height", height]));
    out.lines()
        .skip(1)
        .filter_map(|l| l.find('(').map(|i| l[i..].to_string()))
        .collect()
}

#[test]
fn term_cmp() {
    let terms = enumerated("seq:2", "3");
    assert_eq!(terms.len(), 4);
    for t in &terms {
        let o = ukruskal(&["term", "cmp", "seq:2", t, t]);
        assert_eq!(stdout(&o), "EQ\n");
        // the empty sequence lies below every term
        let o = ukruskal(&["term", "cmp", "seq:2", "(empty:)", t]);
        let c = stdout(&o);
        assert!(c == "LT\n" || c == "EQ\n", "{t}: {c}");
    }
    let o = ukruskal(&[
        "term",
        "cmp",
        "seq:3",
        "(2p8.01:(empty:) (1p.0:(empty:)))",
        "(2p8.10:(empty:) (1p.0:(empty:)))",
    ]);
    assert_eq!(stdout(&o), "INC\n");
}

#[test]
fn term_needs_normal_dilator() {
    let o = ukruskal(&["term", "enum", "fixture:reversed-unary"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("not normal"));
}

const F21: &str = "0*(0*() 0*())";
const F22: &str = "0*(0*(0*() 0*()) 0*(0*() 0*()))";

#[test]
fn tree_cmp() {
    assert_eq!(stdout(&ukruskal(&["tree", "cmp", "1", "3", F22, F22])), "EQ\n");
    assert_eq!(stdout(&ukruskal(&["tree", "cmp", "1", "3", F22, F21])), "GT\n");
    assert_eq!(
        stdout(&ukruskal(&["tree", "cmp", "1", "3", F22, F21, "--oracle"])),
        "GT\n"
    );
    assert_eq!(
        stdout(&ukruskal(&["tree", "cmp", "2", "inf", "0*(1*())", "1*(0*())"])),
        "INC\n"
    );
    // outside the universe: a third child, a label beyond m
    assert_eq!(
        code(&ukruskal(&["tree", "cmp", "1", "3", "0*(0*() 0*() 0*())", F21])),
        1
    );
    assert_eq!(code(&ukruskal(&["tree", "cmp", "1", "3", "1*()", F21])), 1);
}

#[test]
fn tree_oracle_agrees_on_corpus() {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", "tree_corpus.txt"]
        .iter()
        .collect();
    let corpus = std::fs::read_to_string(path).unwrap();
    let trees: Vec<&str> = corpus.lines().filter(|l| !l.is_empty()).collect();
    for s in &trees {
        for t in &trees {
            let fast = stdout(&ukruskal(&["tree", "cmp", "2", "3", s, t]));
            let slow = stdout(&ukruskal(&["tree", "cmp", "2", "3", s, t, "--oracle"]));
            assert_eq!(fast, slow, "{s} vs {t}");
        }
    }
}

#[test]
fn map_examples() {
    let o = ukruskal(&["map", "tree-to-fix", "seq:3", "0*()"]);
    assert_eq!(stdout(&o), "(empty:)\n");
    let o = ukruskal(&["map", "delabel", "3", "3", "0*()"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("m < n required"));
    let o = ukruskal(&["map", "delabel", "2", "3", "1*()"]);
    assert_eq!(code(&o), 0);
    // the image of a leaf is built on the two constants
    let o = ukruskal(&["map", "to-prime", "seq:2", "(empty:)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains(":(plus:) (star:))"), "{}", stdout(&o));
    let o = ukruskal(&["map", "wz-iso", "wz:2", "(z1:(z0:(one:)))"]);
    assert_eq!(stdout(&o), "<1, 0>\n");
    let o = ukruskal(&["map", "wz-iso", "wz:2", "1,0"]);
    assert_eq!(stdout(&o), "(z1:(z0:(one:)))\n");
    let o = ukruskal(&["map", "unary-to-seq", "wz:1", "(z0:(one:))"]);
    assert_eq!(stdout(&o), "<1:z0@[0], 0:one@[]>\n");
    let o = ukruskal(&["map", "prod-embed", "prod:2", "antichain:2", "2p0.01@[0,1]"]);
    assert_eq!(stdout(&o), "<0, 1, 2p0.01>\n");
    let o = ukruskal(&["map", "unary-to-seq", "seq:3", "(empty:)"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn map_check_reports_reflection() {
    let o = ukruskal(&[
        "map",
        "fix-to-tree",
        "seq:3",
        "(1p.0:(empty:))",
        "--check",
        "(1p.00:(empty:))",
    ]);
    assert_eq!(code(&o), 0);
    // distinct token labels: reflected, not preserved
    assert!(
        stdout(&o).ends_with("arguments LT, images INC, reflects = true\n"),
        "{}",
        stdout(&o)
    );
    let o = ukruskal(&["map", "tree-to-fix", "seq:3", "0*(0*())", "--check", "0*()"]);
    assert!(stdout(&o).ends_with("arguments GT, images GT, reflects = true\n"));
    let o = ukruskal(&[
        "map",
        "prod-embed",
        "prod:2",
        "antichain:2",
        "2p0.01@[0,1]",
        "--check",
        "2p0.10@[0,1]",
    ]);
    assert!(stdout(&o).ends_with("arguments INC, images INC, reflects = true\n"));
    let o = ukruskal(&["map", "wz-iso", "wz:2", "0", "--check", "1,0"]);
    assert!(stdout(&o).ends_with("arguments LT, images LT, reflects = true\n"));
}

#[test]
fn falsify_commands() {
    let o = ukruskal(&["falsify", "bad", "prod:2", "antichain:2", "--length", "4"]);
    assert_eq!(stdout(&o).lines().next().unwrap().matches('@').count(), 4);
    let o = ukruskal(&["falsify", "bad", "prod:2", "antichain:2", "--length", "5"]);
    assert!(stdout(&o).starts_with("none found"));
    let o = ukruskal(&["falsify", "bad", "seq:3", "chain:3", "--length", "6", "--budget", "2"]);
    assert!(stdout(&o).starts_with("inconclusive"));
    let o = ukruskal(&["falsify", "antichain", "prod:2", "2p0.01", "--length", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("antichain = true\n"));
    let o = ukruskal(&[
        "falsify",
        "antichain",
        "fixture:mixed-variance",
        "2p0.01",
        "--length",
        "3",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("antichain = false"));
    assert_eq!(
        code(&ukruskal(&["falsify", "antichain", "wz:1", "z0", "--length", "3"])),
        1
    );
    for fixture in [
        "fixture:reversed-unary",
        "fixture:discrete-unary",
        "fixture:mixed-variance",
    ] {
        let o = ukruskal(&["falsify", "ladder", fixture, "--length", "5"]);
        assert_eq!(code(&o), 0, "{fixture}");
        assert!(stdout(&o).ends_with("bad = true\n"));
    }
    assert_eq!(code(&ukruskal(&["falsify", "ladder", "seq:3"])), 1);
    let o = ukruskal(&["falsify", "descent", "2", "<1>", "--steps", "4"]);
    assert_eq!(stdout(&o), "<1>\n<0,0,0>\n<0,0>\n<0>\n<>\n4 steps\n");
    let o = ukruskal(&["falsify", "descent", "1", "3", "--steps", "10"]);
    assert_eq!(stdout(&o), "3\n2\n1\n0\n3 steps\n");
}

#[test]
fn outputs_are_deterministic() {
    let runs: [&[&str]; 3] = [
        &["term", "enum", "seq:3", "--height", "3"],
        &["validate", "prime:seq:1", "--format", "json"],
        &["suite", "--profile", "tiny", "--format", "json"],
    ];
    for args in runs {
        assert_eq!(ukruskal(args).stdout, ukruskal(args).stdout, "{args:?}");
    }
}

#[test]
fn suite_tiny_passes_quickly() {
    let start = Instant::now();
    let o = ukruskal(&["suite", "--profile", "tiny", "--format", "json"]);
    assert!(start.elapsed().as_secs() < 30);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let invs = v["invariants"].as_array().unwrap();
    assert!(invs.len() >= 20);
    assert!(invs.iter().all(|i| i["bound"].is_string() && i["passed"] == true));
}

#[test]
fn suite_default_passes() {
    let r = suite::run(&Config::new(DEFAULT));
    assert!(r.passed, "{}", r.text());
}

/// Allows reuse of target entries, so `<0, 0> <= <0>`.
fn sloppy_higman(x: &FinPoset, s: &[usize], t: &[usize]) -> bool {
    s.iter().all(|&a| t.iter().any(|&b| x.le(a, b)))
}

#[test]
fn suite_catches_a_mutated_comparison() {
    let r = suite::run(&Config {
        profile: TINY,
        higman: sloppy_higman,
    });
    assert!(!r.passed);
    let failed: Vec<String> = r.failed().map(|o| format!("{}.{}", o.module, o.name)).collect();
    assert!(failed.contains(&"dilator.oracle-agreement".to_string()), "{failed:?}");
    // invariants that never touch sequences are unaffected
    assert!(!failed
        .iter()
        .any(|f| f.starts_with("trees.") || f.starts_with("orders.")));
}
