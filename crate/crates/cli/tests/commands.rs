//! End-to-end runs of the `rmm` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use rmm_core::oracle::gen_balanced;
use rmm_core::{OrdinalTree, StaticRmm};
use tempfile::TempDir;

fn rmm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmm"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, contents: impl AsRef<[u8]>) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn validate_reports_balanced_input() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "ref.txt", "(()(()\n()))\n");
    let o = rmm(&["validate", &f]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["balanced"], true);
    assert_eq!(v["nodes"], 5);
    assert_eq!(v["max_depth"], 3);
    assert_eq!(v["length"], 10);
}

#[test]
fn validate_rejects_unbalanced_empty_and_missing() {
    let d = TempDir::new().unwrap();
    let o = rmm(&["validate", &file(&d, "bad.txt", "())(")]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["first_violation"], 2);

    let o = rmm(&["validate", &file(&d, "empty.txt", "")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));

    let o = rmm(&["validate", &file(&d, "junk.txt", "(x)")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 1"));

    let o = rmm(&["validate", d.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn build_is_deterministic_and_validates() {
    let d = TempDir::new().unwrap();
    let input = file(&d, "ref.txt", "1101101000");
    let (a, b) = (d.path().join("a.rmmt"), d.path().join("b.rmmt"));
    for out in [&a, &b] {
        let o = rmm(&["build", &input, "-o", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(v["bits_per_node"].as_f64().unwrap() > 0.0);
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(&bytes[..4], b"RMMT");
    assert_eq!((bytes.len() - 21) % 8, 0);
    let o = rmm(&["validate", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn build_rejects_bad_config() {
    let d = TempDir::new().unwrap();
    let input = file(&d, "ref.txt", "(())");
    let out = d.path().join("x.rmmt");
    let o = rmm(&[
        "build",
        &input,
        "-o",
        out.to_str().unwrap(),
        "--chunk-bits",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
    assert_eq!(rmm(&["build", &input]).status.code(), Some(1));
}

#[test]
fn query_prints_one_line_per_query() {
    let d = TempDir::new().unwrap();
    let s = file(&d, "ref.txt", "(()(()()))");
    let q = file(
        &d,
        "q.txt",
        "findclose 3\n# comment\nparent 0\n\nlca 4 6\nrmqi 1 8\nchild 3 9\nin_select 2\n",
    );
    let o = rmm(&["query", &s, &q]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[..4], ["8", "ERR no parent", "3", "2 1"]);
    assert!(lines[4].starts_with("ERR "));
    assert_eq!(lines[5], "3");
}

#[test]
fn query_rejects_unknown_operations_before_running() {
    let d = TempDir::new().unwrap();
    let s = file(&d, "ref.txt", "(())");
    let q = file(&d, "q.txt", "findclose 0\nwiggle 1\n");
    let o = rmm(&["query", &s, &q]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn query_results_match_the_library() {
    let d = TempDir::new().unwrap();
    let bits = gen_balanced(2000, 7);
    let s = file(&d, "t.txt", bits.to_paren_string());
    let rmmt = d.path().join("t.rmmt");
    rmm(&[
        "build",
        &s,
        "-o",
        rmmt.to_str().unwrap(),
        "--chunk-bits",
        "64",
        "--arity",
        "4",
    ]);
    let st = StaticRmm::from_bytes(&std::fs::read(&rmmt).unwrap()).unwrap();
    let t = OrdinalTree::new(&st).unwrap();
    let nodes: Vec<usize> = (1..=300).map(|q| t.pre_select(q * 6).unwrap()).collect();
    let script: String = nodes
        .iter()
        .map(|v| format!("find_close {v}\ndepth {v}\nlca {v} {}\n", nodes[0]))
        .collect();
    let o = rmm(&["query", rmmt.to_str().unwrap(), &file(&d, "q.txt", script)]);
    let expect: String = nodes
        .iter()
        .map(|&v| {
            let lca = t.lca(v, nodes[0]).unwrap().unwrap();
            format!(
                "{}\n{}\n{lca}\n",
                t.find_close(v).unwrap(),
                t.depth(v).unwrap()
            )
        })
        .collect();
    assert_eq!(stdout(&o), expect);
}

#[test]
fn bench_writes_csv_rows() {
    let d = TempDir::new().unwrap();
    let s = file(&d, "t.txt", gen_balanced(3000, 1).to_paren_string());
    let o = rmm(&["bench", &s, "--ops", "findclose,lca", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "op,n,samples,p50_ns,p99_ns");
    assert!(lines[1].starts_with("find_close,3000,200,"));
    assert!(lines[2].starts_with("lca,3000,200,"));

    let o = rmm(&[
        "bench",
        &s,
        "--ops",
        "rank1",
        "--samples",
        "100",
        "--dynamic",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let names: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(names, ["insert_pair", "delete_node", "rank1"]);

    assert_eq!(rmm(&["bench", &s, "--ops", "nope"]).status.code(), Some(1));
}
