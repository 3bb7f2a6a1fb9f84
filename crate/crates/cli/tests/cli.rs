use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn maxqp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxqp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn brute_force_on_bad_triangle() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "triangle.mq", "p maxqp 3 3\ne 1 2 1\ne 2 3 1\ne 1 3 -1\n");
    let out = maxqp(&["solve", s(&tri), "--algo", "brute-force"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(" value=1 "));
}

#[test]
fn exact_tw_on_path_reports_width() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "path3.mq", "p maxqp 3 2\ne 1 2 1\ne 2 3 -1\n");
    let out = maxqp(&["solve", s(&p3), "--algo", "exact-tw"]);
    assert!(stdout(&out).contains("value=2 guarantee=1 width=1"));
}

#[test]
fn gen_solve_eval_round_trip() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("grid6.mq");
    let gen = maxqp(&["gen", "--kind", "grid-spin-glass", "--rows", "6", "--cols", "6", "--seed", "3", "--out", s(&inst)]);
    assert!(gen.status.success());
    let text = fs::read_to_string(&inst).unwrap();
    assert!(text.contains("p maxqp 36 60"));

    let assignment = dir.path().join("x.txt");
    let out = maxqp(&[
        "solve", s(&inst), "--algo", "baker", "--epsilon", "0.5", "--oracle", "exact-tw",
        "--emit-assignment", s(&assignment),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let line = stdout(&out);
    let field = |key: &str| -> f64 {
        line.split_whitespace()
            .find_map(|f| f.strip_prefix(&format!("{key}=")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(field("ratio") >= 0.5);
    let eval = maxqp(&["eval", s(&inst), s(&assignment)]);
    assert_eq!(stdout(&eval).trim().parse::<f64>().unwrap(), field("value"));
}

#[test]
fn gen_is_reproducible() {
    let a = maxqp(&["gen", "--kind", "sparse-random", "--n", "30", "--m", "60", "--weights", "real", "--seed", "9"]);
    let b = maxqp(&["gen", "--kind", "sparse-random", "--n", "30", "--m", "60", "--weights", "real", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn eval_single_edge() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "edge.mq", "p maxqp 2 1\ne 1 2 1\n");
    let x = write(&dir, "x.txt", "+1 +1\n");
    assert_eq!(stdout(&maxqp(&["eval", s(&inst), s(&x)])).trim(), "1");
}

#[test]
fn external_partition_and_decomposition_files() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "pm.mq", "p maxqp 4 2\ne 1 2 1\ne 3 4 -1\n");
    let mut parts = String::from("1 2\n3 4\n");
    parts.push_str(&"\n".repeat(10));
    let part = write(&dir, "pm.part", &parts);
    let out = maxqp(&["solve", s(&inst), "--algo", "partition", "--epsilon", "0.5", "--partition", s(&part)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("value=2 "));

    let td = dir.path().join("pm.td");
    assert!(maxqp(&["decompose", s(&inst), "--out", s(&td)]).status.success());
    let out = maxqp(&["solve", s(&inst), "--algo", "exact-tw", "--decomposition", s(&td)]);
    assert!(stdout(&out).contains("value=2 "));
    let bad = write(&dir, "bad.td", "b 1 1 2\n");
    let out = maxqp(&["solve", s(&inst), "--algo", "exact-tw", "--decomposition", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let loop_ = write(&dir, "loop.mq", "p maxqp 3 1\ne 3 3 5\n");
    assert_eq!(maxqp(&["solve", s(&loop_)]).status.code(), Some(2));
    let garbled = write(&dir, "garbled.mq", "p maxqp 3 1\ne 1 two 5\n");
    let out = maxqp(&["solve", s(&garbled)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let k5 = write(&dir, "k5.mq", "p maxqp 5 10\ne 1 2 1\ne 1 3 1\ne 1 4 1\ne 1 5 1\ne 2 3 1\ne 2 4 1\ne 2 5 1\ne 3 4 1\ne 3 5 1\ne 4 5 1\n");
    assert_eq!(maxqp(&["solve", s(&k5), "--algo", "exact-tw", "--width-cap", "2"]).status.code(), Some(3));
    let missing = dir.path().join("missing.mq");
    assert_eq!(maxqp(&["solve", s(&missing)]).status.code(), Some(4));
}

#[test]
fn bench_csv_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let suite = write(
        &dir,
        "suite.txt",
        "instance kind=grid-spin-glass rows=4 cols=4 seed=1\n\
         instance kind=clique-plus-matching n=16 seed=2\n\
         algo greedy-matching\n\
         algo star-pack\n\
         algo baker epsilon=0.75\n\
         oracle brute-force\n",
    );
    let a = maxqp(&["bench", s(&suite)]);
    let b = maxqp(&["bench", s(&suite)]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance,algo,n,m,value,oracle,ratio,guarantee,millis"));
    for row in lines {
        let cols: Vec<&str> = row.split(',').collect();
        let ratio: f64 = cols[6].parse().unwrap();
        let guarantee: f64 = cols[7].parse().unwrap();
        assert!(ratio >= guarantee - 1e-9, "{row}");
    }
}
