use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

/// A scratch directory holding copies of the test data files.
fn workdir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(data_dir()).unwrap() {
        let path = entry.unwrap().path();
        fs::copy(&path, dir.path().join(path.file_name().unwrap())).unwrap();
    }
    dir
}

fn ckrep(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckrep"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Splits a command line on whitespace, honouring double quotes.
fn words(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut quoted = false;
    let mut pending = false;
    for c in line.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                pending = true;
            }
            c if c.is_whitespace() && !quoted => {
                if pending {
                    out.push(std::mem::take(&mut current));
                    pending = false;
                }
            }
            c => {
                current.push(c);
                pending = true;
            }
        }
    }
    if pending {
        out.push(current);
    }
    out
}

#[test]
fn readme_examples_exit_as_documented() {
    let readme =
        fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md")).unwrap();
    let start = readme
        .find("<!-- examples:begin -->")
        .expect("examples block");
    let end = readme
        .find("<!-- examples:end -->")
        .expect("examples block end");
    let dir = workdir();
    let mut ran = 0;
    for line in readme[start..end]
        .lines()
        .filter(|l| l.starts_with("ckrep "))
    {
        let (cmd, expected) = line
            .split_once("# exit")
            .expect("every example states its exit code");
        let expected: i32 = expected.trim().parse().unwrap();
        let args = words(cmd);
        let args: Vec<&str> = args[1..].iter().map(String::as_str).collect();
        let out = ckrep(dir.path(), &args);
        assert_eq!(
            code(&out),
            expected,
            "{line}\nstdout: {}\nstderr: {}",
            stdout(&out),
            stderr(&out)
        );
        ran += 1;
    }
    assert!(ran >= 20, "only {ran} examples found");
}

#[test]
fn classify_odd_sphere_json() {
    let dir = workdir();
    let d = dir.path();
    assert_eq!(
        code(&ckrep(
            d,
            &["graph", "make", "sphere-odd", "--n", "3", "--out", "g.json"]
        )),
        0
    );
    let out = ckrep(d, &["classify", "g.json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["circles"], serde_json::json!(["1", "2", "3"]));
    assert_eq!(v["points"], serde_json::json!([]));
    assert_eq!(v["class"], "loop-graph");
}

#[test]
fn graph_make_writes_dot_with_edge_labels() {
    let dir = workdir();
    let d = dir.path();
    let out = ckrep(
        d,
        &[
            "graph",
            "make",
            "lens",
            "--n",
            "2",
            "--p",
            "3",
            "--weights",
            "1,1",
            "--out",
            "l.json",
            "--dot",
            "l.dot",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let dot = fs::read_to_string(d.join("l.dot")).unwrap();
    assert!(dot.contains("label=\"11@1\""));
    let json = fs::read_to_string(d.join("l.json")).unwrap();
    assert!(json.contains("provenance"));
}

#[test]
fn gcd_violation_is_a_data_error() {
    let dir = workdir();
    let out = ckrep(
        dir.path(),
        &[
            "graph",
            "make",
            "lens",
            "--n",
            "2",
            "--p",
            "4",
            "--weights",
            "2,1",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("gcd(2, 4) = 2"), "{}", stderr(&out));
}

#[test]
fn perturbed_module_reports_per_vertex_residuals() {
    let dir = workdir();
    let out = ckrep(
        dir.path(),
        &[
            "module",
            "check",
            "perturbed.json",
            "--tol",
            "1e-9",
            "--format",
            "json",
        ],
    );
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], false);
    let r1 = v["residuals"]["1"].as_f64().unwrap();
    let r2 = v["residuals"]["2"].as_f64().unwrap();
    assert!(r1 > 1e-3, "{r1}");
    assert!(r2 < 1e-12, "{r2}");
}

#[test]
fn shape_errors_name_the_edge() {
    let dir = workdir();
    let out = ckrep(dir.path(), &["module", "check", "bad_shape.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("/ops/21"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_two() {
    let dir = workdir();
    assert_eq!(
        code(&ckrep(dir.path(), &["graph", "make", "sphere-odd"])),
        2
    );
    assert_eq!(code(&ckrep(dir.path(), &["classify", "missing.json"])), 2);
    assert_eq!(
        code(&ckrep(dir.path(), &["graph", "make", "lens", "--n", "2"])),
        2
    );
}

#[test]
fn lift_build_round_trips_through_json() {
    let dir = workdir();
    let d = dir.path();
    assert_eq!(
        code(&ckrep(
            d,
            &["graph", "make", "sphere-odd", "--n", "2", "--out", "g.json"]
        )),
        0
    );
    assert_eq!(
        code(&ckrep(
            d,
            &["module", "random", "g.json", "--dims", "1,2", "--seed", "3", "--out", "m.json"]
        )),
        0
    );
    assert_eq!(
        code(&ckrep(
            d,
            &["lift", "build", "--module", "m.json", "--level", "2", "--out", "rep.json"]
        )),
        0
    );
    let text = fs::read_to_string(d.join("rep.json")).unwrap();
    let back = ckrep::codec::lift_from_json(&text).unwrap();
    assert_eq!(back.level(), 2);
    assert_eq!(back.dim(0), 3);
}

#[test]
fn lift_eigen_reports_conjugate_phase() {
    let dir = workdir();
    let d = dir.path();
    assert_eq!(
        code(&ckrep(
            d,
            &["graph", "make", "sphere-odd", "--n", "2", "--out", "g.json"]
        )),
        0
    );
    assert_eq!(
        code(&ckrep(
            d,
            &[
                "spectrum", "module", "g.json", "--vertex", "2", "--z", "0.6+0.8i", "--out",
                "s.json"
            ]
        )),
        0
    );
    let out = ckrep(
        d,
        &[
            "lift", "eigen", "--module", "s.json", "--vertex", "2", "--level", "3", "--format",
            "json",
        ],
    );
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let (re, im) = (
        v["eigenvalue"][0].as_f64().unwrap(),
        v["eigenvalue"][1].as_f64().unwrap(),
    );
    assert!((re - 0.6).abs() < 1e-12 && (im + 0.8).abs() < 1e-12);
}

#[test]
fn outputs_are_deterministic() {
    let dir = workdir();
    let d = dir.path();
    assert_eq!(
        code(&ckrep(
            d,
            &["graph", "make", "sphere-odd", "--n", "3", "--out", "g.json"]
        )),
        0
    );
    let args = [
        "module", "random", "g.json", "--dims", "2,2,1", "--seed", "11",
    ];
    assert_eq!(stdout(&ckrep(d, &args)), stdout(&ckrep(d, &args)));
    let a = stdout(&ckrep(
        d,
        &[
            "graph",
            "make",
            "lens",
            "--n",
            "3",
            "--p",
            "4",
            "--weights",
            "1,3,1",
        ],
    ));
    let b = stdout(&ckrep(
        d,
        &[
            "graph",
            "make",
            "lens",
            "--n",
            "3",
            "--p",
            "4",
            "--weights",
            "1,3,1",
        ],
    ));
    assert_eq!(a, b);
}
