use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use btensor::json::to_json_string;
use btensor::Tensor;
use serde_json::Value;

static COUNTER: AtomicUsize = AtomicUsize::new(0);

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("btensor-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{}-{name}", COUNTER.fetch_add(1, Ordering::Relaxed)));
    fs::write(&path, contents).unwrap();
    path
}

fn tensor_file(name: &str, t: &Tensor) -> PathBuf {
    scratch(name, &to_json_string(t).unwrap())
}

fn btensor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btensor")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|e| {
        panic!("stderr is not JSON ({e}): {}", String::from_utf8_lossy(&o.stderr))
    })
}

fn ones_4_3() -> PathBuf {
    tensor_file("ones.json", &Tensor::from_fn(4, 3, |_| 1.0).unwrap())
}

fn t43() -> Tensor {
    Tensor::from_fn(4, 3, |ix| match ix {
        [0, 0, 0, 0] => 65.0,
        [0, ..] => 64.0,
        [1, 1, 1, 1] => 18.0,
        [1, 0, 0, 1] => 15.0,
        [1, ..] => 16.0,
        [2, 2, 2, 2] => 40.0 / 3.0,
        [2, 0, 0, 2] => 11.0,
        _ => 12.0,
    })
    .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_reports_b_membership() {
    let input = tensor_file("t43.json", &t43());
    let out = btensor(&["classify", path(&input)]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["flags"]["B"], Value::Bool(true));
    assert_eq!(report["flags"]["Z"], Value::Bool(false));
}

#[test]
fn even_symmetric_intervals_of_all_ones() {
    let out = btensor(&["intervals", "--method", "even-sym", path(&ones_4_3())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{\"parts\":[{\"lo\":0,\"hi\":27}]}\n");
}

#[test]
fn gerschgorin_intervals_of_all_ones() {
    let out = btensor(&["intervals", "--method", "gerschgorin", path(&ones_4_3())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{\"parts\":[{\"lo\":-25,\"hi\":27}]}\n");
}

#[test]
fn sparse_input_matches_dense() {
    let sparse = scratch(
        "sparse.json",
        r#"{"order":2,"dim":2,"sparse":[{"idx":[1,1],"val":3},{"idx":[2,2],"val":5},{"idx":[1,2],"val":-1}]}"#,
    );
    let dense = scratch("dense.json", r#"{"order":2,"dim":2,"dense":[3,-1,0,5]}"#);
    let a = btensor(&["intervals", "--method", "z", path(&sparse)]);
    let b = btensor(&["intervals", "--method", "z", path(&dense)]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a), "{\"parts\":[{\"lo\":2,\"hi\":4},{\"lo\":5,\"hi\":5}]}\n");
}

#[test]
fn input_errors_exit_2() {
    let cases = [
        scratch("bad.json", "{not json"),
        scratch("short.json", r#"{"order":2,"dim":2,"dense":[1,2,3]}"#),
        scratch(
            "dup.json",
            r#"{"order":2,"dim":2,"sparse":[{"idx":[1,1],"val":1},{"idx":[1,1],"val":2}]}"#,
        ),
    ];
    for input in &cases {
        let out = btensor(&["classify", path(input)]);
        assert_eq!(out.status.code(), Some(2), "{}", input.display());
        assert!(out.stdout.is_empty());
        let err = stderr_json(&out);
        assert!(err["error"].is_string());
        assert!(err["detail"].is_string());
    }
    let missing = btensor(&["classify", "/nonexistent/tensor.json"]);
    assert_eq!(missing.status.code(), Some(2));
    stderr_json(&missing);
}

#[test]
fn usage_errors_exit_2() {
    let ones = ones_4_3();
    let cases: [&[&str]; 5] = [
        &["transpose", path(&ones)],
        &["intervals", path(&ones)],
        &["intervals", "--method", "spectral", path(&ones)],
        &["classify", "--restarts", "3", path(&ones)],
        &["decompose", "--seed", "1", path(&ones)],
    ];
    for args in cases {
        let out = btensor(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr_json(&out)["detail"].is_string());
    }
}

#[test]
fn precondition_and_class_errors_exit_3() {
    let odd = tensor_file("odd.json", &Tensor::from_fn(3, 2, |_| 1.0).unwrap());
    let asymmetric = tensor_file("t43.json", &t43());
    let ones = ones_4_3();
    let cases: [&[&str]; 5] = [
        &["definiteness", path(&odd)],
        &["definiteness", path(&asymmetric)],
        &["intervals", "--method", "z", path(&ones)],
        &["intervals", "--method", "odd-n2", path(&ones)],
        &["oracle", "--method", "n2", path(&ones)],
    ];
    for args in cases {
        let out = btensor(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        stderr_json(&out);
    }
}

#[test]
fn failed_decomposition_carries_witness() {
    let out = btensor(&["decompose", "--method", "b", path(&ones_4_3())]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "class_violation");
    assert!(err["witness"].is_object());
}

#[test]
fn decomposition_round_trips() {
    let t = t43();
    let out = btensor(&["decompose", path(&tensor_file("t43.json", &t))]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["kind"], "B");
    let b = report["B"]["dense"].as_array().unwrap();
    let c = report["C"]["dense"].as_array().unwrap();
    for ((x, y), a) in b.iter().zip(c).zip(t.entries()) {
        let sum = x.as_f64().unwrap() + y.as_f64().unwrap();
        assert!((sum - a).abs() <= 4.0 * f64::EPSILON * a.abs());
    }
}

#[test]
fn oracle_is_deterministic() {
    let input = tensor_file("t43.json", &t43());
    let args = ["oracle", "--restarts", "8", "--seed", "7", path(&input)];
    let first = btensor(&args);
    let second = btensor(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let pairs: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert!(!pairs.as_array().unwrap().is_empty());
}

#[test]
fn oracle_dimension_two_is_exhaustive() {
    let input = tensor_file("ones2.json", &Tensor::from_fn(4, 2, |_| 1.0).unwrap());
    let out = btensor(&["oracle", path(&input)]);
    assert_eq!(out.status.code(), Some(0));
    let pairs: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let lambdas: Vec<f64> = pairs.as_array().unwrap().iter().map(|p| p["lambda"].as_f64().unwrap()).collect();
    assert!(lambdas.contains(&8.0), "{lambdas:?}");
    assert!(lambdas.iter().all(|&l| l == 0.0 || l == 8.0), "{lambdas:?}");
}

#[test]
fn out_flag_writes_file() {
    let target = scratch("report.json", "");
    let out = btensor(&["intervals", "--method", "even-sym", "--out", path(&target), path(&ones_4_3())]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&target).unwrap(), "{\"parts\":[{\"lo\":0,\"hi\":27}]}\n");
}

#[test]
fn laplacian_report() {
    let input = scratch("graph.json", r#"{"n":4,"m":3,"edges":[[1,2,3],[2,3,4]]}"#);
    let out = btensor(&["laplacian", path(&input)]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["tensor"]["order"], 3);
    assert_eq!(report["tensor"]["dim"], 4);
    assert_eq!(report["bounds"]["lo"], 0);
    assert!(report["z_intervals"]["parts"].is_array());

    let bad = scratch("badgraph.json", r#"{"n":3,"m":3,"edges":[[1,2,9]]}"#);
    assert_eq!(btensor(&["laplacian", path(&bad)]).status.code(), Some(2));
}

#[test]
fn definiteness_verdicts() {
    let identity = Tensor::from_fn(4, 2, |ix| if ix.iter().all(|&i| i == ix[0]) { 1.0 } else { 0.0 }).unwrap();
    let out = btensor(&["definiteness", path(&tensor_file("id.json", &identity))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{\"verdict\":\"positive_definite\",\"method\":\"B_test\"}\n");

    let out = btensor(&["definiteness", path(&ones_4_3())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "{\"verdict\":\"positive_semidefinite\",\"method\":\"interval_lower_bound\",\"bound\":0}\n"
    );
}

#[test]
fn numbers_round_trip() {
    let input = scratch("frac.json", r#"{"order":2,"dim":1,"dense":[0.1]}"#);
    let out = btensor(&["intervals", "--method", "gerschgorin", path(&input)]);
    assert_eq!(stdout(&out), "{\"parts\":[{\"lo\":0.10000000000000001,\"hi\":0.10000000000000001}]}\n");
}
