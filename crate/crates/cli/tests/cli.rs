use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};
use zeromap_cli::{run_json, Options};

fn run(v: Value) -> (Value, i32) {
    let o = run_json(&v.to_string(), &Options::default());
    (o.response, o.exit_code)
}

fn laguerre() -> Value {
    json!({"family": "laguerre", "params": {"alpha0": "0", "beta0": "1"}})
}

fn rational(s: &Value) -> f64 {
    let s = s.as_str().unwrap();
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

#[test]
fn laguerre_transform() {
    let (r, code) = run(json!({"command": "transform", "transform": laguerre(), "input": {"roots": ["1", "2"]}}));
    assert_eq!(code, 0);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["output_coeffs"], json!(["2", "-4", "1"]));
    let ivs = r["root_intervals"].as_array().unwrap();
    assert_eq!(ivs.len(), 2);
    for (iv, root) in ivs.iter().zip([2.0 - 2f64.sqrt(), 2.0 + 2f64.sqrt()]) {
        let (lo, hi) = (rational(&iv[0]), rational(&iv[1]));
        assert!(lo > 0.0 && lo <= root + 1e-12 && root <= hi + 1e-12);
    }
}

#[test]
fn coefficients_input() {
    let (r, _) = run(json!({"command": "transform", "transform": laguerre(), "input": {"coeffs": ["2", "-3", "1"]}}));
    assert_eq!(r["output_coeffs"], json!(["2", "-4", "1"]));
}

#[test]
fn decimal_literals_are_exact() {
    let (r, code) = run(json!({"command": "transform", "transform": laguerre(), "input": {"coeffs": ["-0.5", "1"]}}));
    assert_eq!(code, 0);
    assert_eq!(r["output_coeffs"], json!(["-1/2", "1"]));
    let (r, _) = run(json!({"command": "roots", "input": {"roots": ["0.1"]}}));
    let iv = &r["root_intervals"][0];
    // 0.1 as a binary double is 3602879701896397 / 2^55
    let exact = 3602879701896397.0 / 36028797018963968.0;
    assert!(rational(&iv[0]) <= exact && exact <= rational(&iv[1]));
}

#[test]
fn no_real_roots() {
    let (r, code) = run(json!({"command": "roots", "input": {"coeffs": ["1", "0", "1"]}}));
    assert_eq!(code, 0);
    assert_eq!(r["root_intervals"], json!([]));
}

#[test]
fn wall0_verify_passes() {
    let (r, code) = run(json!({
        "command": "verify",
        "transform": {"family": "wall0", "params": {"delta0": "1", "q": "1/2"}},
        "input": {"count": 40}
    }));
    assert_eq!(code, 0);
    let report = &r["report"];
    assert_eq!(report["all_passed"], true);
    let zero_map: Vec<&Value> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["name"] == "zero_map_property")
        .collect();
    assert_eq!(zero_map.len(), 40);
    assert!(zero_map.iter().all(|c| c["verdict"] == "pass"));
}

#[test]
fn moments_command() {
    let (r, code) = run(json!({
        "command": "moments",
        "transform": {"family": "krawtchouk", "params": {"n": "2", "gamma0": "1"}},
        "input": {"mus": ["1"], "k_max": 3}
    }));
    assert_eq!(code, 0);
    let rows = r["moments"].as_array().unwrap();
    let oracle: Vec<&str> = rows.iter().map(|m| m["oracle"].as_str().unwrap()).collect();
    assert_eq!(oracle, ["1", "1", "1/2", "0"]);
    assert!(rows.iter().all(|m| m["closed"] == m["oracle"]));
}

#[test]
fn identical_requests_identical_bytes() {
    let req = json!({
        "command": "verify",
        "transform": {"family": "meixner", "params": {"beta0": "-3/2", "gamma0": "-2", "schedule": [1, 2]}},
        "input": {"count": 20}
    })
    .to_string();
    let a = run_json(&req, &Options { precision_bits: None, seed: Some(9) }).response.to_string();
    let b = run_json(&req, &Options { precision_bits: None, seed: Some(9) }).response.to_string();
    assert_eq!(a, b);
}

#[test]
fn error_codes() {
    let cases = [
        (json!({"command": "fly"}), "bad_request"),
        (json!({"command": "roots"}), "bad_request"),
        (json!({"command": "roots", "input": {"roots": ["1"], "coeffs": ["1"]}}), "bad_request"),
        (json!({"command": "roots", "input": {"coeffs": ["x"]}}), "bad_request"),
        (json!({"command": "transform", "transform": {"family": "hermite", "params": {}}, "input": {"roots": []}}), "bad_request"),
        (
            json!({"command": "transform", "transform": {"family": "laguerre", "params": {"alpha0": "0", "beta0": "-1"}}, "input": {"roots": ["1"]}}),
            "invalid_params",
        ),
        (
            json!({"command": "transform", "transform": {"family": "krawtchouk", "params": {"n": "1", "gamma0": "1"}}, "input": {"roots": ["1", "2"]}}),
            "invalid_params",
        ),
        (json!({"command": "roots", "input": {"coeffs": ["1"]}, "precision_bits": 16}), "invalid_params"),
    ];
    for (req, code) in cases {
        let (r, exit) = run(req.clone());
        assert_eq!(r["status"], "error", "{req}");
        assert_eq!(r["error"]["code"], code, "{req}: {r}");
        assert_eq!(exit, 1);
    }
}

fn binary(args: &[&str], stdin: &str, env_seed: Option<&str>) -> (String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zeromap"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    match env_seed {
        Some(s) => cmd.env("ZEROMAP_SEED", s),
        None => cmd.env_remove("ZEROMAP_SEED"),
    };
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn binary_reads_stdin_and_sets_exit_codes() {
    let ok = json!({"command": "roots", "input": {"roots": ["1/3", "2"]}}).to_string();
    let (out, code) = binary(&[], &ok, None);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["root_intervals"].as_array().unwrap().len(), 2);

    let (out, code) = binary(&["--format", "pretty"], "not json", None);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["code"], "bad_request");
}

#[test]
fn binary_seed_from_environment() {
    let req = json!({
        "command": "verify",
        "transform": {"family": "wall0", "params": {"delta0": "1", "q": "1/2"}},
        "input": {"count": 5}
    })
    .to_string();
    let (a, _) = binary(&[], &req, Some("17"));
    let (b, _) = binary(&["--seed", "17"], &req, None);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["report"]["seed"], 17);
}
