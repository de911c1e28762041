use std::process::{Command, Output};

use serde_json::Value;

fn befp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_befp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_all_methods_agree() {
    let o = befp(&["compute", "--N", "3", "--m", "1", "--mu", "plus", "--method", "all"]);
    assert!(o.status.success());
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    for v in &lines {
        assert_eq!(v["agree"], true);
        assert_eq!(v["mu"], "+");
        assert!((v["value"]["re"].as_f64().unwrap() - 2.0).abs() < 1e-9);
        assert!(v["max_rel_dev"].as_f64().unwrap() < 1e-9);
        for key in ["N", "m", "method", "exact"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
    assert_eq!(lines[1]["exact"], "2/1 0/1");
    assert_eq!(lines[0]["exact"], Value::Null);
}

#[test]
fn compute_exact_text() {
    let o = befp(&["compute", "--N", "2", "--m", "0", "--mu", "zero", "--method", "product", "--format", "exact-text"]);
    assert_eq!(stdout(&o).trim(), "2/1 1/1");
}

#[test]
fn compute_rejects_bad_cases() {
    let o = befp(&["compute", "--N", "4", "--m", "5", "--mu", "zero"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("m exceeds N"));
    let o = befp(&["compute", "--N", "4", "--m", "1", "--mu", "plus"]);
    assert!(!o.status.success());
    let o = befp(&["compute", "--N", "5", "--m", "2", "--mu", "minus", "--method", "determinant"]);
    assert!(!o.status.success());
}

#[test]
fn compute_befp_determinant_route() {
    let o = befp(&[
        "compute",
        "--N",
        "6",
        "--m",
        "2",
        "--mu",
        "zero",
        "--quantity",
        "befp",
        "--method",
        "all",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("N,m,mu,method,re,im,exact\n"));
    assert!(s.contains(",determinant,"));
    assert_eq!(s.lines().count(), 6);
}

#[test]
fn table_rows() {
    let o = befp(&["table", "--max-N", "6", "--quantity", "befp"]);
    assert!(stdout(&o).lines().any(|l| l == "3,1,+,product,0.6666666666666666,0.0,2/3 0/1"));
    let o = befp(&["table", "--max-N", "2"]);
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("N,m,mu,method,re,im,exact"));
    assert_eq!(s.lines().count() - 1, 7);
    let o = befp(&["table", "--max-N", "0"]);
    assert_eq!(stdout(&o), "N,m,mu,method,re,im,exact\n");
}

#[test]
fn table_json_is_ndjson() {
    let o = befp(&["table", "--max-N", "3", "--format", "json", "--method", "all"]);
    assert!(o.status.success());
    for l in stdout(&o).lines() {
        let v: Value = serde_json::from_str(l).unwrap();
        assert!(v["re"].is_f64() && v["im"].is_f64());
    }
    assert!(!befp(&["table", "--max-N", "14", "--method", "all"]).status.success());
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let run = |t: &str| {
        Command::new(env!("CARGO_BIN_EXE_befp"))
            .args(["table", "--max-N", "9", "--quantity", "befp", "--method", "barnes"])
            .env("BEFP_THREADS", t)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn asymptotics_outputs() {
    let o = befp(&["asymptotics", "--mu", "plus", "--large-m"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let g = v["closed_form"]["g_minus2"].as_f64().unwrap();
    assert!((g - 0.75 * (3f64.ln() - 2.0 * 2f64.ln())).abs() < 1e-15);
    let o = befp(&["asymptotics", "--mu", "zero", "--x", "0.5", "--fit", "--n-max", "2000"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["fitted"]["f_log"].as_f64().unwrap() + 1.0 / 24.0).abs() < 1e-4);
    let o = befp(&["asymptotics", "--mu", "plus", "--x", "1.5"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("domain"));
}

#[test]
fn verify_small_suites() {
    let o = befp(&["verify", "--suite", "qkz", "--max-n", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("summary:") && stdout(&o).contains(" 0 failed"));
    let o = befp(&["verify", "--suite", "barnes", "--seed", "3"]);
    assert!(o.status.success());
}
