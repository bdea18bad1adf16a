use std::process::{Command, Output};

use serde_json::Value;

fn compmu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compmu"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = compmu(&all);
    (
        o.status.code().unwrap(),
        serde_json::from_str(&stdout(&o)).expect("valid json"),
    )
}

#[test]
fn mobius_all_methods_agree() {
    let args = [
        "mobius", "--poset", "chain", "--u", "21113", "--w", "2211133", "--method", "all",
    ];
    let o = compmu(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "formula: 2\nrecurrence: 2\nagree\n");
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["values"]["formula"], 2);
    assert_eq!(v["values"]["recurrence"], 2);
    assert_eq!(v["agree"], true);
}

#[test]
fn mobius_antichain() {
    let args = [
        "mobius",
        "--poset",
        "antichain:a,b",
        "--u",
        "abba",
        "--w",
        "aabbbaba",
    ];
    let o = compmu(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("antichain: 2"));
    let (_, v) = json(&args);
    assert_eq!(v["values"]["antichain"], 2);
    assert_eq!(v["values"]["formula"], 2);
}

#[test]
fn lambda_rejects_formula() {
    let o = compmu(&[
        "mobius", "--poset", "lambda", "--u", "a", "--w", "cc", "--method", "formula",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("not a rooted forest"), "{err}");
    assert!(err.contains("-3"));
    let o = compmu(&["mobius", "--poset", "lambda", "--u", "a", "--w", "cc"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "recurrence: -3\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(compmu(&["mobius", "--u", "1"]).status.code(), Some(2));
    assert_eq!(
        compmu(&["mobius", "--poset", "tree", "--u", "1", "--w", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        compmu(&["mobius", "--u", "1x", "--w", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        compmu(&["interval", "--u", "33", "--w", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        compmu(&["critical", "--u", "3", "--w", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        compmu(&["perm", "--s", "21", "--p", "123"]).status.code(),
        Some(2)
    );
    assert_eq!(
        compmu(&["perm", "--s", "1", "--p", "113"]).status.code(),
        Some(2)
    );
    assert_eq!(
        compmu(&["chebyshev", "--max-sum", "20"]).status.code(),
        Some(2)
    );
    assert_eq!(
        compmu(&["verify", "morse", "--poset", "lambda"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn interval_322_3322_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("interval.dot");
    let o = compmu(&[
        "interval",
        "--u",
        "322",
        "--w",
        "3322",
        "--chains",
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("elements: 11\n"));
    assert!(text.contains("chains: 8"));
    assert!(text.contains("C5 [3, 2, 3] 3322 > 3312 > 3212 > 322"));
    let graph = std::fs::read_to_string(&dot).unwrap();
    assert!(graph.starts_with("digraph"));
    assert_eq!(graph.matches("->").count(), 17);

    let (_, v) = json(&["interval", "--u", "322", "--w", "3322", "--chains"]);
    let labels: Vec<Value> = v["chains"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["labels"].clone())
        .collect();
    assert_eq!(labels.len(), 8);
    assert_eq!(labels[7], serde_json::json!([4, 4, 2]));
    assert_eq!(v["elements"].as_array().unwrap().len(), 11);
}

#[test]
fn small_intervals() {
    let (_, v) = json(&["interval", "--u", "2", "--w", "22", "--chains"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 4);
    assert_eq!(v["chains"].as_array().unwrap().len(), 2);
    let (_, v) = json(&["interval", "--u", "21", "--w", "21", "--chains"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 1);
    assert_eq!(v["chains"][0]["labels"], serde_json::json!([]));
}

#[test]
fn critical_table() {
    let o = compmu(&["critical", "--u", "322", "--w", "3322"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("C2\t[2, 2, 2]\t(0,3)\t(0,3)\tyes\t0"));
    assert!(text.contains("C8\t[4, 4, 2]\t(0,2) (1,3)\t(0,2) (1,3)\tyes\t1"));
    assert!(text.contains("euler: 0"));
    let (_, v) = json(&["critical", "--u", "322", "--w", "3322"]);
    assert_eq!(v["euler"], 0);
    assert_eq!(v["chains"][7]["cell"], serde_json::json!(["3321", "332"]));
    assert_eq!(v["critical_counts"]["1"], 1);
}

#[test]
fn morse_verify_passes() {
    let o = compmu(&["morse-verify", "--u", "21", "--w", "3322"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let (code, v) = json(&["morse-verify", "--u", "322", "--w", "3322"]);
    assert_eq!(code, 0);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn verify_sweeps() {
    let o = compmu(&["verify", "formula", "--poset", "chain:4", "--max-len", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));
    let o = compmu(&["verify", "morse", "--max-part", "3", "--max-len", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let (code, v) = json(&[
        "verify",
        "factor-range",
        "--poset",
        "antichain:a,b",
        "--max-len",
        "6",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["sweeps"][0]["failures"], serde_json::json!([]));
    for target in ["involution", "samelength", "layered"] {
        assert_eq!(
            compmu(&["verify", target]).status.code(),
            Some(0),
            "{target}"
        );
    }
}

#[test]
fn chebyshev_grid_output() {
    let o = compmu(&["chebyshev", "--max-sum", "5", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("i,j,mu,coeff,match,recurrence\n"));
    assert!(text.contains("1,2,-3,-3,true,"));
    assert!(text.contains("1,1,-1,-1,true,"));
    let (_, v) = json(&["chebyshev", "--max-sum", "4"]);
    let rows = v["rows"].as_array().unwrap();
    let last = rows.last().unwrap();
    assert_eq!(
        (last["i"].clone(), last["j"].clone(), last["mu"].clone()),
        (2.into(), 2.into(), 1.into())
    );
    assert_eq!(v["all_match"], true);
}

#[test]
fn permutations() {
    let o = compmu(&["perm", "--s", "1", "--p", "31524"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("mu: 6\n"));
    let (_, v) = json(&["perm", "--s", "2413", "--p", "2413"]);
    assert_eq!(v["mu"], 1);
    let (code, v) = json(&["perm", "--s", "21", "--p", "13265478"]);
    assert_eq!(code, 0);
    assert_eq!(v["agree"], true);
    assert_eq!(v["mu"], v["composition_mu"]);
}

#[test]
fn poset_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tree.json");
    std::fs::write(
        &path,
        r#"{"elements":["r","a","b"],"covers":[["r","a"],["r","b"]]}"#,
    )
    .unwrap();
    let spec = format!("file:{}", path.display());
    let o = compmu(&["mobius", "--poset", &spec, "--u", "ra", "--w", "rab"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("agree"));
    let o = compmu(&[
        "mobius",
        "--poset",
        "file:/nonexistent.json",
        "--u",
        "a",
        "--w",
        "a",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
