use std::io::Write;
use std::process::{Command, Output, Stdio};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

fn pcmtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcmtree"))
        .args(args)
        .env_remove("PCM_TREE_CAP")
        .output()
        .unwrap()
}

fn data(name: &str) -> String {
    format!("{DATA}/{name}")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_prints_tree_indices() {
    let o = pcmtree(&["analyze", &data("ex1.pcm")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("MII 0.11110"), "{out}");
    assert!(out.contains("KII 1.75000"), "{out}");
    assert!(out.contains("spanning trees:    16"), "{out}");
}

#[test]
fn analyze_json_has_stable_keys() {
    let o = pcmtree(&["analyze", "--json", &data("ex8.pcm")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["n", "complete", "tree_count", "mii", "kii", "almost_consistent"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for key in ["ci", "gci", "hci", "k", "gw", "re"] {
        assert!(v["classical"].get(key).is_some(), "missing classical.{key}");
    }
    assert_eq!(v["kii"], 0.0);
    assert_eq!(v["almost_consistent"], true);

    let o = pcmtree(&["analyze", "--json", &data("ex2.pcm")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["complete"], false);
    assert_eq!(v["tree_count"], 3);
    assert!(v.get("classical").is_none());
}

#[test]
fn trees_counts_and_lists() {
    let o = pcmtree(&["trees", &data("ex2.pcm")]);
    assert_eq!(stdout(&o).trim(), "spanning trees: 3");
    let o = pcmtree(&["trees", "--list", &data("ex2.pcm")]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4, "{out}");
    assert_eq!(&lines[1..], ["1-2,1-4,2-3", "1-2,2-3,2-4", "1-4,2-3,2-4"]);
}

#[test]
fn weights_methods() {
    for method in ["evm", "gmm", "east"] {
        let o = pcmtree(&["weights", "--method", method, &data("ex1.pcm")]);
        assert_eq!(o.status.code(), Some(0), "{method}");
    }
    let o = pcmtree(&["weights", "--method", "evm", &data("ex1.pcm")]);
    assert!(stdout(&o).contains("lambda_max 4.677"), "{}", stdout(&o));
}

#[test]
fn validate_reports_nonreciprocal_entries() {
    let o = pcmtree(&["validate", &data("nonreciprocal.pcm")]);
    assert_eq!(o.status.code(), Some(1));
    let all = format!("{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(all.contains("recipro"), "{all}");

    let o = pcmtree(&["validate", &data("ex2.pcm")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn tree_cap_env_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_pcmtree"))
        .args(["analyze", &data("ex1.pcm")])
        .env("PCM_TREE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn reads_stdin_dash() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pcmtree"))
        .args(["analyze", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let text = std::fs::read_to_string(data("ex1.pcm")).unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(o.stdout, pcmtree(&["analyze", &data("ex1.pcm")]).stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pcmtree(&["analyze"]).status.code(), Some(2));
    assert_eq!(pcmtree(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pcmtree(&["simulate", "--threads", "0"]).status.code(), Some(2));
    let help = pcmtree(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("simulate"));
}

#[test]
fn missing_file_is_a_domain_error() {
    let o = pcmtree(&["analyze", &data("does-not-exist.pcm")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["simulate", "--series", "3", "--per-series", "50", "--seed", "7"];
    let a = pcmtree(&args);
    let b = pcmtree(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}
