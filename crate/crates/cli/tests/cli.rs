use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypermatch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn bounds_eval_g_json() {
    let o = run(&["bounds", "eval", "--formula", "g", "--k", "12", "--d", "5", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["coefficient"]["num"], "2911999");
    assert_eq!(v["coefficient"]["den"], "5971968");
    assert_eq!(v["lt_half"], true);
    assert_eq!(v["formula_id"], "G_KD");
}

#[test]
fn construct_piped_into_solve() {
    let g = run(&["construct", "--kind", "G", "--n", "9", "--k", "3", "--s", "2"]);
    assert!(g.status.success());
    let text = stdout(&g);
    assert!(text.starts_with("9 3\n"));
    let pm = run_stdin(&["solve", "--mode", "pm"], &text);
    assert!(pm.status.success());
    assert_eq!(stdout(&pm).trim(), "false");
    let nu = run_stdin(&["solve", "--mode", "nu"], &text);
    assert_eq!(stdout(&nu).trim(), "2");
}

#[test]
fn threshold_m0() {
    let o = run(&["threshold", "--kind", "m0", "--n", "6", "--k", "2", "--s", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "6");
}

#[test]
fn threshold_md_json_and_witness_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    let o = run(&[
        "threshold",
        "--kind",
        "md",
        "--n",
        "6",
        "--k",
        "3",
        "--d",
        "1",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["value"], 6);
    assert_eq!(v["budget"]["status"], "within");
    assert_eq!(v["witness_files"][0], path.to_str().unwrap());
    let text = std::fs::read_to_string(&path).unwrap();
    let pm = run_stdin(&["solve", "--mode", "pm"], &text);
    assert_eq!(stdout(&pm).trim(), "false");
}

#[test]
fn solve_fractional_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fano.txt");
    std::fs::write(&path, "7 3\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n2 4 5\n").unwrap();
    let o = run(&["solve", "--input", path.to_str().unwrap(), "--mode", "frac", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["value"]["num"], "7");
    assert_eq!(v["value"]["den"], "3");
    assert_eq!(v["certificate"]["value"], v["value"]);
    assert_eq!(v["certificate"]["potentials"].as_array().unwrap().len(), 7);
    let pfm = run(&["solve", "--input", path.to_str().unwrap(), "--mode", "pfm"]);
    assert_eq!(stdout(&pfm).trim(), "true");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--mode", "nu", "--nope"]).status.code(), Some(2));
    assert_eq!(
        run(&["threshold", "--kind", "md", "--n", "7", "--k", "3", "--d", "1"])
            .status
            .code(),
        Some(2)
    );
    let bad = run_stdin(&["solve", "--mode", "nu"], "4 2\n0 1\n0 1\n");
    assert_eq!(bad.status.code(), Some(2));
    let limited = bin()
        .args(["emc", "search", "--n", "9", "--k", "3", "--s", "2", "--stable"])
        .env("HM_BUDGET_NODES", "10")
        .output()
        .unwrap();
    assert_eq!(limited.status.code(), Some(3));
    let capped = run(&[
        "emc",
        "search",
        "--n",
        "9",
        "--k",
        "3",
        "--s",
        "2",
        "--stable",
        "--cap-nodes",
        "10",
        "--json",
    ]);
    assert_eq!(capped.status.code(), Some(3));
    assert_eq!(json(&capped)["error"]["kind"], "resource_limit");
}

#[test]
fn json_is_deterministic() {
    let args = [
        "verify",
        "--profile",
        "quick",
        "--only",
        "AC-7",
        "--seed",
        "11",
        "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).get("wall_ms").is_none());
    let timed = run(&["bounds", "compare", "--k", "6", "--d", "1", "--json", "--timed"]);
    assert!(json(&timed)["wall_ms"].is_u64());
}

#[test]
fn threads_do_not_change_results() {
    let one = run(&[
        "emc", "search", "--n", "7", "--k", "3", "--s", "1", "--stable", "--json",
    ]);
    let four = run(&[
        "emc",
        "search",
        "--n",
        "7",
        "--k",
        "3",
        "--s",
        "1",
        "--stable",
        "--json",
        "--threads",
        "4",
    ]);
    let (mut a, mut b) = (json(&one), json(&four));
    assert_eq!(a["value"], 15);
    a["threads"] = Value::Null;
    b["threads"] = Value::Null;
    a["command"] = Value::Null;
    b["command"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn emc_shadow_and_nested_inequality() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("f.txt");
    std::fs::write(&single, "5 3\n0 1 2\n0 1 3\n").unwrap();
    let o = run(&["emc", "verify-shadow", "--input", single.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["holds"], true);
    assert_eq!(v["shadow_size"], 5);

    let multi = dir.path().join("seq.txt");
    std::fs::write(&multi, "6 2\n0 1\n0 2\n%\n6 2\n0 1\n%\n6 2\n").unwrap();
    let o = run(&[
        "emc",
        "check-nested",
        "--input",
        multi.to_str().unwrap(),
        "--beta",
        "1/2",
        "--json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["holds"], true);
    assert_eq!(v["t"], 3);
    let alias = run(&["emc", "check-t31", "--input", multi.to_str().unwrap()]);
    assert!(stdout(&alias).starts_with("holds"));
}

#[test]
fn bounds_table_rows() {
    let o = run(&["bounds", "table", "--k-range", "3..8", "--d-rule", "all", "--json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["rows"].as_array().unwrap().len(), 36);
    let text = run(&["bounds", "table", "--k-range", "5-5", "--d-rule", "fixed:2"]);
    assert_eq!(stdout(&text).lines().count(), 4);
    assert_eq!(run(&["bounds", "table", "--k-range", "9..3"]).status.code(), Some(2));
}

#[test]
fn verify_exit_code_tracks_result() {
    for id in ["AC-1", "AC-10"] {
        let o = run(&["verify", "--only", id, "--json"]);
        let passed = json(&o)["results"][0]["passed"].as_bool().unwrap();
        assert_eq!(o.status.success(), passed);
        assert!(passed);
    }
    assert_eq!(run(&["verify", "--profile", "slow"]).status.code(), Some(2));
}

#[test]
fn replay_text() {
    let o = run(&["replay", "--n", "120", "--k", "5", "--d", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("s = 22, alpha = 5/3"));
    assert!(!text.contains("FAIL"));
}
