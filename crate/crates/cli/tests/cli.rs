use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn branchspan(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_branchspan"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(|v| v.trim().to_string()))
        .unwrap_or_else(|| panic!("no `{key}` in output:\n{text}"))
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const C6: &str = "p 6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n";
const NET: &str = "p 6 6\n0 1\n1 2\n2 0\n0 3\n1 4\n2 5\n";
const CLAW: &str = "p 4 3\n0 1\n0 2\n0 3\n";
// A tree with four branch vertices: nothing to exchange.
const SPIDERS: &str = "p 10 9\n0 1\n1 2\n2 3\n0 4\n0 5\n1 6\n2 7\n3 8\n3 9\n";

#[test]
fn solve_cycle_gives_path() {
    let out = branchspan(&["solve"], C6);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "status "), "Solved");
    assert_eq!(field(&text, "branch_vertices "), "0");
    assert!(text.contains("t 6\n"));
}

#[test]
fn solve_reads_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.txt");
    fs::write(&path, NET).unwrap();
    let out = branchspan(&["solve", "--trace", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&stdout(&out), "branch_vertices "), "1");
}

#[test]
fn solve_json_reports_tree() {
    let out = branchspan(&["solve", "--json"], NET);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["status"], "Solved");
    assert_eq!(doc["branch_vertices"], 1);
    assert_eq!(doc["tree"].as_array().unwrap().len(), 5);
}

#[test]
fn disconnected_input_fails() {
    let out = branchspan(&["solve"], "p 4 2\n0 1\n2 3\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disconnected"));
}

#[test]
fn malformed_input_fails() {
    let out = branchspan(&["solve"], "p 3 1\n0 7\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn stall_exits_two_with_certificate() {
    let out = branchspan(&["solve"], SPIDERS);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert_eq!(field(&text, "status "), "Stalled");
    assert!(text.contains("certificate "));
    assert!(text.contains("region "));
}

#[test]
fn oracle_flag_resolves_stall() {
    let out = branchspan(&["solve", "--oracle"], SPIDERS);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&stdout(&out), "status "), "OracleSolved");
}

#[test]
fn verify_cycle_is_vacuous() {
    let out = branchspan(&["verify", "--theorem", "t14"], C6);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["hypothesis"]["vacuous"], true);
    assert_eq!(doc["conclusion"], true);
}

#[test]
fn verify_claw_fails_hypothesis() {
    let out = branchspan(&["verify", "--theorem", "t15"], CLAW);
    let doc = json(&out);
    assert_eq!(doc["hypothesis"]["claw_free"], false);
    assert_eq!(doc["hypothesis"]["satisfied"], false);
}

#[test]
fn verify_net_under_sigma6() {
    let out = branchspan(&["verify", "--theorem", "t15"], NET);
    let doc = json(&out);
    assert_eq!(doc["hypothesis"]["satisfied"], true);
    assert_eq!(doc["conclusion"], true);
}

#[test]
fn bad_theorem_is_rejected() {
    let out = branchspan(&["verify", "--theorem", "conj:0"], C6);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_line_of_k4_is_octahedron() {
    let a = branchspan(&["gen", "line:K4"], "");
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert!(text.starts_with("p 6 12\n"));
    let mut deg = [0usize; 6];
    for line in text.lines().skip(1) {
        for v in line.split_whitespace() {
            deg[v.parse::<usize>().unwrap()] += 1;
        }
    }
    assert_eq!(deg, [4; 6]);
    assert_eq!(stdout(&branchspan(&["gen", "line:K4"], "")), text);
}

#[test]
fn gen_seed_override_is_deterministic() {
    let a = stdout(&branchspan(&["gen", "repair:9:0.3:1", "--seed", "42"], ""));
    let b = stdout(&branchspan(&["gen", "repair:9:0.3:42"], ""));
    assert_eq!(a, b);
    let solved = branchspan(&["solve"], &a);
    assert_eq!(solved.status.code(), Some(0));
}

#[test]
fn gen_rejects_unknown_strategy() {
    let out = branchspan(&["gen", "bogus:8:0.2:1"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(branchspan(&["--help"], "").status.code(), Some(0));
    assert_eq!(branchspan(&["--frobnicate"], "").status.code(), Some(1));
}

#[test]
fn campaign_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{"theorem":"t15","instances":12,"master_seed":5,"strategies":["LineGraph","ClawRepair"],
            "n_min":5,"n_max":9,"p_min":0.0,"p_max":0.4}"#,
    )
    .unwrap();
    let out_path = dir.path().join("report.json");
    let run = || {
        let out = branchspan(
            &["campaign", config.to_str().unwrap(), "--out", out_path.to_str().unwrap()],
            "",
        );
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(dir.path().join("report.meta.json").exists());
        fs::read_to_string(&out_path).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a, b);
    let report: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(report["instance_count"], 12);
    assert!(report["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn campaign_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    fs::write(&config, r#"{"theorem":"t14","instances":1,"bogus":3}"#).unwrap();
    let out = branchspan(&["campaign", config.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(1));
}
