use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

const TWO_ELLIPTIC: &str = r#"{"vertices":[{"genus":1},{"genus":1}],"half_edges":[{"vertex":0},{"vertex":1}],"involution":[1,0]}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prymgraph"))
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

fn temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("prymgraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn simple_queries() {
    let o = run(&["bounds", "--genus", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "12");
    let o = run(&["modforms", "--level", "gamma1-2", "--weight", "8"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = run(&["modforms", "--level", "sl2z", "--what", "first-weight"]);
    assert_eq!(stdout(&o).trim(), "12");
    let o = run(&["modforms", "--level", "gamma1-2", "--what", "eichler-shimura", "--weight", "10"]);
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn covers_from_stdin_and_file_agree() {
    let a = run_stdin(&["--format", "json", "enumerate-covers", "-"], TWO_ELLIPTIC);
    assert!(a.status.success());
    let path = temp("base.json", TWO_ELLIPTIC);
    let b = run(&["--format", "json", "enumerate-covers", path.to_str().unwrap()]);
    assert_eq!(stdout(&a), stdout(&b));
    let list: Vec<serde_json::Value> = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(list.len(), 3);
    let table = run(&["enumerate-covers", path.to_str().unwrap()]);
    assert!(stdout(&table).trim_end().ends_with("3 structures"));
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "enumerate-strata", "--genus", "2", "--legs", "1", "--max-codim", "2"];
    let first = stdout(&run(&args));
    let again = stdout(&run(&["--jobs", "2", "--format", "json", "enumerate-strata", "--genus", "2", "--legs", "1", "--max-codim", "2"]));
    assert_eq!(first, again);
    let list: Vec<serde_json::Value> = serde_json::from_str(&first).unwrap();
    assert!(list.len() > 6);
}

#[test]
fn gluing_round_trips_through_other_commands() {
    let o = run(&["--format", "json", "build-gluing", "--kind", "1", "--g", "2", "--i", "1", "--r1", "1", "--r2", "1"]);
    assert!(o.status.success());
    let path = temp("phi.json", &stdout(&o));
    let p = path.to_str().unwrap();
    assert!(run(&["validate-prym", p]).status.success());
    assert!(run(&["validate-harmonic", p]).status.success());
    let nb = run(&["normal-bundle", p]);
    assert!(stdout(&nb).starts_with("-psi_"));
    let pb = run(&["--format", "latex", "pullback", p, p]);
    assert!(pb.status.success());
    assert!(stdout(&pb).contains("\\chi_{"));
    let sp = run(&["--format", "json", "specialize", p, "--max-extra", "1"]);
    let list: Vec<serde_json::Value> = serde_json::from_str(&stdout(&sp)).unwrap();
    assert!(list.len() > 1);
}

#[test]
fn exit_codes() {
    let bad = temp("bad.json", "{\"vertices\": [\n  {\"genus\": 1},\n");
    let o = run(&["validate-graph", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid JSON at line"));

    let loose = r#"{"vertices":[{"genus":1},{"genus":1}],"half_edges":[{"vertex":0},{"vertex":1}],"involution":[0,1]}"#;
    let o = run_stdin(&["validate-graph", "-"], loose);
    assert_eq!(o.status.code(), Some(1));

    let o = run_stdin(&["validate-graph", "-"], TWO_ELLIPTIC);
    assert_eq!(o.status.code(), Some(0));

    assert_eq!(run(&["bounds", "--genus", "0"]).status.code(), Some(2));
    assert_eq!(run(&["modforms", "--level", "sl2z", "--weight", "3"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["validate-graph", "/nonexistent/graph.json"]).status.code(), Some(2));
}

#[test]
fn repro_passes() {
    let o = run(&["repro"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
    assert!(!text.contains("FAIL"));
}
