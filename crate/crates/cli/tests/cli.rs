use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const SPREAD: &str =
    r#"{"family": "desarguesian_spread", "p": 2, "k": 2, "m": 3, "modulus_k": [1, 1, 1]}"#;
const SMALL_SPREAD: &str =
    r#"{"family": "desarguesian_spread", "p": 2, "k": 2, "m": 2, "modulus_k": [1, 1, 1]}"#;
const ORBIT: &str = r#"{"family": "cyclic_orbit", "p": 2, "n": 4, "modulus_n": [1, 1, 0, 0, 1],
    "initial_point": [[1, 0, 0, 0], [0, 1, 1, 0]], "kind": "primitive"}"#;
const UNION: &str = r#"{"family": "orbit_union", "p": 2, "n": 4, "modulus_n": [1, 1, 0, 0, 1],
    "initials": [[[1, 0, 0, 0], [0, 1, 0, 0]], [[1, 0, 0, 0], [0, 0, 1, 0]]]}"#;
const ISOMETRY: &str = r#"{"A": [[1, 0, 0, 0], [0, 1, 1, 0], [1, 1, 0, 0], [0, 1, 0, 1]]}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, contents).unwrap();
        path
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subspace-codes"))
        .args(args)
        .output()
        .unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_subspace-codes"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Matrix rows of an output, skipping comment lines.
fn body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

fn error_json(out: &Output) -> serde_json::Value {
    assert_eq!(out.status.code(), Some(1));
    serde_json::from_slice(&out.stderr).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn encode_and_retrieve_spread_message() {
    let ws = Workspace::new();
    let code = ws.file("spread.json", SPREAD);
    let out = ok(&run(&[
        "encode",
        "--code",
        path(&code),
        "--convention",
        "adhoc",
        "--message",
        "14",
    ]));
    assert!(out.starts_with("# convention: adhoc\n"));
    assert_eq!(body(&out), "1 0 1 0 0 1\n0 1 0 1 1 1\n");
    let word = ws.file("word.txt", &body(&out));
    let back = ok(&run(&[
        "retrieve",
        "--code",
        path(&code),
        "--convention",
        "adhoc",
        "--codeword",
        path(&word),
    ]));
    assert_eq!(body(&back).trim(), "14");
}

#[test]
fn retrieve_reads_stdin() {
    let ws = Workspace::new();
    let code = ws.file("spread.json", SPREAD);
    for conv in ["adhoc", "enum"] {
        let word = body(&ok(&run(&[
            "encode",
            "--code",
            path(&code),
            "--convention",
            conv,
            "--message",
            "18",
        ])));
        let back = ok(&run_stdin(
            &[
                "retrieve",
                "--code",
                path(&code),
                "--convention",
                conv,
                "--codeword",
                "-",
            ],
            &word,
        ));
        assert_eq!(body(&back).trim(), "18");
    }
}

#[test]
fn spread_commands_require_a_convention() {
    let ws = Workspace::new();
    let code = ws.file("spread.json", SPREAD);
    let err = error_json(&run(&["encode", "--code", path(&code), "--message", "1"]));
    assert_eq!(err["error"], "usage");
}

#[test]
fn out_of_range_message_is_a_json_error() {
    let ws = Workspace::new();
    let code = ws.file("spread.json", SPREAD);
    let out = run(&[
        "encode",
        "--code",
        path(&code),
        "--convention",
        "enum",
        "--message",
        "21",
    ]);
    assert!(out.stdout.is_empty());
    let err = error_json(&out);
    assert_eq!(err["error"], "message_out_of_range");
}

#[test]
fn construct_lists_the_spread() {
    let ws = Workspace::new();
    let code = ws.file("spread.json", SMALL_SPREAD);
    let out = ok(&run(&[
        "construct",
        "--code",
        path(&code),
        "--convention",
        "adhoc",
    ]));
    assert_eq!(
        body(&out).lines().filter(|l| !l.trim().is_empty()).count(),
        10
    );
    assert!(out.contains("1 0 0 1\n0 1 1 1\n"));
}

#[test]
fn union_messages_name_their_orbit() {
    let ws = Workspace::new();
    let code = ws.file("union.json", UNION);
    let out = ok(&run(&["encode", "--code", path(&code), "--message", "22"]));
    assert!(out.contains("# orbit: 2\n"));
    assert!(out.contains("# generator_order: 15 = 3 * 5\n"));
    assert_eq!(body(&out), "1 0 0 0\n0 1 0 1\n");
    let word = ws.file("word.txt", &body(&out));
    let back = ok(&run(&[
        "retrieve",
        "--code",
        path(&code),
        "--codeword",
        path(&word),
    ]));
    assert_eq!(body(&back).trim(), "22");
    // alpha^3 + alpha + 1 = alpha^7 as a generator power in orbit 2
    let power = ws.file("power.txt", "1 1 0 1\n1 0 1 0\n0 1 0 1\n1 1 1 0\n");
    let back = ok(&run(&[
        "retrieve",
        "--code",
        path(&code),
        "--power",
        path(&power),
        "--orbit-id",
        "2",
    ]));
    assert_eq!(body(&back).trim(), "22");
}

#[test]
fn orbit_subcommands_and_verify() {
    let ws = Workspace::new();
    let code = ws.file("orbit.json", ORBIT);
    let out = ok(&run(&[
        "orbit",
        "encode",
        "--code",
        path(&code),
        "--message",
        "1",
    ]));
    let word = ws.file("word.txt", &body(&out));
    let back = ok(&run(&[
        "orbit",
        "retrieve",
        "--code",
        path(&code),
        "--codeword",
        path(&word),
    ]));
    assert_eq!(body(&back).trim(), "1");
    let analysis = ok(&run(&["orbit", "analyze", "--code", path(&code)]));
    assert!(analysis.contains("smooth: yes\n"));
    ok(&run(&["verify", "--code", path(&code)]));
    let dist = ok(&run(&["distance", "--code", path(&code)]));
    assert_eq!(body(&dist).trim(), "4");
}

#[test]
fn analyze_table_rows() {
    let out = ok(&run(&["analyze", "--q", "2", "--n-max", "12"]));
    let body = body(&out);
    let rows: Vec<&str> = body.lines().collect();
    assert_eq!(
        rows,
        [
            "6 7 2 2",
            "8 17 1 3",
            "9 73 1 2",
            "10 31 1 3",
            "11 89 1 2",
            "12 13 2 4"
        ]
    );
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let ws = Workspace::new();
    let code = ws.file("spread.json", SPREAD);
    let args = [
        "simulate",
        "--code",
        path(&code),
        "--convention",
        "enum",
        "--message",
        "5",
        "--insertions",
        "1",
        "--seed",
        "11",
        "--json",
    ];
    let a = ok(&run(&args));
    assert_eq!(a, ok(&run(&args)));
    let report: serde_json::Value = serde_json::from_str(&body(&a)).unwrap();
    assert_eq!(report["success"], true);
    assert_eq!(report["channel_distance"], 1);
    assert_eq!(report["retrieved"], "5");
}

#[test]
fn isometry_round_trip_and_search() {
    let ws = Workspace::new();
    let spread = ws.file("spread.json", SMALL_SPREAD);
    let orbit = ws.file("orbit.json", ORBIT);
    let iso = ws.file("iso.json", ISOMETRY);
    let sent = ok(&run(&[
        "isometry-apply",
        "--code",
        path(&spread),
        "--convention",
        "adhoc",
        "--isometry",
        path(&iso),
        "--message",
        "3",
    ]));
    let word = ws.file("word.txt", &body(&sent));
    let back = ok(&run(&[
        "isometry-retrieve",
        "--code",
        path(&spread),
        "--convention",
        "adhoc",
        "--isometry",
        path(&iso),
        "--codeword",
        path(&word),
    ]));
    assert_eq!(body(&back).trim(), "3");
    let found = ok(&run(&[
        "isometry-search",
        "--code",
        path(&spread),
        "--target",
        path(&orbit),
    ]));
    assert!(!body(&found).trim().is_empty());
}

#[test]
fn malformed_spec_is_a_parse_error() {
    let ws = Workspace::new();
    let code = ws.file(
        "bad.json",
        r#"{"family": "desarguesian_spread", "version": 2, "p": 2, "k": 2, "m": 2}"#,
    );
    let err = error_json(&run(&[
        "construct",
        "--code",
        path(&code),
        "--convention",
        "adhoc",
    ]));
    assert_eq!(err["error"], "parse");
}
