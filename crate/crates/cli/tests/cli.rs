//! Black-box tests of the `hanoi` binary: exit codes, text output and the
//! JSON shapes (parsed into strict structs, so unknown or missing fields fail).

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde::Deserialize;

const GOLDEN_N5: &str = include_str!("../../../golden/hanoi_n5.txt");

fn hanoi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hanoi"))
        .args(args)
        .output()
        .unwrap()
}

fn hanoi_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hanoi"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputRecord {
    engine: String,
    n_discs: u32,
    moves: Vec<String>,
    move_count: u64,
    elapsed_ms: f64,
    verified: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StreamedMove {
    index: u64,
    #[serde(rename = "move")]
    mv: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StreamSummary {
    engine: String,
    n_discs: u32,
    move_count: u64,
    elapsed_ms: f64,
    verified: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyRecord {
    n_discs: u32,
    legal: bool,
    failing_index: Option<usize>,
    failure: Option<String>,
    final_solved: bool,
    moves_checked: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EngineRun {
    engine: String,
    move_count: u64,
    elapsed_ms: f64,
    verified: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Divergence {
    #[allow(dead_code)]
    engine: String,
    #[allow(dead_code)]
    index: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompareRecord {
    n_discs: u32,
    engines: Vec<EngineRun>,
    bfs_included: bool,
    agree: bool,
    length: u64,
    first_divergence: Option<Divergence>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnumerateRecord {
    n_discs: u32,
    bound: u64,
    words: Vec<Vec<String>>,
    cardinality: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GrammarTraceStep {
    step: u64,
    form: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PdaTraceStep {
    step: u64,
    state: String,
    input: Vec<String>,
    stack: Vec<String>,
}

#[test]
fn solve_text_matches_golden_for_each_engine() {
    for engine in ["grammar", "pda", "recursive", "bfs"] {
        let out = hanoi(&["solve", "--n", "5", "--engine", engine]);
        assert_eq!(code(&out), 0, "{engine}");
        assert_eq!(stdout(&out), GOLDEN_N5, "{engine}");
    }
}

#[test]
fn solve_single_disc_default_engine() {
    let out = hanoi(&["solve", "--n", "1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let record: OutputRecord = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record.engine, "grammar");
    assert_eq!(record.n_discs, 1);
    assert_eq!(record.moves, ["p13"]);
    assert_eq!(record.move_count, 1);
    assert!(record.verified);
    assert!(record.elapsed_ms >= 0.0);
}

#[test]
fn solve_usage_errors() {
    assert_eq!(code(&hanoi(&["solve", "--n", "0"])), 2);
    assert_eq!(code(&hanoi(&["solve", "--n", "3", "--engine", "magic"])), 2);
    assert_eq!(code(&hanoi(&["solve"])), 2);
    assert_eq!(code(&hanoi(&["solve", "--n", "3", "--format", "xml"])), 2);
}

#[test]
fn solve_caps_are_engine_failures() {
    let out = hanoi(&["solve", "--n", "11", "--engine", "bfs"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--unsafe-no-cap"));
    assert_eq!(code(&hanoi(&["solve", "--n", "25"])), 3);
    let out = hanoi(&["solve", "--n", "11", "--engine", "bfs", "--unsafe-no-cap"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).split_whitespace().count(), 2047);
}

#[test]
fn stream_and_materialized_agree() {
    for engine in ["grammar", "pda", "recursive", "bfs"] {
        for n in ["1", "4", "7"] {
            let whole = stdout(&hanoi(&["solve", "--n", n, "--engine", engine]));
            let streamed = hanoi(&["solve", "--n", n, "--engine", engine, "--stream"]);
            assert_eq!(code(&streamed), 0);
            let streamed = stdout(&streamed);
            assert_eq!(streamed.lines().count(), whole.split_whitespace().count());
            assert_eq!(
                streamed.split_whitespace().collect::<Vec<_>>(),
                whole.split_whitespace().collect::<Vec<_>>(),
                "{engine} n={n}"
            );
        }
    }
}

#[test]
fn streamed_json_lines() {
    let out = hanoi(&[
        "solve", "--n", "3", "--engine", "pda", "--stream", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    let moves: Vec<StreamedMove> = lines[..7]
        .iter()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    for (i, m) in moves.iter().enumerate() {
        assert_eq!(m.index, i as u64);
    }
    let whole: OutputRecord =
        serde_json::from_str(&stdout(&hanoi(&["solve", "--n", "3", "--format", "json"]))).unwrap();
    assert_eq!(
        moves.iter().map(|m| m.mv.clone()).collect::<Vec<_>>(),
        whole.moves
    );
    let summary: StreamSummary = serde_json::from_str(lines[7]).unwrap();
    assert_eq!(
        (summary.engine.as_str(), summary.n_discs, summary.move_count),
        ("pda", 3, 7)
    );
    assert!(summary.verified && summary.elapsed_ms >= 0.0);
}

#[test]
fn verify_golden_word() {
    let out = hanoi(&["verify", "--n", "5", "../../golden/hanoi_n5.txt"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = hanoi_stdin(&["verify", "--n", "5", "-", "--format", "json"], GOLDEN_N5);
    assert_eq!(code(&out), 0);
    let record: VerifyRecord = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(record.legal && record.final_solved);
    assert_eq!(
        (record.n_discs, record.moves_checked, record.failing_index),
        (5, 31, None)
    );
    assert!(record.failure.is_none());
}

#[test]
fn verify_illegal_sequence() {
    let out = hanoi_stdin(&["verify", "--n", "2", "--format", "json"], "p13 p13");
    assert_eq!(code(&out), 1);
    let record: VerifyRecord = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!record.legal && !record.final_solved);
    assert_eq!(record.failing_index, Some(1));
    assert!(record.failure.unwrap().contains("smaller"));
}

#[test]
fn verify_unsolved_but_legal_is_failure() {
    let out = hanoi_stdin(&["verify", "--n", "2"], "p12\n");
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("unsolved"));
}

#[test]
fn verify_parse_errors() {
    let out = hanoi_stdin(&["verify", "--n", "2"], "p13 p14");
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("token 1") && err.contains("p14"), "{err}");
    assert_eq!(code(&hanoi(&["verify", "--n", "2", "/nonexistent/moves.txt"])), 2);
}

#[test]
fn compare_small_and_with_bfs() {
    let out = hanoi(&["compare", "--n", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("same 7 moves"));

    let out = hanoi(&["compare", "--n", "8", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let record: CompareRecord = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(record.agree && record.bfs_included);
    assert_eq!((record.n_discs, record.length), (8, 255));
    let names: Vec<&str> = record.engines.iter().map(|e| e.engine.as_str()).collect();
    assert_eq!(names, ["grammar", "pda", "recursive", "bfs"]);
    assert!(record
        .engines
        .iter()
        .all(|e| e.verified && e.move_count == 255 && e.elapsed_ms >= 0.0));
    assert!(record.first_divergence.is_none());
}

#[test]
fn compare_without_bfs() {
    let out = hanoi(&["compare", "--n", "12", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let record: CompareRecord = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(record.agree && !record.bfs_included);
    assert_eq!(record.length, 4095);
    assert_eq!(record.engines.len(), 3);
    assert_eq!(code(&hanoi(&["compare", "--n", "25"])), 3);
}

#[test]
fn enumerate_examples() {
    let out = hanoi(&["enumerate", "--n", "1", "--bound", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "p13\ncardinality: 1\n");

    let out = hanoi(&["enumerate", "--n", "3", "--bound", "20", "--format", "json"]);
    let record: EnumerateRecord = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((record.n_discs, record.bound, record.cardinality), (3, 20, 1));
    assert_eq!(record.words[0].len(), 7);

    let out = hanoi(&["enumerate", "--n", "2", "--bound", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "cardinality: 0\n");

    assert_eq!(code(&hanoi(&["enumerate", "--n", "5"])), 2);
    assert_eq!(code(&hanoi(&["enumerate", "--n", "2", "--bound", "0"])), 2);
}

#[test]
fn trace_grammar() {
    let out = hanoi(&["trace", "--n", "1", "--engine", "grammar"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "h13(1) ⊢ p13\n");

    let out = hanoi(&["trace", "--n", "2", "--format", "json"]);
    let steps: Vec<GrammarTraceStep> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(steps.len(), 4);
    assert_eq!(steps[0].form, ["h13(2)"]);
    assert_eq!(steps[1].form, ["h12(1)", "p13", "h23(1)"]);
    assert_eq!(steps[3].form, ["p12", "p13", "p23"]);
    assert!(steps.iter().enumerate().all(|(i, s)| s.step == i as u64));
}

#[test]
fn trace_pda() {
    let out = hanoi(&["trace", "--n", "2", "--engine", "pda"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "⟨q0, ε, z0⟩ ⊢ ⟨q0, ε, h12(1) p13 h23(1)⟩");
    assert!(lines.last().unwrap().ends_with("⊢ ⟨q0, ε, ε⟩"));

    let out = hanoi(&["trace", "--n", "2", "--engine", "pda", "--format", "json"]);
    let steps: Vec<PdaTraceStep> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(steps.len(), 7);
    assert_eq!(steps[1].stack, ["h12(1)", "p13", "h23(1)"]);
    let last = steps.last().unwrap();
    assert_eq!((last.step, last.state.as_str()), (6, "q0"));
    assert!(last.stack.is_empty() && last.input.is_empty());
}

#[test]
fn trace_limits_and_caps() {
    let out = hanoi(&["trace", "--n", "3", "--engine", "pda", "--limit", "3"]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout(&out).lines().count(), 3);
    let out = hanoi(&["trace", "--n", "3", "--limit", "2"]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout(&out).lines().count(), 2);
    assert_eq!(code(&hanoi(&["trace", "--n", "7"])), 2);
    assert_eq!(code(&hanoi(&["trace", "--n", "7", "--unsafe-no-cap"])), 0);
}
