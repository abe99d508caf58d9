//! JSON shapes printed by the commands.

use hanoi_formal::MoveSymbol;
use serde::Serialize;

/// `solve` result.
#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub engine: &'static str,
    pub n_discs: u32,
    pub moves: Vec<MoveSymbol>,
    pub move_count: u64,
    pub elapsed_ms: f64,
    pub verified: bool,
}

/// Final line of a streamed `solve --format json`.
#[derive(Debug, Serialize)]
pub struct StreamSummary {
    pub engine: &'static str,
    pub n_discs: u32,
    pub move_count: u64,
    pub elapsed_ms: f64,
    pub verified: bool,
}

/// One line of a streamed `solve --format json`.
#[derive(Debug, Serialize)]
pub struct StreamedMove {
    pub index: u64,
    #[serde(rename = "move")]
    pub mv: MoveSymbol,
}

#[derive(Debug, Serialize)]
pub struct VerifyRecord {
    pub n_discs: u32,
    pub legal: bool,
    pub failing_index: Option<usize>,
    pub failure: Option<String>,
    pub final_solved: bool,
    pub moves_checked: usize,
}

#[derive(Debug, Serialize)]
pub struct EngineRun {
    pub engine: &'static str,
    pub move_count: u64,
    pub elapsed_ms: f64,
    pub verified: bool,
}

#[derive(Debug, Serialize)]
pub struct Divergence {
    pub engine: &'static str,
    pub index: usize,
}

#[derive(Debug, Serialize)]
pub struct CompareRecord {
    pub n_discs: u32,
    pub engines: Vec<EngineRun>,
    pub bfs_included: bool,
    pub agree: bool,
    pub length: u64,
    pub first_divergence: Option<Divergence>,
}

#[derive(Debug, Serialize)]
pub struct EnumerateRecord {
    pub n_discs: u32,
    pub bound: u64,
    pub words: Vec<Vec<MoveSymbol>>,
    pub cardinality: usize,
}

#[derive(Debug, Serialize)]
pub struct GrammarTraceStep {
    pub step: u64,
    pub form: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PdaTraceStep {
    pub step: u64,
    pub state: String,
    pub input: Vec<String>,
    pub stack: Vec<String>,
}
