//! `hanoi`: solve, verify, compare, enumerate and trace Towers of Hanoi move
//! sequences produced by the grammar, the pushdown automaton, the recursive
//! solver and the breadth-first oracle.
//!
//! Exit codes: 0 success, 1 semantic failure (illegal sequence, engines
//! disagree), 2 usage error, 3 engine failure (step limit, cap).

mod commands;
mod records;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hanoi_formal::Engine;

#[derive(Debug, Parser)]
#[command(name = "hanoi", version, about = "Towers of Hanoi as a formal language")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the move sequence produced by one engine.
    Solve(SolveArgs),
    /// Check a move sequence against the puzzle rules.
    Verify(VerifyArgs),
    /// Run every engine and check that they agree.
    Compare(CompareArgs),
    /// List every word of the grammar's language within a derivation bound.
    Enumerate(EnumerateArgs),
    /// Print each derivation step or automaton configuration.
    Trace(TraceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Grammar,
    Pda,
    Recursive,
    Bfs,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Grammar => Engine::Grammar,
            EngineArg::Pda => Engine::Pda,
            EngineArg::Recursive => Engine::Recursive,
            EngineArg::Bfs => Engine::Bfs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceEngine {
    Grammar,
    Pda,
}

#[derive(Debug, Args)]
struct Common {
    /// Number of discs.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Lift the hard-coded size caps.
    #[arg(long)]
    unsafe_no_cap: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = EngineArg::Grammar)]
    engine: EngineArg,
    /// Print moves one per line as they are produced.
    #[arg(long)]
    stream: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Number of discs.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// File with whitespace-separated move codes, or `-` for stdin.
    #[arg(default_value = "-")]
    source: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    common: Common,
    /// Maximum derivation length; defaults to 2^n - 1.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = TraceEngine::Grammar)]
    engine: TraceEngine,
    /// Maximum number of steps to trace.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    limit: Option<u64>,
}

/// Exit statuses of the tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Failed = 1,
    Usage = 2,
    Engine = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> ExitCode {
        ExitCode::from(s as u8)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Verify(args) => commands::verify(args),
        Command::Compare(args) => commands::compare(args),
        Command::Enumerate(args) => commands::enumerate(args),
        Command::Trace(args) => commands::trace(args),
    };
    status.into()
}
