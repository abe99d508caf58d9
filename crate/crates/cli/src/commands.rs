use std::fmt::Display;
use std::io::{self, BufWriter, Read, Write};
use std::time::{Duration, Instant};

use hanoi_formal::constructions::{
    bfs_optimal_uncapped, build_hanoi_grammar, build_hanoi_pda, grammar_step_limit, pda_step_limit,
    recursive_solve_into, solve as solve_capped, solve_uncapped, ConstructionError, HanoiInstance,
    MAX_BFS_DISCS,
};
use hanoi_formal::hanoi::Replay;
use hanoi_formal::pda::{Advance, RunOutcome};
use hanoi_formal::{Engine, HanoiStackSymbol, MoveSymbol};
use serde::Serialize;

use crate::records::{
    CompareRecord, Divergence, EngineRun, EnumerateRecord, GrammarTraceStep, OutputRecord, PdaTraceStep,
    StreamSummary, StreamedMove, VerifyRecord,
};
use crate::{CompareArgs, EnumerateArgs, Format, SolveArgs, Status, TraceArgs, TraceEngine, VerifyArgs};

const MAX_ENUMERATE_DISCS: u32 = 4;
const MAX_TRACE_DISCS: u32 = 6;

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

fn fail(status: Status, message: impl Display) -> Status {
    eprintln!("error: {message}");
    status
}

fn engine_failure(e: ConstructionError) -> Status {
    match e {
        // bad user input reaching the library
        ConstructionError::Hanoi(_) => fail(Status::Usage, e),
        _ => fail(Status::Engine, e),
    }
}

/// Finishes a write to stdout. A closed pipe is not an error for a CLI
/// whose output is routinely piped into `head`.
fn finish_output(result: io::Result<()>, status: Status) -> Status {
    match result {
        Ok(()) => status,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => status,
        Err(e) => fail(Status::Engine, format!("writing output: {e}")),
    }
}

fn print_json<T: Serialize>(value: &T) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)
}

fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn solve(args: SolveArgs) -> Status {
    let n = args.common.n;
    let engine = Engine::from(args.engine);
    if !args.common.unsafe_no_cap {
        // streaming keeps nothing in memory except for the BFS oracle
        let cap = if args.stream && engine != Engine::Bfs {
            None
        } else {
            Some(engine.disc_cap())
        };
        if let Some(cap) = cap.filter(|&cap| n > cap) {
            return fail(
                Status::Engine,
                format!(
                    "--n {n} exceeds the cap of {cap} discs for the {engine} engine (see --unsafe-no-cap)"
                ),
            );
        }
    }
    if args.stream {
        solve_streaming(n, engine, args.common.format)
    } else {
        solve_materialized(n, engine, args.common.format)
    }
}

fn solve_materialized(n: u32, engine: Engine, format: Format) -> Status {
    let started = Instant::now();
    let moves = match solve_uncapped(engine, n) {
        Ok(moves) => moves,
        Err(e) => return engine_failure(e),
    };
    let elapsed_ms = millis(started.elapsed());
    let verified = hanoi_formal::validate_sequence(n, &moves)
        .map(|r| r.legal && r.final_solved)
        .unwrap_or(false);
    let record = OutputRecord {
        engine: engine.name(),
        n_discs: n,
        move_count: moves.len() as u64,
        moves,
        elapsed_ms,
        verified,
    };
    let written = match format {
        Format::Json => print_json(&record),
        Format::Text => {
            let mut out = io::stdout().lock();
            writeln!(out, "{}", join(&record.moves))
        }
    };
    if format == Format::Text {
        eprintln!(
            "engine={} n_discs={} move_count={} elapsed_ms={:.3} verified={}",
            record.engine, n, record.move_count, record.elapsed_ms, record.verified
        );
    }
    finish_output(written, if verified { Status::Ok } else { Status::Failed })
}

fn solve_streaming(n: u32, engine: Engine, format: Format) -> Status {
    let started = Instant::now();
    let mut out = BufWriter::new(io::stdout().lock());
    let mut replay = Replay::new(n).expect("n >= 1 is enforced by the argument parser");
    let mut count = 0u64;
    let mut write_error: Option<io::Error> = None;
    let mut sink = |mv: MoveSymbol| {
        // the replay stops at the first illegal move; `verified` reports it
        let _ = replay.push(mv);
        if write_error.is_none() {
            let written = match format {
                Format::Text => writeln!(out, "{mv}"),
                Format::Json => serde_json::to_writer(&mut out, &StreamedMove { index: count, mv })
                    .map_err(io::Error::from)
                    .and_then(|()| writeln!(out)),
            };
            write_error = written.err();
        }
        count += 1;
    };

    let produced: Result<(), ConstructionError> = (|| {
        match engine {
            Engine::Grammar => {
                let grammar = build_hanoi_grammar(n)?;
                grammar.derive_streaming(|m| sink(*m), grammar_step_limit(n))?;
            }
            Engine::Pda => {
                let pda = build_hanoi_pda(n)?;
                let summary = pda.run_with_observer([], pda_step_limit(n), |z| {
                    if let HanoiStackSymbol::Move(m) = z {
                        sink(*m);
                    }
                })?;
                if summary.outcome != RunOutcome::EmptyStackHalt {
                    return Err(ConstructionError::RunDidNotHalt(summary.outcome));
                }
            }
            Engine::Recursive => recursive_solve_into(&HanoiInstance::new(n)?, &mut sink),
            Engine::Bfs => bfs_optimal_uncapped(n)?.moves.into_iter().for_each(&mut sink),
        }
        Ok(())
    })();
    if let Err(e) = produced {
        let _ = out.flush();
        return engine_failure(e);
    }

    let report = replay.report();
    let summary = StreamSummary {
        engine: engine.name(),
        n_discs: n,
        move_count: count,
        elapsed_ms: millis(started.elapsed()),
        verified: report.legal && report.final_solved,
    };
    let mut result = match write_error {
        Some(e) => Err(e),
        None => Ok(()),
    };
    if result.is_ok() && format == Format::Json {
        result = serde_json::to_writer(&mut out, &summary)
            .map_err(io::Error::from)
            .and_then(|()| writeln!(out));
    }
    result = result.and_then(|()| out.flush());
    if format == Format::Text {
        eprintln!(
            "engine={} n_discs={} move_count={} elapsed_ms={:.3} verified={}",
            summary.engine, n, summary.move_count, summary.elapsed_ms, summary.verified
        );
    }
    finish_output(
        result,
        if summary.verified {
            Status::Ok
        } else {
            Status::Failed
        },
    )
}

fn read_source(source: &str) -> io::Result<String> {
    if source == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(source)
    }
}

pub fn verify(args: VerifyArgs) -> Status {
    let text = match read_source(&args.source) {
        Ok(text) => text,
        Err(e) => return fail(Status::Usage, format!("reading {}: {e}", args.source)),
    };
    let mut moves = Vec::new();
    for (position, token) in text.split_whitespace().enumerate() {
        match token.parse::<MoveSymbol>() {
            Ok(mv) => moves.push(mv),
            Err(e) => {
                return fail(
                    Status::Usage,
                    format!("token {position} ({token:?}): {}", e.reason),
                )
            }
        }
    }
    let report = match hanoi_formal::validate_sequence(args.n, &moves) {
        Ok(report) => report,
        Err(e) => return fail(Status::Usage, e),
    };
    let status = if report.legal && report.final_solved {
        Status::Ok
    } else {
        Status::Failed
    };
    let written = match args.format {
        Format::Json => print_json(&VerifyRecord {
            n_discs: args.n,
            legal: report.legal,
            failing_index: report.failing_index,
            failure: report.failure,
            final_solved: report.final_solved,
            moves_checked: report.moves_checked,
        }),
        Format::Text => {
            let mut out = io::stdout().lock();
            match (report.failing_index, &report.failure) {
                (Some(i), Some(why)) => writeln!(out, "illegal move {i} ({}): {why}", moves[i]),
                _ if report.final_solved => writeln!(out, "legal, solved in {} moves", report.moves_checked),
                _ => writeln!(out, "legal but unsolved after {} moves", report.moves_checked),
            }
        }
    };
    finish_output(written, status)
}

struct EngineOutput {
    engine: Engine,
    moves: Result<Vec<MoveSymbol>, ConstructionError>,
    elapsed: Duration,
}

pub fn compare(args: CompareArgs) -> Status {
    let n = args.common.n;
    let uncapped = args.common.unsafe_no_cap;
    if !uncapped && n > Engine::Grammar.disc_cap() {
        return fail(
            Status::Engine,
            format!(
                "--n {n} exceeds the cap of {} discs (see --unsafe-no-cap)",
                Engine::Grammar.disc_cap()
            ),
        );
    }
    let bfs_included = n <= MAX_BFS_DISCS;
    let engines: Vec<Engine> = Engine::ALL
        .into_iter()
        .filter(|&e| e != Engine::Bfs || bfs_included)
        .collect();

    let outputs: Vec<EngineOutput> = std::thread::scope(|scope| {
        let handles: Vec<_> = engines
            .iter()
            .map(|&engine| {
                scope.spawn(move || {
                    let started = Instant::now();
                    let moves = if uncapped {
                        solve_uncapped(engine, n)
                    } else {
                        solve_capped(engine, n)
                    };
                    EngineOutput {
                        engine,
                        moves,
                        elapsed: started.elapsed(),
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("engine thread panicked"))
            .collect()
    });

    let mut runs = Vec::new();
    let mut sequences = Vec::new();
    for output in outputs {
        let moves = match output.moves {
            Ok(moves) => moves,
            Err(e) => return fail(Status::Engine, format!("{} engine: {e}", output.engine)),
        };
        let verified = hanoi_formal::validate_sequence(n, &moves)
            .map(|r| r.legal && r.final_solved)
            .unwrap_or(false);
        runs.push(EngineRun {
            engine: output.engine.name(),
            move_count: moves.len() as u64,
            elapsed_ms: millis(output.elapsed),
            verified,
        });
        sequences.push((output.engine, moves));
    }

    let reference = &sequences[0].1;
    let first_divergence = sequences[1..].iter().find_map(|(engine, moves)| {
        let index = reference
            .iter()
            .zip(moves)
            .position(|(a, b)| a != b)
            .or_else(|| (reference.len() != moves.len()).then(|| reference.len().min(moves.len())))?;
        Some(Divergence {
            engine: engine.name(),
            index,
        })
    });
    let record = CompareRecord {
        n_discs: n,
        length: reference.len() as u64,
        agree: first_divergence.is_none(),
        engines: runs,
        bfs_included,
        first_divergence,
    };
    let status = if record.agree { Status::Ok } else { Status::Failed };

    let written = match args.common.format {
        Format::Json => print_json(&record),
        Format::Text => (|| {
            let mut out = io::stdout().lock();
            for run in &record.engines {
                writeln!(
                    out,
                    "{:<10} {:>10} moves {:>12.3} ms  verified={}",
                    run.engine, run.move_count, run.elapsed_ms, run.verified
                )?;
            }
            if !record.bfs_included {
                writeln!(out, "bfs        skipped (n > {MAX_BFS_DISCS})")?;
            }
            match &record.first_divergence {
                None => writeln!(
                    out,
                    "agreement: all engines produced the same {} moves",
                    record.length
                ),
                Some(d) => writeln!(
                    out,
                    "divergence: {} differs from grammar at index {}",
                    d.engine, d.index
                ),
            }
        })(),
    };
    finish_output(written, status)
}

pub fn enumerate(args: EnumerateArgs) -> Status {
    let n = args.common.n;
    if n > MAX_ENUMERATE_DISCS && !args.common.unsafe_no_cap {
        return fail(
            Status::Usage,
            format!(
                "enumeration is exponential; --n must be at most {MAX_ENUMERATE_DISCS} (see --unsafe-no-cap)"
            ),
        );
    }
    let bound = args.bound.unwrap_or_else(|| (1u64 << n.min(63)) - 1);
    let grammar = match build_hanoi_grammar(n) {
        Ok(g) => g,
        Err(e) => return engine_failure(e),
    };
    let words: Vec<Vec<MoveSymbol>> = grammar
        .enumerate_language(usize::try_from(bound).unwrap_or(usize::MAX))
        .into_iter()
        .collect();
    let record = EnumerateRecord {
        n_discs: n,
        bound,
        cardinality: words.len(),
        words,
    };
    let written = match args.common.format {
        Format::Json => print_json(&record),
        Format::Text => (|| {
            let mut out = io::stdout().lock();
            for word in &record.words {
                writeln!(out, "{}", join(word))?;
            }
            writeln!(out, "cardinality: {}", record.cardinality)
        })(),
    };
    finish_output(written, Status::Ok)
}

pub fn trace(args: TraceArgs) -> Status {
    let n = args.common.n;
    if n > MAX_TRACE_DISCS && !args.common.unsafe_no_cap {
        return fail(
            Status::Usage,
            format!("traces are exponential; --n must be at most {MAX_TRACE_DISCS} (see --unsafe-no-cap)"),
        );
    }
    match args.engine {
        TraceEngine::Grammar => {
            trace_grammar(n, args.limit.unwrap_or(grammar_step_limit(n)), args.common.format)
        }
        TraceEngine::Pda => trace_pda(n, args.limit.unwrap_or(pda_step_limit(n)), args.common.format),
    }
}

/// Prints `items` either as one `previous ⊢ next` line per step or as a
/// JSON array.
fn print_trace<T: Serialize>(format: Format, texts: &[String], items: &[T]) -> io::Result<()> {
    match format {
        Format::Json => print_json(&items),
        Format::Text => {
            let mut out = BufWriter::new(io::stdout().lock());
            match texts {
                [only] => writeln!(out, "{only}")?,
                _ => {
                    for pair in texts.windows(2) {
                        writeln!(out, "{} ⊢ {}", pair[0], pair[1])?;
                    }
                }
            }
            out.flush()
        }
    }
}

fn trace_grammar(n: u32, limit: u64, format: Format) -> Status {
    let grammar = match build_hanoi_grammar(n) {
        Ok(g) => g,
        Err(e) => return engine_failure(e),
    };
    let mut form = grammar.start_form();
    let mut forms = vec![form.clone()];
    let mut status = Status::Ok;
    loop {
        match grammar.derive_step(&form) {
            Ok(None) => break,
            Ok(Some(_)) if forms.len() as u64 > limit => {
                status = fail(
                    Status::Engine,
                    format!("derivation did not finish within {limit} steps"),
                );
                break;
            }
            Ok(Some(next)) => {
                forms.push(next.clone());
                form = next;
            }
            Err(e) => return fail(Status::Engine, e),
        }
    }
    let texts: Vec<String> = forms.iter().map(ToString::to_string).collect();
    let steps: Vec<GrammarTraceStep> = forms
        .iter()
        .enumerate()
        .map(|(step, f)| GrammarTraceStep {
            step: step as u64,
            form: f.symbols().iter().map(ToString::to_string).collect(),
        })
        .collect();
    finish_output(print_trace(format, &texts, &steps), status)
}

fn trace_pda(n: u32, limit: u64, format: Format) -> Status {
    let pda = match build_hanoi_pda(n) {
        Ok(p) => p,
        Err(e) => return engine_failure(e),
    };
    let mut runner = match pda.runner([], limit) {
        Ok(r) => r,
        Err(e) => return fail(Status::Engine, e),
    };
    let mut configs = vec![runner.configuration().clone()];
    let outcome = loop {
        match runner.advance() {
            Advance::Moved => configs.push(runner.configuration().clone()),
            Advance::Halted(outcome) => break outcome,
        }
    };
    let status = match outcome {
        RunOutcome::EmptyStackHalt => Status::Ok,
        other => fail(
            Status::Engine,
            format!("run ended with {other:?} after {} steps", runner.steps()),
        ),
    };
    let texts: Vec<String> = configs.iter().map(ToString::to_string).collect();
    let steps: Vec<PdaTraceStep> = configs
        .iter()
        .enumerate()
        .map(|(step, c)| PdaTraceStep {
            step: step as u64,
            state: c.state.to_string(),
            input: Vec::new(),
            stack: c.stack.iter().map(ToString::to_string).collect(),
        })
        .collect();
    finish_output(print_trace(format, &texts, &steps), status)
}
