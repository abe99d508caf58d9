//! The Hanoi grammar and pushdown automaton for a given disc count, the
//! classic recursive solver, and an exhaustive breadth-first oracle.

use std::collections::BTreeSet;
use std::convert::Infallible;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::grammar::{DerivationError, Grammar, GrammarError, Production, Symbol};
use crate::hanoi::{HanoiError, HanoiNonterminal, MoveSymbol, ParseSymbolError, PegId};
use crate::pda::{Pda, PdaError, RunOutcome};

/// Largest disc count whose full move list is materialized in memory.
pub const MAX_MATERIALIZED_DISCS: u32 = 24;
/// Largest disc count accepted by [`bfs_optimal`] (3^10 states).
pub const MAX_BFS_DISCS: u32 = 10;

pub type HanoiGrammar = Grammar<MoveSymbol, HanoiNonterminal>;
pub type HanoiPda = Pda<ControlState, Infallible, HanoiStackSymbol>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Hanoi(#[from] HanoiError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Pda(#[from] PdaError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error("{discs} discs exceeds the cap of {cap} for this engine")]
    CapExceeded { discs: u32, cap: u32 },
    #[error("stack symbol {0} is reachable but has no transition")]
    UnhandledStackSymbol(String),
    #[error("automaton run ended with {0:?} instead of an empty stack")]
    RunDidNotHalt(RunOutcome),
}

/// Moving `n_discs` from peg 1 to peg 3 with peg 2 as auxiliary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HanoiInstance {
    pub n_discs: u32,
    pub source: PegId,
    pub target: PegId,
    pub auxiliary: PegId,
}

impl HanoiInstance {
    pub fn new(n_discs: u32) -> Result<Self, HanoiError> {
        if n_discs == 0 {
            return Err(HanoiError::InvalidDiscCount);
        }
        Ok(HanoiInstance {
            n_discs,
            source: PegId::ONE,
            target: PegId::THREE,
            auxiliary: PegId::TWO,
        })
    }
}

fn task(from: PegId, to: PegId, discs: u32) -> HanoiNonterminal {
    HanoiNonterminal::new(from, to, discs).expect("distinct pegs and positive count")
}

fn ordered_pairs() -> impl Iterator<Item = (PegId, PegId)> {
    MoveSymbol::all().into_iter().map(|m| (m.from(), m.to()))
}

/// `h_ij(n) → h_ik(n−1) p_ij h_kj(n−1)`, with `k` the third peg.
fn split(h: HanoiNonterminal) -> [HanoiNonterminal; 2] {
    let (i, j, k) = (h.from(), h.to(), h.via());
    [task(i, k, h.discs() - 1), task(k, j, h.discs() - 1)]
}

/// Default derivation step limit, `2^(N+1)`.
pub fn grammar_step_limit(n_discs: u32) -> u64 {
    1u64.checked_shl(n_discs + 1).unwrap_or(u64::MAX)
}

/// Default automaton step limit, `2^(N+2)`.
pub fn pda_step_limit(n_discs: u32) -> u64 {
    1u64.checked_shl(n_discs + 2).unwrap_or(u64::MAX)
}

/// The grammar with terminals `p_ij`, nonterminals `h_ij(n)` for
/// `1 ≤ n ≤ N`, start symbol `h_13(N)` and productions
/// `h_ij(1) → p_ij`, `h_ij(n) → h_ik(n−1) p_ij h_kj(n−1)`.
pub fn build_hanoi_grammar(n_discs: u32) -> Result<HanoiGrammar, ConstructionError> {
    let instance = HanoiInstance::new(n_discs)?;
    let terminals = MoveSymbol::all();
    let nonterminals: Vec<_> = (1..=n_discs)
        .flat_map(|n| ordered_pairs().map(move |(i, j)| task(i, j, n)))
        .collect();
    let productions = nonterminals
        .iter()
        .map(|&h| {
            let rhs = if h.discs() == 1 {
                vec![Symbol::Terminal(h.as_move())]
            } else {
                let [left, right] = split(h);
                vec![
                    Symbol::Nonterminal(left),
                    Symbol::Terminal(h.as_move()),
                    Symbol::Nonterminal(right),
                ]
            };
            Production::new(h, rhs)
        })
        .collect();
    let start = task(instance.source, instance.target, n_discs);
    Ok(Grammar::new(terminals, nonterminals, start, productions)?)
}

/// The single control state `q0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ControlState;

impl fmt::Display for ControlState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("q0")
    }
}

/// Stack alphabet of the Hanoi automaton: moves, tasks and the start symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HanoiStackSymbol {
    Start,
    Move(MoveSymbol),
    Task(HanoiNonterminal),
}

impl fmt::Display for HanoiStackSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HanoiStackSymbol::Start => f.write_str("z0"),
            HanoiStackSymbol::Move(m) => m.fmt(f),
            HanoiStackSymbol::Task(h) => h.fmt(f),
        }
    }
}

impl FromStr for HanoiStackSymbol {
    type Err = ParseSymbolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "z0" => Ok(HanoiStackSymbol::Start),
            _ if s.starts_with('h') => s.parse().map(HanoiStackSymbol::Task),
            _ => s.parse().map(HanoiStackSymbol::Move),
        }
    }
}

fn expansion(h: HanoiNonterminal) -> Vec<HanoiStackSymbol> {
    if h.discs() == 1 {
        return vec![HanoiStackSymbol::Move(h.as_move())];
    }
    let [left, right] = split(h);
    vec![
        HanoiStackSymbol::Task(left),
        HanoiStackSymbol::Move(h.as_move()),
        HanoiStackSymbol::Task(right),
    ]
}

/// The ε-driven automaton with one state, no input letters and no
/// accepting states. `z0` becomes `h_12(N−1) p_13 h_23(N−1)`, each task
/// symbol expands one level, and each move symbol is popped and reported.
///
/// Task symbols range over `1 ≤ n ≤ N−1`; for `N = 1` the start symbol is
/// replaced by `p_13` directly.
pub fn build_hanoi_pda(n_discs: u32) -> Result<HanoiPda, ConstructionError> {
    let instance = HanoiInstance::new(n_discs)?;
    let q0 = ControlState;
    let mut builder = Pda::builder(q0, HanoiStackSymbol::Start);

    for m in MoveSymbol::all() {
        let z = HanoiStackSymbol::Move(m);
        builder = builder
            .stack_symbol(z)
            .observable(z)
            .transition(q0, None, z, q0, vec![]);
    }
    for n in 1..n_discs {
        for (i, j) in ordered_pairs() {
            let h = task(i, j, n);
            builder = builder.stack_symbol(HanoiStackSymbol::Task(h)).transition(
                q0,
                None,
                HanoiStackSymbol::Task(h),
                q0,
                expansion(h),
            );
        }
    }
    let whole = task(instance.source, instance.target, n_discs);
    builder = builder.transition(q0, None, HanoiStackSymbol::Start, q0, expansion(whole));

    let pda = builder.build()?;
    audit_reachable_symbols(&pda)?;
    Ok(pda)
}

/// Every stack symbol that can appear from `z0` has an ε-move in `q0`.
fn audit_reachable_symbols(pda: &HanoiPda) -> Result<(), ConstructionError> {
    let mut reached = BTreeSet::from([*pda.start_stack()]);
    let mut pending = vec![*pda.start_stack()];
    while let Some(z) = pending.pop() {
        let mut moves = pda.moves(&ControlState, None, &z).peekable();
        if moves.peek().is_none() {
            return Err(ConstructionError::UnhandledStackSymbol(z.to_string()));
        }
        for (_, push) in moves {
            for &pushed in push {
                if reached.insert(pushed) {
                    pending.push(pushed);
                }
            }
        }
    }
    Ok(())
}

/// `solve(n, i→j) = solve(n−1, i→k) ++ [p_ij] ++ solve(n−1, k→j)`.
pub fn recursive_solve(instance: &HanoiInstance) -> Vec<MoveSymbol> {
    let mut moves = Vec::with_capacity((1usize << instance.n_discs.min(30)) - 1);
    recursive_solve_into(instance, &mut |m| moves.push(m));
    moves
}

pub fn recursive_solve_into<F: FnMut(MoveSymbol)>(instance: &HanoiInstance, sink: &mut F) {
    fn go<F: FnMut(MoveSymbol)>(n: u32, from: PegId, to: PegId, via: PegId, sink: &mut F) {
        if n == 0 {
            return;
        }
        go(n - 1, from, via, to, sink);
        sink(MoveSymbol::new(from, to).expect("distinct pegs"));
        go(n - 1, via, to, from, sink);
    }
    go(
        instance.n_discs,
        instance.source,
        instance.target,
        instance.auxiliary,
        sink,
    );
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsSolution {
    /// The shortest path found first under lexicographic move order.
    pub moves: Vec<MoveSymbol>,
    /// Number of distinct shortest paths from the initial to the solved state.
    pub shortest_path_count: u64,
    pub states_explored: usize,
}

/// Exhaustive breadth-first search over every legal configuration, for at
/// most [`MAX_BFS_DISCS`] discs.
///
/// States are encoded independently of [`crate::hanoi::HanoiState`]: a
/// base-3 number whose digit `d` is the peg (0..3) holding disc `d + 1`.
/// Shortest paths are counted layer by layer without enumerating them.
pub fn bfs_optimal(n_discs: u32) -> Result<BfsSolution, ConstructionError> {
    if n_discs == 0 {
        return Err(HanoiError::InvalidDiscCount.into());
    }
    if n_discs > MAX_BFS_DISCS {
        return Err(ConstructionError::CapExceeded {
            discs: n_discs,
            cap: MAX_BFS_DISCS,
        });
    }
    bfs_optimal_uncapped(n_discs)
}

/// [`bfs_optimal`] without the disc cap. Memory grows as `3^N`.
pub fn bfs_optimal_uncapped(n_discs: u32) -> Result<BfsSolution, ConstructionError> {
    if n_discs == 0 {
        return Err(HanoiError::InvalidDiscCount.into());
    }
    let n = n_discs as usize;
    let state_count = 3usize.pow(n_discs);
    let pow3: Vec<usize> = (0..n).map(|d| 3usize.pow(d as u32)).collect();
    let peg_of = |code: usize, disc: usize| (code / pow3[disc]) % 3;
    let start = 0usize;
    let goal = pow3.iter().map(|p| 2 * p).sum::<usize>();

    const UNSEEN: u32 = u32::MAX;
    let mut depth = vec![UNSEEN; state_count];
    let mut paths = vec![0u64; state_count];
    let mut parent: Vec<Option<(usize, MoveSymbol)>> = vec![None; state_count];
    depth[start] = 0;
    paths[start] = 1;
    let mut layer = vec![start];
    let mut explored = 1;

    while !layer.is_empty() && depth[goal] == UNSEEN {
        let mut next_layer = Vec::new();
        for &code in &layer {
            // the smallest disc on each peg is its top
            let mut tops = [usize::MAX; 3];
            for disc in (0..n).rev() {
                tops[peg_of(code, disc)] = disc;
            }
            for mv in MoveSymbol::all() {
                let from = usize::from(mv.from().get() - 1);
                let to = usize::from(mv.to().get() - 1);
                let disc = tops[from];
                if disc == usize::MAX || tops[to] < disc {
                    continue;
                }
                let succ = code - from * pow3[disc] + to * pow3[disc];
                if depth[succ] == UNSEEN {
                    depth[succ] = depth[code] + 1;
                    parent[succ] = Some((code, mv));
                    next_layer.push(succ);
                    explored += 1;
                }
                if depth[succ] == depth[code] + 1 {
                    paths[succ] = paths[succ].saturating_add(paths[code]);
                }
            }
        }
        layer = next_layer;
    }

    let mut moves = Vec::with_capacity(depth[goal] as usize);
    let mut at = goal;
    while let Some((prev, mv)) = parent[at] {
        moves.push(mv);
        at = prev;
    }
    moves.reverse();
    Ok(BfsSolution {
        moves,
        shortest_path_count: paths[goal],
        states_explored: explored,
    })
}

/// Engines that produce a Hanoi move sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Grammar,
    Pda,
    Recursive,
    Bfs,
}

impl Engine {
    pub const ALL: [Engine; 4] = [Engine::Grammar, Engine::Pda, Engine::Recursive, Engine::Bfs];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Grammar => "grammar",
            Engine::Pda => "pda",
            Engine::Recursive => "recursive",
            Engine::Bfs => "bfs",
        }
    }

    pub fn disc_cap(self) -> u32 {
        match self {
            Engine::Bfs => MAX_BFS_DISCS,
            _ => MAX_MATERIALIZED_DISCS,
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The full move list for `n_discs` from the chosen engine, honouring the
/// engine's disc cap.
pub fn solve(engine: Engine, n_discs: u32) -> Result<Vec<MoveSymbol>, ConstructionError> {
    if n_discs > engine.disc_cap() {
        return Err(ConstructionError::CapExceeded {
            discs: n_discs,
            cap: engine.disc_cap(),
        });
    }
    solve_uncapped(engine, n_discs)
}

/// [`solve`] without any disc cap.
pub fn solve_uncapped(engine: Engine, n_discs: u32) -> Result<Vec<MoveSymbol>, ConstructionError> {
    match engine {
        Engine::Grammar => {
            let grammar = build_hanoi_grammar(n_discs)?;
            Ok(grammar.derive_full(grammar_step_limit(n_discs))?.word)
        }
        Engine::Pda => {
            let pda = build_hanoi_pda(n_discs)?;
            let mut moves = Vec::new();
            let summary = pda.run_with_observer(std::iter::empty(), pda_step_limit(n_discs), |z| {
                if let HanoiStackSymbol::Move(m) = z {
                    moves.push(*m);
                }
            })?;
            match summary.outcome {
                RunOutcome::EmptyStackHalt => Ok(moves),
                other => Err(ConstructionError::RunDidNotHalt(other)),
            }
        }
        Engine::Recursive => Ok(recursive_solve(&HanoiInstance::new(n_discs)?)),
        Engine::Bfs => Ok(bfs_optimal_uncapped(n_discs)?.moves),
    }
}
