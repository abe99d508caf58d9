//! Formal-language constructions for the Towers of Hanoi.
//!
//! - [`grammar`]: generic context-free grammars with leftmost, streaming and
//!   exhaustive derivation.
//! - [`pda`]: generic pushdown automata with a deterministic runner and
//!   final-state search.
//! - [`hanoi`]: pegs, moves, states and move-sequence validation.
//! - [`constructions`]: the Hanoi grammar and automaton for `N` discs, the
//!   recursive solver and a breadth-first oracle.
//!
//! ```
//! use hanoi_formal::constructions::{build_hanoi_grammar, grammar_step_limit};
//!
//! let grammar = build_hanoi_grammar(2).unwrap();
//! let derivation = grammar.derive_full(grammar_step_limit(2)).unwrap();
//! let text: Vec<String> = derivation.word.iter().map(|m| m.to_string()).collect();
//! assert_eq!(text, ["p12", "p13", "p23"]);
//! ```

pub mod constructions;
pub mod grammar;
pub mod hanoi;
pub mod pda;

pub use constructions::{
    bfs_optimal, build_hanoi_grammar, build_hanoi_pda, recursive_solve, solve, Engine, HanoiGrammar,
    HanoiInstance, HanoiPda, HanoiStackSymbol,
};
pub use grammar::{Grammar, Production, SententialForm, Symbol};
pub use hanoi::{validate_sequence, HanoiNonterminal, HanoiState, MoveSymbol, PegId, ValidationReport};
pub use pda::{Pda, PdaConfiguration, RunOutcome, RunTrace};
