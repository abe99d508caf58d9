//! Towers of Hanoi domain model: pegs, moves, states and sequence replay.
//!
//! Discs are identified by size alone, `1` being the smallest. Pegs are
//! stored bottom-to-top, so the last element of a peg is its top disc.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HanoiError {
    #[error("disc count must be at least 1")]
    InvalidDiscCount,
    #[error("peg {0} is out of range (expected 1, 2 or 3)")]
    InvalidPeg(u32),
    #[error("a move needs two distinct pegs, got {0} twice")]
    SamePeg(u8),
    #[error("peg {peg} has no disc to move")]
    EmptySource { peg: PegId },
    #[error("disc {disc} cannot be placed on smaller disc {onto}")]
    LargerOnSmaller { disc: u32, onto: u32 },
    #[error("state holds {found} discs, expected {expected}")]
    DiscCountMismatch { expected: u32, found: u32 },
    #[error("disc {0} is duplicated or outside 1..=N")]
    InvalidDisc(u32),
}

/// One of the three pegs, numbered 1 to 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct PegId(u8);

impl PegId {
    pub const ONE: PegId = PegId(1);
    pub const TWO: PegId = PegId(2);
    pub const THREE: PegId = PegId(3);
    pub const ALL: [PegId; 3] = [PegId::ONE, PegId::TWO, PegId::THREE];

    pub fn new(value: u8) -> Result<Self, HanoiError> {
        match value {
            1..=3 => Ok(PegId(value)),
            other => Err(HanoiError::InvalidPeg(other.into())),
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    fn index(self) -> usize {
        usize::from(self.0 - 1)
    }

    /// The peg that is neither `a` nor `b`. Requires `a != b`.
    pub fn third(a: PegId, b: PegId) -> PegId {
        debug_assert_ne!(a, b);
        PegId(6 - a.0 - b.0)
    }
}

impl TryFrom<u8> for PegId {
    type Error = HanoiError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        PegId::new(value)
    }
}

impl From<PegId> for u8 {
    fn from(peg: PegId) -> u8 {
        peg.0
    }
}

impl fmt::Display for PegId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Terminal `p_ij`: move the top disc from peg `i` to peg `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MoveSymbol {
    from: PegId,
    to: PegId,
}

impl MoveSymbol {
    pub fn new(from: PegId, to: PegId) -> Result<Self, HanoiError> {
        if from == to {
            return Err(HanoiError::SamePeg(from.0));
        }
        Ok(MoveSymbol { from, to })
    }

    /// All six moves in lexicographic `(from, to)` order.
    pub fn all() -> [MoveSymbol; 6] {
        let m = |a, b| MoveSymbol {
            from: PegId(a),
            to: PegId(b),
        };
        [m(1, 2), m(1, 3), m(2, 1), m(2, 3), m(3, 1), m(3, 2)]
    }

    pub fn from(self) -> PegId {
        self.from
    }

    pub fn to(self) -> PegId {
        self.to
    }

    pub fn reversed(self) -> MoveSymbol {
        MoveSymbol {
            from: self.to,
            to: self.from,
        }
    }
}

impl fmt::Display for MoveSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}{}", self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {token:?}: {reason}")]
pub struct ParseSymbolError {
    pub token: String,
    pub reason: &'static str,
}

fn parse_peg(c: char) -> Option<PegId> {
    match c {
        '1' => Some(PegId::ONE),
        '2' => Some(PegId::TWO),
        '3' => Some(PegId::THREE),
        _ => None,
    }
}

fn parse_peg_pair(token: &str, digits: &str) -> Result<(PegId, PegId), ParseSymbolError> {
    let err = |reason| ParseSymbolError {
        token: token.to_owned(),
        reason,
    };
    let mut chars = digits.chars();
    let (Some(a), Some(b), None) = (chars.next(), chars.next(), chars.next()) else {
        return Err(err("expected exactly two peg digits"));
    };
    let from = parse_peg(a).ok_or_else(|| err("peg digits must be 1, 2 or 3"))?;
    let to = parse_peg(b).ok_or_else(|| err("peg digits must be 1, 2 or 3"))?;
    if from == to {
        return Err(err("source and target peg must differ"));
    }
    Ok((from, to))
}

impl FromStr for MoveSymbol {
    type Err = ParseSymbolError;

    /// Parses the `pij` form, e.g. `p13`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s.strip_prefix('p').ok_or_else(|| ParseSymbolError {
            token: s.to_owned(),
            reason: "move codes start with 'p'",
        })?;
        let (from, to) = parse_peg_pair(s, digits)?;
        Ok(MoveSymbol { from, to })
    }
}

impl Serialize for MoveSymbol {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MoveSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Nonterminal `h_ij(n)`: move `n` discs from peg `i` to peg `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HanoiNonterminal {
    from: PegId,
    to: PegId,
    discs: u32,
}

impl HanoiNonterminal {
    pub fn new(from: PegId, to: PegId, discs: u32) -> Result<Self, HanoiError> {
        if from == to {
            return Err(HanoiError::SamePeg(from.0));
        }
        if discs == 0 {
            return Err(HanoiError::InvalidDiscCount);
        }
        Ok(HanoiNonterminal { from, to, discs })
    }

    pub fn from(self) -> PegId {
        self.from
    }

    pub fn to(self) -> PegId {
        self.to
    }

    pub fn discs(self) -> u32 {
        self.discs
    }

    /// The peg used as auxiliary.
    pub fn via(self) -> PegId {
        PegId::third(self.from, self.to)
    }

    /// The single move this task reduces to when it concerns one disc.
    pub fn as_move(self) -> MoveSymbol {
        MoveSymbol {
            from: self.from,
            to: self.to,
        }
    }
}

impl fmt::Display for HanoiNonterminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h{}{}({})", self.from, self.to, self.discs)
    }
}

impl FromStr for HanoiNonterminal {
    type Err = ParseSymbolError;

    /// Parses the `hij(n)` form, e.g. `h12(4)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseSymbolError {
            token: s.to_owned(),
            reason,
        };
        let rest = s
            .strip_prefix('h')
            .ok_or_else(|| err("nonterminals start with 'h'"))?;
        let (pegs, count) = rest
            .split_once('(')
            .ok_or_else(|| err("expected a disc count in parentheses"))?;
        let count = count
            .strip_suffix(')')
            .ok_or_else(|| err("missing closing parenthesis"))?;
        let (from, to) = parse_peg_pair(s, pegs)?;
        let discs: u32 = count.parse().map_err(|_| err("disc count is not a number"))?;
        if discs == 0 {
            return Err(err("disc count must be at least 1"));
        }
        Ok(HanoiNonterminal { from, to, discs })
    }
}

/// Three pegs of discs, each listed bottom-to-top.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HanoiState {
    pegs: [Vec<u32>; 3],
}

impl HanoiState {
    /// All `n_discs` discs on peg 1, largest at the bottom.
    pub fn initial(n_discs: u32) -> Result<Self, HanoiError> {
        if n_discs == 0 {
            return Err(HanoiError::InvalidDiscCount);
        }
        Ok(HanoiState {
            pegs: [(1..=n_discs).rev().collect(), Vec::new(), Vec::new()],
        })
    }

    /// Builds a state from explicit pegs, checking that each peg strictly
    /// decreases bottom-to-top and that the discs are exactly `1..=N`.
    pub fn from_pegs(pegs: [Vec<u32>; 3]) -> Result<Self, HanoiError> {
        let state = HanoiState { pegs };
        state.check_invariants()?;
        Ok(state)
    }

    pub fn check_invariants(&self) -> Result<(), HanoiError> {
        for peg in &self.pegs {
            for pair in peg.windows(2) {
                if pair[0] <= pair[1] {
                    return Err(HanoiError::LargerOnSmaller {
                        disc: pair[1],
                        onto: pair[0],
                    });
                }
            }
        }
        let n = self.disc_count();
        let mut seen = vec![false; n as usize + 1];
        for &d in self.pegs.iter().flatten() {
            if d == 0 || d > n || std::mem::replace(&mut seen[d as usize], true) {
                return Err(HanoiError::InvalidDisc(d));
            }
        }
        Ok(())
    }

    pub fn peg(&self, peg: PegId) -> &[u32] {
        &self.pegs[peg.index()]
    }

    pub fn pegs(&self) -> &[Vec<u32>; 3] {
        &self.pegs
    }

    pub fn top(&self, peg: PegId) -> Option<u32> {
        self.peg(peg).last().copied()
    }

    pub fn disc_count(&self) -> u32 {
        self.pegs.iter().map(|p| p.len() as u32).sum()
    }

    pub fn check_move(&self, mv: MoveSymbol) -> Result<(), HanoiError> {
        let disc = self
            .top(mv.from)
            .ok_or(HanoiError::EmptySource { peg: mv.from })?;
        match self.top(mv.to) {
            Some(onto) if onto < disc => Err(HanoiError::LargerOnSmaller { disc, onto }),
            _ => Ok(()),
        }
    }

    /// The state after moving the top disc of `mv.from()` onto `mv.to()`.
    pub fn apply_move(&self, mv: MoveSymbol) -> Result<HanoiState, HanoiError> {
        let mut next = self.clone();
        next.apply_in_place(mv)?;
        Ok(next)
    }

    fn apply_in_place(&mut self, mv: MoveSymbol) -> Result<(), HanoiError> {
        self.check_move(mv)?;
        let disc = self.pegs[mv.from.index()].pop().expect("checked non-empty");
        self.pegs[mv.to.index()].push(disc);
        Ok(())
    }

    pub fn legal_moves(&self) -> impl Iterator<Item = MoveSymbol> + '_ {
        MoveSymbol::all()
            .into_iter()
            .filter(move |&mv| self.check_move(mv).is_ok())
    }

    /// True when peg 3 holds all `n_discs` discs.
    pub fn is_solved(&self, n_discs: u32) -> Result<bool, HanoiError> {
        let found = self.disc_count();
        if found != n_discs {
            return Err(HanoiError::DiscCountMismatch {
                expected: n_discs,
                found,
            });
        }
        Ok(self.peg(PegId::THREE).len() as u32 == n_discs)
    }
}

/// Outcome of replaying a move sequence from the initial state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub legal: bool,
    /// 0-based position of the first illegal move.
    pub failing_index: Option<usize>,
    /// Why the move at `failing_index` was rejected.
    pub failure: Option<String>,
    pub final_solved: bool,
    pub moves_checked: usize,
}

/// Incremental replay of moves from the initial state, used to validate
/// sequences that are produced one move at a time.
#[derive(Debug, Clone)]
pub struct Replay {
    n_discs: u32,
    state: HanoiState,
    applied: usize,
    failure: Option<(usize, HanoiError)>,
}

impl Replay {
    pub fn new(n_discs: u32) -> Result<Self, HanoiError> {
        Ok(Replay {
            n_discs,
            state: HanoiState::initial(n_discs)?,
            applied: 0,
            failure: None,
        })
    }

    /// Applies `mv`. After the first illegal move the replay stops and all
    /// later moves are ignored.
    pub fn push(&mut self, mv: MoveSymbol) -> Result<(), &HanoiError> {
        if self.failure.is_none() {
            match self.state.apply_in_place(mv) {
                Ok(()) => self.applied += 1,
                Err(e) => self.failure = Some((self.applied, e)),
            }
        }
        match &self.failure {
            Some((_, e)) => Err(e),
            None => Ok(()),
        }
    }

    pub fn state(&self) -> &HanoiState {
        &self.state
    }

    pub fn report(&self) -> ValidationReport {
        match &self.failure {
            Some((index, error)) => ValidationReport {
                legal: false,
                failing_index: Some(*index),
                failure: Some(error.to_string()),
                final_solved: false,
                moves_checked: index + 1,
            },
            None => ValidationReport {
                legal: true,
                failing_index: None,
                failure: None,
                final_solved: self.state.is_solved(self.n_discs).unwrap_or(false),
                moves_checked: self.applied,
            },
        }
    }
}

/// Replays `moves` from the initial `n_discs` state and reports the first
/// illegal move, if any.
pub fn validate_sequence(n_discs: u32, moves: &[MoveSymbol]) -> Result<ValidationReport, HanoiError> {
    let mut replay = Replay::new(n_discs)?;
    for &mv in moves {
        if replay.push(mv).is_err() {
            break;
        }
    }
    Ok(replay.report())
}
