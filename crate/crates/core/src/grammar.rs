//! Context-free grammars over opaque terminal and nonterminal payloads, with
//! a leftmost derivation engine, a streaming variant and a bounded language
//! enumerator that explores every rewrite position.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

/// Bounds required of terminal and nonterminal payloads.
pub trait Payload: Clone + Eq + Ord + Hash + fmt::Debug {}

impl<P: Clone + Eq + Ord + Hash + fmt::Debug> Payload for P {}

/// A grammar letter: either a terminal or a nonterminal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol<T, N> {
    Terminal(T),
    Nonterminal(N),
}

impl<T, N> Symbol<T, N> {
    pub fn is_terminal(&self) -> bool {
        matches!(self, Symbol::Terminal(_))
    }

    pub fn is_nonterminal(&self) -> bool {
        matches!(self, Symbol::Nonterminal(_))
    }

    pub fn as_terminal(&self) -> Option<&T> {
        match self {
            Symbol::Terminal(t) => Some(t),
            Symbol::Nonterminal(_) => None,
        }
    }

    pub fn as_nonterminal(&self) -> Option<&N> {
        match self {
            Symbol::Terminal(_) => None,
            Symbol::Nonterminal(n) => Some(n),
        }
    }
}

impl<T: fmt::Display, N: fmt::Display> fmt::Display for Symbol<T, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Terminal(t) => t.fmt(f),
            Symbol::Nonterminal(n) => n.fmt(f),
        }
    }
}

/// A finite string over terminals and nonterminals. The empty form is ε.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SententialForm<T, N>(Vec<Symbol<T, N>>);

impl<T, N> SententialForm<T, N> {
    pub fn empty() -> Self {
        SententialForm(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol<T, N>] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol<T, N>> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leftmost_nonterminal(&self) -> Option<(usize, &N)> {
        self.0
            .iter()
            .enumerate()
            .find_map(|(i, s)| s.as_nonterminal().map(|n| (i, n)))
    }

    pub fn nonterminal_count(&self) -> usize {
        self.0.iter().filter(|s| s.is_nonterminal()).count()
    }

    pub fn is_terminal_word(&self) -> bool {
        self.0.iter().all(Symbol::is_terminal)
    }

    /// The terminal payloads, if the form contains no nonterminal.
    pub fn to_terminal_word(&self) -> Option<Vec<T>>
    where
        T: Clone,
    {
        self.0.iter().map(|s| s.as_terminal().cloned()).collect()
    }
}

impl<T, N> From<Vec<Symbol<T, N>>> for SententialForm<T, N> {
    fn from(symbols: Vec<Symbol<T, N>>) -> Self {
        SententialForm(symbols)
    }
}

impl<T, N> FromIterator<Symbol<T, N>> for SententialForm<T, N> {
    fn from_iter<I: IntoIterator<Item = Symbol<T, N>>>(iter: I) -> Self {
        SententialForm(iter.into_iter().collect())
    }
}

impl<T: fmt::Display, N: fmt::Display> fmt::Display for SententialForm<T, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            s.fmt(f)?;
        }
        Ok(())
    }
}

/// A context-free rewrite rule `lhs → rhs`. The left side is a nonterminal
/// payload by type, so the context-free restriction cannot be violated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Production<T, N> {
    pub lhs: N,
    pub rhs: Vec<Symbol<T, N>>,
}

impl<T, N> Production<T, N> {
    pub fn new(lhs: N, rhs: Vec<Symbol<T, N>>) -> Self {
        Production { lhs, rhs }
    }
}

impl<T: fmt::Display, N: fmt::Display> fmt::Display for Production<T, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} →", self.lhs)?;
        if self.rhs.is_empty() {
            return f.write_str(" ε");
        }
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("start symbol {0} is not among the nonterminals")]
    UnknownStart(String),
    #[error("production {index} has left side {lhs} which is not a declared nonterminal")]
    UnknownLhs { index: usize, lhs: String },
    #[error("production {index} uses undeclared symbol {symbol}")]
    UnknownSymbol { index: usize, symbol: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("no production rewrites nonterminal {nonterminal} at position {position}")]
    NoApplicableProduction { nonterminal: String, position: usize },
    #[error("derivation did not terminate within {limit} steps")]
    StepLimitExceeded { limit: u64 },
    #[error("step limit must be at least 1")]
    InvalidStepLimit,
}

/// Result of a completed leftmost derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation<T> {
    pub word: Vec<T>,
    /// Number of direct derivations performed.
    pub steps: u64,
}

/// Summary of a streaming derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamSummary {
    pub emitted: u64,
    pub steps: u64,
}

/// A context-free grammar `⟨terminals, nonterminals, start, productions⟩`.
///
/// Productions are indexed by left side. When several productions share a
/// left side, the deterministic engines use the first one in insertion order
/// while [`Grammar::enumerate_language`] explores all of them.
#[derive(Debug, Clone)]
pub struct Grammar<T, N> {
    terminals: BTreeSet<T>,
    nonterminals: BTreeSet<N>,
    start: N,
    productions: Vec<Production<T, N>>,
    by_lhs: HashMap<N, Vec<usize>>,
}

impl<T: Payload, N: Payload> Grammar<T, N> {
    pub fn new(
        terminals: impl IntoIterator<Item = T>,
        nonterminals: impl IntoIterator<Item = N>,
        start: N,
        productions: Vec<Production<T, N>>,
    ) -> Result<Self, GrammarError> {
        let terminals: BTreeSet<T> = terminals.into_iter().collect();
        let nonterminals: BTreeSet<N> = nonterminals.into_iter().collect();
        if !nonterminals.contains(&start) {
            return Err(GrammarError::UnknownStart(format!("{start:?}")));
        }
        let mut by_lhs: HashMap<N, Vec<usize>> = HashMap::new();
        for (index, p) in productions.iter().enumerate() {
            if !nonterminals.contains(&p.lhs) {
                return Err(GrammarError::UnknownLhs {
                    index,
                    lhs: format!("{:?}", p.lhs),
                });
            }
            for s in &p.rhs {
                let known = match s {
                    Symbol::Terminal(t) => terminals.contains(t),
                    Symbol::Nonterminal(n) => nonterminals.contains(n),
                };
                if !known {
                    return Err(GrammarError::UnknownSymbol {
                        index,
                        symbol: format!("{s:?}"),
                    });
                }
            }
            by_lhs.entry(p.lhs.clone()).or_default().push(index);
        }
        Ok(Grammar {
            terminals,
            nonterminals,
            start,
            productions,
            by_lhs,
        })
    }

    pub fn terminals(&self) -> &BTreeSet<T> {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &BTreeSet<N> {
        &self.nonterminals
    }

    pub fn start(&self) -> &N {
        &self.start
    }

    pub fn productions(&self) -> &[Production<T, N>] {
        &self.productions
    }

    /// Productions with the given left side, in insertion order.
    pub fn productions_for<'a>(&'a self, lhs: &N) -> impl Iterator<Item = &'a Production<T, N>> + 'a {
        self.by_lhs
            .get(lhs)
            .map(Vec::as_slice)
            .unwrap_or(&[])
            .iter()
            .map(move |&i| &self.productions[i])
    }

    fn first_production(&self, lhs: &N, position: usize) -> Result<&Production<T, N>, DerivationError> {
        self.productions_for(lhs)
            .next()
            .ok_or_else(|| DerivationError::NoApplicableProduction {
                nonterminal: format!("{lhs:?}"),
                position,
            })
    }

    pub fn start_form(&self) -> SententialForm<T, N> {
        SententialForm(vec![Symbol::Nonterminal(self.start.clone())])
    }

    /// One leftmost direct derivation. Returns `None` when the form is
    /// already a terminal word.
    pub fn derive_step(
        &self,
        form: &SententialForm<T, N>,
    ) -> Result<Option<SententialForm<T, N>>, DerivationError> {
        let Some((position, lhs)) = form.leftmost_nonterminal() else {
            return Ok(None);
        };
        let production = self.first_production(lhs, position)?;
        let symbols = form.symbols();
        let mut next = Vec::with_capacity(symbols.len() - 1 + production.rhs.len());
        next.extend_from_slice(&symbols[..position]);
        next.extend_from_slice(&production.rhs);
        next.extend_from_slice(&symbols[position + 1..]);
        Ok(Some(SententialForm(next)))
    }

    /// Rewrites the start symbol leftmost-first until no nonterminal remains.
    ///
    /// The form is rewritten in place. Everything left of the last rewrite
    /// position is terminal, so the search for the next nonterminal resumes
    /// there instead of rescanning the whole form.
    pub fn derive_full(&self, step_limit: u64) -> Result<Derivation<T>, DerivationError> {
        if step_limit == 0 {
            return Err(DerivationError::InvalidStepLimit);
        }
        let mut form = self.start_form().into_symbols();
        let mut cursor = 0;
        let mut steps = 0u64;
        while let Some(offset) = form[cursor..].iter().position(Symbol::is_nonterminal) {
            cursor += offset;
            if steps == step_limit {
                return Err(DerivationError::StepLimitExceeded { limit: step_limit });
            }
            let lhs = form[cursor]
                .as_nonterminal()
                .expect("position found a nonterminal");
            let rhs = self.first_production(lhs, cursor)?.rhs.clone();
            form.splice(cursor..=cursor, rhs);
            steps += 1;
        }
        let word = form
            .into_iter()
            .map(|s| match s {
                Symbol::Terminal(t) => t,
                Symbol::Nonterminal(_) => unreachable!("loop exits only on terminal words"),
            })
            .collect();
        Ok(Derivation { word, steps })
    }

    /// Leftmost derivation that hands each terminal to `sink` as soon as it
    /// becomes the leftmost symbol of the unresolved suffix. Only the suffix
    /// right of the emitted prefix is kept in memory, as a stack with the
    /// leftmost symbol on top.
    pub fn derive_streaming<F>(&self, mut sink: F, step_limit: u64) -> Result<StreamSummary, DerivationError>
    where
        F: FnMut(&T),
    {
        if step_limit == 0 {
            return Err(DerivationError::InvalidStepLimit);
        }
        let start = Symbol::Nonterminal(self.start.clone());
        let mut pending: Vec<&Symbol<T, N>> = vec![&start];
        let mut summary = StreamSummary { emitted: 0, steps: 0 };
        while let Some(top) = pending.pop() {
            match top {
                Symbol::Terminal(t) => {
                    sink(t);
                    summary.emitted += 1;
                }
                Symbol::Nonterminal(n) => {
                    if summary.steps == step_limit {
                        return Err(DerivationError::StepLimitExceeded { limit: step_limit });
                    }
                    let position = usize::try_from(summary.emitted).unwrap_or(usize::MAX);
                    let production = self.first_production(n, position)?;
                    pending.extend(production.rhs.iter().rev());
                    summary.steps += 1;
                }
            }
        }
        Ok(summary)
    }

    /// Every terminal word reachable from the start symbol within
    /// `max_derivation_length` direct derivations, rewriting any nonterminal
    /// at any position with any of its productions.
    pub fn enumerate_language(&self, max_derivation_length: usize) -> BTreeSet<Vec<T>> {
        let mut language = BTreeSet::new();
        let start = self.start_form();
        let mut seen: HashSet<SententialForm<T, N>> = HashSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start];
        for _ in 0..max_derivation_length {
            let mut next_frontier = Vec::new();
            for form in &frontier {
                for (position, symbol) in form.symbols().iter().enumerate() {
                    let Symbol::Nonterminal(lhs) = symbol else {
                        continue;
                    };
                    for production in self.productions_for(lhs) {
                        let symbols = form.symbols();
                        let rewritten: SententialForm<T, N> = symbols[..position]
                            .iter()
                            .chain(&production.rhs)
                            .chain(&symbols[position + 1..])
                            .cloned()
                            .collect();
                        if !seen.insert(rewritten.clone()) {
                            continue;
                        }
                        match rewritten.to_terminal_word() {
                            Some(word) => {
                                language.insert(word);
                            }
                            None => next_frontier.push(rewritten),
                        }
                    }
                }
            }
            if next_frontier.is_empty() {
                break;
            }
            frontier = next_frontier;
        }
        language
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Toy = Grammar<char, &'static str>;

    fn t(c: char) -> Symbol<char, &'static str> {
        Symbol::Terminal(c)
    }

    fn nt(n: &'static str) -> Symbol<char, &'static str> {
        Symbol::Nonterminal(n)
    }

    // S → a S b | ε
    fn anbn() -> Toy {
        Grammar::new(
            ['a', 'b'],
            ["S"],
            "S",
            vec![
                Production::new("S", vec![t('a'), nt("S"), t('b')]),
                Production::new("S", vec![]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_unknown_start() {
        let err = Toy::new(['a'], ["S"], "X", vec![]).unwrap_err();
        assert!(matches!(err, GrammarError::UnknownStart(_)));
    }

    #[test]
    fn rejects_undeclared_rhs_symbol() {
        let err = Toy::new(['a'], ["S"], "S", vec![Production::new("S", vec![t('z')])]).unwrap_err();
        assert_eq!(
            err,
            GrammarError::UnknownSymbol {
                index: 0,
                symbol: "Terminal('z')".into()
            }
        );
    }

    #[test]
    fn rejects_undeclared_lhs() {
        let err = Toy::new(['a'], ["S"], "S", vec![Production::new("B", vec![t('a')])]).unwrap_err();
        assert!(matches!(err, GrammarError::UnknownLhs { index: 0, .. }));
    }

    #[test]
    fn step_on_terminal_word_is_none() {
        let g = anbn();
        let form: SententialForm<_, _> = vec![t('a'), t('b')].into();
        assert_eq!(g.derive_step(&form).unwrap(), None);
    }

    #[test]
    fn step_uses_first_production() {
        let g = anbn();
        let next = g.derive_step(&g.start_form()).unwrap().unwrap();
        assert_eq!(next.symbols(), &[t('a'), nt("S"), t('b')]);
    }

    #[test]
    fn missing_production_is_an_error() {
        let g = Toy::new(
            ['a'],
            ["S", "A"],
            "S",
            vec![Production::new("S", vec![t('a'), nt("A")])],
        )
        .unwrap();
        let form = g.derive_step(&g.start_form()).unwrap().unwrap();
        let err = g.derive_step(&form).unwrap_err();
        assert_eq!(
            err,
            DerivationError::NoApplicableProduction {
                nonterminal: "\"A\"".into(),
                position: 1
            }
        );
        assert!(matches!(
            g.derive_full(10),
            Err(DerivationError::NoApplicableProduction { position: 1, .. })
        ));
    }

    #[test]
    fn non_terminating_grammar_hits_step_limit() {
        let g = anbn();
        assert_eq!(
            g.derive_full(50),
            Err(DerivationError::StepLimitExceeded { limit: 50 })
        );
        assert_eq!(
            g.derive_streaming(|_| {}, 50),
            Err(DerivationError::StepLimitExceeded { limit: 50 })
        );
    }

    #[test]
    fn zero_step_limit_rejected() {
        let g = anbn();
        assert_eq!(g.derive_full(0), Err(DerivationError::InvalidStepLimit));
        assert_eq!(
            g.derive_streaming(|_| {}, 0),
            Err(DerivationError::InvalidStepLimit)
        );
    }

    #[test]
    fn enumerate_explores_alternatives() {
        let g = anbn();
        let words = g.enumerate_language(3);
        let expected: BTreeSet<Vec<char>> = [vec![], vec!['a', 'b'], vec!['a', 'a', 'b', 'b']]
            .into_iter()
            .collect();
        assert_eq!(words, expected);
    }

    #[test]
    fn enumerate_rewrites_non_leftmost_positions() {
        // S → A B, A → a, B → b | c: two words, both needing three steps.
        let g = Toy::new(
            ['a', 'b', 'c'],
            ["S", "A", "B"],
            "S",
            vec![
                Production::new("S", vec![nt("A"), nt("B")]),
                Production::new("A", vec![t('a')]),
                Production::new("B", vec![t('b')]),
                Production::new("B", vec![t('c')]),
            ],
        )
        .unwrap();
        assert!(g.enumerate_language(2).is_empty());
        let words = g.enumerate_language(3);
        assert_eq!(words.len(), 2);
        assert_eq!(g.derive_full(10).unwrap().word, vec!['a', 'b']);
    }

    #[test]
    fn display_forms() {
        let g = anbn();
        assert_eq!(SententialForm::<char, &str>::empty().to_string(), "ε");
        assert_eq!(g.productions()[1].to_string(), "S → ε");
        assert_eq!(g.productions()[0].to_string(), "S → a S b");
    }
}
