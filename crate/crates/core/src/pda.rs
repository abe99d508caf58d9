//! Pushdown automata `⟨states, input alphabet, stack alphabet, δ, q0, z0, F⟩`
//! with a nondeterministic successor relation, a determinism check, a
//! deterministic runner that halts on empty stack, and a bounded
//! breadth-first search for acceptance by final state.
//!
//! Stacks are kept with the top at the front: replacing the top `z` by a
//! word `γ` makes the first symbol of `γ` the new top.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::grammar::Payload;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdaError {
    #[error("start state {0} is not a declared state")]
    UnknownStartState(String),
    #[error("start stack symbol {0} is not in the stack alphabet")]
    UnknownStartStack(String),
    #[error("accepting state {0} is not a declared state")]
    UnknownAcceptingState(String),
    #[error("observable symbol {0} is not in the stack alphabet")]
    UnknownObservable(String),
    #[error("transition from {transition} uses undeclared {what} {value}")]
    MalformedTransition {
        transition: String,
        what: &'static str,
        value: String,
    },
    #[error("configuration has an empty stack and no successor")]
    EmptyStack,
    #[error("automaton is not deterministic: {0}")]
    NondeterministicPda(String),
    #[error("step limit must be at least 1")]
    InvalidStepLimit,
}

type TransitionKey<Q, A, Z> = (Q, Option<A>, Z);
type TransitionTargets<Q, Z> = BTreeSet<(Q, Vec<Z>)>;

/// A (possibly nondeterministic) pushdown automaton. Build it with
/// [`Pda::builder`].
#[derive(Debug, Clone)]
pub struct Pda<Q, A, Z> {
    states: BTreeSet<Q>,
    input_alphabet: BTreeSet<A>,
    stack_alphabet: BTreeSet<Z>,
    transitions: BTreeMap<TransitionKey<Q, A, Z>, TransitionTargets<Q, Z>>,
    start_state: Q,
    start_stack: Z,
    accepting: BTreeSet<Q>,
    observable: BTreeSet<Z>,
}

pub struct PdaBuilder<Q, A, Z> {
    pda: Pda<Q, A, Z>,
}

impl<Q: Payload, A: Payload, Z: Payload> PdaBuilder<Q, A, Z> {
    pub fn state(mut self, q: Q) -> Self {
        self.pda.states.insert(q);
        self
    }

    pub fn input_letter(mut self, a: A) -> Self {
        self.pda.input_alphabet.insert(a);
        self
    }

    pub fn stack_symbol(mut self, z: Z) -> Self {
        self.pda.stack_alphabet.insert(z);
        self
    }

    pub fn accepting(mut self, q: Q) -> Self {
        self.pda.accepting.insert(q);
        self
    }

    /// Marks `z` so that the runner reports it to its observer whenever a
    /// transition consumes it from the top of the stack.
    pub fn observable(mut self, z: Z) -> Self {
        self.pda.observable.insert(z);
        self
    }

    /// Adds `(target, push) ∈ δ(source, letter, top)`; `None` is ε.
    pub fn transition(mut self, source: Q, letter: Option<A>, top: Z, target: Q, push: Vec<Z>) -> Self {
        self.pda
            .transitions
            .entry((source, letter, top))
            .or_default()
            .insert((target, push));
        self
    }

    pub fn build(self) -> Result<Pda<Q, A, Z>, PdaError> {
        self.pda.validate()?;
        Ok(self.pda)
    }
}

/// Instantaneous description `⟨state, remaining input, stack⟩`, stack top first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PdaConfiguration<Q, A, Z> {
    pub state: Q,
    pub remaining_input: VecDeque<A>,
    pub stack: VecDeque<Z>,
}

impl<Q, A, Z> PdaConfiguration<Q, A, Z> {
    pub fn stack_top(&self) -> Option<&Z> {
        self.stack.front()
    }

    fn replace_top(&mut self, push: &[Z])
    where
        Z: Clone,
    {
        self.stack.pop_front();
        for z in push.iter().rev() {
            self.stack.push_front(z.clone());
        }
    }
}

impl<Q: fmt::Display, A: fmt::Display, Z: fmt::Display> fmt::Display for PdaConfiguration<Q, A, Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn word<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &VecDeque<T>) -> fmt::Result {
            if items.is_empty() {
                return f.write_str("ε");
            }
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                x.fmt(f)?;
            }
            Ok(())
        }
        write!(f, "⟨{}, ", self.state)?;
        word(f, &self.remaining_input)?;
        f.write_str(", ")?;
        word(f, &self.stack)?;
        f.write_str("⟩")
    }
}

/// Which determinism condition a `(state, stack symbol)` pair satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeterminismCondition {
    /// Every input letter has at most one move and there is no ε-move.
    InputDriven,
    /// No input letter has a move and there is at most one ε-move.
    EpsilonDriven,
    /// No moves at all; both conditions hold.
    Idle,
}

/// Why a `(state, stack symbol)` pair satisfies neither condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NondeterminismReason {
    /// There are moves on some input letter and also ε-moves.
    InputAndEpsilon { letter: String },
    /// Some input letter has more than one move.
    InputBranching { letter: String, choices: usize },
    /// There is more than one ε-move.
    EpsilonBranching { choices: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondeterminismWitness<Q, Z> {
    pub state: Q,
    pub stack_top: Z,
    pub reason: NondeterminismReason,
}

impl<Q: fmt::Debug, Z: fmt::Debug> fmt::Display for NondeterminismWitness<Q, Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "state {:?} with stack top {:?}: ", self.state, self.stack_top)?;
        match &self.reason {
            NondeterminismReason::InputAndEpsilon { letter } => {
                write!(f, "moves on input {letter} and on ε")
            }
            NondeterminismReason::InputBranching { letter, choices } => {
                write!(f, "{choices} moves on input {letter}")
            }
            NondeterminismReason::EpsilonBranching { choices } => write!(f, "{choices} ε-moves"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    EmptyStackHalt,
    AcceptingStateHalt,
    Stuck,
    StepLimit,
}

/// Outcome of [`Pda::run_to_empty_stack`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace<Z> {
    pub steps: u64,
    /// Observable stack symbols, in the order they were consumed.
    pub emitted: Vec<Z>,
    pub outcome: RunOutcome,
    pub max_stack_depth: usize,
}

/// Summary of a deterministic run whose observations went only to a callback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub steps: u64,
    pub emitted: u64,
    pub outcome: RunOutcome,
    pub max_stack_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceptance {
    Accepted,
    Rejected,
    /// The step limit was reached before the search space was exhausted.
    Inconclusive,
}

impl Acceptance {
    pub fn is_accepted(self) -> bool {
        self == Acceptance::Accepted
    }
}

impl<Q: Payload, A: Payload, Z: Payload> Pda<Q, A, Z> {
    pub fn builder(start_state: Q, start_stack: Z) -> PdaBuilder<Q, A, Z> {
        let pda = Pda {
            states: BTreeSet::from([start_state.clone()]),
            input_alphabet: BTreeSet::new(),
            stack_alphabet: BTreeSet::from([start_stack.clone()]),
            transitions: BTreeMap::new(),
            start_state,
            start_stack,
            accepting: BTreeSet::new(),
            observable: BTreeSet::new(),
        };
        PdaBuilder { pda }
    }

    fn validate(&self) -> Result<(), PdaError> {
        if !self.states.contains(&self.start_state) {
            return Err(PdaError::UnknownStartState(format!("{:?}", self.start_state)));
        }
        if !self.stack_alphabet.contains(&self.start_stack) {
            return Err(PdaError::UnknownStartStack(format!("{:?}", self.start_stack)));
        }
        if let Some(q) = self.accepting.iter().find(|q| !self.states.contains(q)) {
            return Err(PdaError::UnknownAcceptingState(format!("{q:?}")));
        }
        if let Some(z) = self.observable.iter().find(|z| !self.stack_alphabet.contains(z)) {
            return Err(PdaError::UnknownObservable(format!("{z:?}")));
        }
        for ((source, letter, top), targets) in &self.transitions {
            let malformed = |what, value: String| PdaError::MalformedTransition {
                transition: format!("({source:?}, {letter:?}, {top:?})"),
                what,
                value,
            };
            if !self.states.contains(source) {
                return Err(malformed("state", format!("{source:?}")));
            }
            if let Some(a) = letter {
                if !self.input_alphabet.contains(a) {
                    return Err(malformed("input letter", format!("{a:?}")));
                }
            }
            if !self.stack_alphabet.contains(top) {
                return Err(malformed("stack symbol", format!("{top:?}")));
            }
            for (target, push) in targets {
                if !self.states.contains(target) {
                    return Err(malformed("state", format!("{target:?}")));
                }
                if let Some(z) = push.iter().find(|z| !self.stack_alphabet.contains(z)) {
                    return Err(malformed("stack symbol", format!("{z:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn states(&self) -> &BTreeSet<Q> {
        &self.states
    }

    pub fn input_alphabet(&self) -> &BTreeSet<A> {
        &self.input_alphabet
    }

    pub fn stack_alphabet(&self) -> &BTreeSet<Z> {
        &self.stack_alphabet
    }

    pub fn start_state(&self) -> &Q {
        &self.start_state
    }

    pub fn start_stack(&self) -> &Z {
        &self.start_stack
    }

    pub fn accepting(&self) -> &BTreeSet<Q> {
        &self.accepting
    }

    pub fn is_observable(&self, z: &Z) -> bool {
        self.observable.contains(z)
    }

    /// Number of `(state, letter-or-ε, stack symbol)` keys with at least one move.
    pub fn transition_entry_count(&self) -> usize {
        self.transitions.values().filter(|t| !t.is_empty()).count()
    }

    /// All `(target, push)` pairs in `δ(state, letter, top)`.
    pub fn moves(&self, state: &Q, letter: Option<&A>, top: &Z) -> impl Iterator<Item = &(Q, Vec<Z>)> {
        // BTreeMap lookups need an owned key; the clones are of small payloads.
        self.transitions
            .get(&(state.clone(), letter.cloned(), top.clone()))
            .into_iter()
            .flatten()
    }

    pub fn start_configuration(&self, input: impl IntoIterator<Item = A>) -> PdaConfiguration<Q, A, Z> {
        PdaConfiguration {
            state: self.start_state.clone(),
            remaining_input: input.into_iter().collect(),
            stack: VecDeque::from([self.start_stack.clone()]),
        }
    }

    /// Every configuration reachable in one move: input-consuming moves on
    /// the next letter, followed by ε-moves. An empty result means the
    /// configuration is stuck.
    pub fn step(
        &self,
        config: &PdaConfiguration<Q, A, Z>,
    ) -> Result<Vec<PdaConfiguration<Q, A, Z>>, PdaError> {
        let top = config.stack_top().ok_or(PdaError::EmptyStack)?;
        let mut successors = Vec::new();
        if let Some(letter) = config.remaining_input.front() {
            for (target, push) in self.moves(&config.state, Some(letter), top) {
                let mut next = config.clone();
                next.state = target.clone();
                next.remaining_input.pop_front();
                next.replace_top(push);
                successors.push(next);
            }
        }
        for (target, push) in self.moves(&config.state, None, top) {
            let mut next = config.clone();
            next.state = target.clone();
            next.replace_top(push);
            successors.push(next);
        }
        Ok(successors)
    }

    /// The condition satisfied at `(state, top)`, or why neither holds.
    pub fn determinism_at(&self, state: &Q, top: &Z) -> Result<DeterminismCondition, NondeterminismReason> {
        let epsilon = self.moves(state, None, top).count();
        let mut input_moves = self
            .input_alphabet
            .iter()
            .map(|a| (a, self.moves(state, Some(a), top).count()))
            .filter(|&(_, n)| n > 0);
        match (input_moves.next(), epsilon) {
            (None, 0) => Ok(DeterminismCondition::Idle),
            (None, 1) => Ok(DeterminismCondition::EpsilonDriven),
            (None, choices) => Err(NondeterminismReason::EpsilonBranching { choices }),
            (Some((a, _)), e) if e > 0 => Err(NondeterminismReason::InputAndEpsilon {
                letter: format!("{a:?}"),
            }),
            (Some(first), _) => match std::iter::once(first).chain(input_moves).find(|&(_, n)| n > 1) {
                Some((a, choices)) => Err(NondeterminismReason::InputBranching {
                    letter: format!("{a:?}"),
                    choices,
                }),
                None => Ok(DeterminismCondition::InputDriven),
            },
        }
    }

    /// Checks the determinism conditions for every state and stack symbol,
    /// returning the first violating pair.
    pub fn is_deterministic(&self) -> Result<(), NondeterminismWitness<Q, Z>> {
        for q in &self.states {
            for z in &self.stack_alphabet {
                if let Err(reason) = self.determinism_at(q, z) {
                    return Err(NondeterminismWitness {
                        state: q.clone(),
                        stack_top: z.clone(),
                        reason,
                    });
                }
            }
        }
        Ok(())
    }

    /// Runs a deterministic automaton from `⟨q0, input, z0⟩` and reports
    /// every consumed observable stack symbol to `observer`.
    ///
    /// The run ends with [`RunOutcome::EmptyStackHalt`] once the input is
    /// exhausted and the stack is empty, regardless of the accepting set. A
    /// run that stops earlier with exhausted input in an accepting state
    /// ends with [`RunOutcome::AcceptingStateHalt`]; any other stop is
    /// [`RunOutcome::Stuck`].
    pub fn run_with_observer<F>(
        &self,
        input: impl IntoIterator<Item = A>,
        step_limit: u64,
        mut observer: F,
    ) -> Result<RunSummary, PdaError>
    where
        F: FnMut(&Z),
    {
        let mut runner = self.runner(input, step_limit)?;
        let mut emitted = 0u64;
        let outcome = loop {
            match runner.advance_with(|z| {
                emitted += 1;
                observer(z)
            }) {
                Advance::Moved => {}
                Advance::Halted(outcome) => break outcome,
            }
        };
        Ok(RunSummary {
            steps: runner.steps,
            emitted,
            outcome,
            max_stack_depth: runner.max_stack_depth,
        })
    }

    /// Like [`Pda::run_with_observer`], also collecting the observed symbols.
    pub fn run_to_empty_stack<F>(
        &self,
        input: impl IntoIterator<Item = A>,
        step_limit: u64,
        mut observer: F,
    ) -> Result<RunTrace<Z>, PdaError>
    where
        F: FnMut(&Z),
    {
        let mut emitted = Vec::new();
        let summary = self.run_with_observer(input, step_limit, |z| {
            observer(z);
            emitted.push(z.clone());
        })?;
        Ok(RunTrace {
            steps: summary.steps,
            emitted,
            outcome: summary.outcome,
            max_stack_depth: summary.max_stack_depth,
        })
    }

    /// A stepwise deterministic runner, for callers that want to inspect
    /// every configuration.
    pub fn runner(
        &self,
        input: impl IntoIterator<Item = A>,
        step_limit: u64,
    ) -> Result<DeterministicRunner<'_, Q, A, Z>, PdaError> {
        if step_limit == 0 {
            return Err(PdaError::InvalidStepLimit);
        }
        if let Err(witness) = self.is_deterministic() {
            return Err(PdaError::NondeterministicPda(witness.to_string()));
        }
        Ok(DeterministicRunner {
            pda: self,
            config: self.start_configuration(input),
            steps: 0,
            step_limit,
            max_stack_depth: 1,
        })
    }

    /// Breadth-first search for a configuration with exhausted input in an
    /// accepting state, exploring at most `step_limit` moves deep.
    pub fn accepts_by_final_state(&self, input: impl IntoIterator<Item = A>, step_limit: u64) -> Acceptance {
        if self.accepting.is_empty() {
            return Acceptance::Rejected;
        }
        let start = self.start_configuration(input);
        let accepts =
            |c: &PdaConfiguration<Q, A, Z>| c.remaining_input.is_empty() && self.accepting.contains(&c.state);
        if accepts(&start) {
            return Acceptance::Accepted;
        }
        let mut seen = HashSet::from([start.clone()]);
        let mut frontier = vec![start];
        for _ in 0..step_limit {
            let mut next = Vec::new();
            for config in &frontier {
                // an empty stack has no successors
                let Ok(successors) = self.step(config) else {
                    continue;
                };
                for s in successors {
                    if accepts(&s) {
                        return Acceptance::Accepted;
                    }
                    if seen.insert(s.clone()) {
                        next.push(s);
                    }
                }
            }
            if next.is_empty() {
                return Acceptance::Rejected;
            }
            frontier = next;
        }
        Acceptance::Inconclusive
    }
}

pub enum Advance {
    Moved,
    Halted(RunOutcome),
}

/// Follows the unique move chain of a deterministic automaton one
/// transition at a time.
pub struct DeterministicRunner<'a, Q, A, Z> {
    pda: &'a Pda<Q, A, Z>,
    config: PdaConfiguration<Q, A, Z>,
    steps: u64,
    step_limit: u64,
    max_stack_depth: usize,
}

impl<'a, Q: Payload, A: Payload, Z: Payload> DeterministicRunner<'a, Q, A, Z> {
    pub fn configuration(&self) -> &PdaConfiguration<Q, A, Z> {
        &self.config
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn max_stack_depth(&self) -> usize {
        self.max_stack_depth
    }

    pub fn advance(&mut self) -> Advance {
        self.advance_with(|_| {})
    }

    /// Takes one move, passing the consumed stack top to `observer` when it
    /// is flagged observable.
    pub fn advance_with<F: FnOnce(&Z)>(&mut self, observer: F) -> Advance {
        let pda = self.pda;
        let config = &mut self.config;
        let Some(top) = config.stack.front() else {
            return Advance::Halted(if config.remaining_input.is_empty() {
                RunOutcome::EmptyStackHalt
            } else {
                RunOutcome::Stuck
            });
        };
        let on_input = config
            .remaining_input
            .front()
            .and_then(|a| pda.moves(&config.state, Some(a), top).next());
        let (chosen, consumes) = match on_input {
            Some(m) => (m, true),
            None => match pda.moves(&config.state, None, top).next() {
                Some(m) => (m, false),
                None if config.remaining_input.is_empty() && pda.accepting.contains(&config.state) => {
                    return Advance::Halted(RunOutcome::AcceptingStateHalt)
                }
                None => return Advance::Halted(RunOutcome::Stuck),
            },
        };
        if self.steps == self.step_limit {
            return Advance::Halted(RunOutcome::StepLimit);
        }
        if pda.is_observable(top) {
            observer(top);
        }
        let (target, push) = chosen;
        config.state = target.clone();
        if consumes {
            config.remaining_input.pop_front();
        }
        config.replace_top(push);
        self.steps += 1;
        self.max_stack_depth = self.max_stack_depth.max(config.stack.len());
        Advance::Moved
    }
}
