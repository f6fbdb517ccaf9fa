//! Two-way weighted finite automata over ℂ with [`ExpSum`] weights.
//!
//! A machine `(S, Σ, q₀, F, Δ, 1, 1)` has a single initial state and unit
//! initial/final weights. The value of an input is the ⊕-sum over all paths
//! from `q₀` into `F` of the ⊗-product of their edge weights, where each path
//! reads the symbols that come under the head along the way.
//!
//! Evaluation is a forward sweep over a sparse frontier of path-weight sums.
//! It requires head-determinism: at each step, every enabled transition must
//! move the head the same way, so a single head position serves all paths.
//! Weight flowing into a final state is moved to an accumulator; final states
//! have no outgoing transitions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::scalar::ExpSum;
use crate::tape::{Dir, Tape, TapeSymbol};
use crate::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WTransition {
    pub from: usize,
    pub symbol: TapeSymbol,
    pub weight: ExpSum,
    pub to: usize,
    pub dir: Dir,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WfaError {
    #[error("duplicate state name {0:?}")]
    DuplicateName(String),
    #[error("unknown state index {0}")]
    UnknownState(usize),
    #[error("symbol {} is not in the tape alphabet", .0.key())]
    UnknownSymbol(TapeSymbol),
    #[error("final state {0:?} has outgoing transitions")]
    FinalHasOutgoing(String),
}

#[derive(Clone, Debug)]
pub struct Wfa {
    states: Vec<String>,
    sigma: Vec<char>,
    initial: usize,
    finals: BTreeSet<usize>,
    transitions: Vec<WTransition>,
    by_source: HashMap<(usize, TapeSymbol), Vec<usize>>,
}

impl PartialEq for Wfa {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
            && self.sigma == other.sigma
            && self.initial == other.initial
            && self.finals == other.finals
            && self.transitions == other.transitions
    }
}

impl Eq for Wfa {}

impl Wfa {
    /// Zero-weight transitions are dropped; they contribute nothing to any path sum.
    pub fn new(
        states: Vec<String>,
        sigma: Vec<char>,
        initial: usize,
        finals: BTreeSet<usize>,
        transitions: Vec<WTransition>,
    ) -> Result<Self, WfaError> {
        let mut seen = BTreeSet::new();
        for n in &states {
            if !seen.insert(n) {
                return Err(WfaError::DuplicateName(n.clone()));
            }
        }
        let n = states.len();
        if initial >= n {
            return Err(WfaError::UnknownState(initial));
        }
        if let Some(&f) = finals.iter().find(|&&f| f >= n) {
            return Err(WfaError::UnknownState(f));
        }
        let gamma = TapeSymbol::tape_alphabet(&sigma);
        let transitions: Vec<WTransition> = transitions.into_iter().filter(|t| !t.weight.is_zero()).collect();
        let mut by_source: HashMap<(usize, TapeSymbol), Vec<usize>> = HashMap::new();
        for (k, t) in transitions.iter().enumerate() {
            if t.from >= n || t.to >= n {
                return Err(WfaError::UnknownState(t.from.max(t.to)));
            }
            if !gamma.contains(&t.symbol) {
                return Err(WfaError::UnknownSymbol(t.symbol));
            }
            if finals.contains(&t.from) {
                return Err(WfaError::FinalHasOutgoing(states[t.from].clone()));
            }
            by_source.entry((t.from, t.symbol)).or_default().push(k);
        }
        Ok(Wfa {
            states,
            sigma,
            initial,
            finals,
            transitions,
            by_source,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn sigma(&self) -> &[char] {
        &self.sigma
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn transitions(&self) -> &[WTransition] {
        &self.transitions
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|n| n == name)
    }

    /// Transitions leaving `state` on `symbol`, in insertion order.
    pub fn outgoing(&self, state: usize, symbol: TapeSymbol) -> impl Iterator<Item = &WTransition> {
        self.by_source
            .get(&(state, symbol))
            .into_iter()
            .flatten()
            .map(|&k| &self.transitions[k])
    }

    /// Same budget shape as the 2QCFA simulator: `10·(n + 2)·|S|`.
    pub fn default_max_steps(&self, input_len: usize) -> usize {
        10 * (input_len + 2) * self.num_states().max(1)
    }

    fn tape(&self, input: &str) -> Result<Tape, EvalError> {
        Tape::checked(input, &self.sigma).map_err(EvalError::NotInAlphabet)
    }

    /// Computes the weight of `input` by sweeping the frontier of path sums.
    pub fn evaluate(&self, input: &str, max_steps: usize, want_trace: bool) -> Result<Evaluation, EvalError> {
        let tape = self.tape(input)?;
        let mut active: BTreeMap<usize, ExpSum> = BTreeMap::new();
        let mut accum = ExpSum::zero();
        if self.finals.contains(&self.initial) {
            accum = ExpSum::one();
        } else {
            active.insert(self.initial, ExpSum::one());
        }
        let mut head = 0usize;
        let mut steps = 0usize;
        let mut scan = Vec::new();
        let mut trace = want_trace.then(Vec::new);
        if let Some(t) = trace.as_mut() {
            t.push(EvalTraceRow {
                step: 0,
                head,
                active: active.clone(),
            });
        }

        while !active.is_empty() {
            if steps >= max_steps {
                return Err(EvalError::BudgetExhausted(steps));
            }
            steps += 1;
            let symbol = tape.get(head).ok_or(EvalError::HeadOutOfBounds { step: steps })?;
            scan.push((head, symbol));

            let mut next: BTreeMap<usize, ExpSum> = BTreeMap::new();
            let mut common: Option<(Dir, usize)> = None;
            for (&state, w) in &active {
                for t in self.outgoing(state, symbol) {
                    match common {
                        None => common = Some((t.dir, state)),
                        Some((d, first)) if d != t.dir => {
                            return Err(EvalError::HeadNondeterminism(HeadViolation {
                                step: steps,
                                head,
                                symbol,
                                moves: vec![(self.states[first].clone(), d), (self.states[state].clone(), t.dir)],
                            }));
                        }
                        Some(_) => {}
                    }
                    let contribution = w.mul(&t.weight);
                    if self.finals.contains(&t.to) {
                        accum.add_assign(&contribution);
                    } else {
                        next.entry(t.to).or_default().add_assign(&contribution);
                    }
                }
            }
            next.retain(|_, w| !w.is_zero());
            if !next.is_empty() {
                let dir = common.map_or(Dir::Stay, |(d, _)| d);
                head = dir
                    .apply(head)
                    .filter(|&h| h <= tape.last())
                    .ok_or(EvalError::HeadOutOfBounds { step: steps })?;
            }
            active = next;
            if let Some(t) = trace.as_mut() {
                t.push(EvalTraceRow {
                    step: steps,
                    head,
                    active: active.clone(),
                });
            }
        }

        Ok(Evaluation {
            value: accum,
            scan: ScanRecord(scan),
            steps,
            trace,
        })
    }

    /// `{0}`-recognition: `input` is in the language iff its weight is the zero sum.
    pub fn recognize_zero(&self, input: &str, max_steps: usize) -> Result<Verdict, EvalError> {
        let eval = self.evaluate(input, max_steps, false)?;
        Ok(if eval.value.is_zero() {
            Verdict::InLanguage
        } else {
            Verdict::NotInLanguage
        })
    }

    /// Dry run over the reachable states (ignoring weights) confirming that
    /// all enabled transitions agree on the head direction at every step.
    /// Stops quietly when the frontier empties, the head leaves the tape or
    /// the budget is spent.
    pub fn check_head_determinism(&self, input: &str, max_steps: usize) -> Result<(), HeadViolation> {
        let tape = Tape::new(input);
        let mut active: BTreeSet<usize> = BTreeSet::from([self.initial]);
        active.retain(|s| !self.finals.contains(s));
        let mut head = 0usize;
        for step in 1..=max_steps {
            let Some(symbol) = tape.get(head) else { break };
            if active.is_empty() {
                break;
            }
            let mut moves: Vec<(usize, Dir)> = Vec::new();
            let mut next = BTreeSet::new();
            for &state in &active {
                for t in self.outgoing(state, symbol) {
                    moves.push((state, t.dir));
                    if !self.finals.contains(&t.to) {
                        next.insert(t.to);
                    }
                }
            }
            let dirs: BTreeSet<Dir> = moves.iter().map(|&(_, d)| d).collect();
            if dirs.len() > 1 {
                let mut seen = BTreeSet::new();
                let moves = moves
                    .into_iter()
                    .filter(|&(_, d)| seen.insert(d))
                    .map(|(s, d)| (self.states[s].clone(), d))
                    .collect();
                return Err(HeadViolation {
                    step,
                    head,
                    symbol,
                    moves,
                });
            }
            match dirs.into_iter().next().map_or(Some(head), |d| d.apply(head)) {
                Some(h) => head = h,
                None => break,
            }
            active = next;
        }
        Ok(())
    }
}

/// Where head-determinism fails: at least two enabled transitions, one per
/// listed `(state, dir)`, disagree on the direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadViolation {
    pub step: usize,
    pub head: usize,
    pub symbol: TapeSymbol,
    pub moves: Vec<(String, Dir)>,
}

impl fmt::Display for HeadViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let moves: Vec<String> = self.moves.iter().map(|(s, d)| format!("{s} moves {d}")).collect();
        write!(
            f,
            "step {} at head {} on {}: {}",
            self.step,
            self.head,
            self.symbol.key(),
            moves.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("letter {0:?} is not in the input alphabet")]
    NotInAlphabet(char),
    #[error("head nondeterminism: {0}")]
    HeadNondeterminism(HeadViolation),
    #[error("head left the tape at step {step}")]
    HeadOutOfBounds { step: usize },
    #[error("frontier still active after {0} steps")]
    BudgetExhausted(usize),
}

/// Positions and symbols read by the head, one entry per evaluation step.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ScanRecord(pub Vec<(usize, TapeSymbol)>);

impl ScanRecord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = TapeSymbol> + '_ {
        self.0.iter().map(|&(_, s)| s)
    }
}

/// Frontier after `step` evaluation steps; `head` is the position for the next read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalTraceRow {
    pub step: usize,
    pub head: usize,
    pub active: BTreeMap<usize, ExpSum>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: ExpSum,
    pub scan: ScanRecord,
    pub steps: usize,
    pub trace: Option<Vec<EvalTraceRow>>,
}
