use thiserror::Error;

use super::{Observable, Qcfa, ThetaEntry};
use crate::scalar::{CVector, GaussianRational, Rational, ScalarError};
use crate::tape::{Tape, TapeSymbol};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("letter {0:?} is not in the input alphabet")]
    NotInAlphabet(char),
    #[error("no theta entry for ({state}, {})", .symbol.key())]
    MissingTheta { state: String, symbol: TapeSymbol },
    #[error("no delta entry for ({state}, {})", .symbol.key())]
    MissingDelta { state: String, symbol: TapeSymbol },
    #[error("head left the tape at step {step}")]
    HeadOutOfBounds { step: usize },
    #[error("step called in halting classical state {0}")]
    Halted(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Simulator state. The amplitude vector is never renormalized, so
/// `p_acc + p_rej + ‖v‖² = 1` holds exactly at every step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub state: usize,
    pub head: usize,
    pub amplitudes: CVector,
    pub p_acc: Rational,
    pub p_rej: Rational,
    pub steps: usize,
}

impl SimConfig {
    pub fn initial(m: &Qcfa) -> Self {
        SimConfig {
            state: m.s0,
            head: 0,
            amplitudes: CVector::basis(m.num_quantum(), m.q0),
            p_acc: Rational::zero(),
            p_rej: Rational::zero(),
            steps: 0,
        }
    }

    /// `p_acc + p_rej + ‖v‖²`.
    pub fn total_mass(&self) -> Rational {
        &(&self.p_acc + &self.p_rej) + &self.amplitudes.norm_sq()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Halt {
    Accepted,
    Rejected,
    MixedFinal,
    BudgetExhausted,
}

impl Halt {
    pub fn label(self) -> &'static str {
        match self {
            Halt::Accepted => "accepted",
            Halt::Rejected => "rejected",
            Halt::MixedFinal => "mixed-final",
            Halt::BudgetExhausted => "budget-exhausted",
        }
    }
}

/// Configuration after `step` simulator steps (row 0 is the initial one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub step: usize,
    pub state: usize,
    pub head: usize,
    pub amplitudes: CVector,
    pub p_acc: Rational,
    pub p_rej: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimResult {
    pub p_acc: Rational,
    pub p_rej: Rational,
    pub halt: Halt,
    pub steps: usize,
    pub trace: Option<Vec<TraceRow>>,
}

impl SimResult {
    /// One-sided-error membership: in the language iff `p_rej = 0` exactly.
    /// `None` when the run did not halt within its budget.
    pub fn verdict(&self) -> Option<Verdict> {
        match self.halt {
            Halt::BudgetExhausted => None,
            _ if self.p_rej.is_zero() => Some(Verdict::InLanguage),
            _ => Some(Verdict::NotInLanguage),
        }
    }
}

/// Outcome of an acc/rej/nh measurement on an unnormalized vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub p_acc: Rational,
    pub p_rej: Rational,
    /// `P_nh v`, deliberately left unnormalized.
    pub nh: CVector,
}

pub fn measure(v: &CVector, obs: &Observable) -> Measurement {
    let mass = |part: &std::collections::BTreeSet<usize>| -> Rational {
        part.iter().map(|&q| v[q].norm_sq()).sum()
    };
    let nh = v
        .iter()
        .enumerate()
        .map(|(q, a)| if obs.nh.contains(&q) { a.clone() } else { GaussianRational::zero() })
        .collect();
    Measurement {
        p_acc: mass(&obs.acc),
        p_rej: mass(&obs.rej),
        nh,
    }
}

/// `10·(n + 2)·|S|`.
pub fn default_max_steps(m: &Qcfa, input_len: usize) -> usize {
    10 * (input_len + 2) * m.num_classical().max(1)
}

impl Qcfa {
    pub fn tape(&self, input: &str) -> Result<Tape, SimError> {
        Tape::checked(input, &self.sigma).map_err(SimError::NotInAlphabet)
    }

    /// One move: apply `Θ(s, σ)` to the register, then follow `δ(s, σ)`.
    pub fn step(&self, c: &SimConfig, tape: &Tape) -> Result<SimConfig, SimError> {
        if self.is_halting(c.state) {
            return Err(SimError::Halted(self.classical_states[c.state].clone()));
        }
        let sym = tape
            .get(c.head)
            .ok_or(SimError::HeadOutOfBounds { step: c.steps })?;
        let name = || self.classical_states[c.state].clone();
        let entry = self.theta(c.state, sym).ok_or_else(|| SimError::MissingTheta {
            state: name(),
            symbol: sym,
        })?;
        let mv = self.delta(c.state, sym).ok_or_else(|| SimError::MissingDelta {
            state: name(),
            symbol: sym,
        })?;

        let mut next = c.clone();
        match entry {
            ThetaEntry::Unitary(u) => {
                next.amplitudes = u.apply(&c.amplitudes)?;
            }
            ThetaEntry::Measure(obs) => {
                let outcome = measure(&c.amplitudes, obs);
                next.p_acc = &next.p_acc + &outcome.p_acc;
                next.p_rej = &next.p_rej + &outcome.p_rej;
                next.amplitudes = outcome.nh;
            }
        }
        next.state = mv.next;
        next.head = mv
            .dir
            .apply(c.head)
            .filter(|&h| h <= tape.last())
            .ok_or(SimError::HeadOutOfBounds { step: c.steps + 1 })?;
        next.steps += 1;
        Ok(next)
    }

    /// Runs from `(s0, ¢, e_{q0})` until a halting classical state is entered,
    /// all amplitude has been absorbed by measurements, or `max_steps` is hit.
    pub fn run(&self, input: &str, max_steps: usize, want_trace: bool) -> Result<SimResult, SimError> {
        let tape = self.tape(input)?;
        let mut c = SimConfig::initial(self);
        let mut trace = want_trace.then(Vec::new);
        let record = |trace: &mut Option<Vec<TraceRow>>, c: &SimConfig| {
            if let Some(t) = trace {
                t.push(TraceRow {
                    step: c.steps,
                    state: c.state,
                    head: c.head,
                    amplitudes: c.amplitudes.clone(),
                    p_acc: c.p_acc.clone(),
                    p_rej: c.p_rej.clone(),
                });
            }
        };
        record(&mut trace, &c);

        loop {
            if self.s_acc.contains(&c.state) {
                c.p_acc = &c.p_acc + &c.amplitudes.norm_sq();
                c.amplitudes = CVector::zeros(self.num_quantum());
            } else if self.s_rej.contains(&c.state) {
                c.p_rej = &c.p_rej + &c.amplitudes.norm_sq();
                c.amplitudes = CVector::zeros(self.num_quantum());
            }
            if c.amplitudes.is_zero() {
                let halt = if c.p_rej.is_zero() {
                    Halt::Accepted
                } else if c.p_acc.is_zero() {
                    Halt::Rejected
                } else {
                    Halt::MixedFinal
                };
                return Ok(SimResult {
                    p_acc: c.p_acc,
                    p_rej: c.p_rej,
                    halt,
                    steps: c.steps,
                    trace,
                });
            }
            if c.steps >= max_steps {
                return Ok(SimResult {
                    p_acc: c.p_acc,
                    p_rej: c.p_rej,
                    halt: Halt::BudgetExhausted,
                    steps: c.steps,
                    trace,
                });
            }
            c = self.step(&c, &tape)?;
            record(&mut trace, &c);
        }
    }
}
