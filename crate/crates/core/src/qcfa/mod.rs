//! Two-way finite automata with quantum and classical states (2QCFA).
//!
//! The quantum register is a vector over `Q`; a classical finite control over
//! `S` drives a two-way head on `¢ x $`. For each `(s, σ)` the machine either
//! applies a unitary `Θ(s, σ)` or measures with an acc/rej/nh observable, then
//! follows `δ(s, σ)`.

mod palindrome;
mod sim;
mod validate;

use std::collections::{BTreeMap, BTreeSet};

pub use palindrome::{palindrome_machine, rotation_a, rotation_b};
pub use sim::{default_max_steps, measure, Halt, Measurement, SimConfig, SimError, SimResult, TraceRow};
pub use validate::{Diagnostic, DiagnosticKind, ValidationError};

use crate::scalar::CMatrix;
use crate::tape::{Dir, TapeSymbol};

/// Partition of the quantum states into accepting, rejecting and
/// non-halting parts. An empty `nh` marks a final measurement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Observable {
    pub acc: BTreeSet<usize>,
    pub rej: BTreeSet<usize>,
    pub nh: BTreeSet<usize>,
}

impl Observable {
    pub fn new(
        acc: impl IntoIterator<Item = usize>,
        rej: impl IntoIterator<Item = usize>,
        nh: impl IntoIterator<Item = usize>,
    ) -> Self {
        Observable {
            acc: acc.into_iter().collect(),
            rej: rej.into_iter().collect(),
            nh: nh.into_iter().collect(),
        }
    }

    pub fn is_final(&self) -> bool {
        self.nh.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ThetaEntry {
    Unitary(CMatrix),
    Measure(Observable),
}

/// Classical move. For a measurement entry it is taken only on the nh outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub next: usize,
    pub dir: Dir,
}

/// A 2QCFA `(Q, S, Σ, Θ, δ, q0, s0, S_acc, S_rej)`.
///
/// States are referred to by index; the name vectors exist for files,
/// diagnostics and traces. Fields are public so that malformed machines can
/// be built and handed to [`Qcfa::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qcfa {
    pub quantum_states: Vec<String>,
    pub classical_states: Vec<String>,
    pub sigma: Vec<char>,
    pub theta: BTreeMap<(usize, TapeSymbol), ThetaEntry>,
    pub delta: BTreeMap<(usize, TapeSymbol), Move>,
    pub q0: usize,
    pub s0: usize,
    pub s_acc: BTreeSet<usize>,
    pub s_rej: BTreeSet<usize>,
}

impl Qcfa {
    pub fn num_quantum(&self) -> usize {
        self.quantum_states.len()
    }

    pub fn num_classical(&self) -> usize {
        self.classical_states.len()
    }

    pub fn tape_alphabet(&self) -> Vec<TapeSymbol> {
        TapeSymbol::tape_alphabet(&self.sigma)
    }

    pub fn is_halting(&self, s: usize) -> bool {
        self.s_acc.contains(&s) || self.s_rej.contains(&s)
    }

    pub fn theta(&self, s: usize, sym: TapeSymbol) -> Option<&ThetaEntry> {
        self.theta.get(&(s, sym))
    }

    pub fn delta(&self, s: usize, sym: TapeSymbol) -> Option<Move> {
        self.delta.get(&(s, sym)).copied()
    }

    pub fn quantum_index(&self, name: &str) -> Option<usize> {
        self.quantum_states.iter().position(|n| n == name)
    }

    pub fn classical_index(&self, name: &str) -> Option<usize> {
        self.classical_states.iter().position(|n| n == name)
    }

    /// `S_m`: classical states with a measurement entry on some tape symbol.
    pub fn measurement_states(&self) -> BTreeSet<usize> {
        self.theta
            .iter()
            .filter(|(_, e)| matches!(e, ThetaEntry::Measure(_)))
            .map(|(&(s, _), _)| s)
            .collect()
    }

    /// `S_u`: non-halting classical states whose every entry is unitary.
    pub fn unitary_states(&self) -> BTreeSet<usize> {
        let measuring = self.measurement_states();
        (0..self.num_classical())
            .filter(|s| !self.is_halting(*s) && !measuring.contains(s))
            .collect()
    }

    /// Classical states whose entries all leave the register untouched.
    pub fn trivial_states(&self) -> BTreeSet<usize> {
        let gamma = self.tape_alphabet();
        self.unitary_states()
            .into_iter()
            .filter(|&s| {
                gamma
                    .iter()
                    .all(|&sym| matches!(self.theta(s, sym), Some(ThetaEntry::Unitary(u)) if u.is_identity()))
            })
            .collect()
    }
}
