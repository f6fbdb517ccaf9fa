use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Qcfa, ThetaEntry};
use crate::tape::{Dir, TapeSymbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    DuplicateName(String),
    InvalidName(String),
    DuplicateLetter(char),
    UnknownQuantumState(usize),
    UnknownClassicalState(usize),
    HaltingSetsOverlap,
    MissingTheta,
    MissingDelta,
    UnknownSymbol,
    WrongDimension { rows: usize, cols: usize, expected: usize },
    NotUnitary,
    NotPartition(String),
    InitialNotNonHalting,
    MovesOffTape(Dir),
}

/// One violation, optionally located at a `(classical state, tape symbol)` entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub at: Option<(String, TapeSymbol)>,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((state, sym)) = &self.at {
            write!(f, "at ({state}, {}): ", sym.key())?;
        }
        match &self.kind {
            DiagnosticKind::DuplicateName(n) => write!(f, "duplicate state name {n:?}"),
            DiagnosticKind::InvalidName(n) => write!(f, "invalid state name {n:?}"),
            DiagnosticKind::DuplicateLetter(c) => write!(f, "duplicate letter {c:?} in alphabet"),
            DiagnosticKind::UnknownQuantumState(q) => write!(f, "unknown quantum state index {q}"),
            DiagnosticKind::UnknownClassicalState(s) => write!(f, "unknown classical state index {s}"),
            DiagnosticKind::HaltingSetsOverlap => write!(f, "s_acc and s_rej overlap"),
            DiagnosticKind::MissingTheta => write!(f, "missing theta entry"),
            DiagnosticKind::MissingDelta => write!(f, "missing delta entry"),
            DiagnosticKind::UnknownSymbol => write!(f, "symbol is not in the tape alphabet"),
            DiagnosticKind::WrongDimension { rows, cols, expected } => {
                write!(f, "matrix is {rows}x{cols}, expected {expected}x{expected}")
            }
            DiagnosticKind::NotUnitary => write!(f, "unitarity violation"),
            DiagnosticKind::NotPartition(why) => write!(f, "observable is not a partition: {why}"),
            DiagnosticKind::InitialNotNonHalting => write!(f, "q0 placement violation: q0 is not in nh"),
            DiagnosticKind::MovesOffTape(d) => write!(f, "head would move off the tape (dir {d})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{} violation(s): {}", .0.len(), .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct ValidationError(pub Vec<Diagnostic>);

impl Qcfa {
    /// Checks every model constraint and returns all violations at once.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut out = Vec::new();
        let global = |kind| Diagnostic { at: None, kind };

        for names in [&self.quantum_states, &self.classical_states] {
            let mut seen = BTreeSet::new();
            for n in names {
                if n.is_empty() || n.contains(':') {
                    out.push(global(DiagnosticKind::InvalidName(n.clone())));
                }
                if !seen.insert(n) {
                    out.push(global(DiagnosticKind::DuplicateName(n.clone())));
                }
            }
        }
        let mut letters = BTreeSet::new();
        for &c in &self.sigma {
            if !letters.insert(c) {
                out.push(global(DiagnosticKind::DuplicateLetter(c)));
            }
        }

        let nq = self.num_quantum();
        let ns = self.num_classical();
        if self.q0 >= nq {
            out.push(global(DiagnosticKind::UnknownQuantumState(self.q0)));
        }
        for &s in std::iter::once(&self.s0).chain(&self.s_acc).chain(&self.s_rej) {
            if s >= ns {
                out.push(global(DiagnosticKind::UnknownClassicalState(s)));
            }
        }
        if !self.s_acc.is_disjoint(&self.s_rej) {
            out.push(global(DiagnosticKind::HaltingSetsOverlap));
        }

        let name = |s: usize| {
            self.classical_states
                .get(s)
                .cloned()
                .unwrap_or_else(|| format!("#{s}"))
        };
        let gamma = self.tape_alphabet();
        let located = |s: usize, sym: TapeSymbol, kind| Diagnostic { at: Some((name(s), sym)), kind };

        for s in (0..ns).filter(|&s| !self.is_halting(s)) {
            for &sym in &gamma {
                if !self.theta.contains_key(&(s, sym)) {
                    out.push(located(s, sym, DiagnosticKind::MissingTheta));
                }
                if !self.delta.contains_key(&(s, sym)) {
                    out.push(located(s, sym, DiagnosticKind::MissingDelta));
                }
            }
        }

        for (&(s, sym), entry) in &self.theta {
            if s >= ns {
                out.push(located(s, sym, DiagnosticKind::UnknownClassicalState(s)));
            }
            if !gamma.contains(&sym) {
                out.push(located(s, sym, DiagnosticKind::UnknownSymbol));
            }
            match entry {
                ThetaEntry::Unitary(u) => {
                    if u.rows() != nq || u.cols() != nq {
                        out.push(located(
                            s,
                            sym,
                            DiagnosticKind::WrongDimension {
                                rows: u.rows(),
                                cols: u.cols(),
                                expected: nq,
                            },
                        ));
                    } else if !u.is_unitary() {
                        out.push(located(s, sym, DiagnosticKind::NotUnitary));
                    }
                }
                ThetaEntry::Measure(obs) => {
                    if let Some(why) = partition_defect(obs, nq) {
                        out.push(located(s, sym, DiagnosticKind::NotPartition(why)));
                    }
                    // A final measurement has no nh part to hold q0.
                    if !obs.is_final() && !obs.nh.contains(&self.q0) {
                        out.push(located(s, sym, DiagnosticKind::InitialNotNonHalting));
                    }
                }
            }
        }

        for (&(s, sym), mv) in &self.delta {
            if s >= ns {
                out.push(located(s, sym, DiagnosticKind::UnknownClassicalState(s)));
            }
            if !gamma.contains(&sym) {
                out.push(located(s, sym, DiagnosticKind::UnknownSymbol));
            }
            if mv.next >= ns {
                out.push(located(s, sym, DiagnosticKind::UnknownClassicalState(mv.next)));
            }
            let off_tape = matches!(
                (sym, mv.dir),
                (TapeSymbol::Cent, Dir::Left) | (TapeSymbol::Dollar, Dir::Right)
            );
            if off_tape {
                out.push(located(s, sym, DiagnosticKind::MovesOffTape(mv.dir)));
            }
        }

        if out.is_empty() {
            Ok(())
        } else {
            Err(ValidationError(out))
        }
    }
}

fn partition_defect(obs: &super::Observable, nq: usize) -> Option<String> {
    let parts = [("acc", &obs.acc), ("rej", &obs.rej), ("nh", &obs.nh)];
    for (label, part) in parts {
        if let Some(q) = part.iter().find(|&&q| q >= nq) {
            return Some(format!("{label} names unknown quantum state {q}"));
        }
    }
    for (i, (la, a)) in parts.iter().enumerate() {
        for (lb, b) in &parts[i + 1..] {
            if let Some(q) = a.intersection(b).next() {
                return Some(format!("{la} and {lb} share quantum state {q}"));
            }
        }
    }
    let covered = obs.acc.len() + obs.rej.len() + obs.nh.len();
    if covered != nq {
        return Some(format!("parts cover {covered} of {nq} quantum states"));
    }
    None
}
