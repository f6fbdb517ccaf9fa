//! Exact simulation of two-way quantum-classical finite automata over ℚ(i),
//! their compilation into two-way weighted automata whose weights are formal
//! exponential sums, and a zero-sum membership test for the compiled machine.

pub mod compiler;
pub mod format;
pub mod qcfa;
pub mod scalar;
pub mod tape;
pub mod wfa;

pub use compiler::{compile, CompileError};
pub use qcfa::{palindrome_machine, Qcfa};
pub use scalar::{CMatrix, CVector, ExpSum, ExpTag, GaussianRational, Rational, Semiring};
pub use tape::{Dir, Tape, TapeSymbol};
pub use wfa::Wfa;

use std::fmt;

/// Language membership decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    InLanguage,
    NotInLanguage,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::InLanguage => "in-language",
            Verdict::NotInLanguage => "not-in-language",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
