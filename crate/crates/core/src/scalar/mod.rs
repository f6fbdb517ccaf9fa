//! Exact scalars: rationals, Gaussian rationals ℚ(i), small dense matrices and
//! vectors over them, and formal exponential sums used as automaton weights.

mod expsum;
mod gaussian;
mod matrix;
mod rational;

pub use expsum::{ExpSum, ExpTag};
pub use gaussian::GaussianRational;
pub use matrix::{CMatrix, CVector};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational literal {0:?}")]
    MalformedRational(String),
    #[error("malformed complex literal {0:?}")]
    MalformedComplex(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A commutative semiring `(K, ⊕, ⊗, 0̄, 1̄)`.
pub trait Semiring: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
}

impl Semiring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl Semiring for ExpSum {
    fn zero() -> Self {
        ExpSum::zero()
    }
    fn one() -> Self {
        ExpSum::one()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
}
