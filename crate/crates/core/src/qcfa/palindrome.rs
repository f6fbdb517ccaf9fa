use std::collections::{BTreeMap, BTreeSet};

use super::{Move, Observable, Qcfa, ThetaEntry};
use crate::scalar::{CMatrix, Rational};
use crate::tape::{Dir, TapeSymbol};

/// Rotation applied on `a` during the first scan.
pub fn rotation_a() -> CMatrix {
    CMatrix::from_integer_rows(fifth(), &[&[4, 3, 0], &[-3, 4, 0], &[0, 0, 5]]).expect("3x3")
}

/// Rotation applied on `b` during the first scan.
pub fn rotation_b() -> CMatrix {
    CMatrix::from_integer_rows(fifth(), &[&[4, 0, 3], &[0, 5, 0], &[-3, 0, 4]]).expect("3x3")
}

fn fifth() -> Rational {
    Rational::new(1, 5).expect("nonzero")
}

/// Two-scan palindrome recognizer over `{a, b}` with a three-state real register.
///
/// * `scan1` sweeps `¢ x $` left to right applying `A` on `a` and `B` on `b`;
/// * `rewind` walks back to `¢` without touching the register;
/// * `scan2` sweeps again applying `Aᵀ = A⁻¹` and `Bᵀ = B⁻¹`;
/// * `final` measures on `$` with `acc = {q0}`, `rej = {q1, q2}`.
///
/// For a palindrome the register returns to `|q0⟩`, so `p_rej = 0` exactly.
pub fn palindrome_machine() -> Qcfa {
    const SCAN1: usize = 0;
    const REWIND: usize = 1;
    const SCAN2: usize = 2;
    const FINAL: usize = 3;
    let a = TapeSymbol::Letter('a');
    let b = TapeSymbol::Letter('b');
    let cent = TapeSymbol::Cent;
    let dollar = TapeSymbol::Dollar;
    let id = || ThetaEntry::Unitary(CMatrix::identity(3));
    let mv = |next, dir| Move { next, dir };

    let mut theta = BTreeMap::new();
    let mut delta = BTreeMap::new();

    theta.insert((SCAN1, cent), id());
    theta.insert((SCAN1, a), ThetaEntry::Unitary(rotation_a()));
    theta.insert((SCAN1, b), ThetaEntry::Unitary(rotation_b()));
    theta.insert((SCAN1, dollar), id());
    delta.insert((SCAN1, cent), mv(SCAN1, Dir::Right));
    delta.insert((SCAN1, a), mv(SCAN1, Dir::Right));
    delta.insert((SCAN1, b), mv(SCAN1, Dir::Right));
    delta.insert((SCAN1, dollar), mv(REWIND, Dir::Left));

    for sym in [cent, a, b, dollar] {
        theta.insert((REWIND, sym), id());
        delta.insert((REWIND, sym), mv(REWIND, Dir::Left));
    }
    delta.insert((REWIND, cent), mv(SCAN2, Dir::Right));

    theta.insert((SCAN2, cent), id());
    theta.insert((SCAN2, a), ThetaEntry::Unitary(rotation_a().transpose()));
    theta.insert((SCAN2, b), ThetaEntry::Unitary(rotation_b().transpose()));
    theta.insert((SCAN2, dollar), id());
    delta.insert((SCAN2, cent), mv(SCAN2, Dir::Right));
    delta.insert((SCAN2, a), mv(SCAN2, Dir::Right));
    delta.insert((SCAN2, b), mv(SCAN2, Dir::Right));
    delta.insert((SCAN2, dollar), mv(FINAL, Dir::Stay));

    let obs = Observable::new([0], [1, 2], []);
    for sym in [cent, a, b, dollar] {
        theta.insert((FINAL, sym), ThetaEntry::Measure(obs.clone()));
        delta.insert((FINAL, sym), mv(FINAL, Dir::Stay));
    }

    Qcfa {
        quantum_states: vec!["q0".into(), "q1".into(), "q2".into()],
        classical_states: vec!["scan1".into(), "rewind".into(), "scan2".into(), "final".into()],
        sigma: vec!['a', 'b'],
        theta,
        delta,
        q0: 0,
        s0: SCAN1,
        s_acc: BTreeSet::new(),
        s_rej: BTreeSet::new(),
    }
}
