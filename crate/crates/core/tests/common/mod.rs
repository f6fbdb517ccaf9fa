#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use qcwfa::qcfa::{Move, Observable, ThetaEntry};
use qcwfa::wfa::WTransition;
use qcwfa::{CMatrix, Dir, ExpSum, GaussianRational, Qcfa, Rational, Tape, TapeSymbol, Wfa};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn gr(s: &str) -> GaussianRational {
    s.parse().unwrap()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

/// Sum over every labelled path from the initial state into a final state of
/// the product of its weights. Each path is followed on its own with its own
/// head, independently of every other path; nothing is merged.
pub fn brute_force_paths(w: &Wfa, input: &str, max_len: usize) -> ExpSum {
    let tape = Tape::new(input);
    let mut total = ExpSum::zero();
    if w.finals().contains(&w.initial()) {
        return ExpSum::one();
    }
    let mut stack = vec![(w.initial(), 0usize, ExpSum::one(), 0usize)];
    while let Some((state, head, weight, depth)) = stack.pop() {
        assert!(depth < max_len, "path longer than {max_len}; oracle needs an acyclic machine");
        let Some(symbol) = tape.get(head) else { continue };
        for t in w.transitions().iter().filter(|t| t.from == state && t.symbol == symbol) {
            let product = weight.mul(&t.weight);
            if w.finals().contains(&t.to) {
                total = total.add(&product);
            } else if let Some(next) = t.dir.apply(head).filter(|&h| h <= tape.last()) {
                stack.push((t.to, next, product, depth + 1));
            }
        }
    }
    total
}

fn wt(from: usize, symbol: TapeSymbol, weight: ExpSum, to: usize, dir: Dir) -> WTransition {
    WTransition {
        from,
        symbol,
        weight,
        to,
        dir,
    }
}

fn scalar(s: &str) -> ExpSum {
    ExpSum::scalar(gr(s))
}

fn tagged(tag: u64, s: &str) -> ExpSum {
    ExpSum::term(tag, gr(s))
}

const CENT: TapeSymbol = TapeSymbol::Cent;
const DOLLAR: TapeSymbol = TapeSymbol::Dollar;
const A: TapeSymbol = TapeSymbol::Letter('a');
const B: TapeSymbol = TapeSymbol::Letter('b');

fn names(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("p{k}")).collect()
}

/// One-way, two parallel branches with different letter weights; merges on `$`.
pub fn branching_wfa() -> Wfa {
    Wfa::new(
        names(4),
        vec!['a', 'b'],
        0,
        BTreeSet::from([3]),
        vec![
            wt(0, CENT, scalar("1"), 1, Dir::Right),
            wt(0, CENT, scalar("-1/2"), 2, Dir::Right),
            wt(1, A, scalar("2"), 1, Dir::Right),
            wt(1, B, scalar("1i"), 1, Dir::Right),
            wt(1, B, scalar("1"), 2, Dir::Right),
            wt(2, A, scalar("3"), 2, Dir::Right),
            wt(2, B, scalar("-1"), 2, Dir::Right),
            wt(1, DOLLAR, tagged(1, "1"), 3, Dir::Stay),
            wt(2, DOLLAR, tagged(2, "1"), 3, Dir::Stay),
            wt(2, DOLLAR, scalar("5"), 3, Dir::Stay),
        ],
    )
    .unwrap()
}

/// Two-way: sweeps right to `$`, then back to `¢`, forking on `a` during the
/// return sweep.
pub fn sweeping_wfa() -> Wfa {
    Wfa::new(
        names(4),
        vec!['a', 'b'],
        0,
        BTreeSet::from([3]),
        vec![
            wt(0, CENT, scalar("1"), 0, Dir::Right),
            wt(0, A, scalar("2"), 0, Dir::Right),
            wt(0, B, scalar("1/3-1i"), 0, Dir::Right),
            wt(0, DOLLAR, scalar("1"), 1, Dir::Left),
            wt(1, A, scalar("1/2"), 1, Dir::Left),
            wt(1, A, scalar("-1"), 2, Dir::Left),
            wt(1, B, scalar("1i"), 1, Dir::Left),
            wt(2, A, scalar("3"), 2, Dir::Left),
            wt(2, B, scalar("3"), 2, Dir::Left),
            wt(1, CENT, tagged(1, "1"), 3, Dir::Stay),
            wt(2, CENT, tagged(2, "1"), 3, Dir::Stay),
        ],
    )
    .unwrap()
}

/// Stationary steps, multi-term weights and paths that cancel.
pub fn cancelling_wfa() -> Wfa {
    let mixed = ExpSum::from_terms([(0, gr("1")), (1, gr("1"))]);
    Wfa::new(
        names(4),
        vec!['a', 'b'],
        0,
        BTreeSet::from([3]),
        vec![
            wt(0, CENT, mixed, 1, Dir::Stay),
            wt(0, CENT, scalar("-1"), 2, Dir::Stay),
            wt(1, CENT, scalar("1"), 1, Dir::Right),
            wt(2, CENT, tagged(1, "1"), 1, Dir::Right),
            wt(2, CENT, scalar("1"), 2, Dir::Right),
            wt(1, A, scalar("1"), 1, Dir::Right),
            wt(1, B, tagged(1, "-1"), 2, Dir::Right),
            wt(2, A, scalar("1"), 2, Dir::Right),
            wt(2, B, scalar("1"), 1, Dir::Right),
            wt(1, DOLLAR, scalar("1"), 3, Dir::Stay),
            wt(2, DOLLAR, scalar("1"), 3, Dir::Stay),
        ],
    )
    .unwrap()
}

pub fn hand_wfas() -> Vec<(&'static str, Wfa)> {
    vec![
        ("branching", branching_wfa()),
        ("sweeping", sweeping_wfa()),
        ("cancelling", cancelling_wfa()),
    ]
}

pub fn random_string(rng: &mut impl Rng, sigma: &[char], max_len: usize) -> String {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| *sigma.choose(rng).unwrap()).collect()
}

pub fn random_palindrome(rng: &mut impl Rng, max_len: usize) -> String {
    let n = rng.gen_range(0..=max_len);
    let half: String = (0..n / 2).map(|_| *['a', 'b'].choose(rng).unwrap()).collect();
    let middle = if n % 2 == 1 { ['a', 'b'].choose(rng).unwrap().to_string() } else { String::new() };
    let back: String = half.chars().rev().collect();
    format!("{half}{middle}{back}")
}

/// Random unitary over ℚ(i): a phased permutation times a rational rotation
/// in a random coordinate plane.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let phases = ["1", "-1", "1i", "-1i"];
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut rows = vec![vec![GaussianRational::zero(); n]; n];
    for (r, &c) in perm.iter().enumerate() {
        rows[r][c] = gr(phases.choose(rng).unwrap());
    }
    let phased = CMatrix::from_rows(rows).unwrap();
    if n < 2 {
        return phased;
    }
    let (cos, sin) = *[("3/5", "4/5"), ("5/13", "12/13"), ("8/17", "15/17")].choose(rng).unwrap();
    let (p, r) = {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        (idx[0], idx[1])
    };
    let mut rot = vec![vec![GaussianRational::zero(); n]; n];
    for (k, row) in rot.iter_mut().enumerate() {
        row[k] = GaussianRational::one();
    }
    let complex = rng.gen_bool(0.5);
    rot[p][p] = gr(cos);
    rot[r][r] = gr(cos);
    if complex {
        rot[p][r] = gr(&format!("{sin}i"));
        rot[r][p] = gr(&format!("{sin}i"));
    } else {
        rot[p][r] = gr(&format!("-{sin}"));
        rot[r][p] = gr(sin);
    }
    phased.mul(&CMatrix::from_rows(rot).unwrap()).unwrap()
}

fn random_observable(rng: &mut impl Rng, nq: usize, q0: usize, is_final: bool) -> Observable {
    let mut acc = Vec::new();
    let mut rej = Vec::new();
    let mut nh = Vec::new();
    for k in 0..nq {
        let bucket = if !is_final && k == q0 {
            2
        } else if is_final {
            rng.gen_range(0..2)
        } else {
            rng.gen_range(0..3)
        };
        match bucket {
            0 => acc.push(k),
            1 => rej.push(k),
            _ => nh.push(k),
        }
    }
    Observable::new(acc, rej, nh)
}

/// A random machine that passes validation. Moves respect the end-markers and
/// the sweep structure makes most runs halt through a final measurement.
pub fn random_machine(rng: &mut impl Rng) -> Qcfa {
    let nq = rng.gen_range(2..=4);
    let ns = rng.gen_range(2..=5);
    let sigma = vec!['a', 'b'];
    let gamma = TapeSymbol::tape_alphabet(&sigma);
    let mut theta = BTreeMap::new();
    let mut delta = BTreeMap::new();
    let final_state = ns - 1;
    for s in 0..ns {
        for &sym in &gamma {
            let entry = if s == final_state {
                ThetaEntry::Measure(random_observable(rng, nq, 0, true))
            } else if rng.gen_bool(0.2) {
                ThetaEntry::Measure(random_observable(rng, nq, 0, false))
            } else {
                ThetaEntry::Unitary(random_unitary(rng, nq))
            };
            theta.insert((s, sym), entry);
            let mv = if s == final_state {
                Move { next: s, dir: Dir::Stay }
            } else {
                match sym {
                    TapeSymbol::Dollar => Move {
                        next: s + 1,
                        dir: if rng.gen_bool(0.5) { Dir::Left } else { Dir::Stay },
                    },
                    TapeSymbol::Cent => Move { next: s, dir: Dir::Right },
                    TapeSymbol::Letter(_) => Move {
                        next: s,
                        dir: if rng.gen_bool(0.3) && s % 2 == 1 { Dir::Left } else { Dir::Right },
                    },
                }
            };
            delta.insert((s, sym), mv);
        }
    }
    let m = Qcfa {
        quantum_states: (0..nq).map(|k| format!("q{k}")).collect(),
        classical_states: (0..ns).map(|k| format!("c{k}")).collect(),
        sigma,
        theta,
        delta,
        q0: 0,
        s0: 0,
        s_acc: BTreeSet::new(),
        s_rej: BTreeSet::new(),
    };
    m.validate().unwrap();
    m
}
