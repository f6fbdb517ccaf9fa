//! Block construction turning a 2QCFA into an equivalent two-way weighted automaton.
//!
//! Every classical state `s_i` owns a block of `2·|Q|` automaton states: an
//! input copy `q^i_j` and an output copy `s^i_j` of the quantum basis. Edges
//! inside a block carry `Θ(s_i, σ)` (amplitudes for a unitary, 1 or a tagged
//! `e^{ρ^i_j}` for a measurement) and never move the head. Edges between
//! blocks carry `δ(s_i, σ)` with weight 1 and do move the head. Rejecting
//! measurement outcomes lead to final states `f^i_j`, one per rejecting
//! quantum state of a measuring block, each with its own exponent tag.
//!
//! The sum of the weights reaching `f^i_j` is the unnormalized rejection
//! amplitude of `q_j`; since the tags are distinct, the total weight is the
//! zero sum exactly when every rejection amplitude vanishes.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::qcfa::{default_max_steps, Qcfa, ThetaEntry, TraceRow, ValidationError};
use crate::scalar::{CVector, ExpSum, ExpTag, GaussianRational, Rational};
use crate::tape::Dir;
use crate::wfa::{EvalError, EvalTraceRow, WTransition, Wfa, WfaError};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("machine is invalid: {0}")]
    Invalid(#[from] ValidationError),
    #[error("classical rejecting state {0:?} has no counterpart in the block construction")]
    ClassicalReject(String),
    #[error(transparent)]
    Wfa(#[from] WfaError),
}

/// State numbering of the compiled automaton.
///
/// `q^i_j` is `i·|Q| + j`, `s^i_j` is `|S|·|Q| + i·|Q| + j`, and the final
/// states follow in `(i, j)`-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    num_classical: usize,
    num_quantum: usize,
    finals: BTreeMap<(usize, usize), usize>,
}

impl BlockLayout {
    pub fn for_machine(m: &Qcfa) -> Self {
        let (ns, nq) = (m.num_classical(), m.num_quantum());
        let finals = rejecting_pairs(m)
            .into_iter()
            .enumerate()
            .map(|(k, pair)| (pair, 2 * ns * nq + k))
            .collect();
        BlockLayout {
            num_classical: ns,
            num_quantum: nq,
            finals,
        }
    }

    pub fn q_state(&self, i: usize, j: usize) -> usize {
        i * self.num_quantum + j
    }

    pub fn s_state(&self, i: usize, j: usize) -> usize {
        (self.num_classical + i) * self.num_quantum + j
    }

    pub fn f_state(&self, i: usize, j: usize) -> Option<usize> {
        self.finals.get(&(i, j)).copied()
    }

    pub fn num_finals(&self) -> usize {
        self.finals.len()
    }

    /// `2·|S|·|Q| + |F|`.
    pub fn num_states(&self) -> usize {
        2 * self.num_classical * self.num_quantum + self.finals.len()
    }

    /// Block of a non-final automaton state.
    pub fn block_of(&self, state: usize) -> Option<usize> {
        (state < 2 * self.num_classical * self.num_quantum).then(|| (state / self.num_quantum) % self.num_classical)
    }
}

/// `(i, j)` pairs with `s_i` measuring and `q_j` rejecting in some measurement of `s_i`.
fn rejecting_pairs(m: &Qcfa) -> BTreeSet<(usize, usize)> {
    m.theta
        .iter()
        .filter(|(&(s, _), _)| !m.is_halting(s))
        .filter_map(|(&(s, _), e)| match e {
            ThetaEntry::Measure(obs) => Some(obs.rej.iter().map(move |&j| (s, j))),
            ThetaEntry::Unitary(_) => None,
        })
        .flatten()
        .collect()
}

/// Distinct nonzero exponent tags `ρ^i_j`, one per rejecting pair.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExponentAssignment(pub BTreeMap<(usize, usize), ExpTag>);

impl ExponentAssignment {
    pub fn tag(&self, i: usize, j: usize) -> Option<ExpTag> {
        self.0.get(&(i, j)).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Tags `1, 2, …` in `(i, j)`-lexicographic order; 0 stays reserved for `e⁰`.
pub fn assign_exponents(m: &Qcfa) -> ExponentAssignment {
    ExponentAssignment(
        rejecting_pairs(m)
            .into_iter()
            .zip(1..)
            .collect(),
    )
}

pub fn compile(m: &Qcfa) -> Result<Wfa, CompileError> {
    m.validate()?;
    if let Some(&s) = m.s_rej.iter().next() {
        return Err(CompileError::ClassicalReject(m.classical_states[s].clone()));
    }
    let layout = BlockLayout::for_machine(m);
    let tags = assign_exponents(m);
    let nq = m.num_quantum();

    let mut names = vec![String::new(); layout.num_states()];
    for (i, s_name) in m.classical_states.iter().enumerate() {
        for (j, q_name) in m.quantum_states.iter().enumerate() {
            names[layout.q_state(i, j)] = format!("q[{s_name},{q_name}]");
            names[layout.s_state(i, j)] = format!("s[{s_name},{q_name}]");
        }
    }
    for (&(i, j), &f) in &layout.finals {
        names[f] = format!("f[{},{}]", m.classical_states[i], m.quantum_states[j]);
    }

    let one = ExpSum::one;
    let mut transitions = Vec::new();
    for (&(i, symbol), entry) in m.theta.iter().filter(|(&(s, _), _)| !m.is_halting(s)) {
        match entry {
            ThetaEntry::Unitary(u) => {
                // Column j1 of U is the image of |q_j1⟩.
                for j1 in 0..nq {
                    for j2 in 0..nq {
                        let amp = u.get(j2, j1);
                        if amp.is_zero() {
                            continue;
                        }
                        transitions.push(WTransition {
                            from: layout.q_state(i, j1),
                            symbol,
                            weight: ExpSum::scalar(amp.clone()),
                            to: layout.s_state(i, j2),
                            dir: Dir::Stay,
                        });
                    }
                }
            }
            ThetaEntry::Measure(obs) => {
                for &j in &obs.nh {
                    transitions.push(WTransition {
                        from: layout.q_state(i, j),
                        symbol,
                        weight: one(),
                        to: layout.s_state(i, j),
                        dir: Dir::Stay,
                    });
                }
                for &j in &obs.rej {
                    let tag = tags.tag(i, j).expect("every rejecting pair is tagged");
                    transitions.push(WTransition {
                        from: layout.q_state(i, j),
                        symbol,
                        weight: ExpSum::term(tag, GaussianRational::one()),
                        to: layout.f_state(i, j).expect("every rejecting pair has a final state"),
                        dir: Dir::Stay,
                    });
                }
                // Accepting outcomes end the run with no rejection weight; their
                // zero-weight edges are left out.
            }
        }
    }
    for (&(i, symbol), mv) in m.delta.iter().filter(|(&(s, _), _)| !m.is_halting(s)) {
        for j in 0..nq {
            transitions.push(WTransition {
                from: layout.s_state(i, j),
                symbol,
                weight: one(),
                to: layout.q_state(mv.next, j),
                dir: mv.dir,
            });
        }
    }

    let finals = layout.finals.values().copied().collect();
    Ok(Wfa::new(
        names,
        m.sigma.clone(),
        layout.q_state(m.s0, m.q0),
        finals,
        transitions,
    )?)
}

/// Outcome of comparing the simulator and the compiled automaton on one input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringCheck {
    pub input: String,
    pub p_rej: Option<Rational>,
    pub simulator: Option<Verdict>,
    pub value: Option<ExpSum>,
    pub automaton: Option<Verdict>,
    pub budget_exhausted: bool,
    /// First disagreement between amplitudes and block weights, if any.
    pub trace_mismatch: Option<String>,
    pub error: Option<String>,
}

impl StringCheck {
    pub fn agree(&self) -> bool {
        self.error.is_none()
            && !self.budget_exhausted
            && self.trace_mismatch.is_none()
            && self.simulator.is_some()
            && self.simulator == self.automaton
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub rows: Vec<StringCheck>,
}

impl CrossCheckReport {
    pub fn failures(&self) -> impl Iterator<Item = &StringCheck> {
        self.rows.iter().filter(|r| !r.agree())
    }

    pub fn agreeing(&self) -> usize {
        self.rows.iter().filter(|r| r.agree()).count()
    }

    pub fn budget_exhausted(&self) -> usize {
        self.rows.iter().filter(|r| r.budget_exhausted).count()
    }
}

/// All strings over `sigma` of length at most `max_len`, shortest first and
/// lexicographic (in alphabet order) within a length.
pub fn enumerate_strings(sigma: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|prefix| {
                sigma.iter().map(move |&c| {
                    let mut s = prefix.clone();
                    s.push(c);
                    s
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Runs both machines on `input` and compares verdicts and, when
/// `compare_traces` is set, the amplitude/weight correspondence.
pub fn check_string(
    m: &Qcfa,
    w: &Wfa,
    layout: &BlockLayout,
    input: &str,
    max_steps: Option<usize>,
    compare_traces: bool,
) -> StringCheck {
    let mut row = StringCheck {
        input: input.to_string(),
        p_rej: None,
        simulator: None,
        value: None,
        automaton: None,
        budget_exhausted: false,
        trace_mismatch: None,
        error: None,
    };
    let sim_budget = max_steps.unwrap_or_else(|| default_max_steps(m, input.chars().count()));
    let sim = match m.run(input, sim_budget, compare_traces) {
        Ok(r) => r,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.simulator = sim.verdict();
    row.budget_exhausted |= row.simulator.is_none();
    row.p_rej = Some(sim.p_rej.clone());

    // Two automaton steps per simulator step.
    let eval_budget = 2 * sim_budget + 1;
    match w.evaluate(input, eval_budget, compare_traces) {
        Ok(eval) => {
            row.automaton = Some(if eval.value.is_zero() {
                Verdict::InLanguage
            } else {
                Verdict::NotInLanguage
            });
            row.value = Some(eval.value);
            if let (Some(st), Some(et)) = (sim.trace.as_deref(), eval.trace.as_deref()) {
                row.trace_mismatch = compare_block_traces(layout, st, et).err();
            }
        }
        Err(EvalError::BudgetExhausted(_)) => row.budget_exhausted = true,
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Exhaustive comparison over every input of length at most `max_len`.
pub fn cross_check_with(
    m: &Qcfa,
    w: &Wfa,
    max_len: usize,
    max_steps: Option<usize>,
    compare_traces: bool,
) -> CrossCheckReport {
    let layout = BlockLayout::for_machine(m);
    let rows = enumerate_strings(&m.sigma, max_len)
        .iter()
        .map(|x| check_string(m, w, &layout, x, max_steps, compare_traces))
        .collect();
    CrossCheckReport { rows }
}

pub fn cross_check(
    m: &Qcfa,
    max_len: usize,
    max_steps: Option<usize>,
    compare_traces: bool,
) -> Result<CrossCheckReport, CompileError> {
    let w = compile(m)?;
    Ok(cross_check_with(m, &w, max_len, max_steps, compare_traces))
}

/// Reads the weights of `active` as a vector indexed by quantum state,
/// provided they all sit on `ids(j)` states and are plain scalars.
fn block_vector(
    active: &BTreeMap<usize, ExpSum>,
    nq: usize,
    ids: impl Fn(usize) -> usize,
) -> Result<CVector, String> {
    let mut v = CVector::zeros(nq);
    let mut used = 0;
    for j in 0..nq {
        if let Some(w) = active.get(&ids(j)) {
            let c = w.as_scalar().ok_or_else(|| format!("weight {w} is not a plain scalar"))?;
            v.set(j, c);
            used += 1;
        }
    }
    if used != active.len() {
        return Err("weight outside the current block".to_string());
    }
    Ok(v)
}

/// Checks that after the intra-block half of every simulator step the
/// automaton's weights on `s^i_·` equal the unnormalized amplitudes, and that
/// after the inter-block half they sit on `q^{i'}_·` unchanged.
///
/// Simulator step `k` (1-based) corresponds to automaton steps `2k − 1`
/// and `2k`.
pub fn compare_block_traces(
    layout: &BlockLayout,
    sim: &[TraceRow],
    eval: &[EvalTraceRow],
) -> Result<(), String> {
    let nq = layout.num_quantum;
    let mismatch = |step: usize, what: &str, detail: String| format!("simulator step {step} ({what}): {detail}");
    let (Some(first_sim), Some(first_eval)) = (sim.first(), eval.first()) else {
        return Err("empty trace".to_string());
    };
    let v0 = block_vector(&first_eval.active, nq, |j| layout.q_state(first_sim.state, j))
        .map_err(|e| mismatch(0, "initial", e))?;
    if v0 != first_sim.amplitudes {
        return Err(mismatch(0, "initial", format!("{v0} != {}", first_sim.amplitudes)));
    }

    for k in 1..sim.len() {
        let block = sim[k - 1].state;
        let after = &sim[k];
        let Some(intra) = eval.get(2 * k - 1) else {
            return Err(mismatch(k, "intra-block", "automaton stopped early".to_string()));
        };
        let v = block_vector(&intra.active, nq, |j| layout.s_state(block, j)).map_err(|e| mismatch(k, "intra-block", e))?;
        if v != after.amplitudes {
            return Err(mismatch(k, "intra-block", format!("{v} != {}", after.amplitudes)));
        }
        if after.amplitudes.is_zero() {
            break;
        }
        let Some(inter) = eval.get(2 * k) else {
            return Err(mismatch(k, "inter-block", "automaton stopped early".to_string()));
        };
        let v = block_vector(&inter.active, nq, |j| layout.q_state(after.state, j))
            .map_err(|e| mismatch(k, "inter-block", e))?;
        if v != after.amplitudes {
            return Err(mismatch(k, "inter-block", format!("{v} != {}", after.amplitudes)));
        }
        if inter.head != after.head {
            return Err(mismatch(k, "inter-block", format!("head {} != {}", inter.head, after.head)));
        }
    }
    Ok(())
}
