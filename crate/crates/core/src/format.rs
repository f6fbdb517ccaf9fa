//! JSON machine files.
//!
//! Scalars are exact: a rational is a string such as `"-3/5"` and a complex
//! entry is `{"re": "4/5", "im": "0"}`. Tape symbols are written as the
//! letter itself, `"cent"` for `¢` or `"dollar"` for `$`; per-entry tables
//! are keyed `"state:symbol"`.
//!
//! Rendering is deterministic: entries come out in state order, then tape
//! order, so identical machines produce byte-identical files.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::qcfa::{Move, Observable, Qcfa, ThetaEntry, ValidationError};
use crate::scalar::{CMatrix, ExpSum, ExpTag, GaussianRational, ScalarError};
use crate::tape::{Dir, TapeSymbol};
use crate::wfa::{WTransition, Wfa, WfaError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{key}: {source}")]
    Entry { key: String, source: serde_json::Error },
    #[error("{key}: {source}")]
    Scalar { key: String, source: ScalarError },
    #[error("{key}: unknown state {name:?}")]
    UnknownState { key: String, name: String },
    #[error("{key}: unknown symbol {symbol:?}")]
    UnknownSymbol { key: String, symbol: String },
    #[error("{0:?}: expected a \"state:symbol\" key")]
    BadKey(String),
    #[error("{key}: direction must be -1, 0 or 1, got {dir}")]
    BadDir { key: String, dir: i64 },
    #[error("sigma entry {0:?} is not a single character")]
    BadLetter(String),
    #[error("{0}")]
    Invalid(#[from] ValidationError),
    #[error("{0}")]
    Wfa(#[from] WfaError),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ComplexLiteral {
    pub re: String,
    pub im: String,
}

impl ComplexLiteral {
    pub fn parse(&self) -> Result<GaussianRational, ScalarError> {
        Ok(GaussianRational::new(self.re.parse()?, self.im.parse()?))
    }
}

impl From<&GaussianRational> for ComplexLiteral {
    fn from(z: &GaussianRational) -> Self {
        ComplexLiteral {
            re: z.re.to_string(),
            im: z.im.to_string(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QcfaFile {
    sigma: Vec<String>,
    quantum_states: Vec<String>,
    classical_states: Vec<String>,
    q0: String,
    s0: String,
    s_acc: Vec<String>,
    s_rej: Vec<String>,
    theta: Map<String, Value>,
    delta: Map<String, Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum ThetaRecord {
    Unitary(Vec<Vec<ComplexLiteral>>),
    Measure(ObservableRecord),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservableRecord {
    acc: Vec<String>,
    rej: Vec<String>,
    nh: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRecord {
    next: String,
    dir: i64,
}

fn lookup(names: &[String], name: &str, key: &str) -> Result<usize, FormatError> {
    names.iter().position(|n| n == name).ok_or_else(|| FormatError::UnknownState {
        key: key.to_string(),
        name: name.to_string(),
    })
}

fn parse_letters(sigma: &[String]) -> Result<Vec<char>, FormatError> {
    sigma
        .iter()
        .map(|s| {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(FormatError::BadLetter(s.clone())),
            }
        })
        .collect()
}

fn parse_symbol(text: &str, sigma: &[char], key: &str) -> Result<TapeSymbol, FormatError> {
    let unknown = || FormatError::UnknownSymbol {
        key: key.to_string(),
        symbol: text.to_string(),
    };
    let sym: TapeSymbol = text.parse().map_err(|_| unknown())?;
    match sym {
        TapeSymbol::Letter(c) if !sigma.contains(&c) => Err(unknown()),
        _ => Ok(sym),
    }
}

fn parse_dir(dir: i64, key: &str) -> Result<Dir, FormatError> {
    Dir::from_i64(dir).ok_or(FormatError::BadDir {
        key: key.to_string(),
        dir,
    })
}

fn entry_key(classical: &[String], sigma: &[char], key: &str) -> Result<(usize, TapeSymbol), FormatError> {
    let (state, symbol) = key.split_once(':').ok_or_else(|| FormatError::BadKey(key.to_string()))?;
    Ok((lookup(classical, state, key)?, parse_symbol(symbol, sigma, key)?))
}

fn record<T: for<'de> Deserialize<'de>>(key: &str, value: Value) -> Result<T, FormatError> {
    serde_json::from_value(value).map_err(|source| FormatError::Entry {
        key: key.to_string(),
        source,
    })
}

fn complex(key: &str, lit: &ComplexLiteral) -> Result<GaussianRational, FormatError> {
    lit.parse().map_err(|source| FormatError::Scalar {
        key: key.to_string(),
        source,
    })
}

/// Parses a machine file and validates the machine.
pub fn qcfa_from_json(text: &str) -> Result<Qcfa, FormatError> {
    let file: QcfaFile = serde_json::from_str(text)?;
    let sigma = parse_letters(&file.sigma)?;
    let names = |list: &[String], key: &str| -> Result<BTreeSet<usize>, FormatError> {
        list.iter().map(|n| lookup(&file.classical_states, n, key)).collect()
    };

    let mut theta = BTreeMap::new();
    for (key, value) in file.theta {
        let at = entry_key(&file.classical_states, &sigma, &key)?;
        let entry = match record::<ThetaRecord>(&key, value)? {
            ThetaRecord::Unitary(rows) => {
                let rows = rows
                    .iter()
                    .map(|row| row.iter().map(|lit| complex(&key, lit)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let m = CMatrix::from_rows(rows).map_err(|source| FormatError::Scalar {
                    key: key.clone(),
                    source,
                })?;
                ThetaEntry::Unitary(m)
            }
            ThetaRecord::Measure(obs) => {
                let part = |list: &[String]| -> Result<Vec<usize>, FormatError> {
                    list.iter().map(|n| lookup(&file.quantum_states, n, &key)).collect()
                };
                ThetaEntry::Measure(Observable::new(part(&obs.acc)?, part(&obs.rej)?, part(&obs.nh)?))
            }
        };
        theta.insert(at, entry);
    }

    let mut delta = BTreeMap::new();
    for (key, value) in file.delta {
        let at = entry_key(&file.classical_states, &sigma, &key)?;
        let mv: MoveRecord = record(&key, value)?;
        delta.insert(
            at,
            Move {
                next: lookup(&file.classical_states, &mv.next, &key)?,
                dir: parse_dir(mv.dir, &key)?,
            },
        );
    }

    let m = Qcfa {
        q0: lookup(&file.quantum_states, &file.q0, "q0")?,
        s0: lookup(&file.classical_states, &file.s0, "s0")?,
        s_acc: names(&file.s_acc, "s_acc")?,
        s_rej: names(&file.s_rej, "s_rej")?,
        quantum_states: file.quantum_states,
        classical_states: file.classical_states,
        sigma,
        theta,
        delta,
    };
    m.validate()?;
    Ok(m)
}

fn to_pretty(value: &impl Serialize) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("machine files always serialize");
    out.push('\n');
    out
}

pub fn qcfa_to_json(m: &Qcfa) -> String {
    let key = |s: usize, sym: &TapeSymbol| format!("{}:{}", m.classical_states[s], sym.key());
    let qnames = |set: &BTreeSet<usize>| set.iter().map(|&q| m.quantum_states[q].clone()).collect();
    let snames = |set: &BTreeSet<usize>| set.iter().map(|&s| m.classical_states[s].clone()).collect();

    let theta = m
        .theta
        .iter()
        .map(|((s, sym), entry)| {
            let rec = match entry {
                ThetaEntry::Unitary(u) => {
                    ThetaRecord::Unitary(u.row_iter().map(|r| r.iter().map(ComplexLiteral::from).collect()).collect())
                }
                ThetaEntry::Measure(obs) => ThetaRecord::Measure(ObservableRecord {
                    acc: qnames(&obs.acc),
                    rej: qnames(&obs.rej),
                    nh: qnames(&obs.nh),
                }),
            };
            (key(*s, sym), serde_json::to_value(rec).expect("serializable"))
        })
        .collect();
    let delta = m
        .delta
        .iter()
        .map(|((s, sym), mv)| {
            let rec = MoveRecord {
                next: m.classical_states[mv.next].clone(),
                dir: mv.dir.as_i8().into(),
            };
            (key(*s, sym), serde_json::to_value(rec).expect("serializable"))
        })
        .collect();

    to_pretty(&QcfaFile {
        sigma: m.sigma.iter().map(char::to_string).collect(),
        quantum_states: m.quantum_states.clone(),
        classical_states: m.classical_states.clone(),
        q0: m.quantum_states[m.q0].clone(),
        s0: m.classical_states[m.s0].clone(),
        s_acc: snames(&m.s_acc),
        s_rej: snames(&m.s_rej),
        theta,
        delta,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WfaFile {
    sigma: Vec<String>,
    states: Vec<String>,
    initial: String,
    finals: Vec<String>,
    transitions: Vec<TransitionRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionRecord {
    from: String,
    symbol: String,
    weight: WeightRecord,
    to: String,
    dir: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    tag: ExpTag,
    coeff: ComplexLiteral,
}

/// A single tagged term, or a list of them for multi-term weights.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WeightRecord {
    Single(TermRecord),
    Sum(Vec<TermRecord>),
}

pub fn wfa_from_json(text: &str) -> Result<Wfa, FormatError> {
    let file: WfaFile = serde_json::from_str(text)?;
    let sigma = parse_letters(&file.sigma)?;
    let initial = lookup(&file.states, &file.initial, "initial")?;
    let finals = file
        .finals
        .iter()
        .map(|n| lookup(&file.states, n, "finals"))
        .collect::<Result<BTreeSet<_>, _>>()?;
    let mut transitions = Vec::with_capacity(file.transitions.len());
    for (k, t) in file.transitions.iter().enumerate() {
        let key = format!("transitions[{k}]");
        let terms = match &t.weight {
            WeightRecord::Single(term) => std::slice::from_ref(term),
            WeightRecord::Sum(terms) => terms.as_slice(),
        };
        let weight = terms
            .iter()
            .map(|term| Ok((term.tag, complex(&key, &term.coeff)?)))
            .collect::<Result<ExpSum, FormatError>>()?;
        transitions.push(WTransition {
            from: lookup(&file.states, &t.from, &key)?,
            symbol: parse_symbol(&t.symbol, &sigma, &key)?,
            weight,
            to: lookup(&file.states, &t.to, &key)?,
            dir: parse_dir(t.dir, &key)?,
        });
    }
    Ok(Wfa::new(file.states, sigma, initial, finals, transitions)?)
}

pub fn wfa_to_json(w: &Wfa) -> String {
    let name = |s: usize| w.states()[s].clone();
    let term = |(&tag, c): (&ExpTag, &GaussianRational)| TermRecord {
        tag,
        coeff: c.into(),
    };
    let transitions = w
        .transitions()
        .iter()
        .map(|t| TransitionRecord {
            from: name(t.from),
            symbol: t.symbol.key(),
            weight: if t.weight.len() == 1 {
                WeightRecord::Single(t.weight.terms().map(term).next().expect("one term"))
            } else {
                WeightRecord::Sum(t.weight.terms().map(term).collect())
            },
            to: name(t.to),
            dir: t.dir.as_i8().into(),
        })
        .collect();
    to_pretty(&WfaFile {
        sigma: w.sigma().iter().map(char::to_string).collect(),
        states: w.states().to_vec(),
        initial: name(w.initial()),
        finals: w.finals().iter().map(|&f| name(f)).collect(),
        transitions,
    })
}
