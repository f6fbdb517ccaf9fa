use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::fmt;

use super::GaussianRational;

/// Integer exponent tag `ρ` standing for the transcendental factor `e^ρ`.
///
/// Tag 0 is `e⁰ = 1`, so an `ExpSum` whose only term has tag 0 is a plain
/// scalar. Distinct tags give linearly independent factors over the algebraic
/// numbers, which is what makes [`ExpSum::is_zero`] a coefficient check.
pub type ExpTag = u64;

/// Formal sum `Σ w_k·e^{ρ_k}` with distinct tags and nonzero coefficients.
///
/// The sum is never evaluated numerically. Because `e^{ρ_1}, …, e^{ρ_n}` are
/// linearly independent for distinct algebraic `ρ_k`, the sum is zero exactly
/// when every coefficient is zero, i.e. when the canonical map is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExpSum {
    terms: BTreeMap<ExpTag, GaussianRational>,
}

impl ExpSum {
    pub fn zero() -> Self {
        ExpSum::default()
    }

    pub fn one() -> Self {
        ExpSum::scalar(GaussianRational::one())
    }

    /// The plain weight `c·e⁰`.
    pub fn scalar(c: GaussianRational) -> Self {
        ExpSum::term(0, c)
    }

    /// The single term `c·e^{tag}`; zero if `c` is zero.
    pub fn term(tag: ExpTag, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(tag, c);
        }
        ExpSum { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ExpTag, GaussianRational)>) -> Self {
        let mut sum = ExpSum::zero();
        for (tag, c) in terms {
            sum.add_term(tag, &c);
        }
        sum
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(GaussianRational::is_one)
    }

    /// Coefficient of `e^{tag}` (zero when absent).
    pub fn coeff(&self, tag: ExpTag) -> GaussianRational {
        self.terms.get(&tag).cloned().unwrap_or_default()
    }

    /// The scalar value when the sum only involves `e⁰`.
    pub fn as_scalar(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> btree_map::Iter<'_, ExpTag, GaussianRational> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, tag: ExpTag, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(tag) {
            Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &ExpSum) {
        for (&tag, c) in &other.terms {
            self.add_term(tag, c);
        }
    }

    pub fn add(&self, other: &ExpSum) -> ExpSum {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> ExpSum {
        if c.is_zero() {
            return ExpSum::zero();
        }
        ExpSum {
            terms: self.terms.iter().map(|(&tag, w)| (tag, w * c)).collect(),
        }
    }

    /// Product; tags add because `e^a·e^b = e^{a+b}`.
    pub fn mul(&self, other: &ExpSum) -> ExpSum {
        if let Some(c) = other.as_scalar() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_scalar() {
            return other.scale(&c);
        }
        let mut out = ExpSum::zero();
        for (&ta, wa) in &self.terms {
            for (&tb, wb) in &other.terms {
                out.add_term(ta + tb, &(wa * wb));
            }
        }
        out
    }
}

impl FromIterator<(ExpTag, GaussianRational)> for ExpSum {
    fn from_iter<I: IntoIterator<Item = (ExpTag, GaussianRational)>>(iter: I) -> Self {
        ExpSum::from_terms(iter)
    }
}

impl From<GaussianRational> for ExpSum {
    fn from(c: GaussianRational) -> Self {
        ExpSum::scalar(c)
    }
}

/// `0`, a bare coefficient for a pure `e⁰` term, otherwise `{tag: coeff, …}`.
impl fmt::Display for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(c) = self.as_scalar() {
            return write!(f, "{c}");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("{t}: {c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
