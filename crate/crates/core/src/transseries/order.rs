//! Asymptotic order on monomials and the induced field ordering.
//!
//! `m ≻ n` iff `log m − log n > 0`. The logarithm of a monomial has strictly
//! smaller exponential height than the monomial itself, so the recursion
//! bottoms out at pure log monomials, which compare lexicographically with
//! `ℓ₀` most significant.

use std::cmp::Ordering;

use num_traits::Signed;
use serde::Serialize;

use super::{LogVector, Monomial, Transseries};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OrderedSign {
    Negative,
    Zero,
    Positive,
}

impl OrderedSign {
    pub fn to_ordering(self) -> Ordering {
        match self {
            OrderedSign::Negative => Ordering::Less,
            OrderedSign::Zero => Ordering::Equal,
            OrderedSign::Positive => Ordering::Greater,
        }
    }
}

fn lex_cmp(a: &LogVector, b: &LogVector) -> Ordering {
    let mut ia = a.iter().peekable();
    let mut ib = b.iter().peekable();
    loop {
        let (qa, qb) = match (ia.peek(), ib.peek()) {
            (None, None) => return Ordering::Equal,
            (Some((i, qa)), Some((j, qb))) => match i.cmp(j) {
                Ordering::Equal => (Some(*qa), Some(*qb)),
                Ordering::Less => (Some(*qa), None),
                Ordering::Greater => (None, Some(*qb)),
            },
            (Some((_, qa)), None) => (Some(*qa), None),
            (None, Some((_, qb))) => (None, Some(*qb)),
        };
        match (qa, qb) {
            (Some(qa), Some(qb)) => {
                let o = qa.cmp(qb);
                if o != Ordering::Equal {
                    return o;
                }
                ia.next();
                ib.next();
            }
            // Exponents are stored nonzero, so the sign decides.
            (Some(qa), None) => {
                return if qa.is_positive() { Ordering::Greater } else { Ordering::Less };
            }
            (None, Some(qb)) => {
                return if qb.is_positive() { Ordering::Less } else { Ordering::Greater };
            }
            (None, None) => unreachable!(),
        }
    }
}

impl Monomial {
    /// Asymptotic comparison: `Greater` means `self ≻ other`.
    pub fn cmp_asymptotic(&self, other: &Monomial) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        if self.exp.is_none() && other.exp.is_none() {
            return lex_cmp(&self.logs, &other.logs);
        }
        let diff = &self.log() - &other.log();
        diff.sign().to_ordering()
    }

    /// `self ≻ 1`.
    pub fn is_large(&self) -> bool {
        self.cmp_asymptotic(&Monomial::one()) == Ordering::Greater
    }

    /// `self ≺ 1`.
    pub fn is_small(&self) -> bool {
        self.cmp_asymptotic(&Monomial::one()) == Ordering::Less
    }
}

impl Transseries {
    /// The maximal monomial of the support.
    pub fn dominant_monomial(&self) -> Result<&Monomial> {
        self.terms
            .keys()
            .reduce(|best, m| if m.cmp_asymptotic(best) == Ordering::Greater { m } else { best })
            .ok_or(Error::ZeroSeries)
    }

    /// Dominant monomial with its coefficient.
    pub fn dominant_term(&self) -> Result<(&Monomial, &crate::exact_algebra::Rational)> {
        let m = self.dominant_monomial()?;
        Ok((m, &self.terms[m]))
    }

    pub fn sign(&self) -> OrderedSign {
        match self.dominant_term() {
            Err(_) => OrderedSign::Zero,
            Ok((_, c)) if c.is_positive() => OrderedSign::Positive,
            Ok(_) => OrderedSign::Negative,
        }
    }

    /// Field order: `self` versus `other`.
    pub fn cmp_value(&self, other: &Transseries) -> Ordering {
        (self - other).sign().to_ordering()
    }

    /// Every support monomial is `≻ 1` (the zero series qualifies).
    pub fn is_purely_large(&self) -> bool {
        self.terms.keys().all(Monomial::is_large)
    }

    /// Terms ordered from the dominant monomial down.
    pub fn terms_by_dominance(&self) -> Vec<(&Monomial, &crate::exact_algebra::Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.cmp_asymptotic(a.0));
        v
    }
}
