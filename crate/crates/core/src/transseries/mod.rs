//! A finitely supported fragment of the field of exp-log transseries.
//!
//! A transmonomial is `exp(L) · ℓ₀^{q₀} ℓ₁^{q₁} ⋯` where `ℓ₀ = x`,
//! `ℓ_{n+1} = log ℓ_n`, the `q_i` are rational and `L` is purely large.
//! Normal form folds every term `c·ℓ_j` (`j ≥ 1`) of `L` into the log part as
//! `ℓ_{j−1}^c`, so two monomials are equal iff their representations are.
//! Coefficients are rationals; the support of every series is finite.

mod calculus;
mod display;
mod division;
mod membership;
mod order;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_algebra::Rational;

pub use division::TruncatedQuotient;
pub use membership::{lambda_partial_sum, omega_partial_sum};
pub use order::OrderedSign;

/// Exponents of the iterated logarithms `ℓ_n`; zero exponents are never
/// stored, so the empty vector is the log part of the monomial 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LogVector(BTreeMap<u32, Rational>);

impl LogVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(index: u32, exponent: Rational) -> Self {
        let mut v = Self::new();
        v.add_to(index, exponent);
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        let mut v = Self::new();
        for (i, q) in pairs {
            v.add_to(i, q);
        }
        v
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: u32) -> Rational {
        self.0.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.0.iter().map(|(i, q)| (*i, q))
    }

    pub fn max_index(&self) -> Option<u32> {
        self.0.keys().next_back().copied()
    }

    fn add_to(&mut self, index: u32, q: Rational) {
        if q.is_zero() {
            return;
        }
        let slot = self.0.entry(index).or_insert_with(Rational::zero);
        *slot += q;
        if slot.is_zero() {
            self.0.remove(&index);
        }
    }

    fn combine(&self, other: &LogVector, sign: i8) -> LogVector {
        let mut out = self.clone();
        for (i, q) in other.iter() {
            out.add_to(i, if sign < 0 { -q } else { q.clone() });
        }
        out
    }

    fn scale(&self, q: &Rational) -> LogVector {
        LogVector::from_pairs(self.iter().map(|(i, e)| (i, e * q)))
    }

    /// True iff this is exactly `ℓ_j^1`.
    fn as_single_ell(&self) -> Option<u32> {
        let mut it = self.0.iter();
        match (it.next(), it.next()) {
            (Some((i, q)), None) if q.is_one() => Some(*i),
            _ => None,
        }
    }
}

/// A transmonomial in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exp: Option<Arc<Transseries>>,
    logs: LogVector,
}

/// Structural order used for map keys; the asymptotic order is
/// [`Monomial::cmp_asymptotic`].
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.exp.as_deref().map(|t| &t.terms);
        let b = other.exp.as_deref().map(|t| &t.terms);
        a.cmp(&b).then_with(|| self.logs.cmp(&other.logs))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exp: None, logs: LogVector::new() }
    }

    /// `ℓ_n^q`.
    pub fn ell(index: u32, exponent: Rational) -> Self {
        Monomial { exp: None, logs: LogVector::single(index, exponent) }
    }

    pub fn from_logs(logs: LogVector) -> Self {
        Monomial { exp: None, logs }
    }

    /// `exp(exponent) · Π ℓ_i^{q_i}` in normal form. `exponent` must be purely
    /// large (or zero).
    pub fn new(exponent: &Transseries, logs: LogVector) -> Result<Self> {
        if !exponent.is_purely_large() {
            return Err(Error::NotPurelyLarge(exponent.to_string()));
        }
        let mut logs = logs;
        let mut rest = BTreeMap::new();
        for (m, c) in &exponent.terms {
            match (m.exp.is_none(), m.logs.as_single_ell()) {
                (true, Some(j)) if j >= 1 => logs.add_to(j - 1, c.clone()),
                _ => {
                    rest.insert(m.clone(), c.clone());
                }
            }
        }
        let exp = (!rest.is_empty()).then(|| Arc::new(Transseries { terms: rest }));
        Ok(Monomial { exp, logs })
    }

    pub fn is_one(&self) -> bool {
        self.exp.is_none() && self.logs.is_empty()
    }

    /// The `L` of `exp(L)`, if any.
    pub fn exp_part(&self) -> Option<&Transseries> {
        self.exp.as_deref()
    }

    pub fn log_part(&self) -> &LogVector {
        &self.logs
    }

    /// `log m = L + Σ q_i ℓ_{i+1}`, a purely large transseries.
    pub fn log(&self) -> Transseries {
        let mut out = self.exp.as_deref().cloned().unwrap_or_default();
        for (i, q) in self.logs.iter() {
            out.add_term(Monomial::ell(i + 1, Rational::one()), q.clone());
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exp = match (&self.exp, &other.exp) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                let s = &**a + &**b;
                (!s.is_zero()).then(|| Arc::new(s))
            }
        };
        Monomial { exp, logs: self.logs.combine(&other.logs, 1) }
    }

    pub fn inv(&self) -> Monomial {
        Monomial { exp: self.exp.as_ref().map(|l| Arc::new(-&**l)), logs: self.logs.scale(&-Rational::one()) }
    }

    pub fn pow(&self, q: &Rational) -> Monomial {
        if q.is_zero() {
            return Monomial::one();
        }
        Monomial { exp: self.exp.as_ref().map(|l| Arc::new(l.scale(q))), logs: self.logs.scale(q) }
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }
}

/// A finitely supported transseries with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Transseries {
    terms: BTreeMap<Monomial, Rational>,
}

impl Transseries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    /// The germ `x = ℓ₀`.
    pub fn x() -> Self {
        Self::ell(0)
    }

    pub fn ell(index: u32) -> Self {
        Self::monomial(Monomial::ell(index, Rational::one()))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut t = Self::zero();
        t.add_term(m, c);
        t
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut t = Self::zero();
        for (m, c) in terms {
            t.add_term(m, c);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the support is contained in `{1}`.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The rational value of a constant series.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.coeff(&Monomial::one()))
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in structural order; see [`Transseries::terms_by_dominance`] for
    /// the asymptotic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Transseries { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        if m.is_one() {
            return self.clone();
        }
        Self::from_terms(self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())))
    }

    /// Non-negative integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Rational power of a single term `c·m`; the coefficient power `c^q`
    /// must stay rational, which is guaranteed for integer `q` or `c = 1`.
    pub fn pow_rational(&self, q: &Rational) -> Result<Self> {
        if q.is_integer() && !q.is_negative() {
            let e = u32::try_from(q.to_integer()).map_err(|_| Error::NotInFragment("exponent too large".into()))?;
            return Ok(self.pow(e));
        }
        let (m, c) = self.single_term().ok_or_else(|| {
            if self.is_zero() {
                Error::DivisionByZero
            } else {
                Error::NotInFragment("non-integer or negative power of a sum".into())
            }
        })?;
        let coeff = if c.is_one() {
            Rational::one()
        } else if q.is_integer() {
            let e = i32::try_from(q.to_integer()).map_err(|_| Error::NotInFragment("exponent too large".into()))?;
            num_traits::pow::Pow::pow(c, e)
        } else {
            return Err(Error::NotInFragment(format!(
                "fractional power of the coefficient {}",
                crate::exact_algebra::format_rational(c)
            )));
        };
        Ok(Self::term(coeff, m.pow(q)))
    }

    /// Exact quotient by a single term; errors for sums, since those leave
    /// the finite fragment.
    pub fn div_term(&self, divisor: &Transseries) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (m, c) = divisor.single_term().ok_or(Error::NotMonomialTerm(divisor.len()))?;
        Ok(self.mul_monomial(&m.inv()).scale(&c.recip()))
    }
}

impl<'a> Add<&'a Transseries> for &'a Transseries {
    type Output = Transseries;
    fn add(self, rhs: &Transseries) -> Transseries {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Transseries> for &'a Transseries {
    type Output = Transseries;
    fn sub(self, rhs: &Transseries) -> Transseries {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Transseries> for &'a Transseries {
    type Output = Transseries;
    fn mul(self, rhs: &Transseries) -> Transseries {
        let mut out = Transseries::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Transseries {
    type Output = Transseries;
    fn neg(self) -> Transseries {
        Transseries { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Transseries> for Transseries {
            type Output = Transseries;
            fn $m(self, rhs: Transseries) -> Transseries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Transseries {
    type Output = Transseries;
    fn neg(self) -> Transseries {
        -&self
    }
}

impl From<Rational> for Transseries {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}
