//! Differential polynomials `K{Y₁,…,Y_n}` over the transseries fragment.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_algebra::Rational;
use crate::transseries::Transseries;

/// The indeterminate `Y_j^{(r)}`. `var` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivativeVar {
    pub var: usize,
    pub order: usize,
}

impl DerivativeVar {
    pub fn new(var: usize, order: usize) -> Self {
        DerivativeVar { var, order }
    }

    fn next(self) -> Self {
        DerivativeVar::new(self.var, self.order + 1)
    }
}

/// A power product of derivative variables; exponents are positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DiffMonomial(BTreeMap<DerivativeVar, u32>);

impl DiffMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: DerivativeVar) -> Self {
        DiffMonomial(BTreeMap::from([(v, 1)]))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn powers(&self) -> impl Iterator<Item = (DerivativeVar, u32)> + '_ {
        self.0.iter().map(|(v, e)| (*v, *e))
    }

    pub fn exponent(&self, v: DerivativeVar) -> u32 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    fn mul(&self, other: &DiffMonomial) -> DiffMonomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(*v).or_insert(0) += e;
        }
        DiffMonomial(out)
    }

    /// `self` with one factor `v` removed; `None` if `v` is absent.
    fn remove_one(&self, v: DerivativeVar) -> Option<DiffMonomial> {
        let e = *self.0.get(&v)?;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(&v);
        } else {
            out.insert(v, e - 1);
        }
        Some(DiffMonomial(out))
    }

    fn with_one(&self, v: DerivativeVar) -> DiffMonomial {
        self.mul(&DiffMonomial::var(v))
    }

    fn max_var(&self) -> usize {
        self.0.keys().map(|v| v.var).max().unwrap_or(0)
    }
}

/// Sparse differential polynomial in `arity` indeterminates with transseries
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffPolynomial {
    arity: usize,
    terms: BTreeMap<DiffMonomial, Transseries>,
}

impl DiffPolynomial {
    pub fn zero(arity: usize) -> Self {
        DiffPolynomial { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Transseries) -> Self {
        Self::from_terms(arity, [(DiffMonomial::one(), c)]).expect("no variables")
    }

    /// `Y_var^{(order)}`.
    pub fn var(arity: usize, var: usize, order: usize) -> Result<Self> {
        Self::from_terms(arity, [(DiffMonomial::var(DerivativeVar::new(var, order)), Transseries::one())])
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (DiffMonomial, Transseries)>) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (m, c) in terms {
            let top = m.max_var();
            if top > arity || m.powers().any(|(v, _)| v.var == 0) {
                return Err(Error::ArityViolation { index: top, arity });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: DiffMonomial, c: Transseries) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffMonomial, &Transseries)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The value of a polynomial in which no derivative variable occurs.
    pub fn as_transseries(&self) -> Option<Transseries> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.get(&DiffMonomial::one()).cloned().unwrap_or_else(Transseries::zero))
    }

    /// True iff no derivative variable occurs.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(DiffMonomial::is_one)
    }

    fn check_arity(&self, other: &DiffPolynomial) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    pub fn add(&self, other: &DiffPolynomial) -> Result<DiffPolynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffPolynomial) -> Result<DiffPolynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffPolynomial {
        DiffPolynomial { arity: self.arity, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &DiffPolynomial) -> Result<DiffPolynomial> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Transseries) -> DiffPolynomial {
        let mut out = Self::zero(self.arity);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> DiffPolynomial {
        let mut acc = Self::constant(self.arity, Transseries::one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same arity");
        }
        acc
    }

    /// Formal partial derivative with respect to `Y_var^{(order)}`.
    pub fn partial(&self, var: usize, order: usize) -> Result<DiffPolynomial> {
        if var == 0 || var > self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: var });
        }
        let v = DerivativeVar::new(var, order);
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let rest = m.remove_one(v).expect("present");
            out.add_term(rest, c.scale(&Rational::from_integer(e.into())));
        }
        Ok(out)
    }

    /// The derivation of `K{Y}` extending that of `K`, with
    /// `Y_j^{(r)} ↦ Y_j^{(r+1)}`.
    pub fn total_derive(&self) -> DiffPolynomial {
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.derive());
            for (v, e) in m.powers() {
                let rest = m.remove_one(v).expect("present");
                out.add_term(rest.with_one(v.next()), c.scale(&Rational::from_integer(e.into())));
            }
        }
        out
    }

    /// Highest `r` with `Y_var^{(r)}` present, or `None` if `Y_var` is absent.
    pub fn order_in(&self, var: usize) -> Option<usize> {
        self.terms.keys().flat_map(|m| m.powers()).filter(|(v, _)| v.var == var).map(|(v, _)| v.order).max()
    }

    /// Highest derivative order over all variables, `None` for constants.
    pub fn order(&self) -> Option<usize> {
        (1..=self.arity).filter_map(|j| self.order_in(j)).max()
    }

    /// Partial derivative with respect to the highest derivative of `Y` for
    /// a single-variable polynomial.
    pub fn separant(&self) -> Result<DiffPolynomial> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch { expected: 1, found: self.arity });
        }
        let r = self.order_in(1).ok_or(Error::ConstantPolynomial)?;
        self.partial(1, r)
    }

    /// Substitutes `Y_j^{(r)} := y_j^{(r)}`.
    pub fn evaluate(&self, point: &[Transseries]) -> Result<Transseries> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: point.len() });
        }
        let towers = DerivativeTowers::new(point, self);
        let mut out = Transseries::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.powers() {
                if term.is_zero() {
                    break;
                }
                term = &term * &towers.get(v).pow(e);
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// True iff the polynomial has a term with every coefficient rational
    /// and only `Y_1^{(0)}` occurring; used to read univariate inputs.
    pub fn as_univariate(&self) -> Option<crate::exact_algebra::UniPoly> {
        if self.arity != 1 {
            return None;
        }
        let mut coeffs: Vec<Rational> = Vec::new();
        for (m, c) in &self.terms {
            let c = c.as_constant()?;
            let mut deg = 0usize;
            for (v, e) in m.powers() {
                if v.order != 0 {
                    return None;
                }
                deg = e as usize;
            }
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, Rational::zero());
            }
            coeffs[deg] = c;
        }
        Some(crate::exact_algebra::UniPoly::new(coeffs))
    }

    /// Lifts a polynomial in `Y` with rational coefficients.
    pub fn from_univariate(p: &crate::exact_algebra::UniPoly) -> DiffPolynomial {
        let y = DerivativeVar::new(1, 0);
        let mut out = Self::zero(1);
        for (i, c) in p.coeffs().iter().enumerate() {
            let m = if i == 0 { DiffMonomial::one() } else { DiffMonomial(BTreeMap::from([(y, i as u32)])) };
            out.add_term(m, Transseries::constant(c.clone()));
        }
        out
    }
}

/// Cached derivatives `y_j, y_j′, …` up to the highest order a polynomial
/// needs.
struct DerivativeTowers {
    towers: Vec<Vec<Transseries>>,
}

impl DerivativeTowers {
    fn new(point: &[Transseries], p: &DiffPolynomial) -> Self {
        let towers = point
            .iter()
            .enumerate()
            .map(|(j, y)| {
                let top = p.order_in(j + 1).unwrap_or(0);
                let mut tower = vec![y.clone()];
                for _ in 0..top {
                    let next = tower.last().expect("nonempty").derive();
                    tower.push(next);
                }
                tower
            })
            .collect();
        DerivativeTowers { towers }
    }

    fn get(&self, v: DerivativeVar) -> &Transseries {
        &self.towers[v.var - 1][v.order]
    }
}

/// Componentwise maximum of the orders of a family; absent variables count 0.
pub fn order_vector(family: &[DiffPolynomial]) -> Result<Vec<usize>> {
    let first = family.first().ok_or(Error::EmptyList)?;
    let n = first.arity();
    for p in family {
        if p.arity() != n {
            return Err(Error::ArityMismatch { expected: n, found: p.arity() });
        }
    }
    Ok((1..=n).map(|j| family.iter().filter_map(|p| p.order_in(j)).max().unwrap_or(0)).collect())
}

fn var_name(v: DerivativeVar, arity: usize) -> String {
    let y = if arity == 1 && v.var == 1 { "Y".to_string() } else { format!("Y{}", v.var) };
    if v.order == 0 {
        y
    } else {
        format!("D{}({y})", v.order)
    }
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let vars: Vec<String> = m
                .powers()
                .map(|(v, e)| {
                    let name = var_name(v, self.arity);
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let coeff_one = c.as_constant().is_some_and(|r| r.is_one());
            if vars.is_empty() {
                write!(f, "({c})")?;
            } else if coeff_one {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "({c})*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
