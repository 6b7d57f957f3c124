//! Interval-valued dimension of constructible set descriptors.
//!
//! Each rule yields only what the elementary dimension laws justify: full
//! space has full dimension, constants and finite sets have dimension 0,
//! unions take maxima, products add, permutations preserve, projections do
//! not increase, and a proper zero set has dimension below `n`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::diffpoly::DiffPolynomial;
use crate::error::{Error, Result};
use crate::transseries::Transseries;

/// A dimension value, `−∞` for the empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    NegInf,
    Val(usize),
}

impl Dim {
    fn plus(self, other: Dim) -> Dim {
        match (self, other) {
            (Dim::Val(a), Dim::Val(b)) => Dim::Val(a + b),
            _ => Dim::NegInf,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::NegInf => f.write_str("-inf"),
            Dim::Val(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Dim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dim::NegInf => s.serialize_str("-inf"),
            Dim::Val(v) => s.serialize_u64(*v as u64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DimInterval {
    pub lo: Dim,
    pub hi: Dim,
}

impl DimInterval {
    pub fn exact(d: Dim) -> Self {
        DimInterval { lo: d, hi: d }
    }

    pub fn new(lo: Dim, hi: Dim) -> Self {
        debug_assert!(lo <= hi);
        DimInterval { lo, hi }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Discreteness {
    Discrete,
    NotDiscrete,
    Unknown,
}

/// Symbolic description of a subset of `K^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetDescriptor {
    Full(usize),
    Empty(usize),
    FinitePoints {
        points: Vec<Vec<Transseries>>,
        n: usize,
    },
    /// `C^n`.
    Constants(usize),
    /// Common zeros of the polynomials; `witness` is an optional known member.
    ZeroSet {
        polys: Vec<DiffPolynomial>,
        n: usize,
        witness: Option<Vec<Transseries>>,
    },
    Union(Box<SetDescriptor>, Box<SetDescriptor>),
    Product(Box<SetDescriptor>, Box<SetDescriptor>),
    /// `{y : (y_{σ(1)}, …, y_{σ(n)}) ∈ a}` with `σ` given 1-based.
    Permute(Vec<usize>, Box<SetDescriptor>),
    /// Image under the projection onto the first `m` coordinates.
    Project(Box<SetDescriptor>, usize),
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedDescriptor(msg.into())
}

impl SetDescriptor {
    pub fn union(a: SetDescriptor, b: SetDescriptor) -> Self {
        SetDescriptor::Union(Box::new(a), Box::new(b))
    }

    pub fn product(a: SetDescriptor, b: SetDescriptor) -> Self {
        SetDescriptor::Product(Box::new(a), Box::new(b))
    }

    pub fn permute(sigma: Vec<usize>, a: SetDescriptor) -> Self {
        SetDescriptor::Permute(sigma, Box::new(a))
    }

    pub fn project(a: SetDescriptor, m: usize) -> Self {
        SetDescriptor::Project(Box::new(a), m)
    }

    /// Ambient dimension `n` of `K^n`; checks well-formedness on the way.
    pub fn arity(&self) -> Result<usize> {
        use SetDescriptor::*;
        match self {
            Full(n) | Empty(n) | Constants(n) => Ok(*n),
            FinitePoints { points, n } => {
                if points.is_empty() {
                    return Err(malformed("empty point list"));
                }
                if let Some(p) = points.iter().find(|p| p.len() != *n) {
                    return Err(malformed(format!("point of length {} in K^{n}", p.len())));
                }
                Ok(*n)
            }
            ZeroSet { polys, n, witness } => {
                if polys.is_empty() {
                    return Err(malformed("zero set of an empty family"));
                }
                if polys.iter().any(DiffPolynomial::is_zero) {
                    return Err(malformed("zero polynomial in a zero set"));
                }
                if let Some(p) = polys.iter().find(|p| p.arity() != *n) {
                    return Err(malformed(format!("polynomial of arity {} in K^{n}", p.arity())));
                }
                if let Some(w) = witness {
                    if w.len() != *n {
                        return Err(malformed("witness length"));
                    }
                    for p in polys {
                        if !p.evaluate(w)?.is_zero() {
                            return Err(malformed("witness is not a common zero"));
                        }
                    }
                }
                Ok(*n)
            }
            Union(a, b) => {
                let (na, nb) = (a.arity()?, b.arity()?);
                if na != nb {
                    return Err(malformed(format!("union of K^{na} and K^{nb} sets")));
                }
                Ok(na)
            }
            Product(a, b) => Ok(a.arity()? + b.arity()?),
            Permute(sigma, a) => {
                let n = a.arity()?;
                let mut seen = vec![false; n];
                if sigma.len() != n {
                    return Err(malformed("permutation length"));
                }
                for &s in sigma {
                    if s == 0 || s > n || seen[s - 1] {
                        return Err(malformed("not a permutation"));
                    }
                    seen[s - 1] = true;
                }
                Ok(n)
            }
            Project(a, m) => {
                let n = a.arity()?;
                if *m == 0 || *m > n {
                    return Err(malformed(format!("projection to K^{m} from K^{n}")));
                }
                Ok(*m)
            }
        }
    }

    pub fn dim_eval(&self) -> Result<DimInterval> {
        self.arity()?;
        Ok(self.dim_unchecked())
    }

    fn dim_unchecked(&self) -> DimInterval {
        use SetDescriptor::*;
        match self {
            Full(n) => DimInterval::exact(Dim::Val(*n)),
            Empty(_) => DimInterval::exact(Dim::NegInf),
            FinitePoints { .. } | Constants(_) => DimInterval::exact(Dim::Val(0)),
            ZeroSet { n, witness, .. } => {
                let lo = if witness.is_some() { Dim::Val(0) } else { Dim::NegInf };
                let hi = if *n == 0 { Dim::NegInf } else { Dim::Val(n - 1) };
                DimInterval::new(lo.min(hi), hi)
            }
            Union(a, b) => {
                let (a, b) = (a.dim_unchecked(), b.dim_unchecked());
                DimInterval::new(a.lo.max(b.lo), a.hi.max(b.hi))
            }
            Product(a, b) => {
                let (a, b) = (a.dim_unchecked(), b.dim_unchecked());
                DimInterval::new(a.lo.plus(b.lo), a.hi.plus(b.hi))
            }
            Permute(_, a) => a.dim_unchecked(),
            Project(a, m) => {
                let a = a.dim_unchecked();
                let lo = if a.lo >= Dim::Val(0) { Dim::Val(0) } else { Dim::NegInf };
                DimInterval::new(lo, a.hi.min(Dim::Val(*m)))
            }
        }
    }

    /// Discrete when the dimension is at most 0 (the empty set included),
    /// not discrete when it is at least 1.
    pub fn discreteness_flag(&self) -> Result<Discreteness> {
        let d = self.dim_eval()?;
        Ok(if d.hi <= Dim::Val(0) {
            Discreteness::Discrete
        } else if d.lo >= Dim::Val(1) {
            Discreteness::NotDiscrete
        } else {
            Discreteness::Unknown
        })
    }

    pub fn member(&self, y: &[Transseries]) -> Result<bool> {
        let n = self.arity()?;
        if y.len() != n {
            return Err(Error::ArityMismatch { expected: n, found: y.len() });
        }
        self.member_unchecked(y)
    }

    fn member_unchecked(&self, y: &[Transseries]) -> Result<bool> {
        use SetDescriptor::*;
        match self {
            Full(_) => Ok(true),
            Empty(_) => Ok(false),
            FinitePoints { points, .. } => Ok(points.iter().any(|p| p.as_slice() == y)),
            Constants(_) => Ok(y.iter().all(|c| c.derive().is_zero())),
            ZeroSet { polys, .. } => {
                for p in polys {
                    if !p.evaluate(y)?.is_zero() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Union(a, b) => Ok(a.member_unchecked(y)? || b.member_unchecked(y)?),
            Product(a, b) => {
                let k = a.arity()?;
                Ok(a.member_unchecked(&y[..k])? && b.member_unchecked(&y[k..])?)
            }
            Permute(sigma, a) => {
                let z: Vec<Transseries> = sigma.iter().map(|&s| y[s - 1].clone()).collect();
                a.member_unchecked(&z)
            }
            Project(a, m) => a.projection_contains(*m, y),
        }
    }

    /// Whether `y ∈ π_m(self)`, decided where the structure allows it.
    fn projection_contains(&self, m: usize, y: &[Transseries]) -> Result<bool> {
        use SetDescriptor::*;
        let n = self.arity()?;
        if m == n {
            return self.member_unchecked(y);
        }
        let undecidable = || Err(Error::Undecidable(format!("membership in a projection of {}", self.kind())));
        match self {
            Full(_) => Ok(true),
            Empty(_) => Ok(false),
            Constants(_) => Ok(y.iter().all(|c| c.derive().is_zero())),
            FinitePoints { points, .. } => Ok(points.iter().any(|p| &p[..m] == y)),
            Union(a, b) => match (a.projection_contains(m, y), b.projection_contains(m, y)) {
                (Ok(true), _) | (_, Ok(true)) => Ok(true),
                (Ok(false), Ok(false)) => Ok(false),
                (Err(e), _) | (_, Err(e)) => Err(e),
            },
            Product(a, b) => {
                let k = a.arity()?;
                if m <= k {
                    if !a.projection_contains(m, y)? {
                        return Ok(false);
                    }
                    b.nonempty()
                } else {
                    Ok(a.member_unchecked(&y[..k])? && b.projection_contains(m - k, &y[k..])?)
                }
            }
            Project(a, _) => a.projection_contains(m, y),
            Permute(sigma, a) => {
                // Coordinates 1..=m must be permuted among themselves.
                if sigma[..m].iter().all(|&s| s <= m) {
                    let z: Vec<Transseries> = sigma[..m].iter().map(|&s| y[s - 1].clone()).collect();
                    a.projection_contains(m, &z)
                } else {
                    undecidable()
                }
            }
            ZeroSet { .. } => undecidable(),
        }
    }

    fn nonempty(&self) -> Result<bool> {
        let d = self.dim_eval()?;
        if d.lo >= Dim::Val(0) {
            Ok(true)
        } else if d.hi == Dim::NegInf {
            Ok(false)
        } else {
            Err(Error::Undecidable(format!("emptiness of {}", self.kind())))
        }
    }

    fn kind(&self) -> &'static str {
        use SetDescriptor::*;
        match self {
            Full(_) => "full",
            Empty(_) => "empty",
            FinitePoints { .. } => "points",
            Constants(_) => "const",
            ZeroSet { .. } => "zero",
            Union(..) => "union",
            Product(..) => "prod",
            Permute(..) => "perm",
            Project(..) => "proj",
        }
    }
}
