//! Rational roots by exact real-root isolation.
//!
//! Each squarefree factor is made primitive over ℤ with leading coefficient
//! `D`; a rational root `p/q` then has `q | D`. Sturm bisection shrinks every
//! isolating interval below `1/D²`, which leaves at most one fraction of
//! denominator `≤ D` inside it: the simplest fraction of the interval. That
//! candidate is tested exactly. Small coefficients take a shortcut through
//! the classical divisor candidates instead.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, UniPoly};
use crate::error::{Error, Result};

/// Result of [`rational_roots`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRoots {
    /// Distinct rational roots in increasing order with their multiplicities.
    pub roots: Vec<(Rational, usize)>,
    /// True iff the polynomial splits into rational linear factors.
    pub fully_split: bool,
}

impl RationalRoots {
    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.roots.iter().map(|(r, _)| r)
    }
}

pub fn rational_roots(p: &UniPoly) -> Result<RationalRoots> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    let mut roots = Vec::new();
    for part in p.squarefree_decomp()? {
        for r in squarefree_rational_roots(&part.factor) {
            roots.push((r, part.multiplicity));
        }
    }
    roots.sort();
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    Ok(RationalRoots { fully_split: total == degree, roots })
}

/// Coefficients of the primitive integer multiple of `p` (positive leading
/// coefficient).
fn primitive_ints(p: &UniPoly) -> Vec<BigInt> {
    let den_lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> =
        p.coeffs().iter().map(|c| (c * Rational::from_integer(den_lcm.clone())).to_integer()).collect();
    let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if ints.last().is_some_and(Signed::is_negative) {
        content = -content;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Rational root candidates `±p/q` with `p | a0`, `q | an`, when both are
/// small enough to enumerate divisors.
fn divisor_candidates(ints: &[BigInt]) -> Option<Vec<Rational>> {
    let a0 = u64::try_from(ints.first()?.abs()).ok()?;
    let an = u64::try_from(ints.last()?.abs()).ok()?;
    if a0 == 0 || a0 > DIVISOR_LIMIT || an > DIVISOR_LIMIT {
        return None;
    }
    let qs = divisors(an);
    let mut out = Vec::new();
    for p in divisors(a0) {
        for q in &qs {
            let r = Rational::new(p.into(), (*q).into());
            out.push(-r.clone());
            out.push(r);
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_changes(chain: &[UniPoly], y: &Rational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for q in chain {
        let v = q.eval(y);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn squarefree_rational_roots(p: &UniPoly) -> Vec<Rational> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![-p.coeff(0) / p.coeff(1)];
    }
    let lc = p.leading().expect("nonzero").clone();
    let bound =
        p.coeffs()[..deg].iter().map(|c| (c / &lc).abs()).max().unwrap_or_else(Rational::zero) + Rational::one();
    let ints = primitive_ints(p);
    if let Some(cands) = divisor_candidates(&ints) {
        return cands.into_iter().filter(|c| p.eval(c).is_zero()).collect();
    }
    let d = ints.last().expect("nonzero").clone();
    let width = Rational::new(BigInt::one(), &d * &d * 2);
    let chain = sturm_chain(p);

    let mut out = Vec::new();
    // Intervals are half-open (lo, hi].
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&chain, &lo) - sign_changes(&chain, &hi);
        if count == 0 {
            continue;
        }
        if count == 1 {
            if let Some(r) = refine_single(p, lo, hi, &width) {
                out.push(r);
            }
            continue;
        }
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort();
    out
}

/// Bisects an interval `(lo, hi]` holding exactly one root of the squarefree
/// `p` until it is narrower than `width`, then tests the simplest fraction.
fn refine_single(p: &UniPoly, mut lo: Rational, mut hi: Rational, width: &Rational) -> Option<Rational> {
    let two = Rational::from_integer(2.into());
    let hi_val = p.eval(&hi);
    if hi_val.is_zero() {
        return Some(hi);
    }
    let hi_sign = hi_val.is_positive();
    while &(&hi - &lo) >= width {
        let mid = (&lo + &hi) / &two;
        let v = p.eval(&mid);
        if v.is_zero() {
            return Some(mid);
        }
        if v.is_positive() == hi_sign {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let cand = simplest_between(&lo, &hi);
    p.eval(&cand).is_zero().then_some(cand)
}

/// The fraction with the smallest denominator in the closed interval
/// `[lo, hi]`.
pub(crate) fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}
