//! Exact arithmetic over ℚ: rationals, univariate polynomials and rational
//! functions, resultants over ℚ[t], and rational root finding.

mod poly;
mod ratfunc;
mod resultant;
mod roots;

pub use poly::{SquarefreeFactor, UniPoly};
pub use ratfunc::RatFunc;
pub use resultant::{resultant, ParamPoly};
pub use roots::{rational_roots, RationalRoots};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `p/q` from machine integers. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Positive generator of the ℤ-module spanned by `values` (zero entries are
/// ignored). Returns `None` if every value is zero.
pub fn rational_gcd<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mut any = false;
    for v in values {
        if v.is_zero() {
            continue;
        }
        any = true;
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    any.then(|| Rational::new(num.abs(), den))
}
