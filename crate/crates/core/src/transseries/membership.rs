//! Membership in Λ(𝕋) and Ω(𝕋) through their partial-sum characterizations:
//! `f ∈ Λ` iff `f < 1/ℓ₀ + 1/(ℓ₀ℓ₁) + ⋯ + 1/(ℓ₀⋯ℓ_n)` for some `n`, and
//! likewise for Ω with squared denominators.
//!
//! The partial sums increase with `n`, and the increment past `n = depth(f)`
//! is led by a monomial involving `ℓ_{depth(f)+1}`, which no monomial of `f`
//! contains. Hence the sign of `f − λ_n` is the same for all `n > depth(f)`,
//! and testing at `n = depth(f) + 2` decides membership.

use num_traits::One;

use super::{order::OrderedSign, LogVector, Monomial, Transseries};
use crate::exact_algebra::Rational;

fn partial_sum(n: u32, exponent: i64) -> Transseries {
    let q = Rational::from_integer((-exponent).into());
    Transseries::from_terms(
        (0..=n).map(|k| (Monomial::from_logs(LogVector::from_pairs((0..=k).map(|i| (i, q.clone())))), Rational::one())),
    )
}

/// `λ_n = Σ_{i=0}^{n} 1/(ℓ₀⋯ℓ_i)`.
pub fn lambda_partial_sum(n: u32) -> Transseries {
    partial_sum(n, 1)
}

/// `ω_n = Σ_{i=0}^{n} 1/(ℓ₀²⋯ℓ_i²)`.
pub fn omega_partial_sum(n: u32) -> Transseries {
    partial_sum(n, 2)
}

impl Monomial {
    pub fn depth(&self) -> u32 {
        let own = self.logs.max_index().unwrap_or(0);
        self.exp.as_deref().map_or(own, |l| own.max(l.depth()))
    }

    pub fn height(&self) -> u32 {
        self.exp.as_deref().map_or(0, |l| 1 + l.height())
    }
}

impl Transseries {
    /// Largest `n` such that `ℓ_n` occurs anywhere, including inside
    /// exponents; 0 for constants.
    pub fn depth(&self) -> u32 {
        self.terms.keys().map(Monomial::depth).max().unwrap_or(0)
    }

    /// Maximal nesting of `exp`.
    pub fn height(&self) -> u32 {
        self.terms.keys().map(Monomial::height).max().unwrap_or(0)
    }

    /// Cutoff index used by the membership tests.
    pub fn membership_cutoff(&self) -> u32 {
        self.depth() + 2
    }

    pub fn lambda_member(&self) -> bool {
        (self - &lambda_partial_sum(self.membership_cutoff())).sign() == OrderedSign::Negative
    }

    pub fn omega_member(&self) -> bool {
        (self - &omega_partial_sum(self.membership_cutoff())).sign() == OrderedSign::Negative
    }
}
