use num_traits::One;

use super::{LogVector, Monomial, Transseries};
use crate::error::{Error, Result};
use crate::exact_algebra::Rational;

/// `ℓ_n† = 1/(ℓ₀ℓ₁⋯ℓ_n)`.
pub(crate) fn ell_dagger(n: u32) -> Monomial {
    Monomial::from_logs(LogVector::from_pairs((0..=n).map(|i| (i, -Rational::one()))))
}

impl Monomial {
    /// Logarithmic derivative `m† = L′ + Σ q_i ℓ_i†`.
    pub fn dagger(&self) -> Transseries {
        let mut out = match &self.exp {
            Some(l) => l.derive(),
            None => Transseries::zero(),
        };
        for (i, q) in self.logs.iter() {
            out.add_term(ell_dagger(i), q.clone());
        }
        out
    }
}

impl Transseries {
    /// Termwise derivation: `(c·m)′ = c·m·m†`.
    pub fn derive(&self) -> Transseries {
        let mut out = Transseries::zero();
        for (m, c) in &self.terms {
            if m.is_one() {
                continue;
            }
            for (n, d) in &m.dagger().terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    /// `n`-th derivative.
    pub fn derive_n(&self, n: usize) -> Transseries {
        let mut f = self.clone();
        for _ in 0..n {
            if f.is_zero() {
                break;
            }
            f = f.derive();
        }
        f
    }

    /// `exp(self)` for purely large `self`; `exp(0) = 1`.
    pub fn exp_large(&self) -> Result<Transseries> {
        Ok(Transseries::monomial(Monomial::new(self, LogVector::new())?))
    }

    /// Logarithmic derivative `f′/f` of a single term `c·m`.
    pub fn dagger(&self) -> Result<Transseries> {
        if self.is_zero() {
            return Err(Error::ZeroSeries);
        }
        let (m, _) = self.single_term().ok_or(Error::NotMonomialTerm(self.len()))?;
        Ok(m.dagger())
    }
}
