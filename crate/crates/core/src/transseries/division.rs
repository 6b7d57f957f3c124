use super::{Monomial, Transseries};
use crate::error::{Error, Result};

/// Result of [`Transseries::truncated_div`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedQuotient {
    pub quotient: Transseries,
    /// True iff the divisor is a single term, so the quotient is exact.
    pub exact: bool,
    /// Dominant monomial of `ε` in `g = c·m·(1+ε)`, when `ε ≠ 0`.
    pub epsilon_dominant: Option<Monomial>,
}

impl Transseries {
    /// Writes `divisor = c·m·(1 + ε)` with `ε ≺ 1` and returns
    /// `self · c⁻¹m⁻¹ · Σ_{k=0}^{iterations} (−ε)^k`.
    ///
    /// The error `quotient·divisor − self` equals `−self·(−ε)^{iterations+1}`,
    /// so its dominant monomial is `m_self · m_ε^{iterations+1}`.
    pub fn truncated_div(&self, divisor: &Transseries, iterations: u32) -> Result<TruncatedQuotient> {
        let (m, c) = divisor.dominant_term().map_err(|_| Error::DivisionByZero)?;
        let m_inv = m.inv();
        let c_inv = c.recip();
        let normalized = divisor.mul_monomial(&m_inv).scale(&c_inv);
        let eps = &normalized - &Transseries::one();
        let base = self.mul_monomial(&m_inv).scale(&c_inv);
        if eps.is_zero() {
            return Ok(TruncatedQuotient { quotient: base, exact: true, epsilon_dominant: None });
        }
        let neg_eps = -&eps;
        let mut series = Transseries::one();
        let mut power = Transseries::one();
        for _ in 0..iterations {
            power = &power * &neg_eps;
            series = &series + &power;
        }
        Ok(TruncatedQuotient {
            quotient: &base * &series,
            exact: false,
            epsilon_dominant: Some(eps.dominant_monomial()?.clone()),
        })
    }
}
