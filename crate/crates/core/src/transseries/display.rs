use std::fmt;

use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::{Monomial, Transseries};
use crate::exact_algebra::format_rational;

fn ell_name(i: u32) -> String {
    if i == 0 {
        "x".to_string()
    } else {
        format!("l{i}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        if let Some(l) = &self.exp {
            factors.push(format!("exp({l})"));
        }
        for (i, q) in self.logs.iter() {
            if q.is_one() {
                factors.push(ell_name(i));
            } else {
                factors.push(format!("{}^({})", ell_name(i), format_rational(q)));
            }
        }
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join("*"))
        }
    }
}

/// Canonical text form, dominant term first. The output parses back to the
/// same value.
impl fmt::Display for Transseries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms_by_dominance().into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl Monomial {
    pub fn to_json(&self) -> Value {
        let logs: Vec<Value> = self.logs.iter().map(|(i, q)| json!([i, format_rational(q)])).collect();
        json!({
            "exp": self.exp.as_deref().map(Transseries::to_json),
            "logs": logs,
        })
    }
}

impl Transseries {
    /// Deterministic JSON tree: terms in decreasing dominance, each with its
    /// coefficient, exponent subtree and log exponent pairs.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms_by_dominance()
            .into_iter()
            .map(|(m, c)| {
                let mut t = m.to_json();
                t["coeff"] = Value::String(format_rational(c));
                t
            })
            .collect();
        json!({ "terms": terms })
    }
}
