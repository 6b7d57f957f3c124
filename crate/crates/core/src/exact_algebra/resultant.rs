use super::UniPoly;
use crate::error::{Error, Result};

/// A polynomial in `Y` whose coefficients are polynomials in a parameter `t`.
/// `coeffs[i]` multiplies `Y^i`; no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoly {
    coeffs: Vec<UniPoly>,
}

impl ParamPoly {
    pub fn new(mut coeffs: Vec<UniPoly>) -> Self {
        while coeffs.last().is_some_and(UniPoly::is_zero) {
            coeffs.pop();
        }
        ParamPoly { coeffs }
    }

    /// Embeds a polynomial in `Y` with constant coefficients.
    pub fn from_y(p: &UniPoly) -> Self {
        Self::new(p.coeffs().iter().map(|c| UniPoly::constant(c.clone())).collect())
    }

    /// `a + t·b` for polynomials `a`, `b` in `Y`.
    pub fn affine_in_t(a: &UniPoly, b: &UniPoly) -> Self {
        let n = a.coeffs().len().max(b.coeffs().len());
        Self::new((0..n).map(|i| UniPoly::new(vec![a.coeff(i), b.coeff(i)])).collect())
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Substitutes a value for `t`.
    pub fn specialize(&self, t: &super::Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c.eval(t)).collect())
    }
}

/// Resultant with respect to `Y`, computed as the determinant of the
/// Sylvester matrix by fraction-free (Bareiss) elimination over ℚ[t].
pub fn resultant(a: &ParamPoly, b: &ParamPoly) -> Result<UniPoly> {
    let m = a.degree().ok_or(Error::ZeroPolynomial)?;
    let n = b.degree().ok_or(Error::ZeroPolynomial)?;
    let size = m + n;
    if size == 0 {
        return Ok(UniPoly::one());
    }
    // Rows hold coefficients from the highest power of Y down.
    let mut mat = vec![vec![UniPoly::zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.coeffs.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.coeffs.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

fn bareiss_det(mut mat: Vec<Vec<UniPoly>>) -> UniPoly {
    let size = mat.len();
    let mut negate = false;
    let mut prev = UniPoly::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    negate = !negate;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = num.exact_div(&prev).expect("nonzero pivot").expect("Bareiss division is exact");
            }
            mat[i][k] = UniPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}
