//! Strong d-independence at a point: the matrix of partials with respect to
//! the top derivatives, and its rank computed from minors.

use std::collections::HashMap;

use serde::Serialize;

use crate::diffpoly::{order_vector, DiffPolynomial};
use crate::error::{Error, Result};
use crate::transseries::Transseries;

/// Default bound on matrix side length for minor enumeration.
pub const DEFAULT_MAX_SIZE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Transseries>,
}

impl TransMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Transseries>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(TransMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Transseries>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(m, n, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Transseries {
        &self.entries[i * self.cols + j]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Transseries>> {
        self.entries.chunks(self.cols.max(1)).map(<[_]>::to_vec).take(self.rows).collect()
    }

    /// Rank as the size of the largest nonzero minor, using [`DEFAULT_MAX_SIZE`].
    pub fn minor_rank(&self) -> Result<usize> {
        self.minor_rank_capped(DEFAULT_MAX_SIZE)
    }

    pub fn minor_rank_capped(&self, max_size: usize) -> Result<usize> {
        if self.rows > max_size || self.cols > max_size {
            return Err(Error::SizeLimit(format!(
                "{}x{} matrix exceeds the {max_size}x{max_size} minor enumeration bound",
                self.rows, self.cols
            )));
        }
        if self.rows > 16 || self.cols > 16 {
            return Err(Error::SizeLimit("matrix side above 16".into()));
        }
        let mut minors = Minors { m: self, memo: HashMap::new() };
        let mut rank = 0;
        for row_mask in 1u32..(1 << self.rows) {
            let k = row_mask.count_ones() as usize;
            if k <= rank || k > self.cols {
                continue;
            }
            let nonzero = subsets_of_size(self.cols, k).any(|col_mask| !minors.det(row_mask, col_mask).is_zero());
            if nonzero {
                rank = k;
            }
        }
        Ok(rank)
    }
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    (0u32..(1 << n)).filter(move |m| m.count_ones() as usize == k)
}

/// Memoized Laplace expansion along the highest selected row.
struct Minors<'a> {
    m: &'a TransMatrix,
    memo: HashMap<(u32, u32), Transseries>,
}

impl Minors<'_> {
    fn det(&mut self, rows: u32, cols: u32) -> Transseries {
        if rows == 0 {
            return Transseries::one();
        }
        if let Some(d) = self.memo.get(&(rows, cols)) {
            return d.clone();
        }
        let top = 31 - rows.leading_zeros();
        let rest = rows & !(1 << top);
        let mut acc = Transseries::zero();
        let mut sign_pos = true;
        for j in 0..self.m.cols {
            if cols & (1 << j) == 0 {
                continue;
            }
            let a = self.m.get(top as usize, j);
            if !a.is_zero() {
                let sub = self.det(rest, cols & !(1 << j));
                if !sub.is_zero() {
                    let t = a * &sub;
                    acc = if sign_pos { &acc + &t } else { &acc - &t };
                }
            }
            sign_pos = !sign_pos;
        }
        // The expansion row is the last one, so the cofactor sign for the
        // i-th selected column is (-1)^(k-1+i); fix the parity here.
        if (rows.count_ones() - 1) % 2 == 1 {
            acc = -&acc;
        }
        self.memo.insert((rows, cols), acc.clone());
        acc
    }
}

/// Matrix with entry `(i, j)` equal to `∂P_i/∂Y_j^{(r_j)}` evaluated at `point`.
pub fn jacobian_at(family: &[DiffPolynomial], point: &[Transseries], orders: &[usize]) -> Result<TransMatrix> {
    let n = point.len();
    if orders.len() != n {
        return Err(Error::ArityMismatch { expected: n, found: orders.len() });
    }
    let mut entries = Vec::with_capacity(family.len() * n);
    for (i, p) in family.iter().enumerate() {
        if p.arity() != n {
            return Err(Error::ArityMismatch { expected: p.arity(), found: n });
        }
        for (j, &r) in orders.iter().enumerate() {
            if p.order_in(j + 1).is_some_and(|o| o > r) {
                return Err(Error::OrderViolation { index: i, var: j + 1 });
            }
        }
        for (j, &r) in orders.iter().enumerate() {
            entries.push(p.partial(j + 1, r)?.evaluate(point)?);
        }
    }
    TransMatrix::new(family.len(), n, entries)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub independent: bool,
    pub rank: usize,
    pub orders: Vec<usize>,
}

/// Rank test at the componentwise maximal order vector. Raising any `r_j`
/// beyond every order in `Y_j` only zeroes column `j`, so this order vector
/// dominates all admissible choices.
pub fn strongly_d_independent_at(family: &[DiffPolynomial], point: &[Transseries]) -> Result<IndependenceReport> {
    strongly_d_independent_capped(family, point, DEFAULT_MAX_SIZE)
}

pub fn strongly_d_independent_capped(
    family: &[DiffPolynomial],
    point: &[Transseries],
    max_size: usize,
) -> Result<IndependenceReport> {
    let orders = order_vector(family)?;
    let rank = jacobian_at(family, point, &orders)?.minor_rank_capped(max_size)?;
    Ok(IndependenceReport { independent: rank == family.len(), rank, orders })
}

/// Largest size of a subfamily that is strongly d-independent at `point`.
/// Every member must vanish there; `NotVanishing` carries the 0-based index.
pub fn codim_lower_bound(family: &[DiffPolynomial], point: &[Transseries]) -> Result<usize> {
    codim_lower_bound_capped(family, point, DEFAULT_MAX_SIZE)
}

pub fn codim_lower_bound_capped(family: &[DiffPolynomial], point: &[Transseries], max_size: usize) -> Result<usize> {
    if family.is_empty() {
        return Err(Error::EmptyList);
    }
    if family.len() > max_size {
        return Err(Error::SizeLimit(format!("family of {} exceeds the subset search bound {max_size}", family.len())));
    }
    for (i, p) in family.iter().enumerate() {
        if !p.evaluate(point)?.is_zero() {
            return Err(Error::NotVanishing(i));
        }
    }
    let m = family.len();
    for k in (1..=m.min(point.len())).rev() {
        for mask in subsets_of_size(m, k) {
            let sub: Vec<DiffPolynomial> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| family[i].clone()).collect();
            if strongly_d_independent_capped(&sub, point, max_size)?.independent {
                return Ok(k);
            }
        }
    }
    Ok(0)
}
