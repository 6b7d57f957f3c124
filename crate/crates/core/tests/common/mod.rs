//! Seeded generators and independent oracles shared by the integration
//! tests and the acceptance target.
#![allow(dead_code)]

pub mod cli_checks;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use transdim::coanalysis::FiniteStructure;
use transdim::diffpoly::DiffPolynomial;
use transdim::dimension::SetDescriptor;
use transdim::exact_algebra::{rat, Rational, UniPoly};
use transdim::transseries::{lambda_partial_sum, omega_partial_sum, LogVector, Monomial, Transseries};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(r: &mut impl Rng) -> Rational {
    let num = loop {
        let n = r.gen_range(-4i64..=4);
        if n != 0 {
            break n;
        }
    };
    rat(num, r.gen_range(1..=3))
}

pub fn nonzero_int(r: &mut impl Rng, bound: i64) -> Rational {
    loop {
        let n = r.gen_range(-bound..=bound);
        if n != 0 {
            return Rational::from_integer(n.into());
        }
    }
}

const EXPONENTS: [(i64, i64); 8] = [(-2, 1), (-1, 1), (-1, 2), (1, 3), (1, 2), (1, 1), (2, 1), (3, 1)];

pub fn log_vector(r: &mut impl Rng, max_index: u32) -> LogVector {
    let mut pairs = Vec::new();
    for i in 0..=max_index {
        if r.gen_bool(0.45) {
            let (p, q) = EXPONENTS[r.gen_range(0..EXPONENTS.len())];
            pairs.push((i, rat(p, q)));
        }
    }
    LogVector::from_pairs(pairs)
}

/// A log monomial `≻ 1`: the leading nonzero exponent is positive.
pub fn large_log_monomial(r: &mut impl Rng, max_index: u32) -> Monomial {
    loop {
        let v = log_vector(r, max_index);
        let Some((_, lead)) = v.iter().next() else { continue };
        let v = if lead.is_negative() { LogVector::from_pairs(v.iter().map(|(i, q)| (i, -q.clone()))) } else { v };
        return Monomial::from_logs(v);
    }
}

/// Purely large transseries of exponential height below `height`.
pub fn purely_large(r: &mut impl Rng, height: u32) -> Transseries {
    let n = r.gen_range(1..=3);
    let mut terms = Vec::new();
    for _ in 0..n {
        let mut m = large_log_monomial(r, 2);
        if height > 1 && r.gen_bool(0.3) {
            let inner = positive_large(r, height - 1);
            let e = Monomial::new(&inner, LogVector::new()).expect("purely large");
            m = m.mul(&e);
        }
        terms.push((m, small_rational(r)));
    }
    Transseries::from_terms(terms)
}

/// Purely large and positive.
pub fn positive_large(r: &mut impl Rng, height: u32) -> Transseries {
    loop {
        let l = purely_large(r, height);
        if l.is_zero() {
            continue;
        }
        return if l.sign() == transdim::transseries::OrderedSign::Negative { -l } else { l };
    }
}

pub fn monomial(r: &mut impl Rng, height: u32) -> Monomial {
    let logs = Monomial::from_logs(log_vector(r, 2));
    if height > 0 && r.gen_bool(0.35) {
        let l = purely_large(r, height);
        logs.mul(&Monomial::new(&l, LogVector::new()).expect("purely large"))
    } else {
        logs
    }
}

pub fn transseries(r: &mut impl Rng, height: u32) -> Transseries {
    sparse_transseries(r, height, 4)
}

pub fn sparse_transseries(r: &mut impl Rng, height: u32, max_terms: usize) -> Transseries {
    let n = r.gen_range(0..=max_terms);
    Transseries::from_terms((0..n).map(|_| (monomial(r, height), small_rational(r))).collect::<Vec<_>>())
}

pub fn nonzero_transseries(r: &mut impl Rng, height: u32) -> Transseries {
    loop {
        let t = transseries(r, height);
        if !t.is_zero() {
            return t;
        }
    }
}

/// Values near the partial sums, so that membership is decided by deep terms.
pub fn near_partial_sum(r: &mut impl Rng, squared: bool) -> Transseries {
    let n = r.gen_range(0..=3);
    let base = if squared { omega_partial_sum(n) } else { lambda_partial_sum(n) };
    let k = r.gen_range(0..=n + 1);
    let power = if squared { rat(-2, 1) } else { rat(-1, 1) };
    let mut logs: Vec<(u32, Rational)> = (0..=k).map(|i| (i, power.clone())).collect();
    if r.gen_bool(0.3) {
        logs.last_mut().expect("nonempty").1 += rat(r.gen_range(-1..=1), 2);
    }
    let bump = Transseries::term(small_rational(r), Monomial::from_logs(LogVector::from_pairs(logs)));
    match r.gen_range(0..4) {
        0 => base,
        1 => &base + &bump,
        2 => &base - &bump,
        _ => transseries(r, 1),
    }
}

/// `Σ c_k x^k` as a transseries.
pub fn poly_in_x(p: &UniPoly) -> Transseries {
    Transseries::from_terms(
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (x_power(k as i64), c.clone()))
            .collect::<Vec<_>>(),
    )
}

pub fn x_power(k: i64) -> Monomial {
    if k == 0 {
        Monomial::one()
    } else {
        Monomial::ell(0, Rational::from_integer(k.into()))
    }
}

pub fn int_poly(r: &mut impl Rng, max_degree: usize, bound: i64) -> UniPoly {
    let d = r.gen_range(0..=max_degree);
    UniPoly::new((0..=d).map(|_| Rational::from_integer(r.gen_range(-bound..=bound).into())).collect())
}

/// Polynomial with at least one nonzero coefficient.
pub fn nonzero_int_poly(r: &mut impl Rng, max_degree: usize, bound: i64) -> UniPoly {
    loop {
        let p = int_poly(r, max_degree, bound);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn diff_polynomial(r: &mut impl Rng, arity: usize, max_order: usize, max_terms: usize) -> DiffPolynomial {
    let mut acc = DiffPolynomial::zero(arity);
    for _ in 0..r.gen_range(1..=max_terms) {
        let coeff = if r.gen_bool(0.5) {
            Transseries::constant(small_rational(r))
        } else {
            loop {
                let c = sparse_transseries(r, 1, 2);
                if !c.is_zero() {
                    break c;
                }
            }
        };
        // Total degree at most 2 keeps evaluated products small.
        let mut term = DiffPolynomial::constant(arity, coeff);
        for _ in 0..r.gen_range(0..=2) {
            let v =
                DiffPolynomial::var(arity, r.gen_range(1..=arity), r.gen_range(0..=max_order)).expect("within arity");
            term = term.mul(&v).expect("same arity");
        }
        acc = acc.add(&term).expect("same arity");
    }
    acc
}

pub fn nonzero_diff_polynomial(r: &mut impl Rng, arity: usize, max_order: usize, max_terms: usize) -> DiffPolynomial {
    loop {
        let p = diff_polynomial(r, arity, max_order, max_terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random well-formed descriptor of the given arity.
pub fn descriptor(r: &mut impl Rng, arity: usize, depth: u32) -> SetDescriptor {
    let leaf = depth == 0 || r.gen_bool(0.3);
    if leaf {
        return match r.gen_range(0..5) {
            0 => SetDescriptor::Full(arity),
            1 => SetDescriptor::Empty(arity),
            2 => SetDescriptor::Constants(arity),
            3 => SetDescriptor::FinitePoints {
                points: (0..r.gen_range(1..=3)).map(|_| (0..arity).map(|_| transseries(r, 1)).collect()).collect(),
                n: arity,
            },
            _ => {
                let polys = (0..r.gen_range(1..=2)).map(|_| nonzero_diff_polynomial(r, arity, 2, 3)).collect();
                SetDescriptor::ZeroSet { polys, n: arity, witness: None }
            }
        };
    }
    match r.gen_range(0..4) {
        0 => SetDescriptor::union(descriptor(r, arity, depth - 1), descriptor(r, arity, depth - 1)),
        1 if arity >= 2 => {
            let k = r.gen_range(1..arity);
            SetDescriptor::product(descriptor(r, k, depth - 1), descriptor(r, arity - k, depth - 1))
        }
        2 => {
            let mut sigma: Vec<usize> = (1..=arity).collect();
            sigma.shuffle(r);
            SetDescriptor::permute(sigma, descriptor(r, arity, depth - 1))
        }
        _ => {
            let extra = r.gen_range(0..=2);
            SetDescriptor::project(descriptor(r, arity + extra, depth - 1), arity)
        }
    }
}

/// Rank over ℚ by fraction-based Gaussian elimination.
#[allow(clippy::needless_range_loop)]
pub fn rational_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..rows {
            if i != rank && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[rank][col];
                for j in col..cols {
                    let d = &f * &m[rank][j];
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Partial fraction data of `F/G` for `G = lead·Π(Y − a)^m`: the polynomial
/// part and, per root, the coefficients of `1/(Y−a)^k` for `k = 1..=m`.
pub struct PartialFractions {
    pub polynomial: UniPoly,
    pub poles: Vec<(Rational, Vec<Rational>)>,
}

/// `p(Y + a)` as a coefficient vector.
#[allow(clippy::needless_range_loop)]
fn shift(p: &UniPoly, a: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.coeffs().len()];
    for (k, c) in p.coeffs().iter().enumerate() {
        // Binomial expansion of c·(t + a)^k.
        let mut binom = Rational::one();
        for j in 0..=k {
            let term = c * &binom * pow(a, k - j);
            out[j] += term;
            binom = binom * Rational::from_integer(((k - j) as i64).into())
                / Rational::from_integer(((j + 1) as i64).into());
        }
    }
    out
}

fn pow(a: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * a)
}

/// Expands `F/G` around every root; `roots` lists each distinct root with
/// its multiplicity and `lead` is the leading coefficient of `G`.
pub fn partial_fractions(f: &UniPoly, lead: &Rational, roots: &[(Rational, usize)]) -> PartialFractions {
    let g = roots
        .iter()
        .fold(UniPoly::constant(lead.clone()), |acc, (a, m)| &acc * &UniPoly::linear_root(a).pow(*m as u32));
    let (polynomial, _) = f.div_rem(&g).expect("nonzero denominator");
    let mut poles = Vec::new();
    for (i, (a, m)) in roots.iter().enumerate() {
        let cofactor = roots
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(UniPoly::constant(lead.clone()), |acc, (_, (b, k))| &acc * &UniPoly::linear_root(b).pow(*k as u32));
        // Taylor coefficients of F/cofactor at a, up to order m − 1.
        let num = shift(f, a);
        let den = shift(&cofactor, a);
        let mut series: Vec<Rational> = Vec::with_capacity(*m);
        for k in 0..*m {
            let mut acc = num.get(k).cloned().unwrap_or_else(Rational::zero);
            for j in 1..=k {
                if let Some(d) = den.get(j) {
                    acc -= d * &series[k - j];
                }
            }
            series.push(acc / &den[0]);
        }
        // Coefficient of 1/(Y−a)^k is series[m − k].
        let coeffs = (1..=*m).map(|k| series[m - k].clone()).collect();
        poles.push((a.clone(), coeffs));
    }
    PartialFractions { polynomial, poles }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Exact,
    /// `c` is the positive gcd of the residues.
    Log(Rational),
    No,
}

/// Reading off the Rosenlicht criterion from explicit partial fractions:
/// all residues vanish iff `F/G` is a derivative; only simple poles and no
/// polynomial part iff `F/G = c·R′/R` (rational residues are always
/// commensurable).
pub fn rosenlicht_oracle(pf: &PartialFractions) -> OracleVerdict {
    let residues: Vec<&Rational> = pf.poles.iter().map(|(_, c)| &c[0]).collect();
    if residues.iter().all(|r| r.is_zero()) {
        return OracleVerdict::Exact;
    }
    let only_simple = pf.poles.iter().all(|(_, c)| c[1..].iter().all(Zero::is_zero));
    if pf.polynomial.is_zero() && only_simple {
        let c = residues
            .iter()
            .filter(|r| !r.is_zero())
            .fold(None::<Rational>, |acc, r| {
                Some(match acc {
                    None => r.abs(),
                    Some(g) => rational_gcd2(&g, &r.abs()),
                })
            })
            .expect("a nonzero residue");
        return OracleVerdict::Log(c);
    }
    OracleVerdict::No
}

fn rational_gcd2(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    Rational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// Multisets of size `k` from `values`, as sorted vectors.
pub fn multisets(values: &[i64], k: usize) -> Vec<Vec<i64>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        for mut rest in multisets(&values[i..], k - 1) {
            rest.insert(0, v);
            out.push(rest);
        }
    }
    out
}

pub fn root_multiplicities(roots: &[i64]) -> Vec<(Rational, usize)> {
    let mut out: Vec<(Rational, usize)> = Vec::new();
    for &a in roots {
        let a = Rational::from_integer(a.into());
        match out.iter_mut().find(|(b, _)| *b == a) {
            Some((_, m)) => *m += 1,
            None => out.push((a, 1)),
        }
    }
    out
}

/// All coefficient vectors of length `len` over `values`.
pub fn coefficient_grid(values: &[i64], len: usize) -> Vec<Vec<i64>> {
    (0..len).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                values.iter().map(move |&c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect()
    })
}

/// Exhaustive co-analyzability over subsets of a small universe of tuples:
/// a set is `r`-step co-analyzable iff it splits into at most `|C|` blocks
/// that are `(r−1)`-step co-analyzable, down to blocks of size `≤ e`.
pub struct PartitionOracle {
    good: Vec<Vec<bool>>,
}

impl PartitionOracle {
    pub fn new(universe: usize, constants: usize, max_r: usize, e: usize) -> Self {
        assert!(universe <= 16);
        let full = 1usize << universe;
        let mut good = vec![(0..full).map(|m| (m as u32).count_ones() as usize <= e).collect::<Vec<_>>()];
        for r in 1..=max_r {
            let prev = &good[r - 1];
            // cover[k][m]: m splits into at most k previous-level blocks.
            let mut cover = prev.clone();
            for _ in 1..constants {
                let mut next = cover.clone();
                for m in 0..full {
                    if next[m] {
                        continue;
                    }
                    let mut s = m;
                    while s > 0 {
                        if prev[s] && cover[m & !s] {
                            next[m] = true;
                            break;
                        }
                        s = (s - 1) & m;
                    }
                }
                cover = next;
            }
            good.push(cover);
        }
        PartitionOracle { good }
    }

    pub fn coanalyzable(&self, mask: usize, r: usize) -> bool {
        self.good[r][mask]
    }
}

pub fn structure(size: usize, constants: &[usize]) -> FiniteStructure {
    FiniteStructure::new(size, constants.iter().copied()).expect("valid structure")
}

pub fn set_from_mask(universe: &[Vec<usize>], mask: usize) -> BTreeSet<Vec<usize>> {
    universe.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()).collect()
}

pub fn nonempty_subsets(size: usize) -> Vec<Vec<usize>> {
    (1usize..1 << size).map(|m| (0..size).filter(|i| m >> i & 1 == 1).collect()).collect()
}
