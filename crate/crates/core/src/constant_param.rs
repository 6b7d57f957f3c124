//! Constant creation for `P = F(Y)·Y′ − G(Y)` over `C = ℚ`.
//!
//! `P` creates a constant iff `F/G = c·R′/R` or `F/G = R′` for a rational
//! function `R`. Hermite reduction splits `F/G = A′ + B/g` with `g`
//! squarefree; the roots of `res_Y(g, B − t·g′)` are the residues of `B/g`.
//! When a certificate exists, `R(y)/exp(x/c)` (respectively `R(y) − x`) is
//! a first integral whose level sets have at most `e` points.

use num_traits::Zero;

use crate::diffpoly::{DerivativeVar, DiffMonomial, DiffPolynomial};
use crate::error::{Error, Result};
use crate::exact_algebra::{rational_gcd, rational_roots, resultant, ParamPoly, RatFunc, Rational, UniPoly};
use crate::transseries::Transseries;

/// `F/G = A′ + B/g` with `g` squarefree monic and `deg B < deg g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteResult {
    pub rational_part: RatFunc,
    pub proper_num: UniPoly,
    pub squarefree_den: UniPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CreationVerdict {
    /// `F/G = R′`.
    ExactDerivative(RatFunc),
    /// `F/G = c·Σ nᵢ·pᵢ′/pᵢ`.
    LogDerivative {
        c: Rational,
        factors: Vec<(UniPoly, i64)>,
    },
    /// No rational `R` exists over ℚ. `caveat` is set when some residue is
    /// irrational, so the answer over the reals is left open.
    NoCreation {
        caveat: bool,
    },
    Undecided(String),
}

impl CreationVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            CreationVerdict::ExactDerivative(_) => "ExactDerivative",
            CreationVerdict::LogDerivative { .. } => "LogDerivative",
            CreationVerdict::NoCreation { .. } => "NoCreation",
            CreationVerdict::Undecided(_) => "Undecided",
        }
    }

    /// The constant field the verdict refers to.
    pub fn field(&self) -> &'static str {
        "Q"
    }
}

fn check_input(f: &UniPoly, g: &UniPoly) -> Result<()> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroInput);
    }
    if f.gcd(g).degree() != Some(0) {
        return Err(Error::NotCoprime);
    }
    Ok(())
}

pub fn hermite_reduce(f: &UniPoly, g: &UniPoly) -> Result<HermiteResult> {
    if g.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if !f.is_zero() && f.gcd(g).degree() != Some(0) {
        return Err(Error::NotCoprime);
    }
    let lc = g.leading().expect("nonzero").recip();
    let (q, r) = f.scale(&lc).div_rem(&g.scale(&lc))?;
    let mut rational = RatFunc::from_poly(q.integral());
    let mut num = r;
    let mut den = g.scale(&lc);

    let factors = den.squarefree_decomp()?;
    for sf in factors.iter().filter(|sf| sf.multiplicity >= 2) {
        let v = &sf.factor;
        let i = sf.multiplicity;
        let v_prime = v.derivative();
        let u = den.exact_div(&v.pow(i as u32))?.expect("factor of the denominator");
        for j in (1..i).rev() {
            // b·u·v′ + c·v = −num/j, then num/(u·v^{j+1}) = (b/v^j)′ + (−j·c − u·b′)/(u·v^j)
            let jr = Rational::from_integer(j.into());
            let rhs = num.scale(&(-jr.recip()));
            let (b, c) = UniPoly::solve_bezout(&(&u * &v_prime), v, &rhs)?;
            rational = rational.add(&RatFunc::new(b.clone(), v.pow(j as u32))?);
            num = &c.scale(&(-jr)) - &(&u * &b.derivative());
        }
        den = &u * v;
    }
    let reduced = RatFunc::new(num, den)?;
    Ok(HermiteResult {
        rational_part: rational,
        proper_num: reduced.num().clone(),
        squarefree_den: if reduced.is_zero() { UniPoly::one() } else { reduced.den().clone() },
    })
}

/// Residues of `B/g` at the rational roots of `g`, and whether `g` splits
/// into rational linear factors.
pub fn residues(b: &UniPoly, g: &UniPoly) -> Result<(Vec<(Rational, Rational)>, bool)> {
    let roots = rational_roots(g)?;
    let gp = g.derivative();
    let pairs = roots.values().map(|a| (a.clone(), b.eval(a) / gp.eval(a))).collect();
    Ok((pairs, roots.fully_split))
}

/// Rothstein–Trager resultant `res_Y(g, B − t·g′)` as a polynomial in `t`.
pub fn residue_polynomial(b: &UniPoly, g: &UniPoly) -> Result<UniPoly> {
    resultant(&ParamPoly::from_y(g), &ParamPoly::affine_in_t(b, &-&g.derivative()))
}

pub fn decide_creation(f: &UniPoly, g: &UniPoly) -> Result<CreationVerdict> {
    check_input(f, g)?;
    let h = hermite_reduce(f, g)?;
    if h.proper_num.is_zero() {
        return Ok(CreationVerdict::ExactDerivative(h.rational_part));
    }
    if !h.rational_part.is_constant() {
        // c·R′/R has only simple poles and no polynomial part, so a nonzero
        // A′ cannot be absorbed.
        return Ok(CreationVerdict::NoCreation { caveat: false });
    }
    let (b, sq) = (&h.proper_num, &h.squarefree_den);
    let rt = residue_polynomial(b, sq)?;
    let roots = rational_roots(&rt)?;
    if !roots.fully_split {
        return Ok(CreationVerdict::NoCreation { caveat: true });
    }
    let c = rational_gcd(roots.values()).expect("residues of a nonzero proper part");
    let gp = sq.derivative();
    let mut factors = Vec::new();
    for r in roots.values() {
        let v = sq.gcd(&(b - &gp.scale(r)));
        let n = r / &c;
        debug_assert!(n.is_integer());
        let n = i64::try_from(n.to_integer()).map_err(|_| Error::Undecidable("exponent overflow".into()))?;
        factors.push((v, n));
    }
    Ok(CreationVerdict::LogDerivative { c, factors })
}

/// `Π pᵢ^{nᵢ}` as a reduced rational function.
pub fn assemble(factors: &[(UniPoly, i64)]) -> RatFunc {
    let (mut num, mut den) = (UniPoly::one(), UniPoly::one());
    for (p, n) in factors {
        let pw = p.pow(n.unsigned_abs() as u32);
        if *n >= 0 {
            num = &num * &pw;
        } else {
            den = &den * &pw;
        }
    }
    RatFunc::new(num, den).expect("nonzero denominator")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateCase {
    LogDerivative,
    ExactDerivative,
}

/// Points where the first integral is not defined or the argument
/// degenerates: zeros of `G` and of the denominator of `R`, plus zeros of
/// the numerator of `R` in the logarithmic case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcludedLocus {
    pub g_zeros: UniPoly,
    pub r_den_zeros: UniPoly,
    pub r_num_zeros: Option<UniPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametrizationCertificate {
    pub case: CertificateCase,
    pub r: RatFunc,
    /// Present in the logarithmic case.
    pub c: Option<Rational>,
    /// `x/c`, so that `exp(x/c)† = 1/c`.
    pub b_exponent: Option<Transseries>,
    pub fiber_bound: usize,
    pub excluded: ExcludedLocus,
}

pub fn build_certificate(f: &UniPoly, g: &UniPoly) -> Result<ParametrizationCertificate> {
    let verdict = decide_creation(f, g)?;
    let (case, r, c) = match verdict {
        CreationVerdict::ExactDerivative(r) => (CertificateCase::ExactDerivative, r, None),
        CreationVerdict::LogDerivative { c, factors } => (CertificateCase::LogDerivative, assemble(&factors), Some(c)),
        other => return Err(Error::NoCertificate(other.tag().to_string())),
    };
    let fiber_bound = r.num().degree_or_zero().max(r.den().degree_or_zero());
    let b_exponent = c.as_ref().map(|c| Transseries::x().scale(&c.recip()));
    let excluded = ExcludedLocus {
        g_zeros: g.clone(),
        r_den_zeros: r.den().clone(),
        r_num_zeros: c.as_ref().map(|_| r.num().clone()),
    };
    Ok(ParametrizationCertificate { case, r, c, b_exponent, fiber_bound, excluded })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointStatus {
    Pass,
    Fail,
    /// The point lies in the excluded locus.
    Excluded,
    /// The point does not solve `P`.
    NotMember,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Pass => "pass",
            PointStatus::Fail => "fail",
            PointStatus::Excluded => "excluded",
            PointStatus::NotMember => "not-member",
        }
    }
}

/// Horner evaluation of a rational polynomial at a transseries.
pub fn eval_at(p: &UniPoly, y: &Transseries) -> Transseries {
    let mut acc = Transseries::zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * y) + &Transseries::constant(c.clone());
    }
    acc
}

/// `F(Y)·Y′ − G(Y)` as a differential polynomial.
pub fn order_one_equation(f: &UniPoly, g: &UniPoly) -> DiffPolynomial {
    let y1 = DiffPolynomial::from_terms(1, [(DiffMonomial::var(DerivativeVar::new(1, 1)), Transseries::one())])
        .expect("arity 1");
    DiffPolynomial::from_univariate(f)
        .mul(&y1)
        .and_then(|p| p.sub(&DiffPolynomial::from_univariate(g)))
        .expect("arity 1")
}

/// Checks the first-integral identity at each point. With `R = A/B`, the
/// logarithmic case tests `c·(A(y)′B(y) − A(y)B(y)′) − A(y)B(y) = 0` and
/// the exact case tests `A(y)′B(y) − A(y)B(y)′ − B(y)² = 0`.
pub fn verify_certificate(
    f: &UniPoly,
    g: &UniPoly,
    cert: &ParametrizationCertificate,
    points: &[Transseries],
) -> Result<Vec<PointStatus>> {
    let p = order_one_equation(f, g);
    points
        .iter()
        .map(|y| {
            if eval_at(g, y).is_zero() || eval_at(&cert.excluded.r_den_zeros, y).is_zero() {
                return Ok(PointStatus::Excluded);
            }
            if let Some(num) = &cert.excluded.r_num_zeros {
                if eval_at(num, y).is_zero() {
                    return Ok(PointStatus::Excluded);
                }
            }
            if !p.evaluate(std::slice::from_ref(y))?.is_zero() {
                return Ok(PointStatus::NotMember);
            }
            let a = eval_at(cert.r.num(), y);
            let b = eval_at(cert.r.den(), y);
            let wronskian = &(&a.derive() * &b) - &(&a * &b.derive());
            let residual = match (&cert.case, &cert.c) {
                (CertificateCase::LogDerivative, Some(c)) => &wronskian.scale(c) - &(&a * &b),
                _ => &wronskian - &(&b * &b),
            };
            Ok(if residual.is_zero() { PointStatus::Pass } else { PointStatus::Fail })
        })
        .collect()
}

/// Coefficients in `Y` of `A(Y) − w·B(Y)`, whose roots are the points of
/// the level set `R(y) = w`. Its degree is at most the fiber bound.
pub fn fiber_equation(cert: &ParametrizationCertificate, level: &Transseries) -> Vec<Transseries> {
    let (a, b) = (cert.r.num(), cert.r.den());
    let n = a.coeffs().len().max(b.coeffs().len());
    let mut out: Vec<Transseries> =
        (0..n).map(|i| &Transseries::constant(a.coeff(i)) - &level.scale(&b.coeff(i))).collect();
    while out.last().is_some_and(Transseries::is_zero) {
        out.pop();
    }
    out
}

/// Level value of the first integral on the fiber indexed by the constant
/// `k`: `k·exp(x/c)` in the logarithmic case, `x + k` in the exact case.
pub fn fiber_level(cert: &ParametrizationCertificate, k: &Rational) -> Result<Transseries> {
    match &cert.b_exponent {
        Some(e) => Ok(e.exp_large()?.scale(k)),
        None => Ok(&Transseries::x() + &Transseries::constant(k.clone())),
    }
}

/// Verifies the defining identity of a verdict by expansion.
pub fn verdict_reproduces(f: &UniPoly, g: &UniPoly, verdict: &CreationVerdict) -> bool {
    let target = match RatFunc::new(f.clone(), g.clone()) {
        Ok(t) => t,
        Err(_) => return false,
    };
    match verdict {
        CreationVerdict::ExactDerivative(r) => r.derivative() == target,
        CreationVerdict::LogDerivative { c, factors } => {
            let mut sum = RatFunc::zero();
            for (p, n) in factors {
                let term = RatFunc::new(p.derivative(), p.clone()).expect("nonzero factor");
                sum = sum.add(&term.scale(&Rational::from_integer((*n).into())));
            }
            let pairwise_coprime = factors
                .iter()
                .enumerate()
                .all(|(i, (p, _))| factors[i + 1..].iter().all(|(q, _)| p.gcd(q).is_constant()));
            !c.is_zero()
                && pairwise_coprime
                && factors.iter().all(|(p, n)| *n != 0 && p.is_squarefree())
                && sum.scale(c) == target
        }
        _ => false,
    }
}
