//! Text grammar for transseries, differential polynomials and set
//! descriptors.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' (INT | '(' ['-'] INT ['/' INT] ')'))?
//! atom   := INT | 'x' | 'lN' | 'exp' '(' expr ')' | 'log' '(' expr ')'
//!         | 'Y' | 'Yj' | 'D' '(' expr ')' | 'Dk' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `D` is the derivation; on differential polynomials it maps `Y^{(r)}` to
//! `Y^{(r+1)}`. Division is allowed only by a single nonzero term, and
//! `log` only of `x` and iterated logarithms.

mod descriptor;
mod lexer;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use descriptor::parse_descriptor;

use crate::diffpoly::DiffPolynomial;
use crate::error::{Error, Result};
use crate::exact_algebra::{Rational, UniPoly};
use crate::transseries::Transseries;
use lexer::{Tok, Token};

/// Maximal parenthesis / operator nesting.
pub const MAX_DEPTH: usize = 200;
/// Largest number of terms an intermediate value may have.
pub const MAX_TERMS: usize = 100_000;
const MAX_POW_MULTI: i64 = 64;
const MAX_POW_SINGLE: i64 = 10_000;
const MAX_COEFF_BITS: u64 = 1 << 20;
const MAX_LOG_INDEX: u32 = 1_000;
const MAX_DERIVATIVE_ORDER: usize = 64;
const MAX_VAR_INDEX: usize = 1_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Node {
    Num(BigInt),
    X,
    Ell(u32),
    Var { index: usize, pos: usize },
    Exp(Box<Node>),
    Log(Box<Node>),
    Derive { order: usize, arg: Box<Node> },
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow { base: Box<Node>, exponent: Rational },
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    at: usize,
    depth: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self> {
        Ok(Parser { toks: lexer::tokenize(src)?, at: 0, depth: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    pub(crate) fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<()> {
        if self.peek() == &Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> Error {
        let found = match self.peek() {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(w) => format!("'{w}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".to_string(),
        };
        Error::syntax(self.pos(), format!("expected {wanted}, found {found}"))
    }

    pub(crate) fn usize_literal(&mut self, what: &str) -> Result<usize> {
        let pos = self.pos();
        let n = self.integer(what)?;
        n.to_usize().ok_or_else(|| Error::syntax(pos, format!("{what} too large")))
    }

    pub(crate) fn leave(&mut self) {
        self.depth -= 1;
    }

    pub(crate) fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::syntax(self.pos(), "nesting too deep"));
        }
        Ok(())
    }

    pub(crate) fn expr(&mut self) -> Result<Node> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            if self.eat_sym('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_sym('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_sym('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_sym('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat_sym('-') {
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Node::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.peek() != &Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let exponent = if self.eat_sym('(') {
            let neg = self.eat_sym('-');
            let num = self.integer("exponent numerator")?;
            let den = if self.eat_sym('/') {
                let dpos = self.pos();
                let d = self.integer("exponent denominator")?;
                if d.is_zero() {
                    return Err(Error::syntax(dpos, "zero denominator in exponent"));
                }
                d
            } else {
                BigInt::one()
            };
            self.expect_sym(')')?;
            let q = Rational::new(num, den);
            if neg {
                -q
            } else {
                q
            }
        } else {
            Rational::from_integer(self.integer("exponent")?)
        };
        Ok(Node::Pow { base: Box::new(base), exponent })
    }

    fn integer(&mut self, what: &str) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn parenthesized(&mut self) -> Result<Node> {
        self.expect_sym('(')?;
        let inner = self.expr()?;
        self.expect_sym(')')?;
        Ok(inner)
    }

    fn atom(&mut self) -> Result<Node> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Node::Num(n))
            }
            Tok::Sym('(') => self.parenthesized(),
            Tok::Ident(word) => {
                self.bump();
                self.ident(&word, pos)
            }
            _ => Err(self.unexpected("an operand")),
        }
    }

    fn ident(&mut self, word: &str, pos: usize) -> Result<Node> {
        let suffix = |prefix: &str| -> Option<Result<usize>> {
            let rest = word.strip_prefix(prefix)?;
            if rest.is_empty() {
                return Some(Ok(1));
            }
            if !rest.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            Some(rest.parse::<usize>().map_err(|_| Error::syntax(pos, "index too large")))
        };
        match word {
            "x" => return Ok(Node::X),
            "exp" => return Ok(Node::Exp(Box::new(self.parenthesized()?))),
            "log" => return Ok(Node::Log(Box::new(self.parenthesized()?))),
            _ => {}
        }
        if let Some(rest) = word.strip_prefix('l') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let n: u32 = rest.parse().map_err(|_| Error::syntax(pos, "log index too large"))?;
                if n > MAX_LOG_INDEX {
                    return Err(Error::syntax(pos, "log index too large"));
                }
                return Ok(if n == 0 { Node::X } else { Node::Ell(n) });
            }
        }
        if let Some(index) = suffix("Y") {
            let index = index?;
            if index == 0 || index > MAX_VAR_INDEX {
                return Err(Error::syntax(pos, format!("bad indeterminate index in {word}")));
            }
            return Ok(Node::Var { index, pos });
        }
        if let Some(order) = suffix("D") {
            let order = order?;
            if order > MAX_DERIVATIVE_ORDER {
                return Err(Error::syntax(pos, "derivative order too large"));
            }
            let arg = self.parenthesized()?;
            return Ok(Node::Derive { order, arg: Box::new(arg) });
        }
        Err(Error::syntax(pos, format!("unknown identifier '{word}'")))
    }
}

/// Total number of transseries terms across all coefficients.
fn size(p: &DiffPolynomial) -> usize {
    p.terms().map(|(_, c)| c.len()).sum()
}

fn guard(len: usize) -> Result<()> {
    if len > MAX_TERMS {
        return Err(Error::SizeLimit(format!("intermediate value with more than {MAX_TERMS} terms")));
    }
    Ok(())
}

/// Evaluation context: arity of the polynomial ring, or `None` when
/// indeterminates are not allowed.
struct Eval {
    arity: Option<usize>,
}

impl Eval {
    fn ring_arity(&self) -> usize {
        self.arity.unwrap_or(0)
    }

    fn constant(&self, t: Transseries) -> DiffPolynomial {
        DiffPolynomial::constant(self.ring_arity(), t)
    }

    fn transseries(&self, node: &Node) -> Result<Transseries> {
        let v = self.eval(node)?;
        v.as_transseries()
            .ok_or_else(|| Error::NotInFragment("an indeterminate occurs where a transseries is required".into()))
    }

    fn eval(&self, node: &Node) -> Result<DiffPolynomial> {
        Ok(match node {
            Node::Num(n) => self.constant(Transseries::constant(Rational::from_integer(n.clone()))),
            Node::X => self.constant(Transseries::x()),
            Node::Ell(n) => self.constant(Transseries::ell(*n)),
            Node::Var { index, pos } => match self.arity {
                None => return Err(Error::syntax(*pos, "indeterminates are not allowed in a transseries")),
                Some(arity) => {
                    if *index > arity {
                        return Err(Error::ArityViolation { index: *index, arity });
                    }
                    DiffPolynomial::var(arity, *index, 0)?
                }
            },
            Node::Exp(arg) => self.constant(self.transseries(arg)?.exp_large()?),
            Node::Log(arg) => {
                let a = self.transseries(arg)?;
                self.constant(Transseries::ell(iterated_log_index(&a)? + 1))
            }
            Node::Derive { order, arg } => {
                let mut v = self.eval(arg)?;
                for _ in 0..*order {
                    v = v.total_derive();
                    guard(size(&v))?;
                }
                v
            }
            Node::Neg(a) => self.eval(a)?.neg(),
            Node::Add(a, b) => self.eval(a)?.add(&self.eval(b)?)?,
            Node::Sub(a, b) => self.eval(a)?.sub(&self.eval(b)?)?,
            Node::Mul(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                guard(size(&a).saturating_mul(size(&b)))?;
                let p = a.mul(&b)?;
                guard(size(&p))?;
                p
            }
            Node::Div(a, b) => {
                let a = self.eval(a)?;
                let b = self.transseries(b)?;
                if b.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let inv = Transseries::one().div_term(&b)?;
                a.scale(&inv)
            }
            Node::Pow { base, exponent } => self.pow(base, exponent)?,
        })
    }

    fn pow(&self, base: &Node, q: &Rational) -> Result<DiffPolynomial> {
        let b = self.eval(base)?;
        let too_big = |limit: i64| q.abs() > Rational::from_integer(limit.into());
        if let Some(t) = b.as_transseries() {
            if t.len() <= 1 {
                let bits = t.terms().next().map_or(0, |(_, c)| c.numer().bits().max(c.denom().bits()));
                if too_big(MAX_POW_SINGLE)
                    || Rational::from_integer(bits.into()) * q.abs() > Rational::from_integer(MAX_COEFF_BITS.into())
                {
                    return Err(Error::SizeLimit("exponent too large".into()));
                }
                return Ok(self.constant(t.pow_rational(q)?));
            }
        }
        if !q.is_integer() || q.is_negative() {
            return Err(Error::NotInFragment("fractional or negative powers need a single-term base".into()));
        }
        let limit = if size(&b) <= 1 { MAX_POW_SINGLE } else { MAX_POW_MULTI };
        if too_big(limit) {
            return Err(Error::SizeLimit("exponent too large".into()));
        }
        let e = q.to_integer().to_u32().expect("bounded above");
        let mut acc = self.constant(Transseries::one());
        for _ in 0..e {
            guard(size(&acc).saturating_mul(size(&b)))?;
            acc = acc.mul(&b)?;
            guard(size(&acc))?;
        }
        Ok(acc)
    }
}

/// `n` with `a = ℓ_n`.
fn iterated_log_index(a: &Transseries) -> Result<u32> {
    for n in 0..=MAX_LOG_INDEX {
        if a == &Transseries::ell(n) {
            return Ok(n);
        }
        if a.depth() < n {
            break;
        }
    }
    Err(Error::NotInFragment(format!("log({a}) is not an iterated logarithm of x")))
}

pub(crate) fn expr_to_transseries(node: &Node) -> Result<Transseries> {
    Eval { arity: None }.transseries(node)
}

pub(crate) fn expr_to_diffpoly(node: &Node, arity: usize) -> Result<DiffPolynomial> {
    Eval { arity: Some(arity) }.eval(node)
}

pub fn parse_transseries(src: &str) -> Result<Transseries> {
    let mut p = Parser::new(src)?;
    let node = p.expr()?;
    p.expect_end()?;
    expr_to_transseries(&node)
}

pub fn parse_diffpoly(src: &str, arity: usize) -> Result<DiffPolynomial> {
    if arity == 0 {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    let mut p = Parser::new(src)?;
    let node = p.expr()?;
    p.expect_end()?;
    expr_to_diffpoly(&node, arity)
}

/// Largest `n` such that `Y_n` occurs, so callers can infer an arity.
pub fn max_var_index(src: &str) -> Result<usize> {
    let toks = lexer::tokenize(src)?;
    let mut best = 0;
    for t in toks {
        if let Tok::Ident(w) = t.tok {
            if let Some(rest) = w.strip_prefix('Y') {
                let idx = if rest.is_empty() { 1 } else { rest.parse().unwrap_or(0) };
                best = best.max(idx);
            }
        }
    }
    Ok(best)
}

/// A polynomial in `Y` with rational coefficients.
pub fn parse_univariate(src: &str) -> Result<UniPoly> {
    let p = parse_diffpoly(src, 1)?;
    p.as_univariate()
        .ok_or_else(|| Error::NotInFragment(format!("{src:?} is not a polynomial in Y over the rationals")))
}
