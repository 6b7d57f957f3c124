//! ```text
//! desc  := 'full' INT | 'empty' INT | 'const' INT
//!        | 'points' '{' point (';' point)* '}' INT
//!        | 'zero' '{' expr (';' expr)* '}' INT ['at' point]
//!        | 'union' '(' desc ',' desc ')' | 'prod' '(' desc ',' desc ')'
//!        | 'proj' '(' desc ',' INT ')' | 'perm' '(' '[' INT (',' INT)* ']' ',' desc ')'
//! point := '[' expr (',' expr)* ']'
//! ```

use super::lexer::Tok;
use super::{expr_to_diffpoly, expr_to_transseries, Node, Parser};
use crate::dimension::SetDescriptor;
use crate::error::{Error, Result};
use crate::transseries::Transseries;

const MAX_ARITY: usize = 64;

pub fn parse_descriptor(src: &str) -> Result<SetDescriptor> {
    let mut p = Parser::new(src)?;
    let d = descriptor(&mut p)?;
    p.expect_end()?;
    Ok(d)
}

fn keyword(p: &mut Parser) -> Result<(String, usize)> {
    let pos = p.pos();
    match p.peek().clone() {
        Tok::Ident(w) => {
            p.bump();
            Ok((w, pos))
        }
        _ => Err(p.unexpected("a set descriptor")),
    }
}

fn arity(p: &mut Parser) -> Result<usize> {
    let pos = p.pos();
    let n = p.usize_literal("an arity")?;
    if n > MAX_ARITY {
        return Err(Error::syntax(pos, format!("arity above {MAX_ARITY}")));
    }
    Ok(n)
}

fn point(p: &mut Parser) -> Result<Vec<Node>> {
    p.expect_sym('[')?;
    let mut coords = vec![p.expr()?];
    while p.eat_sym(',') {
        coords.push(p.expr()?);
    }
    p.expect_sym(']')?;
    Ok(coords)
}

fn eval_point(nodes: &[Node]) -> Result<Vec<Transseries>> {
    nodes.iter().map(expr_to_transseries).collect()
}

fn descriptor(p: &mut Parser) -> Result<SetDescriptor> {
    p.enter()?;
    let (word, pos) = keyword(p)?;
    let d = match word.as_str() {
        "full" => SetDescriptor::Full(arity(p)?),
        "empty" => SetDescriptor::Empty(arity(p)?),
        "const" => SetDescriptor::Constants(arity(p)?),
        "points" => {
            p.expect_sym('{')?;
            let mut pts = vec![point(p)?];
            while p.eat_sym(';') {
                pts.push(point(p)?);
            }
            p.expect_sym('}')?;
            let n = arity(p)?;
            let points = pts.iter().map(|pt| eval_point(pt)).collect::<Result<_>>()?;
            SetDescriptor::FinitePoints { points, n }
        }
        "zero" => {
            p.expect_sym('{')?;
            let mut exprs = vec![p.expr()?];
            while p.eat_sym(';') {
                exprs.push(p.expr()?);
            }
            p.expect_sym('}')?;
            let npos = p.pos();
            let n = arity(p)?;
            if n == 0 {
                return Err(Error::syntax(npos, "zero sets need arity at least 1"));
            }
            let witness = match p.peek() {
                Tok::Ident(w) if w == "at" => {
                    p.bump();
                    Some(eval_point(&point(p)?)?)
                }
                _ => None,
            };
            let polys = exprs.iter().map(|e| expr_to_diffpoly(e, n)).collect::<Result<_>>()?;
            SetDescriptor::ZeroSet { polys, n, witness }
        }
        "union" | "prod" => {
            p.expect_sym('(')?;
            let a = descriptor(p)?;
            p.expect_sym(',')?;
            let b = descriptor(p)?;
            p.expect_sym(')')?;
            if word == "union" {
                SetDescriptor::union(a, b)
            } else {
                SetDescriptor::product(a, b)
            }
        }
        "proj" => {
            p.expect_sym('(')?;
            let a = descriptor(p)?;
            p.expect_sym(',')?;
            let m = arity(p)?;
            p.expect_sym(')')?;
            SetDescriptor::project(a, m)
        }
        "perm" => {
            p.expect_sym('(')?;
            p.expect_sym('[')?;
            let mut sigma = vec![arity(p)?];
            while p.eat_sym(',') {
                sigma.push(arity(p)?);
            }
            p.expect_sym(']')?;
            p.expect_sym(',')?;
            let a = descriptor(p)?;
            p.expect_sym(')')?;
            SetDescriptor::permute(sigma, a)
        }
        other => return Err(Error::syntax(pos, format!("unknown set descriptor '{other}'"))),
    };
    p.leave();
    d.arity()?;
    Ok(d)
}
