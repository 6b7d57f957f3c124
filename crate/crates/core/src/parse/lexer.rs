use num_bigint::BigInt;

use crate::error::{Error, Result};

/// Longest accepted integer literal, in digits.
const MAX_DIGITS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    /// Byte offset in the source.
    pub pos: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
        } else if ch.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                it.next();
            }
            if digits.len() > MAX_DIGITS {
                return Err(Error::syntax(pos, "integer literal too long"));
            }
            let n = digits.parse().expect("ascii digits");
            out.push(Token { tok: Tok::Num(n), pos });
        } else if ch.is_ascii_alphabetic() {
            let mut word = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !d.is_ascii_alphanumeric() && d != '_' {
                    break;
                }
                word.push(d);
                it.next();
            }
            out.push(Token { tok: Tok::Ident(word), pos });
        } else if "+-*/^(),;[]{}".contains(ch) {
            out.push(Token { tok: Tok::Sym(ch), pos });
            it.next();
        } else {
            return Err(Error::syntax(pos, format!("unexpected character {ch:?}")));
        }
    }
    out.push(Token { tok: Tok::End, pos: src.len() });
    Ok(out)
}
