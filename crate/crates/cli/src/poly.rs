//! Two-variable polynomials with non-negative integer coefficients.
//!
//! Non-negative coefficients make every such polynomial bimonotone, so the
//! parser is the CLI's bimonotonicity guarantee. The grammar is a sum of
//! terms `c`, `c*a^i`, `a^i*b^j`, `b^j` with `*` optional, `^1` optional
//! and whitespace ignored; any minus sign is rejected outright. Exponents
//! are capped at 64 and coefficients at 64 bits; beyond that, evaluation
//! would overflow 128-bit values at tiny parameters anyway.

use std::collections::BTreeMap;
use std::fmt;

use bimono_core::axis::Param;
use bimono_core::eval::Evaluator;
use bimono_core::value::{checked_pow, Overflow, Value};

pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("syntax error at position {position}: {reason}")]
    Syntax { position: usize, reason: String },
    #[error("negative coefficient: minus sign at position {position}")]
    NegativeCoefficient { position: usize },
    #[error("coefficient at position {position} exceeds 64 bits")]
    CoefficientTooLarge { position: usize },
    #[error("exponent at position {position} exceeds {MAX_EXPONENT}")]
    ExponentTooLarge { position: usize },
}

/// A polynomial `sum of c * a^i * b^j` with `c >= 0`, stored as its
/// non-zero terms keyed by exponent pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    // (i, j) -> c, every c non-zero.
    terms: BTreeMap<(u32, u32), u64>,
}

impl Polynomial {
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
        .parse()
    }

    /// The support: exponent pairs of the non-zero terms.
    pub fn support(&self) -> Vec<(u32, u32)> {
        self.terms.keys().copied().collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    /// Degree of the pure `a` part `f(a, 0)`, when one exists.
    pub fn pure_a_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter(|(_, j)| *j == 0)
            .map(|(i, _)| *i)
            .filter(|i| *i > 0)
            .max()
    }

    /// Degree of the pure `b` part `f(0, b)`, when one exists.
    pub fn pure_b_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter(|(i, _)| *i == 0)
            .map(|(_, j)| *j)
            .filter(|j| *j > 0)
            .max()
    }

    /// Total degree, `max(i + j)` over the support.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    /// Proper on unbounded axes: a positive-degree pure `a` term and a
    /// positive-degree pure `b` term both present.
    pub fn is_proper(&self) -> bool {
        self.pure_a_degree().is_some() && self.pure_b_degree().is_some()
    }

    /// Canonical text: terms sorted by `(i, j)` descending, explicit `*`,
    /// `^1` omitted. Parsing the canonical text reproduces the polynomial.
    pub fn canonical_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), &c)| {
                let mut parts: Vec<String> = Vec::new();
                if c != 1 || (i == 0 && j == 0) {
                    parts.push(c.to_string());
                }
                for (sym, e) in [("a", i), ("b", j)] {
                    match e {
                        0 => {}
                        1 => parts.push(sym.to_string()),
                        _ => parts.push(format!("{sym}^{e}")),
                    }
                }
                parts.join("*")
            })
            .collect();
        rendered.join("+")
    }

    pub fn eval<V: Value>(&self, a: u64, b: u64) -> Result<V, Overflow> {
        let a = V::from_u64(a);
        let b = V::from_u64(b);
        let mut acc = V::from_u64(0);
        for (&(i, j), &c) in &self.terms {
            let mut term = V::from_u64(c);
            if i > 0 {
                term = term.checked_mul(&checked_pow(&a, i)?).ok_or(Overflow)?;
            }
            if j > 0 {
                term = term.checked_mul(&checked_pow(&b, j)?).ok_or(Overflow)?;
            }
            acc = acc.checked_add(&term).ok_or(Overflow)?;
        }
        Ok(acc)
    }
}

impl<V: Value> Evaluator<V> for Polynomial {
    fn eval_checked(&self, a: Param, b: Param) -> Result<V, Overflow> {
        self.eval(a.0, b.0)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn parse(mut self) -> Result<Polynomial, PolyError> {
        if let Some(position) = self.bytes.iter().position(|&b| b == b'-') {
            return Err(PolyError::NegativeCoefficient { position });
        }
        let mut terms: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        loop {
            let (c, i, j) = self.term()?;
            if c != 0 {
                let slot = terms.entry((i, j)).or_insert(0);
                *slot = slot
                    .checked_add(c)
                    .ok_or(PolyError::CoefficientTooLarge { position: self.pos })?;
            }
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => self.pos += 1,
                Some(ch) => {
                    return Err(self.syntax(format!("unexpected `{}`", ch as char)));
                }
            }
        }
        terms.retain(|_, c| *c != 0);
        Ok(Polynomial { terms })
    }

    fn term(&mut self) -> Result<(u64, u32, u32), PolyError> {
        self.skip_ws();
        let start = self.pos;
        let mut coeff: Option<u64> = None;
        if matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            coeff = Some(self.number_u64()?);
            self.star_before_variable()?;
        }
        let mut exp_a: u32 = 0;
        if self.peek() == Some(b'a') {
            self.pos += 1;
            exp_a = self.exponent()?;
            self.star_before_variable()?;
        }
        let mut exp_b: u32 = 0;
        if self.peek() == Some(b'b') {
            self.pos += 1;
            exp_b = self.exponent()?;
        }
        if coeff.is_none() && exp_a == 0 && exp_b == 0 && self.pos == start {
            return Err(self.syntax("expected a term".to_string()));
        }
        Ok((coeff.unwrap_or(1), exp_a, exp_b))
    }

    /// Consume an optional `*`, which must then be followed by a variable.
    fn star_before_variable(&mut self) -> Result<(), PolyError> {
        self.skip_ws();
        if self.peek() == Some(b'*') {
            self.pos += 1;
            self.skip_ws();
            if !matches!(self.peek(), Some(b'a') | Some(b'b')) {
                return Err(self.syntax("`*` must be followed by a or b".to_string()));
            }
        }
        Ok(())
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let position = self.pos;
        if !matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            return Err(self.syntax("expected an exponent after `^`".to_string()));
        }
        let value = self.number_u64()?;
        if value > MAX_EXPONENT as u64 {
            return Err(PolyError::ExponentTooLarge { position });
        }
        Ok(value as u32)
    }

    fn number_u64(&mut self) -> Result<u64, PolyError> {
        let position = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.peek().filter(u8::is_ascii_digit) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((d - b'0') as u64))
                .ok_or(PolyError::CoefficientTooLarge { position })?;
            self.pos += 1;
        }
        Ok(value)
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn syntax(&self, reason: String) -> PolyError {
        PolyError::Syntax {
            position: self.pos,
            reason,
        }
    }
}
