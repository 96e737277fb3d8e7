//! Polynomial expressions: `3/2*q1^2*p1 - hbar*(p2 + 1)`.
//!
//! Grammar: sums and differences of products and quotients of powers of
//! atoms; an atom is an integer, a name or a parenthesized expression.
//! Division is only allowed by nonzero constants, so `1/2` is a rational
//! literal.

use num_traits::Zero;
use qcenter_core::{HSeries, Monomial, Poly, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("division by a non-constant or zero expression")]
    BadDivision,
    #[error("`hbar` is not allowed here")]
    HbarNotAllowed,
    #[error("expected a polynomial of degree at most {max}, found degree {found}")]
    DegreeTooHigh { max: u32, found: u32 },
    #[error("expected an expression without a constant term")]
    ConstantTerm,
}

impl ExprError {
    pub fn is_syntax(&self) -> bool {
        matches!(self, ExprError::Syntax { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Scalar),
    Name(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n: Scalar = digits
                .parse()
                .map_err(|_| ExprError::Syntax { column: start + 1, message: format!("bad integer `{digits}`") })?;
            out.push((start + 1, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start + 1, Tok::Name(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i + 1, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ExprError::Syntax { column: i + 1, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    names: &'a [String],
    len: usize,
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.names.len() + 1
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len + 1, |(c, _)| *c)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { column: self.column(), message: message.into() })
    }

    fn sum(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            if op == '*' {
                acc = &acc * &rhs;
            } else {
                let c = rhs.constant_term();
                if !rhs.is_constant() || c.is_zero() {
                    return Err(ExprError::BadDivision);
                }
                acc = acc.scale(&c.recip());
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ExprError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ExprError> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.toks.get(self.pos) {
            Some((_, Tok::Num(n))) if n.is_integer() => {
                let e: u32 = n.to_integer().try_into().or_else(|_| self.syntax("exponent too large"))?;
                self.pos += 1;
                Ok(base.pow(e))
            }
            _ => self.syntax("expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Poly, ExprError> {
        let nvars = self.nvars();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return self.syntax("unexpected end of expression");
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Poly::constant(nvars, n)),
            Tok::Name(name) if name == "hbar" => Ok(Poly::var(nvars, nvars - 1)),
            Tok::Name(name) => match self.names.iter().position(|n| *n == name) {
                Some(i) => Ok(Poly::var(nvars, i)),
                None => Err(ExprError::UnknownName(name)),
            },
            Tok::Op('(') => {
                let inner = self.sum()?;
                if self.peek_op() != Some(')') {
                    return self.syntax("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Op(c) => {
                self.pos -= 1;
                self.syntax(format!("unexpected `{c}`"))
            }
        }
    }
}

/// Parses `src` over `names` plus a trailing `hbar` variable.
fn parse_with_hbar(src: &str, names: &[String]) -> Result<Poly, ExprError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, names, len: src.chars().count() };
    let out = p.sum()?;
    if p.pos != p.toks.len() {
        return p.syntax("trailing input");
    }
    Ok(out)
}

/// A polynomial in `names`; `hbar` is rejected.
pub fn parse_poly(src: &str, names: &[String]) -> Result<Poly, ExprError> {
    let full = parse_with_hbar(src, names)?;
    let n = names.len();
    let mut out = Poly::zero(n);
    for (m, c) in full.terms() {
        if m.exp(n) != 0 {
            return Err(ExprError::HbarNotAllowed);
        }
        out.add_term(Monomial::new(m.exps()[..n].to_vec()), c.clone());
    }
    Ok(out)
}

/// A truncated series `Σ f_m ħ^m` with `f_m` polynomials in `names`.
pub fn parse_series(src: &str, names: &[String], order: usize) -> Result<HSeries, ExprError> {
    let full = parse_with_hbar(src, names)?;
    let n = names.len();
    let mut coeffs = vec![Poly::zero(n); order + 1];
    for (m, c) in full.terms() {
        let power = m.exp(n) as usize;
        if power <= order {
            coeffs[power].add_term(Monomial::new(m.exps()[..n].to_vec()), c.clone());
        }
    }
    Ok(HSeries::from_coeffs(n, coeffs, order).expect("coefficient count matches the order"))
}

/// A scalar polynomial in `hbar` as its coefficient list.
pub fn parse_hbar_poly(src: &str) -> Result<Vec<Scalar>, ExprError> {
    let full = parse_with_hbar(src, &[])?;
    let top = full.terms().map(|(m, _)| m.exp(0) as usize).max().unwrap_or(0);
    let mut out = vec![Scalar::zero(); top + 1];
    for (m, c) in full.terms() {
        out[m.exp(0) as usize] = c.clone();
    }
    Ok(out)
}

/// A linear form without constant term, as `(index, coefficient)` pairs.
pub fn parse_linear(src: &str, names: &[String]) -> Result<Vec<(usize, Scalar)>, ExprError> {
    let p = parse_poly(src, names)?;
    let degree = p.degree().unwrap_or(0);
    if degree > 1 {
        return Err(ExprError::DegreeTooHigh { max: 1, found: degree });
    }
    if !p.constant_term().is_zero() {
        return Err(ExprError::ConstantTerm);
    }
    Ok(p.terms().map(|(m, c)| (m.exps().iter().position(|&e| e == 1).unwrap(), c.clone())).collect())
}

/// Renders a series as `f_0 + hbar*(f_1) + hbar^2*(f_2)`, skipping zero
/// coefficients.
pub fn format_series(s: &HSeries, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (m, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let body = c.display_with(names).to_string();
        parts.push(match m {
            0 => body,
            1 => format!("hbar*({body})"),
            _ => format!("hbar^{m}*({body})"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

pub fn format_poly(p: &Poly, names: &[String]) -> String {
    p.display_with(names).to_string()
}
