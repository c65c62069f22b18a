//! Text form of series.
//!
//! ```text
//! series   := sign? term (sign term)*
//! term     := rational ('*'? monomial)? | monomial
//! rational := INT ('/' INT)?
//! monomial := factor ('*' factor)*
//! factor   := VAR ('^' INT)?
//! ```
//!
//! e.g. `1/2*x^2*y - z + 1`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::{Coeff, Field};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::series::{Precision, Series};

/// Variable names plus coefficient field: the context needed to read and
/// write series as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    vars: Vec<String>,
    index: HashMap<String, usize>,
    field: Field,
}

impl Ring {
    pub fn new<I, S>(vars: I, field: Field) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::Config(format!("invalid variable name '{v}'")));
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate variable '{v}'")));
            }
        }
        Ok(Ring { vars, index, field })
    }

    /// `x1, ..., xn`.
    pub fn with_default_names(nvars: usize, field: Field) -> Self {
        Ring::new((1..=nvars).map(|i| format!("x{i}")), field).expect("default names are valid")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Parses an exact polynomial (`prec = ∞`).
    pub fn parse(&self, text: &str) -> Result<Series> {
        Parser {
            ring: self,
            tokens: tokenize(text)?,
            pos: 0,
            end: text.len(),
        }
        .series()
    }

    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let s = self.parse(text)?;
        match s.terms().collect::<Vec<_>>().as_slice() {
            [(m, c)] if c.is_one() => Ok((*m).clone()),
            _ => Err(Error::Parse {
                pos: 0,
                message: format!("'{text}' is not a monomial"),
            }),
        }
    }

    /// Renders terms `<`-ascending under deglex with the declared variable
    /// order, i.e. lowest degree first.
    pub fn render(&self, s: &Series) -> String {
        self.render_with(s, &MonomialOrder::deglex(self.nvars()))
    }

    /// Renders terms leading-first for `ord`.
    pub fn render_with(&self, s: &Series, ord: &MonomialOrder) -> String {
        let mut terms: Vec<_> = s.terms().collect();
        terms.sort_by(|a, b| ord.cmp(a.0, b.0));
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = if negative { -c } else { c.clone() };
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mono = render_monomial(m, &self.vars);
            if m.is_one() {
                out.push_str(&magnitude.to_string());
            } else if magnitude.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{magnitude}*{mono}"));
            }
        }
        out
    }

    /// Rendering with a `(mod (X)^D)` suffix for truncated series.
    pub fn render_residue(&self, s: &Series) -> String {
        match s.prec() {
            Precision::Finite(d) => format!("{} (mod (X)^{d})", self.render(s)),
            Precision::Infinite => self.render(s),
        }
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        render_monomial(m, &self.vars)
    }
}

pub(crate) fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            message: message.into(),
        })
    }

    fn series(mut self) -> Result<Series> {
        let nvars = self.ring.nvars();
        let field = self.ring.field();
        let mut terms: Vec<(Monomial, Coeff)> = Vec::new();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                None if first => return self.error("empty input"),
                None => break,
                Some(_) if first => false,
                Some(_) => return self.error("expected '+' or '-'"),
            };
            first = false;
            let (coeff, mono) = self.term()?;
            let coeff = if negative { -coeff } else { coeff };
            terms.push((mono, field.from_rational(&coeff).map_err(|e| Error::Parse {
                pos: self.offset(),
                message: e.to_string(),
            })?));
        }
        Series::from_terms(nvars, field, terms, Precision::Infinite)
    }

    fn term(&mut self) -> Result<(BigRational, Monomial)> {
        let mut coeff = BigRational::one();
        let mut have_coeff = false;
        if let Some(Tok::Int(n)) = self.peek().cloned() {
            self.pos += 1;
            have_coeff = true;
            let mut q = BigRational::from_integer(n);
            if let Some(Tok::Slash) = self.peek() {
                self.pos += 1;
                match self.peek().cloned() {
                    Some(Tok::Int(d)) if !d.is_zero() => {
                        self.pos += 1;
                        q /= BigRational::from_integer(d);
                    }
                    Some(Tok::Int(_)) => return self.error("division by zero"),
                    _ => return self.error("expected denominator"),
                }
            }
            coeff = q;
        }
        let explicit_star = if have_coeff && self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            true
        } else {
            false
        };
        let mono = match self.peek() {
            Some(Tok::Ident(_)) => self.monomial()?,
            _ if have_coeff && !explicit_star => Monomial::one(self.ring.nvars()),
            _ => return self.error("expected a variable"),
        };
        Ok((coeff, mono))
    }

    fn monomial(&mut self) -> Result<Monomial> {
        let mut exps = vec![0u32; self.ring.nvars()];
        loop {
            let (start, name) = match self.tokens.get(self.pos).cloned() {
                Some((p, Tok::Ident(name))) => (p, name),
                _ => return self.error("expected a variable"),
            };
            self.pos += 1;
            let idx = *self
                .ring
                .index
                .get(&name)
                .ok_or(Error::UnknownVariable { name, pos: start })?;
            let mut e = 1u32;
            if self.peek() == Some(&Tok::Caret) {
                self.pos += 1;
                match self.peek().cloned() {
                    Some(Tok::Int(n)) => {
                        self.pos += 1;
                        e = u32::try_from(&n).or_else(|_| self.error("exponent too large"))?;
                    }
                    _ => return self.error("expected exponent"),
                }
            }
            exps[idx] += e;
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Monomial::new(exps))
    }
}
