//! Monomials in a fixed number of commuting variables and the monomial
//! orders used to pick leading terms.
//!
//! Leading terms follow the local convention: the leading monomial of a
//! series is the *smallest* element of its support for the order `<`
//! (equivalently the largest for the opposite order `<_op`).

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector `x_1^{e_1} ... x_n^{e_n}`.
///
/// The derived `Ord` is the storage order used by maps; it is not a
/// monomial order. Use [`MonomialOrder`] for leading-term decisions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// The empty monomial `1`.
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The variable `x_index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// If `self` divides `other`, the quotient `q` with `self * q == other`.
    pub fn divides(&self, other: &Monomial) -> Option<Monomial> {
        if self.nvars() != other.nvars() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| b.checked_sub(*a))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    fn check_dims(&self, other: &Monomial) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    /// Renders with default names `x1..xn`; see [`crate::parse::Ring`] for
    /// user-chosen names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("x{i}")).collect();
        f.write_str(&crate::parse::render_monomial(self, &names))
    }
}

/// Supported order families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Deglex,
    Degrevlex,
    Lex,
}

impl OrderKind {
    pub fn degree_compatible(&self) -> bool {
        !matches!(self, OrderKind::Lex)
    }

    pub fn name(&self) -> &'static str {
        match self {
            OrderKind::Deglex => "deglex",
            OrderKind::Degrevlex => "degrevlex",
            OrderKind::Lex => "lex",
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deglex" => Ok(OrderKind::Deglex),
            "degrevlex" => Ok(OrderKind::Degrevlex),
            "lex" => Ok(OrderKind::Lex),
            other => Err(Error::InvalidOrder(format!("unknown order '{other}'"))),
        }
    }
}

/// A monomial order on `n` variables.
///
/// `priority[0]` names the most significant variable, so the identity
/// permutation gives `x_1 > x_2 > ... > x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            priority: (0..nvars).collect(),
        }
    }

    pub fn deglex(nvars: usize) -> Self {
        Self::new(OrderKind::Deglex, nvars)
    }

    pub fn degrevlex(nvars: usize) -> Self {
        Self::new(OrderKind::Degrevlex, nvars)
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; priority.len()];
        for &p in &priority {
            if p >= priority.len() || seen[p] {
                return Err(Error::InvalidOrder(format!(
                    "{priority:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        Ok(MonomialOrder { kind, priority })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.priority.len()
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn is_degree_compatible(&self) -> bool {
        self.kind.degree_compatible()
    }

    /// Checked comparison under `<`.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        a.check_dims(b)?;
        if a.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: a.nvars(),
            });
        }
        Ok(self.cmp(a, b))
    }

    /// Comparison under `<` for operands already known to match the order's
    /// variable count.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), self.nvars());
        debug_assert_eq!(b.nvars(), self.nvars());
        let (ea, eb) = (a.exponents(), b.exponents());
        let lex = || {
            self.priority
                .iter()
                .map(|&v| ea[v].cmp(&eb[v]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        };
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::Deglex => a.degree().cmp(&b.degree()).then_with(lex),
            OrderKind::Degrevlex => a.degree().cmp(&b.degree()).then_with(|| {
                self.priority
                    .iter()
                    .rev()
                    .map(|&v| eb[v].cmp(&ea[v]))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }),
        }
    }

    /// Comparison under the opposite order `<_op`.
    pub fn cmp_op(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp(a, b).reverse()
    }

    /// A key whose lexicographic order agrees with `<`.
    pub fn sort_key(&self, m: &Monomial) -> OrderKey {
        let e = m.exponents();
        let mut key = Vec::with_capacity(self.nvars() + 1);
        match self.kind {
            OrderKind::Lex => key.extend(self.priority.iter().map(|&v| e[v] as i64)),
            OrderKind::Deglex => {
                key.push(m.degree() as i64);
                key.extend(self.priority.iter().map(|&v| e[v] as i64));
            }
            OrderKind::Degrevlex => {
                key.push(m.degree() as i64);
                key.extend(self.priority.iter().rev().map(|&v| -(e[v] as i64)));
            }
        }
        OrderKey(key)
    }

    /// The `<_op`-maximum (the `<`-minimum) of a set of monomials.
    pub fn max_op<'a, I>(&self, monomials: I) -> Option<&'a Monomial>
    where
        I: IntoIterator<Item = &'a Monomial>,
    {
        monomials.into_iter().min_by(|a, b| self.cmp(a, b))
    }

    /// True when the sequence is strictly decreasing for `<_op`.
    pub fn is_op_decreasing<'a, I>(&self, monomials: I) -> bool
    where
        I: IntoIterator<Item = &'a Monomial>,
    {
        let v: Vec<&Monomial> = monomials.into_iter().collect();
        v.windows(2).all(|w| self.cmp(w[0], w[1]) == Ordering::Less)
    }
}

/// Sort key produced by [`MonomialOrder::sort_key`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey(Vec<i64>);

/// All monomials in `nvars` variables of degree `< bound`, by degree then
/// storage order.
pub fn monomials_below(nvars: usize, bound: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..bound {
        let mut cur = vec![0u32; nvars];
        push_degree(nvars, d, 0, &mut cur, &mut out);
    }
    out
}

fn push_degree(nvars: usize, left: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if nvars == 0 {
        if left == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if pos == nvars - 1 {
        cur[pos] = left;
        out.push(Monomial(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        push_degree(nvars, left - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}
