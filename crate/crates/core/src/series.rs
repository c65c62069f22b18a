//! Truncated formal power series.
//!
//! A [`Series`] is a residue modulo `(X)^prec`: every stored monomial has
//! degree below `prec` and no stored coefficient is zero. `prec = ∞` marks
//! an exactly known polynomial.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeff::{Coeff, Field};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};

/// Adic precision `D ∈ ℕ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Precision {
    Finite(u32),
    Infinite,
}

impl Precision {
    /// Does a monomial of this degree fall inside the known window?
    pub fn admits(&self, degree: u32) -> bool {
        match self {
            Precision::Finite(d) => degree < *d,
            Precision::Infinite => true,
        }
    }

    pub fn shift(self, by: u32) -> Precision {
        match self {
            Precision::Finite(d) => Precision::Finite(d.saturating_add(by)),
            Precision::Infinite => Precision::Infinite,
        }
    }

    pub fn finite(&self) -> Option<u32> {
        match self {
            Precision::Finite(d) => Some(*d),
            Precision::Infinite => None,
        }
    }

    pub fn at_least(&self, bound: u32) -> bool {
        *self >= Precision::Finite(bound)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Finite(d) => write!(f, "{d}"),
            Precision::Infinite => write!(f, "∞"),
        }
    }
}

impl Serialize for Precision {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.finite().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Precision {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(match Option::<u32>::deserialize(deserializer)? {
            Some(d) => Precision::Finite(d),
            None => Precision::Infinite,
        })
    }
}

/// Result of [`Series::valuation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// Lowest degree in the support.
    Finite(u32),
    /// Support is empty but the series is only known modulo `(X)^at_least`.
    Unresolved { at_least: u32 },
    /// The exact zero series.
    Infinite,
}

impl Valuation {
    /// A sound lower bound for the true valuation (`None` means +∞).
    pub fn lower_bound(&self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Unresolved { at_least } => Some(*at_least),
            Valuation::Infinite => None,
        }
    }
}

/// The adic distance `δ(f, g) = 2^{-val(f - g)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdicDistance {
    /// `2^{-v}`.
    Exact(u32),
    Zero,
    /// The difference vanishes modulo `(X)^D`, so only `δ ≤ 2^{-D}` is known.
    AtMost(u32),
}

impl AdicDistance {
    /// The value as an exact rational, when resolved.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            AdicDistance::Exact(v) => Some(BigRational::new(
                BigInt::one(),
                BigInt::from(2u32).pow(*v),
            )),
            AdicDistance::Zero => Some(BigRational::from_integer(0.into())),
            AdicDistance::AtMost(_) => None,
        }
    }
}

impl PartialOrd for AdicDistance {
    /// Only resolved distances are comparable.
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use AdicDistance::*;
        match (self, other) {
            (Zero, Zero) => Some(std::cmp::Ordering::Equal),
            (Zero, Exact(_)) => Some(std::cmp::Ordering::Less),
            (Exact(_), Zero) => Some(std::cmp::Ordering::Greater),
            (Exact(a), Exact(b)) => Some(b.cmp(a)),
            _ => None,
        }
    }
}

impl fmt::Display for AdicDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdicDistance::Exact(0) => write!(f, "1"),
            AdicDistance::Exact(v) => write!(f, "1/{}", BigInt::from(2u32).pow(*v)),
            AdicDistance::Zero => write!(f, "0"),
            AdicDistance::AtMost(d) => write!(f, "<= 1/{}", BigInt::from(2u32).pow(*d)),
        }
    }
}

/// `lm(f)`, `lc(f)` and `rem(f) = lc(f)·lm(f) − f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeadingData {
    pub monomial: Monomial,
    pub coeff: Coeff,
    pub remainder: Series,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct Series {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Monomial, Coeff>,
    prec: Precision,
}

impl Series {
    pub fn zero(nvars: usize, field: Field) -> Self {
        Series {
            nvars,
            field,
            terms: BTreeMap::new(),
            prec: Precision::Infinite,
        }
    }

    /// `0 mod (X)^prec`.
    pub fn zero_mod(nvars: usize, field: Field, prec: u32) -> Self {
        Series {
            prec: Precision::Finite(prec),
            ..Series::zero(nvars, field)
        }
    }

    pub fn monomial(m: Monomial, c: Coeff) -> Self {
        let mut s = Series::zero(m.nvars(), c.field());
        if !c.is_zero() {
            s.terms.insert(m, c);
        }
        s
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        Series::monomial(Monomial::one(nvars), c)
    }

    /// Builds a normalized series: like monomials are summed, zeros and
    /// terms at or beyond `prec` are dropped.
    pub fn from_terms<I>(nvars: usize, field: Field, terms: I, prec: Precision) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut s = Series {
            prec,
            ..Series::zero(nvars, field)
        };
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: m.nvars(),
                });
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            s.add_term(m, &c);
        }
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Empty support (the series is zero modulo its precision).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The exact zero series.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec == Precision::Infinite
    }

    /// `coeff⟨f, m⟩`; zero when absent.
    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains_key(m)
    }

    /// Adds `c·m` in place, respecting the precision window.
    pub(crate) fn add_term(&mut self, m: Monomial, c: &Coeff) {
        if c.is_zero() || !self.prec.admits(m.degree()) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub(crate) fn remove_term(&mut self, m: &Monomial) -> Option<Coeff> {
        self.terms.remove(m)
    }

    /// Reduction modulo `(X)^bound`; never raises the precision.
    pub fn truncate(&self, bound: u32) -> Series {
        let prec = self.prec.min(Precision::Finite(bound));
        Series {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| prec.admits(m.degree()))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            prec,
        }
    }

    /// Same coefficients, reinterpreted at a different precision. Terms at or
    /// beyond the new bound are dropped.
    pub fn with_prec(&self, prec: Precision) -> Series {
        let mut s = self.clone();
        s.prec = prec;
        s.terms.retain(|m, _| prec.admits(m.degree()));
        s
    }

    fn check_compatible(&self, other: &Series) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut out = self.with_prec(self.prec.min(other.prec));
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        Series {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            ..self.clone()
        }
    }

    /// `λ·f`. Scaling by zero yields the exact zero series.
    pub fn scale(&self, lambda: &Coeff) -> Result<Series> {
        if lambda.field() != self.field {
            return Err(Error::FieldMismatch(self.field, lambda.field()));
        }
        if lambda.is_zero() {
            return Ok(Series::zero(self.nvars, self.field));
        }
        Ok(Series {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * lambda))
                .collect(),
            ..self.clone()
        })
    }

    /// `c·m·f`; the precision shifts up by `deg(m)`.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Result<Series> {
        if m.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: m.nvars(),
            });
        }
        if c.is_zero() {
            return Ok(Series::zero(self.nvars, self.field));
        }
        let scaled = self.scale(c)?;
        Ok(Series {
            nvars: self.nvars,
            field: self.field,
            terms: scaled
                .terms
                .into_iter()
                .map(|(t, c)| (t.mul(m), c))
                .collect(),
            prec: self.prec.shift(m.degree()),
        })
    }

    /// Product with precision `min(prec_f + val(g), prec_g + val(f))`.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let bound = |p: Precision, v: Valuation| match v.lower_bound() {
            Some(v) => p.shift(v),
            None => Precision::Infinite,
        };
        let prec = bound(self.prec, other.valuation()).min(bound(other.prec, self.valuation()));
        let mut out = Series {
            prec,
            ..Series::zero(self.nvars, self.field)
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if prec.admits(ma.degree() + mb.degree()) {
                    out.add_term(ma.mul(mb), &(ca * cb));
                }
            }
        }
        Ok(out)
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().map(Monomial::degree).min() {
            Some(v) => Valuation::Finite(v),
            None => match self.prec {
                Precision::Finite(d) => Valuation::Unresolved { at_least: d },
                Precision::Infinite => Valuation::Infinite,
            },
        }
    }

    /// `δ(self, other)`.
    pub fn delta(&self, other: &Series) -> Result<AdicDistance> {
        let diff = self.sub(other)?;
        Ok(match diff.valuation() {
            Valuation::Finite(v) => AdicDistance::Exact(v),
            Valuation::Unresolved { at_least } => AdicDistance::AtMost(at_least),
            Valuation::Infinite => AdicDistance::Zero,
        })
    }

    /// `lm(f)`: the `<_op`-greatest monomial of the support.
    pub fn leading_monomial(&self, ord: &MonomialOrder) -> Option<&Monomial> {
        ord.max_op(self.terms.keys())
    }

    /// Leading monomial, leading coefficient and remainder.
    ///
    /// Truncated inputs require a degree-compatible order, since otherwise
    /// an unseen higher-degree term could lead.
    pub fn leading_data(&self, ord: &MonomialOrder) -> Result<LeadingData> {
        if ord.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: ord.nvars(),
            });
        }
        if self.prec != Precision::Infinite && !ord.is_degree_compatible() {
            return Err(Error::NonCompatibleOrder(ord.kind()));
        }
        let lm = self.leading_monomial(ord).ok_or(Error::ZeroSeries)?.clone();
        let lc = self.terms[&lm].clone();
        let mut remainder = self.neg();
        remainder.remove_term(&lm);
        Ok(LeadingData {
            monomial: lm,
            coeff: lc,
            remainder,
        })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = crate::parse::Ring::with_default_names(self.nvars, self.field);
        f.write_str(&ring.render(self))?;
        if let Precision::Finite(d) = self.prec {
            write!(f, " (mod (X)^{d})")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    nvars: usize,
    field: Field,
    prec: Precision,
    terms: Vec<(Monomial, Coeff)>,
}

impl From<Series> for SeriesRepr {
    fn from(s: Series) -> Self {
        SeriesRepr {
            nvars: s.nvars,
            field: s.field,
            prec: s.prec,
            terms: s.terms.into_iter().collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for Series {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Self> {
        Series::from_terms(r.nvars, r.field, r.terms, r.prec)
    }
}
