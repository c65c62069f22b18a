//! The rewriting relation induced by a generating set `G` and a
//! degree-compatible monomial order:
//!
//! ```text
//! λ·(m·lm(s)) + S  →  (λ / lc(s))·(m·rem(s)) + S      (m·lm(s) ∉ supp(S))
//! ```
//!
//! Normal forms are relative to a precision `D`: a series is a normal form
//! at `D` when none of its monomials of degree `< D` is divisible by a
//! leading monomial of `G`. Higher degrees lie beyond the horizon.

use std::collections::BTreeMap;
use std::ops::Bound;

use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, Field};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder, OrderKey};
use crate::series::{LeadingData, Precision, Series};

/// A generator with its cached leading data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    series: Series,
    lead: LeadingData,
    inv_lc: Coeff,
}

impl Generator {
    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn leading_monomial(&self) -> &Monomial {
        &self.lead.monomial
    }

    pub fn leading_coeff(&self) -> &Coeff {
        &self.lead.coeff
    }

    pub fn remainder(&self) -> &Series {
        &self.lead.remainder
    }

    pub(crate) fn inv_lc(&self) -> &Coeff {
        &self.inv_lc
    }
}

/// Which generator to use when several leading monomials divide the target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TieBreak {
    #[default]
    SmallestIndex,
    LargestIndex,
}

/// An ordered generating set together with a degree-compatible order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    field: Field,
    order: MonomialOrder,
    generators: Vec<Generator>,
}

/// One application of the relation: `monomial = quotient · lm(s_generator)`
/// with coefficient `coeff` in the pre-step series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub monomial: Monomial,
    pub generator: usize,
    pub quotient: Monomial,
    pub coeff: Coeff,
}

/// Output of [`RewriteSystem::reduce_to_precision`].
///
/// `input ≡ Σ cofactors[i]·s_i + normal_form  (mod (X)^precision)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionResult {
    pub precision: u32,
    pub normal_form: Series,
    pub steps: Vec<RewriteStep>,
    pub cofactors: Vec<Series>,
}

impl ReductionResult {
    pub fn eliminated(&self) -> impl Iterator<Item = &Monomial> {
        self.steps.iter().map(|s| &s.monomial)
    }
}

impl RewriteSystem {
    pub fn new(field: Field, order: MonomialOrder, generators: Vec<Series>) -> Result<Self> {
        if !order.is_degree_compatible() {
            return Err(Error::NonCompatibleOrder(order.kind()));
        }
        let generators = generators
            .into_iter()
            .map(|series| {
                if series.nvars() != order.nvars() {
                    return Err(Error::DimensionMismatch {
                        expected: order.nvars(),
                        found: series.nvars(),
                    });
                }
                if series.field() != field {
                    return Err(Error::FieldMismatch(field, series.field()));
                }
                let lead = series.leading_data(&order)?;
                let inv_lc = lead.coeff.inverse().expect("leading coefficient is non-zero");
                Ok(Generator {
                    series,
                    lead,
                    inv_lc,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RewriteSystem {
            field,
            order,
            generators,
        })
    }

    pub fn nvars(&self) -> usize {
        self.order.nvars()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> Option<&Generator> {
        self.generators.get(i)
    }

    /// The same generators in reverse order.
    pub fn reversed(&self) -> RewriteSystem {
        let mut sys = self.clone();
        sys.generators.reverse();
        sys
    }

    /// Minimum precision over the generators.
    pub fn working_precision(&self) -> Precision {
        self.generators
            .iter()
            .map(|g| g.series.prec())
            .min()
            .unwrap_or(Precision::Infinite)
    }

    /// Fails with `PrecisionLoss` unless `f` and every generator are known to
    /// precision `d`.
    pub fn check_precision(&self, f: &Series, d: u32) -> Result<()> {
        self.check_operand(f)?;
        let available = f.prec().min(self.working_precision());
        if !available.at_least(d) {
            return Err(Error::PrecisionLoss {
                required: d,
                available,
            });
        }
        Ok(())
    }

    pub(crate) fn check_operand(&self, f: &Series) -> Result<()> {
        if f.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: f.nvars(),
            });
        }
        if f.field() != self.field {
            return Err(Error::FieldMismatch(self.field, f.field()));
        }
        Ok(())
    }

    /// A generator whose leading monomial divides `m`, with the quotient.
    pub fn divisor_of(&self, m: &Monomial, tie: TieBreak) -> Option<(usize, Monomial)> {
        let probe = |(i, g): (usize, &Generator)| g.lead.monomial.divides(m).map(|q| (i, q));
        match tie {
            TieBreak::SmallestIndex => self.generators.iter().enumerate().find_map(probe),
            TieBreak::LargestIndex => self.generators.iter().enumerate().rev().find_map(probe),
        }
    }

    /// Monomials of `f` of degree `< d` that some leading monomial divides,
    /// `<`-ascending, each with the smallest applicable generator index.
    pub fn reducible_monomials(&self, f: &Series, d: u32) -> Vec<(Monomial, usize)> {
        let mut out: Vec<(Monomial, usize)> = f
            .support()
            .filter(|m| m.degree() < d)
            .filter_map(|m| {
                self.divisor_of(m, TieBreak::SmallestIndex)
                    .map(|(i, _)| (m.clone(), i))
            })
            .collect();
        out.sort_by(|a, b| self.order.cmp(&a.0, &b.0));
        out
    }

    pub fn is_normal_form(&self, f: &Series, d: u32) -> bool {
        self.reducible_monomials(f, d).is_empty()
    }

    /// The step eliminating `monomial` from `f` with the smallest applicable
    /// generator, if any.
    pub fn step_at(&self, f: &Series, monomial: &Monomial) -> Option<RewriteStep> {
        if !f.contains(monomial) {
            return None;
        }
        let (generator, quotient) = self.divisor_of(monomial, TieBreak::SmallestIndex)?;
        Some(RewriteStep {
            monomial: monomial.clone(),
            generator,
            quotient,
            coeff: f.coeff(monomial),
        })
    }

    /// `f − λ·M + (λ / lc(s))·m·rem(s)`.
    pub fn rewrite_step(&self, f: &Series, step: &RewriteStep) -> Result<Series> {
        self.check_operand(f)?;
        let g = self.generators.get(step.generator).ok_or_else(|| {
            Error::InvalidStep(format!("no generator with index {}", step.generator))
        })?;
        if g.lead.monomial.mul(&step.quotient) != step.monomial {
            return Err(Error::InvalidStep(
                "monomial is not quotient * lm(generator)".into(),
            ));
        }
        if !f.contains(&step.monomial) {
            return Err(Error::InvalidStep(
                "monomial is not in the support of the series".into(),
            ));
        }
        if f.coeff(&step.monomial) != step.coeff {
            return Err(Error::InvalidStep(
                "coefficient does not match the series".into(),
            ));
        }
        let mut head = f.clone();
        head.remove_term(&step.monomial);
        let tail = g
            .lead
            .remainder
            .mul_term(&step.quotient, &(&step.coeff * &g.inv_lc))?;
        head.add(&tail)
    }

    /// Reduces `f` until no monomial of degree `< d` is reducible, always
    /// eliminating the `<_op`-greatest reducible monomial first.
    pub fn reduce_to_precision(&self, f: &Series, d: u32) -> Result<ReductionResult> {
        self.reduce_with(f, d, TieBreak::SmallestIndex)
    }

    pub fn reduce_with(&self, f: &Series, d: u32, tie: TieBreak) -> Result<ReductionResult> {
        self.check_precision(f, d)?;
        let mut work = OrderedTerms::new(&self.order, f, d);
        let mut steps = Vec::new();
        let mut cofactors = vec![Series::zero(self.nvars(), self.field); self.len()];
        let mut cursor: Option<OrderKey> = None;
        // Newly produced terms are all `<`-above the eliminated monomial, so
        // the scan never has to revisit monomials behind the cursor.
        while let Some((key, monomial, coeff, generator, quotient)) =
            work.find_after(cursor.as_ref(), |m| self.divisor_of(m, tie))
        {
            let g = &self.generators[generator];
            let factor = &coeff * &g.inv_lc;
            work.remove(&key);
            work.add_scaled(&g.lead.remainder, &quotient, &factor);
            cofactors[generator].add_term(quotient.clone(), &factor);
            steps.push(RewriteStep {
                monomial,
                generator,
                quotient,
                coeff,
            });
            cursor = Some(key);
        }
        Ok(ReductionResult {
            precision: d,
            normal_form: work.into_series(self.nvars(), self.field),
            steps,
            cofactors,
        })
    }

    /// `Σ cofactors[i]·s_i mod (X)^d`.
    pub fn combine(&self, cofactors: &[Series], d: u32) -> Result<Series> {
        if cofactors.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} cofactors, got {}",
                self.len(),
                cofactors.len()
            )));
        }
        let mut acc = Series::zero(self.nvars(), self.field).truncate(d);
        for (c, g) in cofactors.iter().zip(&self.generators) {
            self.check_operand(c)?;
            acc = acc.add(&c.truncate(d).mul(&g.series.truncate(d))?.truncate(d))?;
        }
        Ok(acc.truncate(d))
    }

    /// Checks `f ≡ Σ cofactors·s_i + normal_form (mod (X)^D)` by exact
    /// recomputation.
    pub fn check_reduction(&self, f: &Series, result: &ReductionResult) -> Result<bool> {
        let d = result.precision;
        let rhs = self
            .combine(&result.cofactors, d)?
            .add(&result.normal_form.truncate(d))?;
        Ok(rhs == f.truncate(d))
    }

    /// `D − deg(lm(s_i))` for each generator: the degree below which a
    /// precision-`D` cofactor is final.
    pub fn certified_cofactor_precision(&self, d: u32) -> Vec<u32> {
        self.generators
            .iter()
            .map(|g| d.saturating_sub(g.lead.monomial.degree()))
            .collect()
    }
}

/// Working copy of a series keyed by the monomial order, truncated at `bound`.
pub(crate) struct OrderedTerms<'a> {
    order: &'a MonomialOrder,
    bound: u32,
    terms: BTreeMap<OrderKey, (Monomial, Coeff)>,
}

impl<'a> OrderedTerms<'a> {
    pub(crate) fn new(order: &'a MonomialOrder, f: &Series, bound: u32) -> Self {
        let terms = f
            .terms()
            .filter(|(m, _)| m.degree() < bound)
            .map(|(m, c)| (order.sort_key(m), (m.clone(), c.clone())))
            .collect();
        OrderedTerms {
            order,
            bound,
            terms,
        }
    }

    /// First term strictly `<`-above `cursor` accepted by `pick`.
    #[allow(clippy::type_complexity)]
    pub(crate) fn find_after<T, F>(
        &self,
        cursor: Option<&OrderKey>,
        mut pick: F,
    ) -> Option<(OrderKey, Monomial, Coeff, usize, T)>
    where
        F: FnMut(&Monomial) -> Option<(usize, T)>,
    {
        let lower = match cursor {
            Some(k) => Bound::Excluded(k),
            None => Bound::Unbounded,
        };
        self.terms
            .range((lower, Bound::Unbounded))
            .find_map(|(k, (m, c))| pick(m).map(|(i, t)| (k.clone(), m.clone(), c.clone(), i, t)))
    }

    pub(crate) fn remove(&mut self, key: &OrderKey) {
        self.terms.remove(key);
    }

    /// Adds `factor · shift · s`, dropping terms of degree `>= bound`.
    pub(crate) fn add_scaled(&mut self, s: &Series, shift: &Monomial, factor: &Coeff) {
        for (t, c) in s.terms() {
            let m = t.mul(shift);
            if m.degree() >= self.bound {
                continue;
            }
            let c = c * factor;
            let key = self.order.sort_key(&m);
            match self.terms.entry(key) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    if !c.is_zero() {
                        v.insert((m, c));
                    }
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = &o.get().1 + &c;
                    if sum.is_zero() {
                        o.remove();
                    } else {
                        o.get_mut().1 = sum;
                    }
                }
            }
        }
    }

    pub(crate) fn into_series(self, nvars: usize, field: Field) -> Series {
        Series::from_terms(
            nvars,
            field,
            self.terms.into_values(),
            Precision::Finite(self.bound),
        )
        .expect("terms come from compatible series")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::Ring;

    fn ring() -> Ring {
        Ring::new(["x", "y", "z"], Field::Rational).unwrap()
    }

    fn idempotent_system(r: &Ring) -> RewriteSystem {
        let gens = ["z - y", "z - x", "y - y^2", "x - x^2"]
            .iter()
            .map(|g| r.parse(g).unwrap())
            .collect();
        RewriteSystem::new(Field::Rational, MonomialOrder::deglex(3), gens).unwrap()
    }

    fn two_var_system() -> (Ring, RewriteSystem) {
        let r = Ring::new(["x", "y"], Field::Rational).unwrap();
        let gens = vec![r.parse("x^2 - y^5").unwrap(), r.parse("x*y").unwrap()];
        let sys = RewriteSystem::new(Field::Rational, MonomialOrder::deglex(2), gens).unwrap();
        (r, sys)
    }

    #[test]
    fn z_is_reducible_by_first_generator() {
        let r = ring();
        let sys = idempotent_system(&r);
        let red = sys.reducible_monomials(&r.parse("z").unwrap(), 10);
        assert_eq!(red, vec![(r.parse_monomial("z").unwrap(), 0)]);
    }

    #[test]
    fn nothing_reducible_without_divisor() {
        let r = Ring::new(["x", "w"], Field::Rational).unwrap();
        let sys = RewriteSystem::new(
            Field::Rational,
            MonomialOrder::deglex(2),
            vec![r.parse("x^2").unwrap()],
        )
        .unwrap();
        assert!(sys.reducible_monomials(&r.parse("1 + w").unwrap(), 5).is_empty());
    }

    #[test]
    fn only_divisible_terms_are_listed() {
        let (r, sys) = two_var_system();
        let red = sys.reducible_monomials(&r.parse("x^2 + y^3").unwrap(), 10);
        assert_eq!(red, vec![(r.parse_monomial("x^2").unwrap(), 0)]);
    }

    #[test]
    fn single_steps_follow_the_diagram() {
        let r = ring();
        let sys = idempotent_system(&r);
        let z = r.parse("z").unwrap();
        let step = sys.step_at(&z, &r.parse_monomial("z").unwrap()).unwrap();
        assert_eq!(sys.rewrite_step(&z, &step).unwrap(), r.parse("y").unwrap());

        let y = r.parse("y").unwrap();
        let step = sys.step_at(&y, &r.parse_monomial("y").unwrap()).unwrap();
        assert_eq!(step.generator, 2);
        let y2 = sys.rewrite_step(&y, &step).unwrap();
        assert_eq!(y2, r.parse("y^2").unwrap());
        let step = sys.step_at(&y2, &r.parse_monomial("y^2").unwrap()).unwrap();
        assert_eq!(step.quotient, r.parse_monomial("y").unwrap());
        assert_eq!(sys.rewrite_step(&y2, &step).unwrap(), r.parse("y^3").unwrap());
    }

    #[test]
    fn monomial_generator_deletes() {
        let (r, sys) = two_var_system();
        let f = r.parse("3*x^2*y + y").unwrap();
        let step = RewriteStep {
            monomial: r.parse_monomial("x^2*y").unwrap(),
            generator: 1,
            quotient: r.parse_monomial("x").unwrap(),
            coeff: Field::Rational.from_i64(3),
        };
        assert_eq!(sys.rewrite_step(&f, &step).unwrap(), r.parse("y").unwrap());
    }

    #[test]
    fn invalid_steps_are_rejected() {
        let r = ring();
        let sys = idempotent_system(&r);
        let f = r.parse("z + x").unwrap();
        let mut step = sys.step_at(&f, &r.parse_monomial("z").unwrap()).unwrap();
        step.coeff = Field::Rational.from_i64(2);
        assert!(matches!(sys.rewrite_step(&f, &step), Err(Error::InvalidStep(_))));
        let absent = RewriteStep {
            monomial: r.parse_monomial("y").unwrap(),
            generator: 2,
            quotient: Monomial::one(3),
            coeff: Field::Rational.one(),
        };
        assert!(matches!(sys.rewrite_step(&f, &absent), Err(Error::InvalidStep(_))));
        let wrong_quotient = RewriteStep {
            generator: 0,
            ..absent
        };
        assert!(matches!(
            sys.rewrite_step(&f, &wrong_quotient),
            Err(Error::InvalidStep(_))
        ));
    }

    #[test]
    fn step_precision_is_min_of_operands() {
        let r = ring();
        let gens = vec![r.parse("y - y^2").unwrap().truncate(4)];
        let sys = RewriteSystem::new(Field::Rational, MonomialOrder::deglex(3), gens).unwrap();
        let f = r.parse("x*y").unwrap();
        let step = sys.step_at(&f, &r.parse_monomial("x*y").unwrap()).unwrap();
        let out = sys.rewrite_step(&f, &step).unwrap();
        assert_eq!(out.prec(), Precision::Finite(5));
        assert_eq!(out, r.parse("x*y^2").unwrap().truncate(5));
    }

    #[test]
    fn z_reduces_to_zero_in_four_steps() {
        let r = ring();
        let sys = idempotent_system(&r);
        let z = r.parse("z").unwrap();
        let res = sys.reduce_to_precision(&z, 4).unwrap();
        assert!(res.normal_form.is_empty());
        assert_eq!(res.normal_form.prec(), Precision::Finite(4));
        let eliminated: Vec<String> = res.eliminated().map(|m| r.render_monomial(m)).collect();
        assert_eq!(eliminated, ["z", "y", "y^2", "y^3"]);
        assert!(sys.check_reduction(&z, &res).unwrap());
    }

    #[test]
    fn normal_form_is_a_fixpoint() {
        let r = ring();
        let sys = idempotent_system(&r);
        let one = r.parse("1").unwrap();
        let res = sys.reduce_to_precision(&one, 5).unwrap();
        assert!(res.steps.is_empty());
        assert_eq!(res.normal_form, one.truncate(5));
    }

    #[test]
    fn cofactors_of_z_at_precision_three() {
        let r = ring();
        let sys = idempotent_system(&r);
        let res = sys.reduce_to_precision(&r.parse("z").unwrap(), 3).unwrap();
        let expected = ["1", "0", "1 + y", "0"];
        for (c, e) in res.cofactors.iter().zip(expected) {
            assert_eq!(c, &r.parse(e).unwrap());
        }
        // 1·(z − y) + (1 + y)(y − y²) = z − y³
        let combo = sys.combine(&res.cofactors, 10).unwrap();
        assert_eq!(combo, r.parse("z - y^3").unwrap().truncate(10));
    }

    #[test]
    fn precision_relative_normal_forms() {
        let r = ring();
        let sys = idempotent_system(&r);
        assert!(sys.is_normal_form(&Series::zero(3, Field::Rational), 5));
        assert!(!sys.is_normal_form(&r.parse("z").unwrap(), 5));
        assert!(sys.is_normal_form(&r.parse("y^5").unwrap(), 5));
        assert!(!sys.is_normal_form(&r.parse("y^5").unwrap(), 6));
    }

    #[test]
    fn reduction_errors() {
        let r = ring();
        let sys = idempotent_system(&r);
        assert!(matches!(
            sys.reduce_to_precision(&r.parse("z").unwrap().truncate(3), 5),
            Err(Error::PrecisionLoss { required: 5, .. })
        ));
        assert_eq!(
            RewriteSystem::new(Field::Rational, MonomialOrder::lex(3), vec![]),
            Err(Error::NonCompatibleOrder(crate::monomial::OrderKind::Lex))
        );
        assert_eq!(
            RewriteSystem::new(
                Field::Rational,
                MonomialOrder::deglex(3),
                vec![Series::zero(3, Field::Rational)]
            ),
            Err(Error::ZeroSeries)
        );
    }

    #[test]
    fn tie_break_changes_generator_choice() {
        let r = ring();
        let sys = idempotent_system(&r);
        let res = sys
            .reduce_with(&r.parse("z").unwrap(), 3, TieBreak::LargestIndex)
            .unwrap();
        assert_eq!(res.steps[0].generator, 1);
        let eliminated: Vec<String> = res.eliminated().map(|m| r.render_monomial(m)).collect();
        assert_eq!(eliminated, ["z", "x", "x^2"]);
    }
}
