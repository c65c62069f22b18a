//! Joinability of two reducts and a truncated standard-basis check.
//!
//! [`join`] repeatedly takes `m_k = lm(g_k − h_k)` and rewrites `m_k` on both
//! sides with the same generator and quotient (a side whose coefficient at
//! `m_k` is zero is left unchanged). The eliminated monomials strictly
//! decrease for `<_op`, so `δ(g_k, h_k) = 2^{-deg(m_k)}` shrinks until the
//! two sides agree modulo `(X)^D`, or some `m_k` turns out irreducible.

use serde::{Deserialize, Serialize};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::rewrite::{RewriteStep, RewriteSystem, TieBreak};
use crate::series::Series;

/// One round of the join loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinRound {
    /// `m_k = lm(g_k − h_k)`.
    pub monomial: Monomial,
    pub generator: usize,
    pub quotient: Monomial,
    /// `coeff⟨g_k, m_k⟩`, zero when the `g` side did not move.
    pub g_coeff: Coeff,
    /// `coeff⟨h_k, m_k⟩`, zero when the `h` side did not move.
    pub h_coeff: Coeff,
}

impl JoinRound {
    fn step(&self, coeff: &Coeff) -> Option<RewriteStep> {
        (!coeff.is_zero()).then(|| RewriteStep {
            monomial: self.monomial.clone(),
            generator: self.generator,
            quotient: self.quotient.clone(),
            coeff: coeff.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JoinResult {
    Joined {
        precision: u32,
        common: Series,
        rounds: Vec<JoinRound>,
    },
    Diverged {
        precision: u32,
        /// The irreducible `lm(g_k − h_k)`.
        monomial: Monomial,
        g: Series,
        h: Series,
        rounds: Vec<JoinRound>,
    },
}

impl JoinResult {
    pub fn is_joined(&self) -> bool {
        matches!(self, JoinResult::Joined { .. })
    }

    pub fn rounds(&self) -> &[JoinRound] {
        match self {
            JoinResult::Joined { rounds, .. } | JoinResult::Diverged { rounds, .. } => rounds,
        }
    }

    /// The eliminated monomials `m_0, m_1, ...`.
    pub fn eliminated(&self) -> impl Iterator<Item = &Monomial> {
        self.rounds().iter().map(|r| &r.monomial)
    }

    /// Rewrite steps applied to the `g` side, replayable through
    /// [`RewriteSystem::rewrite_step`].
    pub fn g_steps(&self) -> Vec<RewriteStep> {
        self.rounds().iter().filter_map(|r| r.step(&r.g_coeff)).collect()
    }

    pub fn h_steps(&self) -> Vec<RewriteStep> {
        self.rounds().iter().filter_map(|r| r.step(&r.h_coeff)).collect()
    }
}

pub fn join(g: &Series, h: &Series, sys: &RewriteSystem, d: u32) -> Result<JoinResult> {
    sys.check_precision(g, d)?;
    sys.check_precision(h, d)?;
    let ord = sys.order();
    let mut g = g.truncate(d);
    let mut h = h.truncate(d);
    let mut rounds = Vec::new();
    loop {
        let diff = g.sub(&h)?;
        let Some(m) = diff.leading_monomial(ord).cloned() else {
            return Ok(JoinResult::Joined {
                precision: d,
                common: g,
                rounds,
            });
        };
        let Some((generator, quotient)) = sys.divisor_of(&m, TieBreak::SmallestIndex) else {
            return Ok(JoinResult::Diverged {
                precision: d,
                monomial: m,
                g,
                h,
                rounds,
            });
        };
        let round = JoinRound {
            g_coeff: g.coeff(&m),
            h_coeff: h.coeff(&m),
            monomial: m,
            generator,
            quotient,
        };
        if let Some(step) = round.step(&round.g_coeff) {
            g = sys.rewrite_step(&g, &step)?.truncate(d);
        }
        if let Some(step) = round.step(&round.h_coeff) {
            h = sys.rewrite_step(&h, &step)?.truncate(d);
        }
        rounds.push(round);
    }
}

/// `(1/lc(s_i))·(L/lm(s_i))·s_i − (1/lc(s_j))·(L/lm(s_j))·s_j` with
/// `L = lcm(lm(s_i), lm(s_j))`.
pub fn s_series(i: usize, j: usize, sys: &RewriteSystem) -> Result<Series> {
    if i == j {
        return Err(Error::InvalidArgument("S-series needs two distinct generators".into()));
    }
    let gi = sys
        .generator(i)
        .ok_or_else(|| Error::InvalidArgument(format!("no generator {i}")))?;
    let gj = sys
        .generator(j)
        .ok_or_else(|| Error::InvalidArgument(format!("no generator {j}")))?;
    let lcm = gi.leading_monomial().lcm(gj.leading_monomial());
    let scaled = |g: &crate::rewrite::Generator| {
        let shift = g
            .leading_monomial()
            .divides(&lcm)
            .expect("lm divides the lcm");
        g.series().mul_term(&shift, g.inv_lc())
    };
    scaled(gi)?.sub(&scaled(gj)?)
}

/// Outcome for one unordered generator pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub s_series: Series,
    pub normal_form: Series,
    /// Leading monomial of a non-zero normal form: irreducible by construction.
    pub witness: Option<Monomial>,
    pub passed: bool,
}

/// Result of [`check_standard_basis`]. A pass is relative to `precision`
/// only: it does not certify the property for the untruncated series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SBReport {
    pub precision: u32,
    pub pairs: Vec<PairReport>,
    pub passed: bool,
}

impl SBReport {
    pub fn failures(&self) -> impl Iterator<Item = &PairReport> {
        self.pairs.iter().filter(|p| !p.passed)
    }
}

/// Reduces every S-series to precision `d`; passes when all vanish
/// modulo `(X)^d`.
pub fn check_standard_basis(sys: &RewriteSystem, d: u32) -> Result<SBReport> {
    let mut pairs = Vec::new();
    for i in 0..sys.len() {
        for j in i + 1..sys.len() {
            let s = s_series(i, j, sys)?;
            let reduced = sys.reduce_to_precision(&s, d)?;
            let witness = reduced
                .normal_form
                .leading_monomial(sys.order())
                .cloned();
            pairs.push(PairReport {
                i,
                j,
                s_series: s,
                passed: witness.is_none(),
                normal_form: reduced.normal_form,
                witness,
            });
        }
    }
    Ok(SBReport {
        precision: d,
        passed: pairs.iter().all(|p| p.passed),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::monomial::MonomialOrder;
    use crate::parse::Ring;

    fn idempotent() -> (Ring, RewriteSystem) {
        let r = Ring::new(["x", "y", "z"], Field::Rational).unwrap();
        let gens = ["z - y", "z - x", "y - y^2", "x - x^2"]
            .iter()
            .map(|g| r.parse(g).unwrap())
            .collect();
        let sys = RewriteSystem::new(Field::Rational, MonomialOrder::deglex(3), gens).unwrap();
        (r, sys)
    }

    fn non_basis() -> (Ring, RewriteSystem) {
        let r = Ring::new(["x", "y"], Field::Rational).unwrap();
        let gens = vec![r.parse("x^2 - y^5").unwrap(), r.parse("x*y").unwrap()];
        let sys = RewriteSystem::new(Field::Rational, MonomialOrder::deglex(2), gens).unwrap();
        (r, sys)
    }

    #[test]
    fn y_and_x_join_at_zero() {
        let (r, sys) = idempotent();
        let res = join(&r.parse("y").unwrap(), &r.parse("x").unwrap(), &sys, 6).unwrap();
        let JoinResult::Joined { common, .. } = &res else {
            panic!("expected a join");
        };
        assert!(common.is_empty());
        let eliminated: Vec<String> = res.eliminated().map(|m| r.render_monomial(m)).collect();
        assert_eq!(
            eliminated,
            ["y", "x", "y^2", "x^2", "y^3", "x^3", "y^4", "x^4", "y^5", "x^5"]
        );
        assert_eq!(res.g_steps().len(), 5);
        assert_eq!(res.h_steps().len(), 5);
    }

    #[test]
    fn equal_inputs_join_immediately() {
        let (r, sys) = idempotent();
        let f = r.parse("1 + x*z").unwrap();
        let res = join(&f, &f, &sys, 5).unwrap();
        assert!(res.is_joined());
        assert!(res.rounds().is_empty());
    }

    #[test]
    fn non_basis_diverges_at_y6() {
        let (r, sys) = non_basis();
        // x²y rewrites to y⁶ through x² − y⁵ and to 0 through xy
        let f = r.parse("x^2*y").unwrap();
        let via_first = sys.rewrite_step(&f, &RewriteStep {
            monomial: r.parse_monomial("x^2*y").unwrap(),
            generator: 0,
            quotient: r.parse_monomial("y").unwrap(),
            coeff: Field::Rational.one(),
        }).unwrap();
        let via_second = sys.rewrite_step(&f, &RewriteStep {
            monomial: r.parse_monomial("x^2*y").unwrap(),
            generator: 1,
            quotient: r.parse_monomial("x").unwrap(),
            coeff: Field::Rational.one(),
        }).unwrap();
        assert_eq!(via_first, r.parse("y^6").unwrap());
        assert!(via_second.is_exact_zero());
        let res = join(&via_first, &via_second, &sys, 8).unwrap();
        match res {
            JoinResult::Diverged { monomial, .. } => {
                assert_eq!(monomial, r.parse_monomial("y^6").unwrap())
            }
            _ => panic!("expected divergence"),
        }
    }

    #[test]
    fn s_series_examples() {
        let (r, sys) = idempotent();
        assert_eq!(s_series(0, 1, &sys).unwrap(), r.parse("x - y").unwrap());
        assert_eq!(s_series(2, 3, &sys).unwrap(), r.parse("x^2*y - x*y^2").unwrap());
        assert!(s_series(1, 1, &sys).is_err());

        let gens = vec![r.parse("x - y^2").unwrap(), r.parse("3*x - 3*y^2").unwrap()];
        let prop = RewriteSystem::new(Field::Rational, MonomialOrder::deglex(3), gens).unwrap();
        assert!(s_series(0, 1, &prop).unwrap().is_exact_zero());
    }

    #[test]
    fn idempotent_system_passes_the_check() {
        let (_, sys) = idempotent();
        let report = check_standard_basis(&sys, 8).unwrap();
        assert!(report.passed);
        assert_eq!(report.pairs.len(), 6);
    }

    #[test]
    fn non_basis_fails_with_y6_witness() {
        let (r, sys) = non_basis();
        let report = check_standard_basis(&sys, 8).unwrap();
        assert!(!report.passed);
        let fail = report.failures().next().unwrap();
        assert_eq!(fail.s_series, r.parse("-y^6").unwrap());
        assert_eq!(fail.witness, Some(r.parse_monomial("y^6").unwrap()));
    }

    #[test]
    fn singletons_have_no_pairs() {
        let (r, _) = idempotent();
        let sys = RewriteSystem::new(
            Field::Rational,
            MonomialOrder::deglex(3),
            vec![r.parse("x*y - z^3").unwrap()],
        )
        .unwrap();
        let report = check_standard_basis(&sys, 8).unwrap();
        assert!(report.passed);
        assert!(report.pairs.is_empty());
    }

    #[test]
    fn join_requires_precision() {
        let (r, sys) = idempotent();
        assert!(matches!(
            join(&r.parse("x").unwrap().truncate(2), &r.parse("y").unwrap(), &sys, 3),
            Err(Error::PrecisionLoss { .. })
        ));
    }
}
