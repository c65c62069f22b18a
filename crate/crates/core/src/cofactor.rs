//! Cofactor extraction with full bookkeeping.
//!
//! Starting from `f_i^(0) = 0`, each round takes `F_k = f − Σ f_i^(k)·s_i`,
//! its leading monomial `m_k`, a generator `s_{i_k}` with
//! `m_k = lm(s_{i_k})·q_k`, and updates
//! `f_{i_k} += (lc(F_k) / lc(s_{i_k}))·q_k`. The eliminated monomials strictly
//! decrease for `<_op`, so their degrees grow and the loop stops once every
//! remaining term lies at or beyond the precision `D`.

use serde::{Deserialize, Serialize};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::rewrite::{RewriteSystem, TieBreak};
use crate::series::{Precision, Series};

/// One elimination round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationRecord {
    pub k: usize,
    /// `m_k = lm(F_k)`.
    pub monomial: Monomial,
    /// `i_k`.
    pub generator: usize,
    /// `q_k` with `m_k = lm(s_{i_k})·q_k`.
    pub quotient: Monomial,
    /// `lc(F_k)`.
    pub coeff: Coeff,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofactorTrace {
    pub records: Vec<EliminationRecord>,
    /// Current partial cofactors `f_i^(k)`.
    pub cofactors: Vec<Series>,
    /// Current residual `F_k`.
    pub residual: Series,
    /// Working precision `D`, once fixed by [`limit_coefficients`].
    pub precision: Option<u32>,
    /// Per cofactor, the precision `D − deg(lm(s_i))` below which its terms
    /// are final.
    pub certified: Vec<u32>,
}

impl CofactorTrace {
    /// The base case: all cofactors zero, residual `f`.
    pub fn start(f: &Series, sys: &RewriteSystem) -> Self {
        CofactorTrace {
            records: Vec::new(),
            cofactors: vec![Series::zero(sys.nvars(), sys.field()); sys.len()],
            residual: f.clone(),
            precision: None,
            certified: Vec::new(),
        }
    }

    pub fn eliminated(&self) -> impl Iterator<Item = &Monomial> {
        self.records.iter().map(|r| &r.monomial)
    }

    /// Rebuilds `f_i^(k)` (the cofactors after the first `k` rounds).
    pub fn partial_cofactor(&self, sys: &RewriteSystem, i: usize, k: usize) -> Series {
        let mut s = Series::zero(sys.nvars(), sys.field());
        if let Some(g) = sys.generator(i) {
            for r in self.records.iter().take(k).filter(|r| r.generator == i) {
                s.add_term(r.quotient.clone(), &(&r.coeff * g.inv_lc()));
            }
        }
        s
    }

    /// The quotients attributed to generator `i`, in insertion order.
    pub fn quotients(&self, i: usize) -> impl Iterator<Item = &Monomial> {
        self.records
            .iter()
            .filter(move |r| r.generator == i)
            .map(|r| &r.quotient)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MembershipVerdict {
    /// `f ∈ I + (X)^D`, witnessed by `f ≡ Σ cofactors_i·s_i (mod (X)^D)`.
    InIdealModD {
        cofactors: Vec<Series>,
        certified: Vec<u32>,
        trace: CofactorTrace,
    },
    /// Elimination got stuck on a residual whose leading monomial no
    /// generator divides.
    NotInIdealModD {
        residual: Series,
        irreducible: Monomial,
        trace: CofactorTrace,
    },
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipVerdict::InIdealModD { .. })
    }

    pub fn trace(&self) -> &CofactorTrace {
        match self {
            MembershipVerdict::InIdealModD { trace, .. } => trace,
            MembershipVerdict::NotInIdealModD { trace, .. } => trace,
        }
    }
}

/// One round: eliminates `lm(F)` using the smallest-index generator whose
/// leading monomial divides it.
///
/// Returns `F' = F − (lc(F)/lc(s_i))·q·s_i` (with `F = residual`) at its natural precision
/// `min(prec_F, prec_{s_i} + deg(q))` and records the round in `trace`.
pub fn eliminate_once(
    residual: &Series,
    sys: &RewriteSystem,
    trace: &mut CofactorTrace,
) -> Result<Series> {
    sys.check_operand(residual)?;
    let lead = residual.leading_data(sys.order())?;
    let (i, q) = sys
        .divisor_of(&lead.monomial, TieBreak::SmallestIndex)
        .ok_or_else(|| Error::IrreducibleLeadingMonomial(lead.monomial.clone()))?;
    let g = &sys.generators()[i];
    let factor = &lead.coeff * g.inv_lc();
    let next = residual.sub(&g.series().mul_term(&q, &factor)?)?;
    trace.cofactors[i].add_term(q.clone(), &factor);
    trace.records.push(EliminationRecord {
        k: trace.records.len(),
        monomial: lead.monomial,
        generator: i,
        quotient: q,
        coeff: lead.coeff,
    });
    trace.residual = next.clone();
    Ok(next)
}

/// Runs the elimination to precision `d` and reports membership of `f` in
/// `I + (X)^d`, with the limit coefficients truncated accordingly.
pub fn limit_coefficients(f: &Series, sys: &RewriteSystem, d: u32) -> Result<MembershipVerdict> {
    sys.check_precision(f, d)?;
    let mut residual = f.truncate(d);
    let mut trace = CofactorTrace::start(&residual, sys);
    trace.precision = Some(d);
    trace.certified = sys.certified_cofactor_precision(d);
    while !residual.is_empty() {
        match eliminate_once(&residual, sys, &mut trace) {
            Ok(next) => {
                residual = next.truncate(d);
                trace.residual = residual.clone();
            }
            Err(Error::IrreducibleLeadingMonomial(m)) => {
                return Ok(MembershipVerdict::NotInIdealModD {
                    residual,
                    irreducible: m,
                    trace,
                });
            }
            Err(e) => return Err(e),
        }
    }
    debug_assert_eq!(residual.prec(), Precision::Finite(d));
    Ok(MembershipVerdict::InIdealModD {
        cofactors: trace.cofactors.clone(),
        certified: trace.certified.clone(),
        trace,
    })
}

/// Recomputes `Σ f_i·s_i` exactly and compares with `f` below degree `d`.
pub fn verify_cofactor_identity(
    f: &Series,
    verdict: &MembershipVerdict,
    sys: &RewriteSystem,
    d: u32,
) -> bool {
    let MembershipVerdict::InIdealModD { cofactors, .. } = verdict else {
        return false;
    };
    match sys.combine(cofactors, d) {
        Ok(sum) => sum == f.truncate(d),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::monomial::MonomialOrder;
    use crate::parse::Ring;

    fn setup() -> (Ring, RewriteSystem) {
        let r = Ring::new(["x", "y", "z"], Field::Rational).unwrap();
        let gens = ["z - y", "z - x", "y - y^2", "x - x^2"]
            .iter()
            .map(|g| r.parse(g).unwrap())
            .collect();
        let sys = RewriteSystem::new(Field::Rational, MonomialOrder::deglex(3), gens).unwrap();
        (r, sys)
    }

    #[test]
    fn first_round_on_z() {
        let (r, sys) = setup();
        let z = r.parse("z").unwrap();
        let mut trace = CofactorTrace::start(&z, &sys);
        let next = eliminate_once(&z, &sys, &mut trace).unwrap();
        assert_eq!(next, r.parse("y").unwrap());
        assert_eq!(trace.cofactors[0], r.parse("1").unwrap());
        assert_eq!(trace.records[0].quotient, Monomial::one(3));
    }

    #[test]
    fn round_on_y_squared_uses_third_generator() {
        let (r, sys) = setup();
        let f = r.parse("y^2").unwrap();
        let mut trace = CofactorTrace::start(&f, &sys);
        let next = eliminate_once(&f, &sys, &mut trace).unwrap();
        assert_eq!(next, r.parse("y^3").unwrap());
        assert_eq!(trace.cofactors[2], r.parse("y").unwrap());
    }

    #[test]
    fn generator_multiple_vanishes_in_one_round() {
        let r = Ring::new(["x", "y"], Field::Rational).unwrap();
        let gens = vec![r.parse("x*y").unwrap(), r.parse("y - y^2").unwrap()];
        let sys = RewriteSystem::new(Field::Rational, MonomialOrder::deglex(2), gens).unwrap();
        let f = r.parse("3*x^2*y").unwrap();
        let mut trace = CofactorTrace::start(&f, &sys);
        assert!(eliminate_once(&f, &sys, &mut trace).unwrap().is_exact_zero());

        let f = r.parse("2*y - 2*y^2").unwrap();
        let mut trace = CofactorTrace::start(&f, &sys);
        assert!(eliminate_once(&f, &sys, &mut trace).unwrap().is_exact_zero());
        // the leading term alone descends
        let f = r.parse("y").unwrap();
        let mut trace = CofactorTrace::start(&f, &sys);
        assert_eq!(eliminate_once(&f, &sys, &mut trace).unwrap(), r.parse("y^2").unwrap());
    }

    #[test]
    fn irreducible_leading_monomial_is_reported() {
        let (r, sys) = setup();
        let f = r.parse("1 + z").unwrap();
        let mut trace = CofactorTrace::start(&f, &sys);
        assert_eq!(
            eliminate_once(&f, &sys, &mut trace),
            Err(Error::IrreducibleLeadingMonomial(Monomial::one(3)))
        );
        assert!(trace.records.is_empty());
    }

    #[test]
    fn z_is_a_member_at_precision_three() {
        let (r, sys) = setup();
        let z = r.parse("z").unwrap();
        let v = limit_coefficients(&z, &sys, 3).unwrap();
        let MembershipVerdict::InIdealModD {
            cofactors,
            certified,
            trace,
        } = &v
        else {
            panic!("expected membership");
        };
        assert_eq!(cofactors[0], r.parse("1").unwrap());
        assert!(cofactors[1].is_exact_zero());
        // z -> y -> y^2 -> y^3, and y^3 vanishes modulo (X)^3
        assert_eq!(cofactors[2], r.parse("1 + y").unwrap());
        assert!(cofactors[3].is_exact_zero());
        assert_eq!(certified, &vec![2, 2, 2, 2]);
        assert_eq!(trace.records.len(), 3);
        assert!(verify_cofactor_identity(&z, &v, &sys, 3));
    }

    #[test]
    fn generator_itself_takes_one_round() {
        let (r, sys) = setup();
        let f = r.parse("z - y").unwrap();
        let v = limit_coefficients(&f, &sys, 6).unwrap();
        let MembershipVerdict::InIdealModD { cofactors, trace, .. } = &v else {
            panic!("expected membership");
        };
        assert_eq!(trace.records.len(), 1);
        assert_eq!(cofactors[0], r.parse("1").unwrap());
        assert!(cofactors[1..].iter().all(Series::is_exact_zero));
    }

    #[test]
    fn constants_are_not_members() {
        let (r, sys) = setup();
        for d in 1..5 {
            let v = limit_coefficients(&r.parse("1").unwrap(), &sys, d).unwrap();
            match v {
                MembershipVerdict::NotInIdealModD {
                    residual,
                    irreducible,
                    ..
                } => {
                    assert_eq!(residual, r.parse("1").unwrap().truncate(d));
                    assert!(irreducible.is_one());
                }
                _ => panic!("1 must not be a member"),
            }
        }
    }

    #[test]
    fn perturbed_cofactors_fail_verification() {
        let (r, sys) = setup();
        let z = r.parse("z").unwrap();
        let mut v = limit_coefficients(&z, &sys, 3).unwrap();
        if let MembershipVerdict::InIdealModD { cofactors, .. } = &mut v {
            cofactors[0] = cofactors[0].add(&r.parse("x").unwrap()).unwrap();
        }
        assert!(!verify_cofactor_identity(&z, &v, &sys, 3));
    }

    #[test]
    fn zero_is_vacuously_a_member() {
        let (_, sys) = setup();
        let zero = Series::zero(3, Field::Rational);
        let v = limit_coefficients(&zero, &sys, 4).unwrap();
        let MembershipVerdict::InIdealModD { cofactors, .. } = &v else {
            panic!("expected membership");
        };
        assert!(cofactors.iter().all(Series::is_exact_zero));
        assert!(verify_cofactor_identity(&zero, &v, &sys, 4));
    }

    #[test]
    fn partial_cofactors_rebuild_from_records() {
        let (r, sys) = setup();
        let v = limit_coefficients(&r.parse("z").unwrap(), &sys, 5).unwrap();
        let trace = v.trace();
        for i in 0..sys.len() {
            assert_eq!(
                trace.partial_cofactor(&sys, i, trace.records.len()),
                trace.cofactors[i]
            );
        }
        assert_eq!(trace.partial_cofactor(&sys, 2, 2), r.parse("1").unwrap());
    }

    #[test]
    fn precision_loss() {
        let (r, sys) = setup();
        assert!(matches!(
            limit_coefficients(&r.parse("z").unwrap().truncate(2), &sys, 4),
            Err(Error::PrecisionLoss { .. })
        ));
    }
}
