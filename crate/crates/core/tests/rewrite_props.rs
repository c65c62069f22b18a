use std::cmp::Ordering;
use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use fps_rewrite::cofactor::{limit_coefficients, MembershipVerdict};
use fps_rewrite::confluence::{check_standard_basis, join, JoinResult};
use fps_rewrite::oracle::{membership_oracle, MembershipOracle};
use fps_rewrite::random::{random_member, random_series, random_system, rng_from_seed, SystemShape};
use fps_rewrite::{Field, Monomial, RewriteSystem, Series, TieBreak, Valuation};

fn field(prime: bool) -> Field {
    if prime {
        Field::prime(7).unwrap()
    } else {
        Field::Rational
    }
}

/// Any random system, with a working precision.
fn any_system() -> impl Strategy<Value = (RewriteSystem, u32, u64)> {
    (any::<u64>(), any::<bool>(), 3u32..=8).prop_map(|(seed, prime, d)| {
        let mut rng = rng_from_seed(seed);
        (random_system(&mut rng, field(prime), &SystemShape::default()), d, seed)
    })
}

/// A system passing the truncated standard-basis check at its precision.
fn sb_system() -> impl Strategy<Value = (RewriteSystem, u32, u64)> {
    (any::<u64>(), any::<bool>(), 3u32..=8).prop_map(|(seed, prime, d)| {
        let mut rng = rng_from_seed(seed);
        loop {
            let sys = random_system(&mut rng, field(prime), &SystemShape::default());
            if check_standard_basis(&sys, d).unwrap().passed {
                return (sys, d, seed);
            }
        }
    })
}

fn is_op_decreasing(sys: &RewriteSystem, ms: &[&Monomial]) -> bool {
    ms.windows(2).all(|w| sys.order().cmp_op(w[1], w[0]) == Ordering::Less)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn step_soundness((sys, d, seed) in any_system()) {
        let mut rng = rng_from_seed(seed ^ 1);
        let f = random_member(&mut rng, &sys, 3, 3)
            .add(&random_series(&mut rng, sys.nvars(), sys.field(), d, 3)).unwrap();
        for (m, _) in sys.reducible_monomials(&f, d) {
            let step = sys.step_at(&f, &m).unwrap();
            let g = sys.rewrite_step(&f, &step).unwrap();
            let gen = &sys.generators()[step.generator];
            let factor = &step.coeff * &gen.leading_coeff().inverse().unwrap();
            let expected = gen.series().mul_term(&step.quotient, &factor).unwrap();
            prop_assert_eq!(f.sub(&g).unwrap(), expected);
            prop_assert!(!g.contains(&m));
        }
    }

    #[test]
    fn reduction_invariants((sys, d, seed) in any_system()) {
        let mut rng = rng_from_seed(seed ^ 2);
        let f = random_series(&mut rng, sys.nvars(), sys.field(), d + 2, 5);
        for tie in [TieBreak::SmallestIndex, TieBreak::LargestIndex] {
            let res = sys.reduce_with(&f, d, tie).unwrap();
            prop_assert!(sys.check_reduction(&f, &res).unwrap());
            prop_assert!(sys.is_normal_form(&res.normal_form, d));
            let ms: Vec<&Monomial> = res.eliminated().collect();
            prop_assert!(is_op_decreasing(&sys, &ms));
            prop_assert!(ms.windows(2).all(|w| w[0].degree() <= w[1].degree()));
        }
    }

    #[test]
    fn reversed_generators_agree_on_sb_systems((sys, d, seed) in sb_system()) {
        let mut rng = rng_from_seed(seed ^ 3);
        let rev = sys.reversed();
        for _ in 0..5 {
            let f = random_series(&mut rng, sys.nvars(), sys.field(), d, 4);
            let a = sys.reduce_to_precision(&f, d).unwrap();
            let b = rev.reduce_to_precision(&f, d).unwrap();
            prop_assert_eq!(a.normal_form, b.normal_form);
        }
    }

    #[test]
    fn cofactor_trace_laws((sys, d, seed) in sb_system()) {
        let mut rng = rng_from_seed(seed ^ 4);
        let f = random_member(&mut rng, &sys, 3, 3);
        let verdict = limit_coefficients(&f, &sys, d).unwrap();
        let MembershipVerdict::InIdealModD { cofactors, certified, trace } = &verdict else {
            return Err(TestCaseError::fail("member rejected by an SB-passing system"));
        };
        prop_assert_eq!(certified, &sys.certified_cofactor_precision(d));
        let ms: Vec<&Monomial> = trace.eliminated().collect();
        prop_assert!(is_op_decreasing(&sys, &ms));
        for r in &trace.records {
            let lead = sys.generators()[r.generator].leading_monomial();
            prop_assert_eq!(&lead.mul(&r.quotient), &r.monomial);
        }
        let k_end = trace.records.len();
        for i in 0..sys.len() {
            let qs: Vec<&Monomial> = trace.quotients(i).collect();
            prop_assert!(is_op_decreasing(&sys, &qs));
            let partial = trace.partial_cofactor(&sys, i, k_end);
            let support: BTreeSet<&Monomial> = partial.support().collect();
            prop_assert_eq!(support, qs.iter().copied().collect::<BTreeSet<_>>());
            prop_assert_eq!(&partial.truncate(certified[i]), &cofactors[i].truncate(certified[i]));
            // Cauchy surrogate: later partials differ only from the next quotient on
            for k1 in 0..k_end {
                let next = trace.records[k1..].iter().find(|r| r.generator == i);
                let diff = trace.partial_cofactor(&sys, i, k_end).sub(&trace.partial_cofactor(&sys, i, k1)).unwrap();
                match (next, diff.valuation()) {
                    (None, v) => prop_assert_eq!(v, Valuation::Infinite),
                    (Some(r), Valuation::Finite(v)) => prop_assert!(v >= r.quotient.degree()),
                    (Some(_), v) => prop_assert_eq!(v, Valuation::Infinite),
                }
            }
        }
    }

    #[test]
    fn oracle_soundness_and_one_sided_bound((sys, d, seed) in any_system()) {
        let mut rng = rng_from_seed(seed ^ 5);
        let oracle = MembershipOracle::new(&sys, d).unwrap();
        for _ in 0..4 {
            let f = if rng.gen_bool(0.5) {
                random_member(&mut rng, &sys, 3, 2)
            } else {
                let bound = rng.gen_range(1..=d);
                random_series(&mut rng, sys.nvars(), sys.field(), bound, 3)
            };
            let solution = oracle.solve(&f).unwrap();
            if let Some(s) = &solution {
                prop_assert_eq!(sys.combine(&s.cofactors, d).unwrap(), f.truncate(d));
            }
            if limit_coefficients(&f, &sys, d).unwrap().is_member() {
                prop_assert!(solution.is_some());
            }
        }
    }

    #[test]
    fn join_soundness((sys, d, seed) in sb_system()) {
        let mut rng = rng_from_seed(seed ^ 6);
        let f = random_member(&mut rng, &sys, 2, 2)
            .add(&random_series(&mut rng, sys.nvars(), sys.field(), d, 3)).unwrap();
        let reducible = sys.reducible_monomials(&f, d);
        // two reducts of f obtained by rewriting different monomials
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| -> Series {
            if reducible.is_empty() {
                return f.clone();
            }
            let (m, _) = &reducible[rng.gen_range(0..reducible.len())];
            sys.rewrite_step(&f, &sys.step_at(&f, m).unwrap()).unwrap()
        };
        let (g, h) = (pick(&mut rng), pick(&mut rng));
        let res = join(&g, &h, &sys, d).unwrap();
        let JoinResult::Joined { common, .. } = &res else {
            return Err(TestCaseError::fail("SB-passing system diverged"));
        };
        for (start, steps) in [(&g, res.g_steps()), (&h, res.h_steps())] {
            let mut cur = start.clone();
            for s in &steps {
                cur = sys.rewrite_step(&cur, s).unwrap();
            }
            prop_assert_eq!(&cur.truncate(d), common);
        }
        let ms: Vec<&Monomial> = res.eliminated().collect();
        prop_assert!(is_op_decreasing(&sys, &ms));
        prop_assert!(ms.windows(2).all(|w| w[0].degree() <= w[1].degree()));
        prop_assert!(membership_oracle(&g.sub(&h).unwrap(), &sys, d).unwrap().is_some());
    }

    #[test]
    fn join_of_tie_break_reducts((sys, d, seed) in sb_system()) {
        let mut rng = rng_from_seed(seed ^ 7);
        let f = random_series(&mut rng, sys.nvars(), sys.field(), d, 4);
        let g = sys.reduce_with(&f, d, TieBreak::SmallestIndex).unwrap().normal_form;
        let h = sys.reduce_with(&f, d, TieBreak::LargestIndex).unwrap().normal_form;
        prop_assert!(join(&g, &h, &sys, d).unwrap().is_joined());
    }
}
