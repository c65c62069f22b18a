use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use fps_rewrite::tars::{
    pow2_inv, witness_topological_reach, AbstractSystem, CyclicState, CyclicSystem, NatInf,
    NbarState, NbarSystem, Reach,
};

fn cyclic_state() -> impl Strategy<Value = CyclicState> {
    prop_oneof![
        (0u64..64).prop_map(CyclicState::left),
        (1u64..64).prop_map(CyclicState::right),
        Just(CyclicState::zero()),
        Just(CyclicState::two()),
    ]
}

fn natinf() -> impl Strategy<Value = NatInf> {
    prop_oneof![4 => (0u64..40).prop_map(NatInf::Fin), 1 => Just(NatInf::Inf)]
}

fn nbar_state() -> impl Strategy<Value = NbarState> {
    (natinf(), natinf()).prop_map(|(a, b)| NbarState(a, b))
}

fn metric_axioms<A: AbstractSystem>(sys: &A, a: &A::State, b: &A::State, c: &A::State) -> Result<(), TestCaseError> {
    let ab = sys.distance(a, b);
    prop_assert_eq!(&ab, &sys.distance(b, a));
    prop_assert_eq!(ab.is_zero(), a == b);
    prop_assert!(sys.distance(a, c) <= ab + sys.distance(b, c));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn cyclic_local_reversibility(s in cyclic_state()) {
        let succ = CyclicSystem.successors(&s).unwrap();
        let is_limit = s == CyclicState::zero() || s == CyclicState::two();
        prop_assert_eq!(succ.is_empty(), is_limit);
        for t in succ {
            prop_assert!(CyclicSystem.successors(&t).unwrap().contains(&s));
        }
    }

    #[test]
    fn nbar_normal_forms(s in nbar_state()) {
        let nf = NbarSystem.is_normal_form(&s).unwrap();
        prop_assert_eq!(nf, s.0 == NatInf::Inf || s.1 == NatInf::Inf);
        for t in NbarSystem.successors(&s).unwrap() {
            prop_assert!(s.reaches(&t) && !t.reaches(&s));
        }
    }

    #[test]
    fn metrics(a in cyclic_state(), b in cyclic_state(), c in cyclic_state(),
               p in nbar_state(), q in nbar_state(), r in nbar_state()) {
        metric_axioms(&CyclicSystem, &a, &b, &c)?;
        metric_axioms(&NbarSystem, &p, &q, &r)?;
    }

    #[test]
    fn witnesses_are_paths(k in 1u64..12, right in any::<bool>()) {
        let target = if right { CyclicState::two() } else { CyclicState::zero() };
        let eps = pow2_inv(k);
        let Reach::Found(path) = witness_topological_reach(&CyclicSystem, &CyclicState::left(0), &target, &eps, 64).unwrap() else {
            return Err(TestCaseError::fail("no witness"));
        };
        prop_assert_eq!(path.len() as u64 - 1, k + 1);
        for w in path.windows(2) {
            prop_assert!(CyclicSystem.successors(&w[0]).unwrap().contains(&w[1]));
        }
        prop_assert!(CyclicSystem.distance(path.last().unwrap(), &target) < eps);
    }
}

#[test]
fn nbar_finite_fragment_joins_at_max() {
    for n in 0..=6u64 {
        for m in 0..=6u64 {
            let s = NbarState::finite(n, m);
            for (a, b) in [(n, m), (n + 1, m), (n, m + 1), (6, m), (n, 6)] {
                for (c, d) in [(n, m), (n + 2, m + 1), (6, 6)] {
                    let (p, q) = (NbarState::finite(a, b), NbarState::finite(c, d));
                    let top = p.join(&q);
                    assert!(s.reaches(&p) && s.reaches(&q));
                    assert!(p.reaches(&top) && q.reaches(&top));
                    assert_eq!(top, NbarState::finite(a.max(c), b.max(d)));
                }
            }
        }
    }
}

#[test]
fn infinite_states_are_far_from_finite_rows() {
    // (n, 1) never approaches (∞, 0): the second coordinate keeps it 1/2 away
    let target = NbarState(NatInf::Inf, NatInf::Fin(0));
    let d = NbarSystem.distance(&NbarState::finite(60, 1), &target);
    assert!(d > BigRational::new(1.into(), 2.into()));
}
