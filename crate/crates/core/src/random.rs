//! Seeded random series and systems for cross-validation and property runs.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Coeff, Field};
use crate::monomial::{monomials_below, Monomial, MonomialOrder, OrderKind};
use crate::rewrite::RewriteSystem;
use crate::series::{Precision, Series};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A non-zero coefficient from `{±1, ±2, ±3}` (plus `±1/2` over `Q`).
pub fn random_coeff<R: Rng>(rng: &mut R, field: Field) -> Coeff {
    loop {
        let n: i64 = rng.gen_range(-3..=3);
        if n == 0 {
            continue;
        }
        let c = match field {
            Field::Rational if rng.gen_bool(0.2) => {
                Coeff::Q(BigRational::new(BigInt::from(n.signum()), BigInt::from(2)))
            }
            _ => field.from_i64(n),
        };
        if !c.is_zero() {
            return c;
        }
    }
}

/// Up to `max_terms` random terms of degree `< degree_bound`, exact.
pub fn random_series<R: Rng>(
    rng: &mut R,
    nvars: usize,
    field: Field,
    degree_bound: u32,
    max_terms: usize,
) -> Series {
    let pool = monomials_below(nvars, degree_bound);
    random_series_from(rng, nvars, field, &pool, max_terms)
}

fn random_series_from<R: Rng>(
    rng: &mut R,
    nvars: usize,
    field: Field,
    pool: &[Monomial],
    max_terms: usize,
) -> Series {
    if pool.is_empty() || max_terms == 0 {
        return Series::zero(nvars, field);
    }
    let count = rng.gen_range(0..=max_terms);
    let terms: Vec<(Monomial, Coeff)> = (0..count)
        .map(|_| {
            let m = pool.choose(rng).expect("non-empty pool").clone();
            (m, random_coeff(rng, field))
        })
        .collect();
    Series::from_terms(nvars, field, terms, Precision::Infinite).expect("compatible terms")
}

/// A guaranteed member `Σ u_j·s_j` with random polynomial multipliers.
pub fn random_member<R: Rng>(
    rng: &mut R,
    sys: &RewriteSystem,
    degree_bound: u32,
    max_terms: usize,
) -> Series {
    let mut acc = Series::zero(sys.nvars(), sys.field());
    for g in sys.generators() {
        let u = random_series(rng, sys.nvars(), sys.field(), degree_bound, max_terms);
        acc = acc
            .add(&u.mul(g.series()).expect("compatible"))
            .expect("compatible");
    }
    acc
}

/// Shape of randomly generated systems.
#[derive(Clone, Debug)]
pub struct SystemShape {
    pub max_vars: usize,
    pub max_generators: usize,
    /// Leading terms get degree `1..=max_lead_degree`.
    pub max_lead_degree: u32,
    /// Tail terms get degree up to `max_lead_degree + max_tail_excess`.
    pub max_tail_excess: u32,
    pub max_tail_terms: usize,
}

impl Default for SystemShape {
    fn default() -> Self {
        SystemShape {
            max_vars: 3,
            max_generators: 4,
            max_lead_degree: 2,
            max_tail_excess: 2,
            max_tail_terms: 2,
        }
    }
}

/// A random system over `field` with a random degree-compatible order.
pub fn random_system<R: Rng>(rng: &mut R, field: Field, shape: &SystemShape) -> RewriteSystem {
    let nvars = rng.gen_range(1..=shape.max_vars);
    let kind = if rng.gen_bool(0.5) {
        OrderKind::Deglex
    } else {
        OrderKind::Degrevlex
    };
    let order = MonomialOrder::new(kind, nvars);
    let ngens = rng.gen_range(1..=shape.max_generators);
    let mut gens = Vec::with_capacity(ngens);
    for _ in 0..ngens {
        let lead_degree = rng.gen_range(1..=shape.max_lead_degree);
        let leads: Vec<Monomial> = monomials_below(nvars, lead_degree + 1)
            .into_iter()
            .filter(|m| m.degree() == lead_degree)
            .collect();
        let lead = leads.choose(rng).expect("some monomial of each degree").clone();
        let tail_pool: Vec<Monomial> =
            monomials_below(nvars, lead_degree + shape.max_tail_excess + 1)
                .into_iter()
                .filter(|m| m.degree() > lead_degree)
                .collect();
        let tail = random_series_from(rng, nvars, field, &tail_pool, shape.max_tail_terms);
        let g = Series::monomial(lead, random_coeff(rng, field))
            .add(&tail)
            .expect("compatible");
        gens.push(g);
    }
    RewriteSystem::new(field, order, gens).expect("generators are non-zero")
}
