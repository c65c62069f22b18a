//! Brute-force membership in `I + (X)^D` by exact linear algebra.
//!
//! Modulo `(X)^D` the ideal is spanned by the truncations of `m·s_j` with
//! `deg(m) + deg(lm(s_j)) < D`. Membership of `f` is then a finite linear
//! system, solved by Gaussian elimination over the coefficient field. This
//! is independent of the rewriting machinery and serves as ground truth.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::Coeff;
use crate::cofactor::{limit_coefficients, verify_cofactor_identity};
use crate::error::Result;
use crate::monomial::{monomials_below, Monomial};
use crate::random::{random_member, random_series, rng_from_seed};
use crate::rewrite::RewriteSystem;
use crate::series::{Precision, Series};

type SparseRow = BTreeMap<usize, Coeff>;

/// Seed used by randomized front ends when none is given.
pub const DEFAULT_SEED: u64 = 20240607;

/// Rows `(m, j)`, columns the monomials of degree `< D` (sorted `<`-ascending),
/// entries the coefficients of `m·s_j mod (X)^D`.
#[derive(Clone, Debug)]
pub struct TruncationBasisMatrix {
    precision: u32,
    rows: Vec<(Monomial, usize)>,
    columns: Vec<Monomial>,
    column_index: HashMap<Monomial, usize>,
    entries: Vec<SparseRow>,
}

impl TruncationBasisMatrix {
    pub fn build(sys: &RewriteSystem, d: u32) -> Result<Self> {
        let zero = Series::zero(sys.nvars(), sys.field());
        sys.check_precision(&zero, d)?;
        let mut columns = monomials_below(sys.nvars(), d);
        columns.sort_by(|a, b| sys.order().cmp(a, b));
        let column_index: HashMap<Monomial, usize> = columns
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut rows = Vec::new();
        let mut entries = Vec::new();
        let one = sys.field().one();
        for (j, g) in sys.generators().iter().enumerate() {
            let lead_degree = g.leading_monomial().degree();
            for m in monomials_below(sys.nvars(), d.saturating_sub(lead_degree)) {
                let product = g.series().mul_term(&m, &one)?.truncate(d);
                entries.push(
                    product
                        .terms()
                        .map(|(t, c)| (column_index[t], c.clone()))
                        .collect(),
                );
                rows.push((m, j));
            }
        }
        Ok(TruncationBasisMatrix {
            precision: d,
            rows,
            columns,
            column_index,
            entries,
        })
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn rows(&self) -> &[(Monomial, usize)] {
        &self.rows
    }

    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    pub fn entry(&self, row: usize, column: usize) -> Option<&Coeff> {
        self.entries.get(row)?.get(&column)
    }

    fn vector(&self, f: &Series) -> SparseRow {
        f.terms()
            .filter(|(m, _)| m.degree() < self.precision)
            .map(|(m, c)| (self.column_index[m], c.clone()))
            .collect()
    }
}

struct EchelonRow {
    /// Pivot entry normalized to one.
    row: SparseRow,
    /// Expression of `row` over the original matrix rows.
    combo: SparseRow,
}

/// Row echelon form of a [`TruncationBasisMatrix`], reusable across queries.
pub struct MembershipOracle {
    matrix: TruncationBasisMatrix,
    pivots: BTreeMap<usize, EchelonRow>,
    nvars: usize,
    field: crate::coeff::Field,
    ngens: usize,
}

/// One solution: `f ≡ Σ coefficient·m·s_j (mod (X)^D)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSolution {
    pub rows: Vec<(Monomial, usize, Coeff)>,
    /// The solution grouped per generator as polynomial cofactors.
    pub cofactors: Vec<Series>,
}

fn axpy(target: &mut SparseRow, factor: &Coeff, src: &SparseRow) {
    for (k, v) in src {
        let add = factor * v;
        match target.entry(*k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !add.is_zero() {
                    e.insert(add);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &add;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }
}

impl MembershipOracle {
    pub fn new(sys: &RewriteSystem, d: u32) -> Result<Self> {
        let matrix = TruncationBasisMatrix::build(sys, d)?;
        let mut pivots: BTreeMap<usize, EchelonRow> = BTreeMap::new();
        let one = sys.field().one();
        for (r, entries) in matrix.entries.iter().enumerate() {
            let mut row = entries.clone();
            let mut combo = SparseRow::from([(r, one.clone())]);
            while let Some((&col, lead)) = row.iter().next() {
                let Some(p) = pivots.get(&col) else {
                    let inv = lead.inverse().expect("stored entries are non-zero");
                    row.values_mut().for_each(|v| *v = &*v * &inv);
                    combo.values_mut().for_each(|v| *v = &*v * &inv);
                    pivots.insert(col, EchelonRow { row, combo });
                    break;
                };
                let factor = -lead;
                axpy(&mut row, &factor, &p.row);
                axpy(&mut combo, &factor, &p.combo);
            }
        }
        Ok(MembershipOracle {
            matrix,
            pivots,
            nvars: sys.nvars(),
            field: sys.field(),
            ngens: sys.len(),
        })
    }

    pub fn matrix(&self) -> &TruncationBasisMatrix {
        &self.matrix
    }

    /// Dimension of the image of `I` in the truncated quotient.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solves `f mod (X)^D ∈ row space`; `None` when there is no solution.
    pub fn solve(&self, f: &Series) -> Result<Option<OracleSolution>> {
        let d = self.matrix.precision;
        if !f.prec().at_least(d) {
            return Err(crate::Error::PrecisionLoss {
                required: d,
                available: f.prec(),
            });
        }
        let mut residue = self.matrix.vector(f);
        let mut combo = SparseRow::new();
        while let Some((&col, lead)) = residue.iter().next() {
            let Some(p) = self.pivots.get(&col) else {
                return Ok(None);
            };
            let factor = lead.clone();
            axpy(&mut residue, &-&factor, &p.row);
            axpy(&mut combo, &factor, &p.combo);
        }
        let mut cofactors = vec![Series::zero(self.nvars, self.field); self.ngens];
        let mut rows = Vec::with_capacity(combo.len());
        for (r, c) in combo {
            let (m, j) = &self.matrix.rows[r];
            cofactors[*j].add_term(m.clone(), &c);
            rows.push((m.clone(), *j, c));
        }
        Ok(Some(OracleSolution { rows, cofactors }))
    }
}

/// One-shot membership query.
pub fn membership_oracle(f: &Series, sys: &RewriteSystem, d: u32) -> Result<Option<OracleSolution>> {
    MembershipOracle::new(sys, d)?.solve(f)
}

/// How a reduction verdict and the oracle can disagree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivergenceClass {
    /// Oracle finds a combination the reduction misses: expected exactly
    /// when `G` is not a standard basis at this precision.
    NotStandardBasis,
    /// Reduction claims membership the oracle refutes: a soundness bug.
    Unsound,
    /// A returned certificate failed exact recomputation.
    BadCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub input: Series,
    pub reduction_member: bool,
    pub oracle_member: bool,
    pub class: DivergenceClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidationReport {
    pub precision: u32,
    pub trials: usize,
    pub seed: u64,
    pub comparisons: usize,
    pub members_found: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Compares the reduction verdict with the oracle for one input; `None`
/// when they agree and both certificates check out.
pub fn compare_membership(
    f: &Series,
    sys: &RewriteSystem,
    oracle: &MembershipOracle,
) -> Result<(bool, Option<Disagreement>)> {
    let d = oracle.matrix.precision;
    let verdict = limit_coefficients(f, sys, d)?;
    let solution = oracle.solve(f)?;
    let reduction_member = verdict.is_member();
    let oracle_member = solution.is_some();
    let certificates_ok = (!reduction_member || verify_cofactor_identity(f, &verdict, sys, d))
        && solution
            .as_ref()
            .map_or(Ok(true), |s| sys.combine(&s.cofactors, d).map(|c| c == f.truncate(d)))?;
    let class = if !certificates_ok {
        Some(DivergenceClass::BadCertificate)
    } else {
        match (reduction_member, oracle_member) {
            (true, false) => Some(DivergenceClass::Unsound),
            (false, true) => Some(DivergenceClass::NotStandardBasis),
            _ => None,
        }
    };
    Ok((
        oracle_member,
        class.map(|class| Disagreement {
            input: f.clone(),
            reduction_member,
            oracle_member,
            class,
        }),
    ))
}

/// Each trial compares a random series and a random guaranteed member.
pub fn cross_validate(
    sys: &RewriteSystem,
    d: u32,
    trials: usize,
    seed: u64,
) -> Result<CrossValidationReport> {
    let mut report = CrossValidationReport {
        precision: d,
        trials,
        seed,
        comparisons: 0,
        members_found: 0,
        disagreements: Vec::new(),
    };
    if trials == 0 {
        return Ok(report);
    }
    let oracle = MembershipOracle::new(sys, d)?;
    let mut rng = rng_from_seed(seed);
    for _ in 0..trials {
        // low degree bounds make non-members likely
        let bound = rng.gen_range(1..=d);
        let inputs = [
            random_series(&mut rng, sys.nvars(), sys.field(), bound, 4),
            random_member(&mut rng, sys, d.div_ceil(2).max(1), 2),
        ];
        for f in inputs {
            let (member, disagreement) = compare_membership(&f, sys, &oracle)?;
            report.comparisons += 1;
            report.members_found += usize::from(member);
            report.disagreements.extend(disagreement);
        }
    }
    debug_assert!(sys.working_precision() >= Precision::Finite(d));
    Ok(report)
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

    #[test]
    fn matrix_shape() {
        let (_, sys) = idempotent();
        let m = TruncationBasisMatrix::build(&sys, 3).unwrap();
        assert_eq!(m.columns().len(), 10);
        // four generators of lead degree 1, multipliers of degree < 2
        assert_eq!(m.rows().len(), 16);
        assert!(m.columns()[0].is_one());
    }

    #[test]
    fn z_is_solvable() {
        let (r, sys) = idempotent();
        let z = r.parse("z").unwrap();
        let sol = membership_oracle(&z, &sys, 3).unwrap().unwrap();
        assert_eq!(sys.combine(&sol.cofactors, 3).unwrap(), z.truncate(3));
    }

    #[test]
    fn one_is_not_in_the_span() {
        let (r, sys) = idempotent();
        assert!(membership_oracle(&r.parse("1").unwrap(), &sys, 2).unwrap().is_none());
    }

    #[test]
    fn zero_has_the_zero_solution() {
        let (_, sys) = idempotent();
        let sol = membership_oracle(&Series::zero(3, Field::Rational), &sys, 4)
            .unwrap()
            .unwrap();
        assert!(sol.rows.is_empty());
        assert!(sol.cofactors.iter().all(Series::is_exact_zero));
    }

    #[test]
    fn without_constants_everything_is_a_member() {
        // the ideal of the idempotent's example is the maximal ideal
        let (_, sys) = idempotent();
        let oracle = MembershipOracle::new(&sys, 5).unwrap();
        assert_eq!(oracle.rank(), oracle.matrix().columns().len() - 1);
    }

    #[test]
    fn cross_validation_on_idempotent_system() {
        let (_, sys) = idempotent();
        let report = cross_validate(&sys, 6, 100, 7).unwrap();
        assert_eq!(report.comparisons, 200);
        assert!(report.disagreements.is_empty(), "{:?}", report.disagreements);
        assert!(report.members_found > 0 && report.members_found < 200);
    }

    #[test]
    fn zero_trials_is_empty() {
        let (_, sys) = idempotent();
        let report = cross_validate(&sys, 6, 0, 1).unwrap();
        assert_eq!(report.comparisons, 0);
        assert!(report.disagreements.is_empty());
    }

    #[test]
    fn non_basis_divergence_is_classified() {
        let r = Ring::new(["x", "y"], Field::Rational).unwrap();
        let gens = vec![r.parse("x^2 - y^5").unwrap(), r.parse("x*y").unwrap()];
        let sys = RewriteSystem::new(Field::Rational, MonomialOrder::deglex(2), gens).unwrap();
        let oracle = MembershipOracle::new(&sys, 8).unwrap();
        let (member, dis) = compare_membership(&r.parse("y^6").unwrap(), &sys, &oracle).unwrap();
        assert!(member);
        let dis = dis.unwrap();
        assert!(!dis.reduction_member);
        assert_eq!(dis.class, DivergenceClass::NotStandardBasis);
    }
}
