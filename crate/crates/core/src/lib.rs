//! Truncated commutative formal power series, the rewriting relation induced
//! by a generating set under a degree-compatible local monomial order, and
//! the procedures built on it: cofactor extraction (ideal membership modulo
//! `(X)^D`), joinability of reducts, a truncated standard-basis check, a
//! linear-algebra membership oracle, and abstract topological rewriting
//! systems.
//!
//! ```
//! use fps_rewrite::confluence::check_standard_basis;
//! use fps_rewrite::{limit_coefficients, Field, MonomialOrder, RewriteSystem, Ring};
//!
//! # fn main() -> fps_rewrite::Result<()> {
//! let ring = Ring::new(["x", "y", "z"], Field::Rational)?;
//! let gens = ["z - y", "z - x", "y - y^2", "x - x^2"]
//!     .iter()
//!     .map(|g| ring.parse(g))
//!     .collect::<Result<Vec<_>, _>>()?;
//! let sys = RewriteSystem::new(Field::Rational, MonomialOrder::deglex(3), gens)?;
//!
//! let res = sys.reduce_to_precision(&ring.parse("z")?, 4)?;
//! assert!(res.normal_form.is_empty());
//! assert_eq!(res.steps.len(), 4);
//!
//! let verdict = limit_coefficients(&ring.parse("z")?, &sys, 3)?;
//! assert!(verdict.is_member());
//! assert!(check_standard_basis(&sys, 8)?.passed);
//! # Ok(())
//! # }
//! ```

pub mod coeff;
pub mod cofactor;
pub mod config;
pub mod confluence;
pub mod error;
pub mod monomial;
pub mod oracle;
pub mod parse;
pub mod random;
pub mod rewrite;
pub mod series;
pub mod tars;

pub use coeff::{Coeff, Field};
pub use cofactor::{limit_coefficients, CofactorTrace, EliminationRecord, MembershipVerdict};
pub use confluence::{check_standard_basis, join, s_series, JoinResult, SBReport};
pub use config::SystemConfig;
pub use error::{Error, Result};
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use oracle::{cross_validate, membership_oracle, MembershipOracle};
pub use parse::Ring;
pub use rewrite::{ReductionResult, RewriteStep, RewriteSystem, TieBreak};
pub use series::{AdicDistance, LeadingData, Precision, Series, Valuation};
