//! System files: `{vars, order, field, generators, precision}` as JSON.

use serde::{Deserialize, Serialize};

use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::monomial::{MonomialOrder, OrderKind};
use crate::parse::Ring;
use crate::rewrite::RewriteSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub vars: Vec<String>,
    pub order: OrderKind,
    pub field: Field,
    pub generators: Vec<String>,
    /// Default precision `D` for verbs that take one.
    pub precision: u32,
}

impl SystemConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn ring(&self) -> Result<Ring> {
        Ring::new(self.vars.iter().map(String::as_str), self.field)
    }

    /// Validates and builds the ring and rewriting system.
    pub fn build(&self) -> Result<(Ring, RewriteSystem)> {
        if self.precision == 0 {
            return Err(Error::Config("precision must be at least 1".into()));
        }
        let ring = self.ring()?;
        let gens = self
            .generators
            .iter()
            .map(|g| ring.parse(g))
            .collect::<Result<Vec<_>>>()?;
        if let Some(i) = gens.iter().position(|g| g.is_exact_zero()) {
            return Err(Error::Config(format!(
                "generator {i} ({:?}) is zero",
                self.generators[i]
            )));
        }
        let order = MonomialOrder::new(self.order, ring.nvars());
        let sys = RewriteSystem::new(self.field, order, gens)?;
        Ok((ring, sys))
    }
}
