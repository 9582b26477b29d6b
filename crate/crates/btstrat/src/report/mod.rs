//! Deterministic report payloads: configuration, header, checks and the
//! bodies of the `report`, `poset` and `verify` commands.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::lattice::AmbientSpace;
use crate::strata::tuple::WINDOW_RADIUS;
use crate::strata::ParahoricTuple;

mod poset;
mod stratification;
pub mod verify;

pub use poset::{cmd_poset, PosetBody, PosetNode, POSET_NODE_LIMIT};
pub use stratification::{cmd_report, BlockReport, ComponentReport, FamilyReport, FineReport, IndexReport, StratificationBody};
pub use verify::{cmd_verify, Suite, VerifyBody};

/// Version tag of the serialized report layout.
pub const SCHEMA_VERSION: &str = "btstrat-report/1";

/// Largest coefficient extension `d` accepted by the commands.
pub const MAX_EXTENSION: u32 = 2;

/// Validated parameters shared by every command.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ReportConfig {
    pub n: usize,
    pub h: Vec<usize>,
    pub q: u32,
    pub d: u32,
    pub window_radius: usize,
}

/// `(p, e)` with `q = p^e` for an odd prime `p`.
pub fn split_prime_power(q: u32) -> Result<(u32, u32)> {
    let p = (2..=q).find(|p| q % p == 0).ok_or_else(|| Error::InvalidField(format!("q = {q} is not a prime power")))?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 || p == 2 {
        return Err(Error::InvalidField(format!("q = {q} is not a power of an odd prime")));
    }
    Ok((p, e))
}

impl ReportConfig {
    pub fn new(n: usize, h: Vec<usize>, q: u32, d: u32) -> Result<Self> {
        ParahoricTuple::new(n, h.clone())?;
        split_prime_power(q)?;
        if d == 0 || d > MAX_EXTENSION {
            return Err(Error::InvalidField(format!("extension degree d = {d} outside 1..={MAX_EXTENSION}")));
        }
        Ok(ReportConfig { n, h, q, d, window_radius: WINDOW_RADIUS })
    }

    pub fn tuple(&self) -> Result<ParahoricTuple> {
        ParahoricTuple::new(self.n, self.h.clone())
    }

    pub fn prime_power(&self) -> Result<(u32, u32)> {
        split_prime_power(self.q)
    }

    /// The ambient space over `F_{q^{2d}}`.
    pub fn ambient(&self) -> Result<AmbientSpace> {
        let (p, e) = self.prime_power()?;
        self.tuple()?.ambient(p, e, self.d)
    }

    fn field(&self) -> Result<Arc<Field>> {
        let (p, e) = self.prime_power()?;
        Ok(Arc::new(Field::new(FieldSpec::new(p, e, self.d))?))
    }
}

/// The top field `F_{q^{2d}}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FieldInfo {
    pub p: u32,
    pub e: u32,
    pub d: u32,
    pub q: u32,
    pub size: u32,
    pub modulus: String,
}

/// Provenance of a report.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Header {
    pub schema: String,
    pub crate_version: String,
    pub command: String,
    pub field: FieldInfo,
    pub gram: String,
    pub det_valuation: usize,
    pub config: ReportConfig,
}

impl Header {
    pub fn new(command: &str, config: &ReportConfig) -> Result<Self> {
        let field = config.field()?;
        let spec = field.spec();
        let gram = config.tuple()?.gram();
        Ok(Header {
            schema: SCHEMA_VERSION.to_string(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            field: FieldInfo { p: spec.p, e: spec.e, d: spec.d, q: spec.q(), size: field.size(), modulus: field.modulus_string() },
            gram: format!("{gram:?}"),
            det_valuation: gram.det_valuation(),
            config: config.clone(),
        })
    }
}

/// Outcome of one verification, with counterexamples when it fails.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub counterexamples: Vec<String>,
}

/// Counterexamples kept per check.
const COUNTEREXAMPLE_LIMIT: usize = 10;

impl Check {
    pub fn new(name: &str, detail: String, counterexamples: Vec<String>) -> Self {
        let passed = counterexamples.is_empty();
        let mut counterexamples = counterexamples;
        counterexamples.truncate(COUNTEREXAMPLE_LIMIT);
        Check { name: name.to_string(), passed, detail, counterexamples }
    }

    pub fn outcome(name: &str, passed: bool, detail: String) -> Self {
        Check { name: name.to_string(), passed, detail, counterexamples: Vec::new() }
    }
}

/// A report: header, command payload and checks.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Report<B> {
    pub header: Header,
    pub body: B,
    pub checks: Vec<Check>,
}

impl<B> Report<B> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(split_prime_power(9).unwrap(), (3, 2));
        assert_eq!(split_prime_power(5).unwrap(), (5, 1));
        assert!(split_prime_power(8).is_err());
        assert!(split_prime_power(15).is_err());
        assert!(split_prime_power(1).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(ReportConfig::new(3, vec![0, 2], 3, 1).is_ok());
        assert!(ReportConfig::new(3, vec![0, 1], 3, 1).is_err());
        assert!(ReportConfig::new(3, vec![0], 3, 3).is_err());
        assert!(ReportConfig::new(3, vec![0], 4, 1).is_err());
    }
}
