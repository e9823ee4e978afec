use std::fmt;
use std::str::FromStr;

use crate::error::ChhError;
use crate::report::ChhReport;
use crate::Item;

/// Common surface of the streaming algorithms and the exact oracle.
pub trait ChhAlgorithm {
    fn update(&mut self, x: Item, y: Item);

    /// Answers a query with the given thresholds. The result is sorted.
    fn query(&self, phi1: f64, phi2: f64) -> ChhReport;

    /// Tuples processed.
    fn processed(&self) -> u64;

    /// Modeled memory footprint: 12 bytes per item counter, 16 per tuple
    /// counter. `None` for structures that are not bounded.
    fn space_bytes_model(&self) -> Option<u64>;

    fn name(&self) -> &'static str;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Csschh,
    Mgchh,
    Exact,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Csschh => "csschh",
            Algorithm::Mgchh => "mgchh",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = ChhError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csschh" => Ok(Algorithm::Csschh),
            "mgchh" => Ok(Algorithm::Mgchh),
            "exact" => Ok(Algorithm::Exact),
            other => Err(ChhError::Usage(format!(
                "unknown algorithm '{other}' (expected csschh, mgchh or exact)"
            ))),
        }
    }
}
