use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The two spin sets with closed-form rate functions.
///
/// `Spherical` is the unit sphere in R^n, `Ising` the scaled hypercube
/// vertices with coordinates ±1/√n (a subset of the sphere).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinSet {
    Spherical,
    Ising,
}

impl SpinSet {
    pub const ALL: [SpinSet; 2] = [SpinSet::Spherical, SpinSet::Ising];

    pub fn as_str(self) -> &'static str {
        match self {
            SpinSet::Spherical => "spherical",
            SpinSet::Ising => "ising",
        }
    }
}

impl fmt::Display for SpinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpinSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "spherical" | "sph" => Ok(SpinSet::Spherical),
            "ising" | "sk" => Ok(SpinSet::Ising),
            other => Err(format!(
                "unknown spin set `{other}` (expected spherical or ising)"
            )),
        }
    }
}
