use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::compare::Comparator;
use crate::error::{Error, Result};

/// Observed outcome of a comparison `x ? y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observed {
    /// `x ≺ y`
    Less,
    /// `x ≻ y`
    Greater,
}

impl Observed {
    pub fn reverse(self) -> Self {
        match self {
            Observed::Less => Observed::Greater,
            Observed::Greater => Observed::Less,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    PersistentBernoulli,
    ErrorFree,
    Threshold,
}

impl fmt::Display for OracleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMode::PersistentBernoulli => "persistent-bernoulli",
            OracleMode::ErrorFree => "error-free",
            OracleMode::Threshold => "threshold",
        })
    }
}

impl FromStr for OracleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "persistent-bernoulli" | "persistent" => Ok(OracleMode::PersistentBernoulli),
            "error-free" => Ok(OracleMode::ErrorFree),
            "threshold" => Ok(OracleMode::Threshold),
            other => Err(Error::InvalidParameter(format!("unknown oracle mode {other:?}"))),
        }
    }
}

/// Serialized form of an oracle: `{p, seed, mode, tau?}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub p: f64,
    pub seed: u64,
    pub mode: OracleMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<u32>,
}

/// Persistent noisy comparator over the elements `1..=n`.
///
/// The outcome for the unordered pair `{x, y}` is a pure function of
/// `(min, max, seed)`: the pair is misreported iff a 53-bit hash of the key
/// falls below `p · 2^53`. No state is kept, so re-querying a pair always
/// gives the same answer and the oracle can be shared across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OracleConfig", into = "OracleConfig")]
pub struct ComparisonOracle {
    config: OracleConfig,
    mixed_seed: u64,
    cutoff: u64,
}

const UNIT_BITS: u32 = 53;

impl ComparisonOracle {
    pub fn new(config: OracleConfig) -> Result<Self> {
        if !(0.0..0.5).contains(&config.p) {
            return Err(Error::InvalidParameter(format!(
                "error probability p = {} must lie in [0, 1/2)",
                config.p
            )));
        }
        match (config.mode, config.tau) {
            (OracleMode::ErrorFree, _) if config.p != 0.0 => {
                return Err(Error::InvalidParameter(
                    "error-free mode requires p = 0".into(),
                ))
            }
            (OracleMode::Threshold, None) => {
                return Err(Error::InvalidParameter("threshold mode requires tau".into()))
            }
            (OracleMode::PersistentBernoulli | OracleMode::ErrorFree, Some(_)) => {
                return Err(Error::InvalidParameter(
                    "tau is only meaningful in threshold mode".into(),
                ))
            }
            _ => {}
        }
        let cutoff = match config.mode {
            OracleMode::ErrorFree => 0,
            _ => (config.p * (1u64 << UNIT_BITS) as f64) as u64,
        };
        Ok(Self {
            config,
            mixed_seed: splitmix64(config.seed),
            cutoff,
        })
    }

    pub fn persistent(p: f64, seed: u64) -> Result<Self> {
        Self::new(OracleConfig {
            p,
            seed,
            mode: OracleMode::PersistentBernoulli,
            tau: None,
        })
    }

    pub fn error_free() -> Self {
        Self::new(OracleConfig {
            p: 0.0,
            seed: 0,
            mode: OracleMode::ErrorFree,
            tau: None,
        })
        .expect("error-free config is valid")
    }

    /// Pairs whose values differ by more than `tau` are always reported
    /// correctly; closer pairs flip with probability `p`.
    pub fn threshold(p: f64, tau: u32, seed: u64) -> Result<Self> {
        Self::new(OracleConfig {
            p,
            seed,
            mode: OracleMode::Threshold,
            tau: Some(tau),
        })
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    pub fn p(&self) -> f64 {
        self.config.p
    }

    pub fn seed(&self) -> u64 {
        self.config.seed
    }

    pub fn mode(&self) -> OracleMode {
        self.config.mode
    }

    /// Whether the pair `{x, y}` is misreported. Symmetric in its arguments.
    pub fn is_flipped(&self, x: u32, y: u32) -> bool {
        if self.cutoff == 0 {
            return false;
        }
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        if let Some(tau) = self.config.tau {
            if hi - lo > tau {
                return false;
            }
        }
        let key = ((lo as u64) << 32) | hi as u64;
        (splitmix64(self.mixed_seed ^ key) >> (64 - UNIT_BITS)) < self.cutoff
    }

    pub fn compare(&self, x: u32, y: u32) -> Result<Observed> {
        if x == y {
            return Err(Error::SelfComparison(x));
        }
        let truth = if x < y { Observed::Less } else { Observed::Greater };
        Ok(if self.is_flipped(x, y) { truth.reverse() } else { truth })
    }
}

impl TryFrom<OracleConfig> for ComparisonOracle {
    type Error = Error;

    fn try_from(config: OracleConfig) -> Result<Self> {
        Self::new(config)
    }
}

impl From<ComparisonOracle> for OracleConfig {
    fn from(o: ComparisonOracle) -> Self {
        o.config
    }
}

impl Comparator<u32> for ComparisonOracle {
    /// Observed `a ≺ b`. Callers never pass `a == b`; it answers `false`.
    fn less(&self, a: u32, b: u32) -> bool {
        a != b && ((a < b) != self.is_flipped(a, b))
    }
}

/// SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
