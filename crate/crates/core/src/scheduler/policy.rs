use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cost::check_weight_pair;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Amclbt,
    RoundRobin,
    WeightedRoundRobin,
    Random,
    LeastLoaded,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::Amclbt,
        PolicyKind::RoundRobin,
        PolicyKind::WeightedRoundRobin,
        PolicyKind::Random,
        PolicyKind::LeastLoaded,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::Amclbt => "amclbt",
            PolicyKind::RoundRobin => "round_robin",
            PolicyKind::WeightedRoundRobin => "weighted_round_robin",
            PolicyKind::Random => "random",
            PolicyKind::LeastLoaded => "least_loaded",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Ok(match norm.as_str() {
            "amclbt" => PolicyKind::Amclbt,
            "round_robin" | "rr" => PolicyKind::RoundRobin,
            "weighted_round_robin" | "wrr" => PolicyKind::WeightedRoundRobin,
            "random" => PolicyKind::Random,
            "least_loaded" => PolicyKind::LeastLoaded,
            _ => return Err(Error::config("policy", s, "unknown policy name")),
        })
    }
}

/// A placement policy with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchedulerPolicy {
    /// Fuzzy-ranked multi-criteria selection; `wq` weighs the device rank
    /// and `we` the inverse processing time.
    Amclbt {
        wq: f64,
        we: f64,
    },
    RoundRobin,
    /// Smooth weighted round robin. Without explicit weights, devices are
    /// weighted by their MIPS rating.
    WeightedRoundRobin {
        weights: Option<Vec<f64>>,
    },
    Random,
    LeastLoaded,
}

impl SchedulerPolicy {
    pub fn amclbt(wq: f64, we: f64) -> Result<Self> {
        check_weight_pair(wq, we)?;
        Ok(SchedulerPolicy::Amclbt { wq, we })
    }

    pub fn kind(&self) -> PolicyKind {
        match self {
            SchedulerPolicy::Amclbt { .. } => PolicyKind::Amclbt,
            SchedulerPolicy::RoundRobin => PolicyKind::RoundRobin,
            SchedulerPolicy::WeightedRoundRobin { .. } => PolicyKind::WeightedRoundRobin,
            SchedulerPolicy::Random => PolicyKind::Random,
            SchedulerPolicy::LeastLoaded => PolicyKind::LeastLoaded,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SchedulerPolicy::Amclbt { wq, we } => check_weight_pair(*wq, *we),
            SchedulerPolicy::WeightedRoundRobin { weights: Some(w) } => {
                if w.is_empty() || w.iter().any(|x| !(*x > 0.0)) {
                    Err(Error::config(
                        "wrr_weights",
                        format!("{w:?}"),
                        "weights must be positive",
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Configuration-independent default parameters for a policy kind.
impl From<PolicyKind> for SchedulerPolicy {
    fn from(kind: PolicyKind) -> Self {
        match kind {
            PolicyKind::Amclbt => SchedulerPolicy::Amclbt { wq: 0.5, we: 0.5 },
            PolicyKind::RoundRobin => SchedulerPolicy::RoundRobin,
            PolicyKind::WeightedRoundRobin => SchedulerPolicy::WeightedRoundRobin { weights: None },
            PolicyKind::Random => SchedulerPolicy::Random,
            PolicyKind::LeastLoaded => SchedulerPolicy::LeastLoaded,
        }
    }
}
