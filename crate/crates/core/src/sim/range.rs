use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval sampled uniformly; written as `[min, max]` in configs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct UniformRange {
    pub min: f64,
    pub max: f64,
}

impl UniformRange {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub const fn fixed(v: f64) -> Self {
        Self { min: v, max: v }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.min + self.max)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.min == self.max {
            self.min
        } else {
            rng.random_range(self.min..=self.max)
        }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() || self.min > self.max {
            return Err(Error::config(
                name,
                format!("[{}, {}]", self.min, self.max),
                "range lower bound must not exceed upper bound",
            ));
        }
        Ok(())
    }

    pub(crate) fn validate_positive(&self, name: &str) -> Result<()> {
        self.validate(name)?;
        if !(self.min > 0.0) {
            return Err(Error::config(
                name,
                format!("[{}, {}]", self.min, self.max),
                "range must be positive",
            ));
        }
        Ok(())
    }

    pub(crate) fn validate_non_negative(&self, name: &str) -> Result<()> {
        self.validate(name)?;
        if !(self.min >= 0.0) {
            return Err(Error::config(
                name,
                format!("[{}, {}]", self.min, self.max),
                "range must be non-negative",
            ));
        }
        Ok(())
    }
}

impl From<[f64; 2]> for UniformRange {
    fn from(v: [f64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl From<UniformRange> for [f64; 2] {
    fn from(r: UniformRange) -> Self {
        [r.min, r.max]
    }
}

/// One range per resource dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceRanges {
    pub processing: UniformRange,
    pub cache: UniformRange,
    pub memory: UniformRange,
    pub bandwidth: UniformRange,
    pub storage: UniformRange,
}

impl ResourceRanges {
    pub fn as_array(&self) -> [UniformRange; 5] {
        [
            self.processing,
            self.cache,
            self.memory,
            self.bandwidth,
            self.storage,
        ]
    }

    pub(crate) fn validate(&self, prefix: &str, positive: bool) -> Result<()> {
        for (name, r) in crate::cost::Resources::NAMES.iter().zip(self.as_array()) {
            let key = format!("{prefix}.{name}");
            if positive {
                r.validate_positive(&key)?;
            } else {
                r.validate_non_negative(&key)?;
            }
        }
        Ok(())
    }
}
