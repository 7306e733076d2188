//! Fuzzy multi-criteria decision making: triangular fuzzy numbers, fuzzy
//! AHP criteria weighting and fuzzy TOPSIS ranking. Nothing in here knows
//! about fog devices.

mod ahp;
mod tfn;
mod topsis;

pub use ahp::{
    consistency_ratio, fahp_weights, fahp_weights_with, CriteriaWeights, Direction, Fuzzification,
    PairwiseComparisonMatrix, CONSISTENCY_THRESHOLD, RANDOM_INDEX, RECIPROCITY_TOLERANCE,
};
pub use tfn::{fuzzify_saaty, TriangularFuzzyNumber, SAATY_MAX, SAATY_MIN};
pub use topsis::{ftopsis_rank, DecisionMatrix, RankingResult};
