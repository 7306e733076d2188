//! Criteria weighting from pairwise comparison judgments.
//!
//! Crisp Saaty judgments are fuzzified, aggregated per row with the fuzzy
//! geometric mean, normalized by the fuzzy sum of row means and defuzzified
//! by centroid.

use serde::{Deserialize, Serialize};

use super::tfn::{fuzzify_saaty, TriangularFuzzyNumber};
use crate::error::{Error, Result};

/// Tolerance on `a_ij * a_ji = 1`.
pub const RECIPROCITY_TOLERANCE: f64 = 1e-6;

/// Judgments with a consistency ratio above this are usually revised.
pub const CONSISTENCY_THRESHOLD: f64 = 0.1;

/// Saaty random consistency index for `n = 1..=10`.
pub const RANDOM_INDEX: [f64; 10] = [0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];

/// A square, positive, reciprocal matrix of crisp judgments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct PairwiseComparisonMatrix {
    entries: Vec<Vec<f64>>,
}

impl PairwiseComparisonMatrix {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidComparisonMatrix("matrix is empty".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidComparisonMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::InvalidComparisonMatrix(format!(
                        "entry ({i}, {j}) = {v} is not positive"
                    )));
                }
            }
            if (row[i] - 1.0).abs() > RECIPROCITY_TOLERANCE {
                return Err(Error::InvalidComparisonMatrix(format!(
                    "diagonal entry ({i}, {i}) = {} is not 1",
                    row[i]
                )));
            }
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in (i + 1)..n {
                let p = entries[i][j] * entries[j][i];
                if (p - 1.0).abs() > RECIPROCITY_TOLERANCE {
                    return Err(Error::InvalidComparisonMatrix(format!(
                        "entries ({i}, {j}) = {} and ({j}, {i}) = {} are not reciprocal",
                        entries[i][j], entries[j][i]
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Builds a matrix from judgments printed with rounded reciprocals
    /// (`0.33` for 1/3, `0.14` for 1/7): every entry below 1 that lies
    /// within 0.01 of `1/k` for an integer `k` in `2..=9` is snapped to the
    /// exact reciprocal before validation.
    pub fn from_rounded(mut entries: Vec<Vec<f64>>) -> Result<Self> {
        for v in entries.iter_mut().flatten() {
            if *v > 0.0 && *v < 1.0 {
                if let Some(k) = (2..=9).find(|&k| (*v - 1.0 / k as f64).abs() < 0.01) {
                    *v = 1.0 / k as f64;
                }
            }
        }
        Self::new(entries)
    }

    /// The six-criteria judgment matrix over available processing, cache,
    /// memory, bandwidth, storage and energy used by the fog scheduler.
    pub fn fog_device_criteria() -> Self {
        const T: f64 = 1.0 / 3.0;
        Self::new(vec![
            vec![1.0, 3.0, 2.0, 2.0, 1.0, 3.0],
            vec![T, 1.0, 3.0, 1.0, 3.0, 2.0],
            vec![0.5, T, 1.0, 2.0, 3.0, 2.0],
            vec![0.5, 1.0, 0.5, 1.0, 2.0, 3.0],
            vec![1.0, T, T, 0.5, 1.0, 2.0],
            vec![T, 0.5, 0.5, T, 0.5, 1.0],
        ])
        .expect("reference matrix is reciprocal")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }

    /// Reorders criteria so that new criterion `k` is old criterion `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let entries = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| self.entries[i][j]).collect())
            .collect();
        Self { entries }
    }
}

impl TryFrom<Vec<Vec<f64>>> for PairwiseComparisonMatrix {
    type Error = Error;

    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PairwiseComparisonMatrix> for Vec<Vec<f64>> {
    fn from(m: PairwiseComparisonMatrix) -> Self {
        m.entries
    }
}

/// Whether larger ratings on a criterion are preferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Benefit,
    Cost,
}

/// Crisp, normalized criteria weights and their optimization directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaWeights {
    weights: Vec<f64>,
    directions: Vec<Direction>,
}

impl CriteriaWeights {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(weights: Vec<f64>, directions: Vec<Direction>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no criteria".into()));
        }
        if weights.len() != directions.len() {
            return Err(Error::InvalidWeights(format!(
                "{} weights but {} directions",
                weights.len(),
                directions.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!("weight {w} is negative")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(Self {
            weights,
            directions,
        })
    }

    /// Normalizes arbitrary non-negative scores into weights.
    pub fn from_scores(scores: &[f64], directions: Vec<Direction>) -> Result<Self> {
        let sum: f64 = scores.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidWeights("scores sum to zero".into()));
        }
        Self::new(scores.iter().map(|s| s / sum).collect(), directions)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn with_directions(mut self, directions: Vec<Direction>) -> Result<Self> {
        if directions.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                actual: directions.len(),
            });
        }
        self.directions = directions;
        Ok(self)
    }
}

/// How crisp judgments enter the fuzzy aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fuzzification {
    /// One Saaty step of spread on each side.
    #[default]
    Saaty,
    /// Degenerate numbers; reduces to the crisp geometric-mean method.
    Crisp,
}

/// Criteria weights with default fuzzification. All directions are
/// `Benefit`; callers attach the real directions.
pub fn fahp_weights(matrix: &PairwiseComparisonMatrix) -> Result<CriteriaWeights> {
    fahp_weights_with(matrix, Fuzzification::Saaty)
}

pub fn fahp_weights_with(
    matrix: &PairwiseComparisonMatrix,
    mode: Fuzzification,
) -> Result<CriteriaWeights> {
    let n = matrix.len();
    let fuzzy: Vec<Vec<TriangularFuzzyNumber>> = matrix
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| match mode {
                    Fuzzification::Saaty => fuzzify_saaty(v),
                    Fuzzification::Crisp => Ok(TriangularFuzzyNumber::crisp(v)),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    // Row-wise fuzzy geometric mean, computed in log space.
    let inv_n = 1.0 / n as f64;
    let means: Vec<[f64; 3]> = fuzzy
        .iter()
        .map(|row| {
            let mut acc = [0.0; 3];
            for t in row {
                acc[0] += t.l().ln();
                acc[1] += t.m().ln();
                acc[2] += t.u().ln();
            }
            acc.map(|s| (s * inv_n).exp())
        })
        .collect();

    let total = means.iter().fold([0.0; 3], |acc, r| {
        [acc[0] + r[0], acc[1] + r[1], acc[2] + r[2]]
    });

    // r_i (x) (sum)^-1 = (l_i / sum_u, m_i / sum_m, u_i / sum_l)
    let crisp: Vec<f64> = means
        .iter()
        .map(|r| {
            let w = TriangularFuzzyNumber::new(r[0] / total[2], r[1] / total[1], r[2] / total[0])
                .expect("geometric means preserve ordering");
            w.centroid()
        })
        .collect();

    CriteriaWeights::from_scores(&crisp, vec![Direction::Benefit; n])
}

const POWER_ITERATIONS: usize = 50;
const POWER_TOLERANCE: f64 = 1e-10;

/// Saaty consistency ratio `CI / RI` of the crisp judgments, with the
/// principal eigenvalue estimated by power iteration.
pub fn consistency_ratio(matrix: &PairwiseComparisonMatrix) -> Result<f64> {
    let n = matrix.len();
    if n > RANDOM_INDEX.len() {
        return Err(Error::TooManyCriteria(n));
    }
    if n <= 2 {
        return Ok(0.0);
    }
    let lambda = principal_eigenvalue(matrix);
    let ci = (lambda - n as f64) / (n as f64 - 1.0);
    Ok(ci / RANDOM_INDEX[n - 1])
}

fn principal_eigenvalue(matrix: &PairwiseComparisonMatrix) -> f64 {
    let n = matrix.len();
    let a = matrix.rows();
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = n as f64;
    for _ in 0..POWER_ITERATIONS {
        let next: Vec<f64> = a
            .iter()
            .map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum())
            .collect();
        // v is kept at unit L1 norm, so the L1 norm of A v estimates lambda.
        let norm: f64 = next.iter().sum();
        let delta: f64 = next.iter().zip(&v).map(|(x, y)| (x / norm - y).abs()).sum();
        v = next.into_iter().map(|x| x / norm).collect();
        lambda = norm;
        if delta < POWER_TOLERANCE {
            break;
        }
    }
    lambda
}
