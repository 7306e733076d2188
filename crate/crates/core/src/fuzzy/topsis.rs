use serde::{Deserialize, Serialize};

use super::ahp::{CriteriaWeights, Direction};
use super::tfn::TriangularFuzzyNumber;
use crate::error::{Error, Result};

/// Fuzzy ratings of `m` alternatives (rows) on `n` criteria (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "Vec<Vec<TriangularFuzzyNumber>>",
    into = "Vec<Vec<TriangularFuzzyNumber>>"
)]
pub struct DecisionMatrix {
    rows: Vec<Vec<TriangularFuzzyNumber>>,
}

impl DecisionMatrix {
    pub fn new(rows: Vec<Vec<TriangularFuzzyNumber>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidDecisionMatrix("no alternatives".into()));
        };
        let n = first.len();
        if n == 0 {
            return Err(Error::InvalidDecisionMatrix("no criteria".into()));
        }
        if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidDecisionMatrix(format!(
                "alternative {k} has {} ratings, expected {n}",
                r.len()
            )));
        }
        Ok(Self { rows })
    }

    /// Matrix of degenerate (crisp) ratings.
    pub fn from_crisp(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| TriangularFuzzyNumber::crisp(x)).collect())
                .collect(),
        )
    }

    pub fn alternatives(&self) -> usize {
        self.rows.len()
    }

    pub fn criteria(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<TriangularFuzzyNumber>] {
        &self.rows
    }
}

impl TryFrom<Vec<Vec<TriangularFuzzyNumber>>> for DecisionMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<TriangularFuzzyNumber>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<DecisionMatrix> for Vec<Vec<TriangularFuzzyNumber>> {
    fn from(d: DecisionMatrix) -> Self {
        d.rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingResult {
    /// Closeness coefficient per alternative, in `[0, 1]`.
    pub closeness: Vec<f64>,
    /// Alternatives by descending closeness; ties keep ascending index.
    pub order: Vec<usize>,
}

impl RankingResult {
    pub fn best(&self) -> usize {
        self.order[0]
    }
}

/// Ranks alternatives by relative closeness to the fuzzy ideal solution.
///
/// Benefit columns are divided by their largest upper bound; cost columns
/// map `x -> a / x` with `a` the smallest lower bound, so larger is better
/// in every normalized column. After weighting, the positive and negative
/// ideals are the component-wise maximum and minimum of each column.
pub fn ftopsis_rank(dm: &DecisionMatrix, w: &CriteriaWeights) -> Result<RankingResult> {
    let n = dm.criteria();
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: w.len(),
        });
    }

    let mut weighted = vec![Vec::with_capacity(n); dm.alternatives()];
    for (j, (&wj, &dir)) in w.weights().iter().zip(w.directions()).enumerate() {
        let column = dm.rows().iter().map(|r| r[j]);
        match dir {
            Direction::Benefit => {
                let top = column.map(|t| t.u()).fold(f64::NEG_INFINITY, f64::max);
                if !(top > 0.0) {
                    return Err(Error::AllZeroBenefitColumn(j));
                }
                for (k, row) in dm.rows().iter().enumerate() {
                    weighted[k].push(row[j].scale(wj / top));
                }
            }
            Direction::Cost => {
                let low = column.map(|t| t.l()).fold(f64::INFINITY, f64::min);
                if !(low > 0.0) {
                    return Err(Error::NonPositiveCostRating(j));
                }
                for (k, row) in dm.rows().iter().enumerate() {
                    let t = row[j];
                    let v = TriangularFuzzyNumber::new(low / t.u(), low / t.m(), low / t.l())
                        .expect("positive reciprocal keeps ordering");
                    weighted[k].push(v.scale(wj));
                }
            }
        }
    }

    let ideal = |pick: fn(
        &TriangularFuzzyNumber,
        &TriangularFuzzyNumber,
    ) -> TriangularFuzzyNumber|
     -> Vec<TriangularFuzzyNumber> {
        (0..n)
            .map(|j| {
                weighted[1..]
                    .iter()
                    .fold(weighted[0][j], |acc, row| pick(&acc, &row[j]))
            })
            .collect()
    };
    let positive = ideal(TriangularFuzzyNumber::max);
    let negative = ideal(TriangularFuzzyNumber::min);

    let distances: Vec<(f64, f64)> = weighted
        .iter()
        .map(|row| {
            let dp: f64 = row.iter().zip(&positive).map(|(a, b)| a.distance(b)).sum();
            let dn: f64 = row.iter().zip(&negative).map(|(a, b)| a.distance(b)).sum();
            (dp, dn)
        })
        .collect();

    let closeness: Vec<f64> = if distances.iter().all(|&(dp, dn)| dp + dn == 0.0) {
        vec![0.5; distances.len()]
    } else {
        distances
            .iter()
            .map(|&(dp, dn)| {
                let total = dp + dn;
                if total == 0.0 {
                    0.5
                } else {
                    (dn / total).clamp(0.0, 1.0)
                }
            })
            .collect()
    };

    let mut order: Vec<usize> = (0..closeness.len()).collect();
    // Stable sort keeps ascending index among ties.
    order.sort_by(|&a, &b| closeness[b].total_cmp(&closeness[a]));
    Ok(RankingResult { closeness, order })
}
