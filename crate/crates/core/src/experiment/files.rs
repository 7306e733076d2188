//! JSON input files for the standalone `weights` and `rank` commands.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fuzzy::{
    CriteriaWeights, DecisionMatrix, Direction, PairwiseComparisonMatrix, TriangularFuzzyNumber,
};

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, key: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(key, path.display(), format!("cannot read file: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::config(key, path.display(), e.to_string()))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare(Vec<Vec<f64>>),
    Wrapped { matrix: Vec<Vec<f64>> },
}

/// A pairwise comparison matrix: either a bare array of rows or
/// `{"matrix": [...]}`. Two-decimal reciprocals such as 0.33 are accepted.
pub fn load_comparison_matrix(path: &Path) -> Result<PairwiseComparisonMatrix> {
    let rows = match read_json::<MatrixFile>(path, "matrix")? {
        MatrixFile::Bare(m) | MatrixFile::Wrapped { matrix: m } => m,
    };
    PairwiseComparisonMatrix::from_rounded(rows)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Rating {
    Crisp(f64),
    Fuzzy(TriangularFuzzyNumber),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DevicesFile {
    Bare(Vec<Vec<Rating>>),
    Wrapped { devices: Vec<Vec<Rating>> },
}

/// A decision matrix, one row per device; each rating is a number or an
/// `[l, m, u]` triple.
pub fn load_decision_matrix(path: &Path) -> Result<DecisionMatrix> {
    let rows = match read_json::<DevicesFile>(path, "devices")? {
        DevicesFile::Bare(r) | DevicesFile::Wrapped { devices: r } => r,
    };
    let rows = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|r| match r {
                    Rating::Crisp(x) => TriangularFuzzyNumber::new(x, x, x),
                    Rating::Fuzzy(t) => Ok(t),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    DecisionMatrix::new(rows)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightsFile {
    Bare(Vec<f64>),
    Full {
        weights: Vec<f64>,
        #[serde(default)]
        directions: Option<Vec<Direction>>,
    },
}

/// Criteria weights: a bare array (all benefit criteria) or
/// `{"weights": [...], "directions": ["benefit", "cost", ...]}`.
pub fn load_weights(path: &Path) -> Result<CriteriaWeights> {
    let (weights, directions) = match read_json::<WeightsFile>(path, "weights")? {
        WeightsFile::Bare(w) => (w, None),
        WeightsFile::Full {
            weights,
            directions,
        } => (weights, directions),
    };
    let directions = directions.unwrap_or_else(|| vec![Direction::Benefit; weights.len()]);
    CriteriaWeights::new(weights, directions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn matrix_forms() {
        let a = load_comparison_matrix(file("[[1, 3], [0.33, 1]]").path()).unwrap();
        let b = load_comparison_matrix(file("{\"matrix\": [[1, 3], [0.3333333333, 1]]}").path())
            .unwrap();
        assert_eq!(a, b);
        assert!(load_comparison_matrix(file("[[1, 3], [0.5, 1]]").path()).is_err());
        assert!(load_comparison_matrix(Path::new("/no/such/file"))
            .unwrap_err()
            .is_config_error());
    }

    #[test]
    fn devices_mixed_ratings() {
        let dm = load_decision_matrix(file("[[1, [1, 2, 3]], [2, [2, 3, 4]]]").path()).unwrap();
        assert_eq!(dm.alternatives(), 2);
        assert_eq!(dm.rows()[0][0], TriangularFuzzyNumber::crisp(1.0));
        assert!(load_decision_matrix(file("[[1, [3, 2, 1]]]").path()).is_err());
    }

    #[test]
    fn weights_forms() {
        let w = load_weights(file("[0.25, 0.75]").path()).unwrap();
        assert_eq!(w.directions(), &[Direction::Benefit, Direction::Benefit]);
        let w = load_weights(
            file("{\"weights\": [0.5, 0.5], \"directions\": [\"benefit\", \"cost\"]}").path(),
        )
        .unwrap();
        assert_eq!(w.directions()[1], Direction::Cost);
        assert!(load_weights(file("[0.5, 0.6]").path()).is_err());
    }
}
