use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A triangular fuzzy number `(l, m, u)` with `l <= m <= u`.
///
/// Membership rises linearly from 0 at `l` to 1 at `m` and falls back to 0
/// at `u`; it is 0 everywhere outside `[l, u]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct TriangularFuzzyNumber {
    l: f64,
    m: f64,
    u: f64,
}

impl TriangularFuzzyNumber {
    pub fn new(l: f64, m: f64, u: f64) -> Result<Self> {
        if !(l.is_finite() && m.is_finite() && u.is_finite()) || l > m || m > u {
            return Err(Error::InvalidFuzzyNumber { l, m, u });
        }
        Ok(Self { l, m, u })
    }

    /// Degenerate number with all three points at `x`.
    pub fn crisp(x: f64) -> Self {
        Self { l: x, m: x, u: x }
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn is_crisp(&self) -> bool {
        self.l == self.m && self.m == self.u
    }

    /// Membership grade of `x`.
    pub fn membership(&self, x: f64) -> f64 {
        if x < self.l || x > self.u {
            0.0
        } else if x == self.m {
            1.0
        } else if x < self.m {
            (x - self.l) / (self.m - self.l)
        } else {
            (self.u - x) / (self.u - self.m)
        }
    }

    /// Centroid defuzzification `(l + m + u) / 3`.
    pub fn centroid(&self) -> f64 {
        (self.l + self.m + self.u) / 3.0
    }

    pub fn scale(&self, k: f64) -> Self {
        debug_assert!(k >= 0.0);
        Self {
            l: self.l * k,
            m: self.m * k,
            u: self.u * k,
        }
    }

    /// Reciprocal `(1/u, 1/m, 1/l)`; only meaningful for strictly positive numbers.
    pub fn recip(&self) -> Self {
        Self {
            l: 1.0 / self.u,
            m: 1.0 / self.m,
            u: 1.0 / self.l,
        }
    }

    /// Vertex distance `sqrt(((a_l-b_l)^2 + (a_m-b_m)^2 + (a_u-b_u)^2) / 3)`.
    pub fn distance(&self, other: &Self) -> f64 {
        let dl = self.l - other.l;
        let dm = self.m - other.m;
        let du = self.u - other.u;
        ((dl * dl + dm * dm + du * du) / 3.0).sqrt()
    }

    /// Component-wise maximum. The result is again a valid number.
    pub fn max(&self, other: &Self) -> Self {
        Self {
            l: self.l.max(other.l),
            m: self.m.max(other.m),
            u: self.u.max(other.u),
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        Self {
            l: self.l.min(other.l),
            m: self.m.min(other.m),
            u: self.u.min(other.u),
        }
    }
}

impl fmt::Display for TriangularFuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.l, self.m, self.u)
    }
}

impl TryFrom<[f64; 3]> for TriangularFuzzyNumber {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<TriangularFuzzyNumber> for [f64; 3] {
    fn from(t: TriangularFuzzyNumber) -> Self {
        [t.l, t.m, t.u]
    }
}

pub const SAATY_MIN: f64 = 1.0 / 9.0;
pub const SAATY_MAX: f64 = 9.0;

/// Turns a crisp Saaty judgment into a triangular number one scale step wide
/// on either side, clamped to `[1, 9]`. Reciprocal judgments map to the
/// reciprocal of their inverse's fuzzy number.
pub fn fuzzify_saaty(v: f64) -> Result<TriangularFuzzyNumber> {
    // Slack for printed reciprocals such as 0.111 or 0.1111.
    const EPS: f64 = 1e-3;
    if !v.is_finite() || v <= 0.0 || !(SAATY_MIN - EPS..=SAATY_MAX).contains(&v) {
        return Err(Error::InvalidJudgment(v));
    }
    if v >= 1.0 {
        Ok(TriangularFuzzyNumber {
            l: (v - 1.0).max(1.0),
            m: v,
            u: (v + 1.0).min(SAATY_MAX),
        })
    } else {
        let inv = (1.0 / v).min(SAATY_MAX);
        let t = fuzzify_saaty(inv)?;
        // Keep the modal value exactly v rather than 1/(1/v).
        Ok(TriangularFuzzyNumber {
            l: 1.0 / t.u,
            m: v,
            u: 1.0 / t.l,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tfn(l: f64, m: f64, u: f64) -> TriangularFuzzyNumber {
        TriangularFuzzyNumber::new(l, m, u).unwrap()
    }

    #[test]
    fn membership_examples() {
        let a = tfn(1.0, 2.0, 3.0);
        assert_eq!(a.membership(2.0), 1.0);
        assert_eq!(a.membership(1.5), 0.5);
        assert_eq!(a.membership(4.0), 0.0);
        assert_eq!(a.membership(0.0), 0.0);
        assert_eq!(a.membership(2.5), 0.5);
    }

    #[test]
    fn degenerate_membership() {
        let a = TriangularFuzzyNumber::crisp(3.0);
        assert_eq!(a.membership(3.0), 1.0);
        assert_eq!(a.membership(3.0 + 1e-12), 0.0);
        assert_eq!(a.membership(2.999), 0.0);
        // Right-angled triangles keep the peak at m.
        let b = tfn(1.0, 1.0, 2.0);
        assert_eq!(b.membership(1.0), 1.0);
        assert_eq!(b.membership(1.5), 0.5);
    }

    #[test]
    fn rejects_unordered_bounds() {
        assert!(TriangularFuzzyNumber::new(2.0, 1.0, 3.0).is_err());
        assert!(TriangularFuzzyNumber::new(1.0, 3.0, 2.0).is_err());
        assert!(TriangularFuzzyNumber::new(f64::NAN, 1.0, 2.0).is_err());
    }

    #[test]
    fn saaty_examples() {
        assert_eq!(fuzzify_saaty(1.0).unwrap(), tfn(1.0, 1.0, 2.0));
        assert_eq!(fuzzify_saaty(3.0).unwrap(), tfn(2.0, 3.0, 4.0));
        assert_eq!(fuzzify_saaty(9.0).unwrap(), tfn(8.0, 9.0, 9.0));
        let r = fuzzify_saaty(1.0 / 3.0).unwrap();
        assert!((r.l() - 0.25).abs() < 1e-15);
        assert!((r.m() - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.u() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn saaty_rejects_out_of_scale() {
        assert!(fuzzify_saaty(0.0).is_err());
        assert!(fuzzify_saaty(-2.0).is_err());
        assert!(fuzzify_saaty(10.0).is_err());
        assert!(fuzzify_saaty(0.05).is_err());
    }

    #[test]
    fn membership_integrates_to_half_width() {
        // Composite Simpson on each linear piece is exact; use a plain
        // midpoint rule with many panels as the independent check.
        for &(l, m, u) in &[
            (1.0, 2.0, 3.0),
            (0.0, 0.2, 5.0),
            (-3.0, 4.0, 4.0),
            (2.0, 2.0, 7.5),
        ] {
            let a = tfn(l, m, u);
            let n = 200_000;
            let h = (u - l) / n as f64;
            let integral: f64 = (0..n)
                .map(|i| a.membership(l + (i as f64 + 0.5) * h) * h)
                .sum();
            assert!((integral - (u - l) / 2.0).abs() < 1e-6, "{a}: {integral}");
        }
    }

    #[test]
    fn serde_as_triple() {
        let a = tfn(0.5, 1.0, 2.0);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[0.5,1.0,2.0]");
        let back: TriangularFuzzyNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<TriangularFuzzyNumber>("[3.0,1.0,2.0]").is_err());
    }
}
