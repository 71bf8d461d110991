//! Piecewise-linear lookup tables shared by the calibration-driven models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A piecewise-linear function over sorted `(x, y)` knots.
///
/// Queries outside the knot range clamp to the endpoint values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for PiecewiseLinear {
    type Error = Error;
    fn try_from(knots: Vec<(f64, f64)>) -> Result<Self> {
        PiecewiseLinear::new(knots)
    }
}

impl From<PiecewiseLinear> for Vec<(f64, f64)> {
    fn from(table: PiecewiseLinear) -> Self {
        table.knots
    }
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::config(
                "piecewise-linear table needs at least one knot",
            ));
        }
        for pair in knots.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::config(format!(
                    "piecewise-linear knots must be strictly increasing in x, got {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::config("piecewise-linear knots must be finite"));
        }
        Ok(PiecewiseLinear { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn min_x(&self) -> f64 {
        self.knots[0].0
    }

    pub fn max_x(&self) -> f64 {
        self.knots[self.knots.len() - 1].0
    }

    /// Interpolated value at `x`, clamped to the endpoints outside the range.
    pub fn value_at(&self, x: f64) -> f64 {
        let first = self.knots[0];
        let last = self.knots[self.knots.len() - 1];
        if x <= first.0 {
            return first.1;
        }
        if x >= last.0 {
            return last.1;
        }
        // x is strictly inside the knot range here.
        let idx = self.knots.partition_point(|(kx, _)| *kx <= x);
        let (x0, y0) = self.knots[idx - 1];
        let (x1, y1) = self.knots[idx];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_and_clamps() {
        let t = PiecewiseLinear::new(vec![(0.0, 10.0), (2.0, 20.0), (4.0, 0.0)]).unwrap();
        assert_eq!(t.value_at(0.0), 10.0);
        assert_eq!(t.value_at(1.0), 15.0);
        assert_eq!(t.value_at(3.0), 10.0);
        assert_eq!(t.value_at(-5.0), 10.0);
        assert_eq!(t.value_at(9.0), 0.0);
    }

    #[test]
    fn rejects_unsorted_or_empty() {
        assert!(PiecewiseLinear::new(vec![]).is_err());
        assert!(PiecewiseLinear::new(vec![(1.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(PiecewiseLinear::new(vec![(2.0, 0.0), (1.0, 1.0)]).is_err());
    }
}
