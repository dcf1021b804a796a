//! Power-law fits of count series. The only floating-point computation in
//! the workspace; results are approximate by construction.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub n: u64,
    pub count: u64,
}

/// `(size, count)` pairs with strictly increasing sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SeriesPoint>", into = "Vec<SeriesPoint>")]
pub struct ScalingSeries {
    points: Vec<SeriesPoint>,
}

impl ScalingSeries {
    pub fn new(points: Vec<SeriesPoint>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].n >= w[1].n) {
            return Err(LabError::NotIncreasing);
        }
        Ok(ScalingSeries { points })
    }

    pub fn points(&self) -> &[SeriesPoint] {
        &self.points
    }
}

impl TryFrom<Vec<SeriesPoint>> for ScalingSeries {
    type Error = LabError;
    fn try_from(v: Vec<SeriesPoint>) -> Result<Self> {
        ScalingSeries::new(v)
    }
}

impl From<ScalingSeries> for Vec<SeriesPoint> {
    fn from(s: ScalingSeries) -> Self {
        s.points
    }
}

/// Least-squares slope of `ln count` against `ln n`.
pub fn estimate_exponent(series: &ScalingSeries) -> Result<f64> {
    let pts = series.points();
    if pts.len() < 3 {
        return Err(LabError::TooFewPoints(pts.len()));
    }
    if let Some(p) = pts.iter().find(|p| p.count == 0) {
        return Err(LabError::NonPositiveCount(p.n));
    }
    let xs: Vec<f64> = pts.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| (p.count as f64).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
