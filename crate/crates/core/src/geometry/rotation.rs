use super::{AnalyticCircle, Circle, Point3};
use crate::exact::Rational;

/// Rotation with rational entries, built from an integer quaternion
/// `(w, x, y, z)` scaled by its squared norm (a Pythagorean rotation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    rows: [Point3; 3],
}

impl Rotation {
    /// Panics on the zero quaternion.
    pub fn from_quaternion(w: i64, x: i64, y: i64, z: i64) -> Self {
        let n = w * w + x * x + y * y + z * z;
        assert!(n > 0, "zero quaternion");
        let e = |v: i64| Rational::frac(v, n);
        let rows = [
            Point3::new(e(w * w + x * x - y * y - z * z), e(2 * (x * y - w * z)), e(2 * (x * z + w * y))),
            Point3::new(e(2 * (x * y + w * z)), e(w * w - x * x + y * y - z * z), e(2 * (y * z - w * x))),
            Point3::new(e(2 * (x * z - w * y)), e(2 * (y * z + w * x)), e(w * w - x * x - y * y + z * z)),
        ];
        Rotation { rows }
    }

    pub fn identity() -> Self {
        Self::from_quaternion(1, 0, 0, 0)
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        Point3::new(self.rows[0].dot(p), self.rows[1].dot(p), self.rows[2].dot(p))
    }

    pub fn circle(&self, c: &Circle) -> Circle {
        let (p, q) = c.pair();
        Circle::from_pair(&self.apply(p), &self.apply(q)).expect("rotation preserves distances")
    }

    pub fn analytic_circle(&self, c: &AnalyticCircle) -> AnalyticCircle {
        AnalyticCircle::new(self.apply(c.center()), c.radius_sq().clone(), self.apply(c.normal()))
            .expect("rotation preserves validity")
    }
}
