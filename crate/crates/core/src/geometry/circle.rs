use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Plane, Point3, Sphere};
use crate::error::{Error, Result};
use crate::exact::{QuadExt, Rational};

/// Result of intersecting two unit spheres.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpherePair {
    Circle(Circle),
    TangentPoint(Point3),
    Empty,
}

/// Intersection of the unit spheres about `p` and `p'`.
pub fn sphere_pair_to_circle(p: &Point3, p2: &Point3) -> Result<SpherePair> {
    if p == p2 {
        return Err(Error::DegeneratePair);
    }
    let d2 = p.dist_sq(p2);
    Ok(match d2.cmp(&Rational::from(4)) {
        Ordering::Less => SpherePair::Circle(Circle::build(p, p2)),
        Ordering::Equal => SpherePair::TangentPoint(p.midpoint(p2)),
        Ordering::Greater => SpherePair::Empty,
    })
}

/// Circle `S_p ∩ S_p'` of two unit spheres, stored with its canonical
/// (lexicographically ordered) center pair and exact derived data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circle {
    p: Point3,
    q: Point3,
    normal: Point3,
    offset: Rational,
    center: Point3,
    radius_sq: Rational,
}

impl Circle {
    /// Builds the circle, failing unless `0 < |p - p'|^2 < 4`.
    pub fn from_pair(p: &Point3, p2: &Point3) -> Result<Circle> {
        match sphere_pair_to_circle(p, p2)? {
            SpherePair::Circle(c) => Ok(c),
            _ => Err(Error::InvalidArgument(format!(
                "unit spheres about {p:?} and {p2:?} do not meet in a circle"
            ))),
        }
    }

    fn build(a: &Point3, b: &Point3) -> Circle {
        let (p, q) = if a < b { (a, b) } else { (b, a) };
        let normal = q - p;
        let offset = (q.norm_sq() - p.norm_sq()) * Rational::frac(1, 2);
        let radius_sq = Rational::one() - normal.norm_sq() * Rational::frac(1, 4);
        Circle {
            center: p.midpoint(q),
            p: p.clone(),
            q: q.clone(),
            normal,
            offset,
            radius_sq,
        }
    }

    pub fn pair(&self) -> (&Point3, &Point3) {
        (&self.p, &self.q)
    }

    pub fn normal(&self) -> &Point3 {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn center(&self) -> &Point3 {
        &self.center
    }

    pub fn radius_sq(&self) -> &Rational {
        &self.radius_sq
    }

    pub fn plane(&self) -> Plane {
        Plane::new(self.normal.clone(), self.offset.clone())
    }

    /// `|x - p|^2 = 1` and `|x - p'|^2 = 1`.
    pub fn contains(&self, x: &Point3) -> bool {
        let one = Rational::one();
        x.dist_sq(&self.p) == one && x.dist_sq(&self.q) == one
    }

    pub fn to_analytic(&self) -> AnalyticCircle {
        AnalyticCircle {
            center: self.center.clone(),
            radius_sq: self.radius_sq.clone(),
            normal: self.normal.clone(),
        }
    }
}

/// Circle given by center, squared radius and an unnormalized plane normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnalyticCircle {
    center: Point3,
    radius_sq: Rational,
    normal: Point3,
}

impl AnalyticCircle {
    pub fn new(center: Point3, radius_sq: Rational, normal: Point3) -> Result<Self> {
        if !radius_sq.is_positive() {
            return Err(Error::InvalidArgument(format!("radius_sq {radius_sq} must be positive")));
        }
        if normal.is_zero() {
            return Err(Error::InvalidArgument("zero circle normal".into()));
        }
        Ok(AnalyticCircle {
            center,
            radius_sq,
            normal,
        })
    }

    pub fn center(&self) -> &Point3 {
        &self.center
    }

    pub fn radius_sq(&self) -> &Rational {
        &self.radius_sq
    }

    pub fn normal(&self) -> &Point3 {
        &self.normal
    }

    pub fn plane(&self) -> Plane {
        Plane::through(&self.center, self.normal.clone())
    }

    /// The sphere with the same center and radius; it contains the circle.
    pub fn sphere(&self) -> Sphere {
        Sphere::new(self.center.clone(), self.radius_sq.clone())
    }

    pub fn contains(&self, x: &Point3) -> bool {
        self.plane().contains(x) && self.sphere().contains(x)
    }

    pub fn contains_alg(&self, x: &AlgPoint3) -> bool {
        x.plane_residue(&self.plane()).is_zero() && x.sphere_residue(&self.sphere()).is_zero()
    }

    /// Same point set.
    pub fn same_as(&self, o: &AnalyticCircle) -> bool {
        self.center == o.center && self.radius_sq == o.radius_sq && self.normal.is_parallel(&o.normal)
    }

    pub fn is_vertical(&self) -> bool {
        self.normal.z.is_zero()
    }

    /// Whether the circle lies on the sphere `s`.
    pub fn lies_on_sphere(&self, s: &Sphere) -> bool {
        let d = &self.center - &s.center;
        d.is_parallel(&self.normal) && d.norm_sq() + &self.radius_sq == s.radius_sq
    }
}

impl From<&Circle> for AnalyticCircle {
    fn from(c: &Circle) -> Self {
        c.to_analytic()
    }
}

/// Point whose coordinates lie in one real quadratic extension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgPoint3 {
    pub x: QuadExt,
    pub y: QuadExt,
    pub z: QuadExt,
}

impl AlgPoint3 {
    /// Rewrites all coordinates over a common radicand.
    pub fn new(x: QuadExt, y: QuadExt, z: QuadExt) -> Result<Self> {
        let (x, y) = x.align(&y)?;
        let (x, z) = x.align(&z)?;
        let (y, z) = y.align(&z)?;
        Ok(AlgPoint3 { x, y, z })
    }

    pub fn coords(&self) -> [&QuadExt; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// `base + t * dir` with `t` in a quadratic extension.
    pub fn on_line(base: &Point3, dir: &Point3, t: &QuadExt) -> Self {
        let c = |b: &Rational, d: &Rational| t.scale(d).add_rational(b);
        AlgPoint3 {
            x: c(&base.x, &dir.x),
            y: c(&base.y, &dir.y),
            z: c(&base.z, &dir.z),
        }
    }

    pub fn as_rational(&self) -> Option<Point3> {
        Some(Point3::new(
            self.x.as_rational()?.clone(),
            self.y.as_rational()?.clone(),
            self.z.as_rational()?.clone(),
        ))
    }

    /// `n . self` for a rational vector `n`.
    pub fn dot(&self, n: &Point3) -> QuadExt {
        let terms = [self.x.scale(&n.x), self.y.scale(&n.y), self.z.scale(&n.z)];
        sum_same_field(&terms)
    }

    pub fn plane_residue(&self, plane: &Plane) -> QuadExt {
        self.dot(&plane.normal).add_rational(&-&plane.offset)
    }

    pub fn sphere_residue(&self, s: &Sphere) -> QuadExt {
        self.dist_sq_to(&s.center).add_rational(&-&s.radius_sq)
    }

    pub fn dist_sq_to(&self, c: &Point3) -> QuadExt {
        let d = [
            self.x.add_rational(&-&c.x),
            self.y.add_rational(&-&c.y),
            self.z.add_rational(&-&c.z),
        ];
        sum_same_field(&d.map(|v| v.square()))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }
}

impl From<Point3> for AlgPoint3 {
    fn from(p: Point3) -> Self {
        AlgPoint3 {
            x: p.x.into(),
            y: p.y.into(),
            z: p.z.into(),
        }
    }
}

pub(crate) fn sum_same_field(terms: &[QuadExt]) -> QuadExt {
    terms
        .iter()
        .fold(QuadExt::zero(), |acc, t| acc.try_add(t).expect("coordinates share one radicand"))
}

/// JSON form of a circle: `{"pair": [p, p']}` or
/// `{"center": c, "radius_sq": r, "normal": [n1, n2, n3]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CircleRecord {
    Pair {
        pair: [Point3; 2],
    },
    Analytic {
        center: Point3,
        radius_sq: Rational,
        normal: [Rational; 3],
    },
}

impl CircleRecord {
    pub fn to_analytic(&self) -> Result<AnalyticCircle> {
        match self {
            CircleRecord::Pair { pair } => Ok(Circle::from_pair(&pair[0], &pair[1])?.to_analytic()),
            CircleRecord::Analytic {
                center,
                radius_sq,
                normal,
            } => {
                let [x, y, z] = normal.clone();
                AnalyticCircle::new(center.clone(), radius_sq.clone(), Point3::new(x, y, z))
            }
        }
    }
}

impl From<&Circle> for CircleRecord {
    fn from(c: &Circle) -> Self {
        CircleRecord::Pair {
            pair: [c.p.clone(), c.q.clone()],
        }
    }
}

impl From<&AnalyticCircle> for CircleRecord {
    fn from(c: &AnalyticCircle) -> Self {
        CircleRecord::Analytic {
            center: c.center.clone(),
            radius_sq: c.radius_sq.clone(),
            normal: [c.normal.x.clone(), c.normal.y.clone(), c.normal.z.clone()],
        }
    }
}

/// Outcome of intersecting two circles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircleIntersection {
    /// At most two points, sorted lexicographically.
    Points(Vec<AlgPoint3>),
    Coincident,
}

impl CircleIntersection {
    pub fn points(&self) -> &[AlgPoint3] {
        match self {
            CircleIntersection::Points(p) => p,
            CircleIntersection::Coincident => &[],
        }
    }
}

/// Exact intersection of two circles in R^3.
///
/// Both circles are cut by a common line: the intersection line of their
/// planes, or, when the planes coincide, the radical line of the two
/// circles inside that plane. The points are the common roots of the two
/// circles' quadratics along that line.
pub fn circle_circle_intersection(c1: &AnalyticCircle, c2: &AnalyticCircle) -> CircleIntersection {
    let p1 = c1.plane();
    let p2 = c2.plane();
    let cutting = if p1.normal.is_parallel(&p2.normal) {
        if !p1.same_as(&p2) {
            return CircleIntersection::Points(vec![]);
        }
        if c1.center == c2.center {
            return if c1.radius_sq == c2.radius_sq {
                CircleIntersection::Coincident
            } else {
                CircleIntersection::Points(vec![])
            };
        }
        // radical plane: 2 (c2 - c1) . x = |c2|^2 - |c1|^2 + r1^2 - r2^2
        let n = (&c2.center - &c1.center).scale(&Rational::from(2));
        let off = c2.center.norm_sq() - c1.center.norm_sq() + &c1.radius_sq - &c2.radius_sq;
        Plane::new(n, off)
    } else {
        p2
    };
    let dir = p1.normal.cross(&cutting.normal);
    let base = solve3(
        [&p1.normal, &cutting.normal, &dir],
        [&p1.offset, &cutting.offset, &Rational::zero()],
    )
    .expect("independent normals");
    // q_i(t) = |dir|^2 t^2 + 2 (w_i . dir) t + |w_i|^2 - r_i^2, w_i = base - c_i
    let a = dir.norm_sq();
    let coeffs = |c: &AnalyticCircle| {
        let w = &base - &c.center;
        (Rational::from(2) * w.dot(&dir), w.norm_sq() - &c.radius_sq)
    };
    let (b1, k1) = coeffs(c1);
    let (b2, k2) = coeffs(c2);
    let roots: Vec<QuadExt> = if b1 == b2 && k1 == k2 {
        quadratic_roots(&a, &b1, &k1)
    } else if b1 == b2 {
        vec![]
    } else {
        let t = (&k2 - &k1) / (&b1 - &b2);
        if (&a * t.square() + &b1 * &t + &k1).is_zero() {
            vec![QuadExt::rational(t)]
        } else {
            vec![]
        }
    };
    let mut pts: Vec<AlgPoint3> = roots.iter().map(|t| AlgPoint3::on_line(&base, &dir, t)).collect();
    pts.sort();
    CircleIntersection::Points(pts)
}

/// Real roots of `a t^2 + b t + c` (a != 0), ascending.
pub(crate) fn quadratic_roots(a: &Rational, b: &Rational, c: &Rational) -> Vec<QuadExt> {
    let disc = b.square() - Rational::from(4) * a * c;
    let two_a = Rational::from(2) * a;
    let mid = -(b / &two_a);
    match disc.signum() {
        -1 => vec![],
        0 => vec![QuadExt::rational(mid)],
        _ => {
            let half = two_a.recip().expect("a != 0").abs();
            let mut r = vec![
                QuadExt::new(mid.clone(), -&half, disc.clone()).expect("disc > 0"),
                QuadExt::new(mid, half, disc).expect("disc > 0"),
            ];
            r.sort();
            r
        }
    }
}

/// Solves the 3x3 system with rows `rows` by Cramer's rule.
pub(crate) fn solve3(rows: [&Point3; 3], rhs: [&Rational; 3]) -> Option<Point3> {
    let det = rows[0].dot(&rows[1].cross(rows[2]));
    if det.is_zero() {
        return None;
    }
    // x = (r1 (n2 x n3) + r2 (n3 x n1) + r3 (n1 x n2)) / det
    let s = rows[1].cross(rows[2]).scale(rhs[0])
        + rows[2].cross(rows[0]).scale(rhs[1])
        + rows[0].cross(rows[1]).scale(rhs[2]);
    Some(s.scale(&det.recip().ok()?))
}
