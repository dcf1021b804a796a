//! Exact geometric objects in R^3: points, planes, spheres, circles,
//! inversions and rational rotations.

pub(crate) mod circle;
mod inversion;
mod rotation;

pub use circle::{
    circle_circle_intersection, sphere_pair_to_circle, AlgPoint3, AnalyticCircle, Circle,
    CircleIntersection, CircleRecord, SpherePair,
};
pub use inversion::{Figure, Inversion, Line};
pub use rotation::Rotation;

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::exact::Rational;

/// Rational point (or vector) in R^3.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point3 {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl Point3 {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        Point3 { x, y, z }
    }

    pub fn origin() -> Self {
        Point3::new(Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Point3::new(x.into(), y.into(), z.into())
    }

    pub fn coords(&self) -> [&Rational; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn dot(&self, o: &Point3) -> Rational {
        &self.x * &o.x + &self.y * &o.y + &self.z * &o.z
    }

    pub fn cross(&self, o: &Point3) -> Point3 {
        Point3::new(
            &self.y * &o.z - &self.z * &o.y,
            &self.z * &o.x - &self.x * &o.z,
            &self.x * &o.y - &self.y * &o.x,
        )
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn dist_sq(&self, o: &Point3) -> Rational {
        (self - o).norm_sq()
    }

    pub fn scale(&self, k: &Rational) -> Point3 {
        Point3::new(&self.x * k, &self.y * k, &self.z * k)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn midpoint(&self, o: &Point3) -> Point3 {
        (self + o).scale(&Rational::frac(1, 2))
    }

    /// Whether `self` and `o` are parallel (including either being zero).
    pub fn is_parallel(&self, o: &Point3) -> bool {
        self.cross(o).is_zero()
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }
}

impl Add for &Point3 {
    type Output = Point3;
    fn add(self, o: &Point3) -> Point3 {
        Point3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }
}

impl Sub for &Point3 {
    type Output = Point3;
    fn sub(self, o: &Point3) -> Point3 {
        Point3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        &self + &o
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        &self - &o
    }
}

impl Neg for &Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-&self.x, -&self.y, -&self.z)
    }
}

/// Plane `normal . x = offset`, normal unnormalized and nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plane {
    pub normal: Point3,
    pub offset: Rational,
}

impl Plane {
    pub fn new(normal: Point3, offset: Rational) -> Self {
        debug_assert!(!normal.is_zero());
        Plane { normal, offset }
    }

    pub fn through(point: &Point3, normal: Point3) -> Self {
        let offset = normal.dot(point);
        Plane { normal, offset }
    }

    /// Signed residue `normal . q - offset`.
    pub fn eval(&self, q: &Point3) -> Rational {
        self.normal.dot(q) - &self.offset
    }

    pub fn contains(&self, q: &Point3) -> bool {
        self.eval(q).is_zero()
    }

    /// Same point set (scale-invariant).
    pub fn same_as(&self, o: &Plane) -> bool {
        self.normal.is_parallel(&o.normal) && {
            // any point of `o` lies on `self`
            let k = pick_nonzero(&o.normal);
            let mut p = Point3::origin();
            let v = &o.offset / o.normal.coords()[k];
            match k {
                0 => p.x = v,
                1 => p.y = v,
                _ => p.z = v,
            }
            self.contains(&p)
        }
    }

    /// Canonical scale: first nonzero normal component equal to one.
    pub fn canonical(&self) -> (Point3, Rational) {
        let k = self.normal.coords()[pick_nonzero(&self.normal)].clone();
        let inv = k.recip().expect("nonzero normal");
        (self.normal.scale(&inv), &self.offset * &inv)
    }
}

/// Index of the first nonzero coordinate; panics on the zero vector.
pub(crate) fn pick_nonzero(v: &Point3) -> usize {
    v.coords()
        .iter()
        .position(|c| !c.is_zero())
        .expect("zero vector")
}

/// Sphere with exact squared radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sphere {
    pub center: Point3,
    pub radius_sq: Rational,
}

impl Sphere {
    pub fn new(center: Point3, radius_sq: Rational) -> Self {
        debug_assert!(radius_sq.is_positive());
        Sphere { center, radius_sq }
    }

    pub fn eval(&self, q: &Point3) -> Rational {
        q.dist_sq(&self.center) - &self.radius_sq
    }

    pub fn contains(&self, q: &Point3) -> bool {
        self.eval(q).is_zero()
    }
}

/// Unit sphere identified by its center.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitSphere {
    pub center: Point3,
}

impl UnitSphere {
    pub fn new(center: Point3) -> Self {
        UnitSphere { center }
    }

    pub fn contains(&self, q: &Point3) -> bool {
        q.dist_sq(&self.center) == Rational::one()
    }

    pub fn to_sphere(&self) -> Sphere {
        Sphere::new(self.center.clone(), Rational::one())
    }
}

/// Rational point on the unit sphere about `q` from stereographic
/// parameters: `q + (2u, 2v, u^2 + v^2 - 1) / (u^2 + v^2 + 1)`.
pub fn rational_sphere_point(u: &Rational, v: &Rational, q: &Point3) -> Point3 {
    let s = u.square() + v.square();
    let den = (&s + Rational::one()).recip().expect("positive");
    let two = Rational::from(2);
    let offset = Point3::new(&two * u * &den, &two * v * &den, (s - Rational::one()) * &den);
    q + &offset
}

/// Two vectors spanning the orthogonal complement of a nonzero `n`.
///
/// With `k` the first nonzero index of `n`, uses `e_i * n_k - e_k * n_i`
/// for the two indices `i != k`.
pub fn orthogonal_complement(n: &Point3) -> [Point3; 2] {
    let k = pick_nonzero(n);
    let c = n.coords();
    let mut out = Vec::with_capacity(2);
    for i in (0..3).filter(|&i| i != k) {
        let mut v = [Rational::zero(), Rational::zero(), Rational::zero()];
        v[i] = c[k].clone();
        v[k] = -c[i];
        let [x, y, z] = v;
        out.push(Point3::new(x, y, z));
    }
    [out[0].clone(), out[1].clone()]
}
