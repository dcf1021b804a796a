//! Seeded generators for point and circle configurations.
//!
//! All randomness comes from [`Lcg64`], so a generator called twice with the
//! same parameters returns identical data.

use std::collections::{BTreeMap, HashSet};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::geometry::{
    sphere_pair_to_circle, AnalyticCircle, Circle, CircleRecord, Figure, Inversion, Plane, Point3, Rotation, Sphere,
    SpherePair,
};
use crate::incidence::{incidences, Metric};
use crate::rng::Lcg64;

/// `A × A × B` with `A = {0, 1/b, …, 3}` and `B = {0, 1/b², …, 9}`, ordered
/// by `x1`, then `x2`, then `x3`.
pub fn gen_example1(b: u32) -> Result<Vec<Point3>> {
    if b == 0 {
        return Err(Error::InvalidArgument("b must be positive".into()));
    }
    let b = i64::from(b);
    let a: Vec<Rational> = (0..=3 * b).map(|i| Rational::frac(i, b)).collect();
    let zs: Vec<Rational> = (0..=9 * b * b).map(|i| Rational::frac(i, b * b)).collect();
    let mut out = Vec::with_capacity(a.len() * a.len() * zs.len());
    for x in &a {
        for y in &a {
            for z in &zs {
                out.push(Point3::new(x.clone(), y.clone(), z.clone()));
            }
        }
    }
    Ok(out)
}

/// `(3b+1)²(9b²+1)`.
pub fn example1_size(b: u32) -> u64 {
    let b = u64::from(b);
    (3 * b + 1).pow(2) * (9 * b * b + 1)
}

/// Indices of points with `1 ≤ x1, x2, x3 ≤ 2`.
pub fn example1_middle(pts: &[Point3]) -> Vec<usize> {
    let (one, two) = (Rational::one(), Rational::from(2));
    let inside = |c: &Rational| *c >= one && *c <= two;
    (0..pts.len()).filter(|&i| pts[i].coords().into_iter().all(inside)).collect()
}

/// Integers `(u, v)` with `u² + v² = m`, if any.
pub fn two_squares(m: u64) -> Option<(u64, u64)> {
    let mut u = 0u64;
    while u * u <= m {
        let rest = m - u * u;
        let v = rest.isqrt();
        if v * v == rest {
            return Some((u, v));
        }
        u += 1;
    }
    None
}

/// Rational parametrization of the circle `x² + y² = ρ²`.
#[derive(Clone, Debug)]
enum Locus {
    /// `ρ` rational: `ρ((1−t²)/(1+t²), 2t/(1+t²))`.
    Radius(Rational),
    /// A known point `(a, b)`: second intersection of the line of slope `t`.
    Point(Rational, Rational),
}

impl Locus {
    fn new(rho_sq: &Rational) -> Result<Locus> {
        if let Some(r) = rho_sq.sqrt_exact() {
            return Ok(Locus::Radius(r));
        }
        // n/d is a sum of two rational squares iff n·d is one of two integer squares
        let nd = (rho_sq.numer() * rho_sq.denom())
            .to_u64()
            .ok_or_else(|| Error::NonRationalLocus(rho_sq.to_string()))?;
        let (u, v) = two_squares(nd).ok_or_else(|| Error::NonRationalLocus(rho_sq.to_string()))?;
        let d = Rational::from(rho_sq.denom().clone());
        Ok(Locus::Point(Rational::from(u as i64) / &d, Rational::from(v as i64) / d))
    }

    fn at(&self, t: &Rational) -> (Rational, Rational) {
        let den = (Rational::one() + t.square()).recip().expect("positive");
        match self {
            Locus::Radius(r) => (
                r * (Rational::one() - t.square()) * &den,
                r * Rational::from(2) * t * &den,
            ),
            Locus::Point(a, b) => {
                let lambda = Rational::from(-2) * (a + b * t) * den;
                (a + &lambda, b + lambda * t)
            }
        }
    }
}

/// Circles through the two base points `(0, 0, ±h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    pub h: Rational,
    pub base: [Point3; 2],
    /// Unit-sphere centers on the locus `|c|² = 1 − h²`, `c3 = 0`.
    pub centers: Vec<Point3>,
    /// `circles[i]` comes from centers `2i` and `2i + 1`.
    pub circles: Vec<Circle>,
}

/// `k` circles of unit-sphere pairs, all passing through `(0, 0, ±h)`.
pub fn gen_pencil(h: &Rational, k: usize, seed: u64) -> Result<Pencil> {
    if !h.is_positive() || *h >= Rational::one() {
        return Err(Error::OutOfRange(h.to_string()));
    }
    let locus = Locus::new(&(Rational::one() - h.square()))?;
    let mut rng = Lcg64::new(seed);
    let mut seen = HashSet::new();
    let mut centers = Vec::with_capacity(2 * k);
    while centers.len() < 2 * k {
        let t = rng.rational_in(-4, 4, 16);
        let (x, y) = locus.at(&t);
        let c = Point3::new(x, y, Rational::zero());
        if seen.insert(c.clone()) {
            centers.push(c);
        }
    }
    let circles = centers
        .chunks(2)
        .map(|p| Circle::from_pair(&p[0], &p[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Pencil {
        h: h.clone(),
        base: [
            Point3::new(Rational::zero(), Rational::zero(), h.clone()),
            Point3::new(Rational::zero(), Rational::zero(), -h),
        ],
        centers,
        circles,
    })
}

/// Dense labels `0..` for the unit-free grid cells `floor(x / side)`.
pub fn grid_cells(pts: &[Point3], side: &Rational) -> Result<Vec<usize>> {
    if !side.is_positive() {
        return Err(Error::OutOfRange(side.to_string()));
    }
    let keys: Vec<[i64; 3]> = pts
        .iter()
        .map(|p| p.coords().map(|c| (c / side).floor().to_i64().expect("cell index out of range")))
        .collect();
    let mut labels: BTreeMap<[i64; 3], usize> = BTreeMap::new();
    for k in &keys {
        let n = labels.len();
        labels.entry(*k).or_insert(n);
    }
    Ok(keys.iter().map(|k| labels[k]).collect())
}

/// All circles `S_p ∩ S_q` over pairs of centers in a common cell with
/// `0 < |p − q| < 2`, in index order.
pub fn gen_sphere_circle_pipeline(q: &[Point3], cells: &[usize]) -> Result<Vec<Circle>> {
    if q.len() != cells.len() {
        return Err(Error::InvalidArgument("one cell label per center".into()));
    }
    let mut out = Vec::new();
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            if cells[i] != cells[j] {
                continue;
            }
            match sphere_pair_to_circle(&q[i], &q[j]).map_err(|_| Error::CoincidentInput)? {
                SpherePair::Circle(c) => out.push(c),
                SpherePair::TangentPoint(_) | SpherePair::Empty => {}
            }
        }
    }
    Ok(out)
}

/// Both sides of the sphere-pair/circle counting identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub circles: usize,
    /// Triples `(x, {p, q})` with `p, q` in one cell, `0 < |p − q| < 2`, and
    /// `x` on both unit spheres, counted directly from unit distances.
    pub direct: u64,
    /// Incidences between the points and the circle set.
    pub dual: u64,
    /// Points at the tangency of a same-cell pair at distance exactly 2;
    /// these have no circle and are excluded from both sides.
    pub tangent: u64,
}

impl PipelineReport {
    pub fn holds(&self) -> bool {
        self.direct == self.dual
    }
}

pub fn pipeline_identity(points: &[Point3], q: &[Point3], cells: &[usize]) -> Result<PipelineReport> {
    let circles = gen_sphere_circle_pipeline(q, cells)?;
    let dual = incidences(points, &circles, false).count as u64;
    let four = Rational::from(4);
    let mut direct = 0u64;
    let mut tangent = 0u64;
    for x in points {
        let near: Vec<usize> = (0..q.len()).filter(|&i| Metric::Euclid.is_unit(x, &q[i])).collect();
        for (a, &i) in near.iter().enumerate() {
            for &j in &near[a + 1..] {
                if cells[i] != cells[j] {
                    continue;
                }
                if q[i].dist_sq(&q[j]) == four {
                    tangent += 1;
                } else {
                    direct += 1;
                }
            }
        }
    }
    Ok(PipelineReport {
        circles: circles.len(),
        direct,
        dual,
        tangent,
    })
}

/// `n` distinct circles in the plane `x3 = 0`, each with rational radius so
/// that it carries rational points.
pub fn gen_coplanar_family(n: usize, seed: u64) -> Result<Vec<AnalyticCircle>> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two circles".into()));
    }
    let mut rng = Lcg64::new(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let center = Point3::new(rng.rational_in(-3, 3, 6), rng.rational_in(-3, 3, 6), Rational::zero());
        let r = rng.rational_in(1, 3, 5);
        if seen.insert((center.clone(), r.clone())) {
            out.push(AnalyticCircle::new(center, r.square(), Point3::from_ints(0, 0, 1))?);
        }
    }
    Ok(out)
}

/// A seeded rational point off the plane of each circle and off each
/// circle's sphere, so every image under inversion about it is a circle
/// and no two images share a plane through the center.
pub fn choose_inversion_center(circles: &[AnalyticCircle], seed: u64) -> Point3 {
    let mut rng = Lcg64::new(seed);
    loop {
        let c = Point3::new(rng.rational_in(-3, 3, 7), rng.rational_in(-3, 3, 7), rng.rational_in(-3, 3, 7));
        if circles.iter().all(|k| !k.plane().contains(&c) && !k.sphere().contains(&c)) {
            return c;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionNormalization {
    pub center: Point3,
    /// Image of the common plane.
    pub sphere: Sphere,
    pub images: Vec<AnalyticCircle>,
}

impl InversionNormalization {
    /// Every image lies on `sphere` and no two images share a plane.
    pub fn is_normalized(&self) -> bool {
        let on_sphere = self.images.iter().all(|c| c.lies_on_sphere(&self.sphere));
        let planes: Vec<Plane> = self.images.iter().map(|c| c.plane()).collect();
        let distinct = (0..planes.len()).all(|i| (i + 1..planes.len()).all(|j| !planes[i].same_as(&planes[j])));
        on_sphere && distinct
    }
}

/// Inverts a family of circles sharing one plane about `center`.
pub fn normalize_coplanar(circles: &[AnalyticCircle], center: &Point3) -> Result<InversionNormalization> {
    let first = circles.first().ok_or(Error::TooFewPoints(0))?;
    let plane = first.plane();
    if circles.iter().any(|c| !c.plane().same_as(&plane)) {
        return Err(Error::InvalidArgument("circles are not coplanar".into()));
    }
    let inv = Inversion::new(center.clone());
    let sphere = match inv.apply_preserving(&Figure::Plane(plane))? {
        Figure::Sphere(s) => s,
        _ => unreachable!("plane off the center maps to a sphere"),
    };
    let images = circles
        .iter()
        .map(|c| match inv.apply_preserving(&Figure::Circle(c.clone()))? {
            Figure::Circle(img) => Ok(img),
            _ => Err(Error::CenterOnObject),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InversionNormalization {
        center: center.clone(),
        sphere,
        images,
    })
}

/// Circles `C_{hub,p}` grouped around a few hubs, plus random points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomConfig {
    pub hubs: Vec<Point3>,
    pub circles: Vec<Circle>,
    pub points: Vec<Point3>,
}

/// `n` circles and `m` points with every denominator at most `den_bound`.
///
/// Each circle is `S_hub ∩ S_p` with `p = hub + offset`, the offset drawn
/// from `[−1, 1]³`. Circles around one hub share its unit sphere, so they
/// meet in pairs of points and produce lenses.
pub fn gen_random_config(n: usize, m: usize, seed: u64, den_bound: i64) -> Result<RandomConfig> {
    if den_bound < 1 {
        return Err(Error::OutOfRange(den_bound.to_string()));
    }
    let mut rng = Lcg64::new(seed);
    let hub_count = n.div_ceil(8).max(1);
    // one common denominator keeps every sum of coordinates within the bound
    let d = den_bound.min(12);
    let mut coord = |lo: i64, hi: i64| Rational::frac(rng.int_in(lo * d, hi * d), d);
    let hubs: Vec<Point3> = (0..hub_count).map(|_| Point3::new(coord(-4, 4), coord(-4, 4), coord(-4, 4))).collect();
    let mut seen = HashSet::new();
    let mut circles = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while circles.len() < n {
        attempts += 1;
        if attempts > 1000 * (n + 1) {
            return Err(Error::InvalidArgument("denominator bound too small for distinct circles".into()));
        }
        let hub = &hubs[rng.below(hub_count as u64) as usize];
        let mut coord = |lo: i64, hi: i64| Rational::frac(rng.int_in(lo * d, hi * d), d);
        let off = Point3::new(coord(-1, 1), coord(-1, 1), coord(-1, 1));
        if off.is_zero() {
            continue;
        }
        let p = hub + &off;
        if let Ok(SpherePair::Circle(c)) = sphere_pair_to_circle(hub, &p) {
            if seen.insert(c.clone()) {
                circles.push(c);
            }
        }
    }
    let mut coord = |lo: i64, hi: i64| Rational::frac(rng.int_in(lo * d, hi * d), d);
    let points = (0..m).map(|_| Point3::new(coord(-5, 5), coord(-5, 5), coord(-5, 5))).collect();
    Ok(RandomConfig { hubs, circles, points })
}

/// `n` distinct random points of the lattice `(1/den)ℤ² × (1/dz)ℤ` inside
/// `[0, side]³`, with `dz = den` for the Euclidean metric and `den²` for
/// `d*` (so both admit many unit pairs).
pub fn gen_grid_points(n: usize, den: i64, side: i64, metric: Metric, seed: u64) -> Result<Vec<Point3>> {
    if den < 1 || side < 1 {
        return Err(Error::OutOfRange(format!("den {den}, side {side}")));
    }
    let dz = match metric {
        Metric::Euclid => den,
        Metric::DStar => den * den,
    };
    let capacity = ((side * den + 1).pow(2) as u128) * ((side * dz + 1) as u128);
    if (n as u128) > capacity {
        return Err(Error::InvalidArgument(format!("only {capacity} lattice points")));
    }
    let mut rng = Lcg64::new(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let c = [rng.int_in(0, side * den), rng.int_in(0, side * den), rng.int_in(0, side * dz)];
        if seen.insert(c) {
            out.push(Point3::new(Rational::frac(c[0], den), Rational::frac(c[1], den), Rational::frac(c[2], dz)));
        }
    }
    Ok(out)
}

/// Distinct rational points of the unit sphere about the origin: `groups`
/// concyclic groups of 3 to 8 points (each on a rotated circle of
/// latitude), then scattered points until there are `m`.
pub fn gen_sphere_points(m: usize, groups: usize, seed: u64) -> Vec<Point3> {
    let mut rng = Lcg64::new(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(m);
    let origin = Point3::origin();
    let mut push = |p: Point3, out: &mut Vec<Point3>| {
        if out.len() < m && seen.insert(p.clone()) {
            out.push(p);
        }
    };
    for _ in 0..groups {
        let r = rng.rational_in(0, 3, 4);
        let q = [0; 4].map(|_| rng.int_in(-4, 4));
        let rot = if q == [0; 4] {
            Rotation::identity()
        } else {
            Rotation::from_quaternion(q[0], q[1], q[2], q[3])
        };
        let size = rng.int_in(3, 8);
        for _ in 0..size {
            // (u, v) on the circle of radius r keeps u² + v², hence x3, fixed
            let t = rng.rational_in(-5, 5, 9);
            let den = (Rational::one() + t.square()).recip().expect("positive");
            let u = &r * (Rational::one() - t.square()) * &den;
            let v = &r * Rational::from(2) * &t * &den;
            push(rot.apply(&crate::geometry::rational_sphere_point(&u, &v, &origin)), &mut out);
        }
    }
    while out.len() < m {
        let u = rng.rational_in(-3, 3, 7);
        let v = rng.rational_in(-3, 3, 7);
        push(crate::geometry::rational_sphere_point(&u, &v, &origin), &mut out);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "example1")]
    Example1,
    #[serde(rename = "pencil")]
    Pencil,
    #[serde(rename = "coplanar")]
    Coplanar,
    #[serde(rename = "random")]
    RandomSpheres,
    #[serde(rename = "grid")]
    GridPoints,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Metric>,
}

/// A generated configuration with the parameters that reproduce it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub kind: FamilyKind,
    pub params: FamilyParams,
    #[serde(default)]
    pub points: Vec<Point3>,
    #[serde(default)]
    pub circles: Vec<CircleRecord>,
}

impl Family {
    /// Regenerates from `kind` and `params`, filling defaults
    /// (`b = 2`, `h = 3/5`, `k = 10`, `n = 20`, `m = 0`, `seed = 1`,
    /// `den = 10`, `side = 3`, `metric = euclid`).
    pub fn generate(kind: FamilyKind, params: FamilyParams) -> Result<Family> {
        let mut p = params;
        let seed = *p.seed.get_or_insert(1);
        let (points, circles): (Vec<Point3>, Vec<CircleRecord>) = match kind {
            FamilyKind::Example1 => (gen_example1(*p.b.get_or_insert(2))?, vec![]),
            FamilyKind::Pencil => {
                let h = p.h.get_or_insert_with(|| Rational::frac(3, 5)).clone();
                let pencil = gen_pencil(&h, *p.k.get_or_insert(10), seed)?;
                (pencil.base.to_vec(), pencil.circles.iter().map(CircleRecord::from).collect())
            }
            FamilyKind::Coplanar => {
                let fam = gen_coplanar_family(*p.n.get_or_insert(20), seed)?;
                (vec![], fam.iter().map(CircleRecord::from).collect())
            }
            FamilyKind::RandomSpheres => {
                let cfg = gen_random_config(*p.n.get_or_insert(20), *p.m.get_or_insert(0), seed, *p.den.get_or_insert(10))?;
                (cfg.points, cfg.circles.iter().map(CircleRecord::from).collect())
            }
            FamilyKind::GridPoints => {
                let metric = *p.metric.get_or_insert(Metric::Euclid);
                let pts = gen_grid_points(*p.n.get_or_insert(20), *p.den.get_or_insert(10), *p.side.get_or_insert(3), metric, seed)?;
                (pts, vec![])
            }
        };
        Ok(Family {
            kind,
            params: p,
            points,
            circles,
        })
    }

    pub fn analytic_circles(&self) -> Result<Vec<AnalyticCircle>> {
        self.circles.iter().map(CircleRecord::to_analytic).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn example1_sizes() {
        assert_eq!(gen_example1(1).unwrap().len(), 160);
        assert_eq!(example1_size(1), 160);
        let p2 = gen_example1(2).unwrap();
        assert_eq!(p2.len(), 1813);
        assert_eq!(example1_middle(&p2).len(), 45);
        assert!(gen_example1(0).is_err());
        assert!(p2.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn pencil_through_base_points() {
        let pen = gen_pencil(&rat!(3 / 5), 2, 3).unwrap();
        assert_eq!(pen.circles.len(), 2);
        for c in &pen.circles {
            assert!(pen.base.iter().all(|q| c.contains(q)));
        }
        let t0 = Locus::new(&rat!(16 / 25)).unwrap().at(&rat!(0));
        assert_eq!(t0, (rat!(4 / 5), rat!(0)));
        assert!(matches!(gen_pencil(&rat!(1 / 2), 2, 1), Err(Error::NonRationalLocus(_))));
    }

    #[test]
    fn pencil_from_known_locus_point() {
        // 1 − (1/3)² = 8/9 is not a rational square but 8·9 = 6² + 6²
        let locus = Locus::new(&rat!(8 / 9)).unwrap();
        assert!(matches!(locus, Locus::Point(..)));
        for t in [rat!(0), rat!(1 / 3), rat!(-7 / 2)] {
            let (x, y) = locus.at(&t);
            assert_eq!(x.square() + y.square(), rat!(8 / 9));
        }
        let pen = gen_pencil(&rat!(1 / 3), 3, 5).unwrap();
        for c in &pen.circles {
            assert!(pen.base.iter().all(|q| c.contains(q)));
        }
    }

    #[test]
    fn pipeline_small_cases() {
        let q = vec![Point3::origin(), Point3::from_ints(1, 0, 0)];
        assert_eq!(gen_sphere_circle_pipeline(&q, &[0, 0]).unwrap().len(), 1);
        let far = vec![Point3::origin(), Point3::from_ints(3, 0, 0), Point3::from_ints(0, 5, 0)];
        assert!(gen_sphere_circle_pipeline(&far, &[0, 0, 0]).unwrap().is_empty());
    }

    #[test]
    fn random_config_is_deterministic_and_bounded() {
        let a = gen_random_config(10, 20, 1, 1000).unwrap();
        assert_eq!(a, gen_random_config(10, 20, 1, 1000).unwrap());
        assert_eq!((a.circles.len(), a.points.len()), (10, 20));
        let small = gen_random_config(10, 5, 2, 3).unwrap();
        for c in &small.circles {
            let (p, q) = c.pair();
            for x in p.coords().into_iter().chain(q.coords()) {
                assert!(x.denom() <= &3.into());
            }
        }
    }

    #[test]
    fn sphere_points_are_on_sphere() {
        let pts = gen_sphere_points(40, 3, 9);
        assert_eq!(pts.len(), 40);
        assert!(pts.iter().all(|p| p.norm_sq() == rat!(1)));
    }

    #[test]
    fn family_json_roundtrip() {
        let f = Family::generate(FamilyKind::Pencil, FamilyParams { k: Some(3), ..Default::default() }).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"kind\":\"pencil\""));
        assert!(json.contains("\"pair\""));
        let back: Family = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.analytic_circles().unwrap().len(), 3);
    }
}
