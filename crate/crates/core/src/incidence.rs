//! Exact unit-distance counting and point/object incidences.
//!
//! Counting works on integer images of the input: every coordinate is
//! multiplied by the least common multiple `L` of all denominators, so the
//! unit conditions become `Σ dX² = L²` (Euclidean) and
//! `dX₁² + dX₂² + L·|dX₃| = L²` (the `d*` metric). Inputs whose scaled
//! coordinates do not fit the integer kernels fall back to rational
//! arithmetic.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, PrimInt, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::geometry::{
    circle_circle_intersection, AlgPoint3, AnalyticCircle, Circle, CircleIntersection, Plane, Point3, Sphere,
    UnitSphere,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclid,
    /// `(x₁−y₁)² + (x₂−y₂)² + |x₃−y₃|`.
    DStar,
}

impl Metric {
    pub fn is_unit(self, a: &Point3, b: &Point3) -> bool {
        let d = a - b;
        let one = Rational::one();
        match self {
            Metric::Euclid => d.norm_sq() == one,
            Metric::DStar => d.x.square() + d.y.square() + d.z.abs() == one,
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclid" => Ok(Metric::Euclid),
            "dstar" => Ok(Metric::DStar),
            _ => Err(Error::Parse {
                what: "metric",
                input: s.into(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Brute,
    Grid,
}

impl std::str::FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Engine::Brute),
            "grid" => Ok(Engine::Grid),
            _ => Err(Error::Parse {
                what: "engine",
                input: s.into(),
            }),
        }
    }
}

/// Integer image of a point set: `coords[i] = L · P[i]`.
struct Scaled<T> {
    l: T,
    coords: Vec<[T; 3]>,
}

/// Scales by the lcm of all denominators; `None` if the result exceeds
/// `bound` in absolute value.
fn scale_points(pts: &[Point3], bound: &BigInt) -> Option<Scaled<i128>> {
    let mut l = BigInt::one();
    for p in pts {
        for c in p.coords() {
            l = l.lcm(c.denom());
            if &l > bound {
                return None;
            }
        }
    }
    let coords = pts
        .iter()
        .map(|p| {
            let s = p.coords().map(|c| c.numer() * (&l / c.denom()));
            if s.iter().any(|v| v.abs() > *bound) {
                return None;
            }
            Some(s.map(|v| v.to_i128().expect("bounded")))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Scaled {
        l: l.to_i128().expect("bounded"),
        coords,
    })
}

#[inline]
fn unit_int<T: PrimInt + Signed>(metric: Metric, l: T, a: &[T; 3], b: &[T; 3]) -> bool {
    let d0 = a[0] - b[0];
    let d1 = a[1] - b[1];
    let d2 = a[2] - b[2];
    match metric {
        Metric::Euclid => d0 * d0 + d1 * d1 + d2 * d2 == l * l,
        Metric::DStar => d0 * d0 + d1 * d1 + l * d2.abs() == l * l,
    }
}

/// How a point set is represented for the counting kernels.
enum Kernel {
    /// `|X|, L ≤ 2^29`: every intermediate fits in `i64`.
    Small(Scaled<i64>),
    /// `|X|, L ≤ 2^60`: intermediates fit in `i128`.
    Wide(Scaled<i128>),
    Exact(Vec<Point3>),
}

impl Kernel {
    fn new(pts: &[Point3]) -> Kernel {
        match scale_points(pts, &(BigInt::one() << 60)) {
            Some(s) if s.l <= 1 << 29 && s.coords.iter().flatten().all(|v| v.abs() <= 1 << 29) => {
                Kernel::Small(Scaled {
                    l: s.l as i64,
                    coords: s.coords.iter().map(|c| c.map(|v| v as i64)).collect(),
                })
            }
            Some(s) => Kernel::Wide(s),
            None => Kernel::Exact(pts.to_vec()),
        }
    }

    fn unit(&self, metric: Metric, i: usize, j: usize) -> bool {
        match self {
            Kernel::Small(s) => unit_int(metric, s.l, &s.coords[i], &s.coords[j]),
            Kernel::Wide(s) => unit_int(metric, s.l, &s.coords[i], &s.coords[j]),
            Kernel::Exact(p) => metric.is_unit(&p[i], &p[j]),
        }
    }
}

fn par_sum<F: Fn(usize) -> u64 + Sync + Send>(n: usize, f: F) -> u64 {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).sum()
    }
}

/// Unordered pairs `{x, y}` at unit distance, by checking every pair.
pub fn count_unit_pairs_bruteforce(pts: &[Point3], metric: Metric) -> u64 {
    let k = Kernel::new(pts);
    let n = pts.len();
    par_sum(n, |i| (i + 1..n).filter(|&j| k.unit(metric, i, j)).count() as u64)
}

type CellKey = [i64; 3];

/// Points bucketed into unit cubes `[a, a+1) × [b, b+1) × [c, c+1)`.
fn bucket(pts: &[Point3]) -> (Vec<CellKey>, HashMap<CellKey, Vec<usize>>) {
    let mut cells: HashMap<CellKey, Vec<usize>> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        let key = p.coords().map(|c| c.floor().to_i64().expect("coordinate out of range"));
        cells.entry(key).or_default().push(i);
    }
    let mut keys: Vec<CellKey> = cells.keys().copied().collect();
    keys.sort_unstable();
    (keys, cells)
}

/// The 13 offsets that are lexicographically positive; together with the
/// cell itself they visit each neighboring cell pair once.
fn forward_offsets() -> Vec<CellKey> {
    let mut out = Vec::with_capacity(13);
    for dx in -1..=1 {
        for dy in -1..=1 {
            for dz in -1..=1 {
                if [dx, dy, dz] > [0, 0, 0] {
                    out.push([dx, dy, dz]);
                }
            }
        }
    }
    out
}

/// Same count as [`count_unit_pairs_bruteforce`], comparing only points in
/// equal or adjacent unit cells. Both metrics force `|Δxᵢ| ≤ 1` per axis,
/// so no unit pair is missed.
pub fn count_unit_pairs_grid(pts: &[Point3], metric: Metric) -> u64 {
    let k = Kernel::new(pts);
    let (keys, cells) = bucket(pts);
    let offsets = forward_offsets();
    par_sum(keys.len(), |ci| {
        let key = keys[ci];
        let own = &cells[&key];
        let mut count = 0u64;
        for (a, &i) in own.iter().enumerate() {
            count += own[a + 1..].iter().filter(|&&j| k.unit(metric, i, j)).count() as u64;
        }
        for off in &offsets {
            let nk = [key[0] + off[0], key[1] + off[1], key[2] + off[2]];
            if let Some(other) = cells.get(&nk) {
                for &i in own {
                    count += other.iter().filter(|&&j| k.unit(metric, i, j)).count() as u64;
                }
            }
        }
        count
    })
}

pub fn count_unit_pairs(pts: &[Point3], metric: Metric, engine: Engine) -> u64 {
    match engine {
        Engine::Brute => count_unit_pairs_bruteforce(pts, metric),
        Engine::Grid => count_unit_pairs_grid(pts, metric),
    }
}

/// Number of unit partners of each point in `targets`, against all of `pts`,
/// by direct comparison.
pub fn unit_partner_counts(pts: &[Point3], targets: &[usize], metric: Metric) -> Vec<usize> {
    let k = Kernel::new(pts);
    let one = |t: usize| (0..pts.len()).filter(|&j| j != t && k.unit(metric, t, j)).count();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        targets.par_iter().map(|&t| one(t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        targets.iter().map(|&t| one(t)).collect()
    }
}

/// Objects with an exact membership predicate.
pub trait Incidence {
    fn is_incident(&self, q: &Point3) -> bool;
}

impl Incidence for Circle {
    fn is_incident(&self, q: &Point3) -> bool {
        self.contains(q)
    }
}

impl Incidence for AnalyticCircle {
    fn is_incident(&self, q: &Point3) -> bool {
        self.contains(q)
    }
}

impl Incidence for Sphere {
    fn is_incident(&self, q: &Point3) -> bool {
        self.contains(q)
    }
}

impl Incidence for UnitSphere {
    fn is_incident(&self, q: &Point3) -> bool {
        self.contains(q)
    }
}

impl Incidence for Plane {
    fn is_incident(&self, q: &Point3) -> bool {
        self.contains(q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceReport {
    pub count: usize,
    /// `(point index, object index)`, in row-major order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(usize, usize)>>,
    /// Number of incident points on each object.
    pub per_object: Vec<usize>,
}

impl IncidenceReport {
    /// `histogram[k]` = number of objects carrying exactly `k` points.
    pub fn histogram(&self) -> Vec<usize> {
        let max = self.per_object.iter().copied().max().unwrap_or(0);
        let mut h = vec![0; max + 1];
        for &c in &self.per_object {
            h[c] += 1;
        }
        h
    }
}

pub fn incidences<Z: Incidence + Sync>(pts: &[Point3], objs: &[Z], keep_pairs: bool) -> IncidenceReport {
    let per_point = |i: usize| -> Vec<usize> { (0..objs.len()).filter(|&j| objs[j].is_incident(&pts[i])).collect() };
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<usize>> = {
        use rayon::prelude::*;
        (0..pts.len()).into_par_iter().map(per_point).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<usize>> = (0..pts.len()).map(per_point).collect();
    let mut per_object = vec![0; objs.len()];
    let mut pairs = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for &j in row {
            per_object[j] += 1;
            if keep_pairs {
                pairs.push((i, j));
            }
        }
    }
    IncidenceReport {
        count: per_object.iter().sum(),
        pairs: keep_pairs.then_some(pairs),
        per_object,
    }
}

pub fn incidences_points_circles(pts: &[Point3], circles: &[AnalyticCircle]) -> IncidenceReport {
    incidences(pts, circles, true)
}

/// Points lying on at least two of the circles, sorted and deduplicated.
pub fn two_rich_points(circles: &[AnalyticCircle]) -> Result<Vec<AlgPoint3>> {
    let mut out = Vec::new();
    for (i, a) in circles.iter().enumerate() {
        for b in &circles[i + 1..] {
            match circle_circle_intersection(a, b) {
                CircleIntersection::Coincident => return Err(Error::CoincidentInput),
                CircleIntersection::Points(p) => out.extend(p),
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A circle through the most points of a cospherical set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichestCircle {
    pub circle: AnalyticCircle,
    /// Indices of the points on `circle`, ascending.
    pub members: Vec<usize>,
}

impl RichestCircle {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

/// Circle through three non-collinear points.
pub fn circumcircle(a: &Point3, b: &Point3, c: &Point3) -> Result<AnalyticCircle> {
    let u = b - a;
    let v = c - a;
    let normal = u.cross(&v);
    if normal.is_zero() {
        return Err(Error::InvalidArgument("collinear points".into()));
    }
    let half = Rational::frac(1, 2);
    let center = crate::geometry::circle::solve3(
        [&normal, &u, &v],
        [
            &normal.dot(a),
            &((b.norm_sq() - a.norm_sq()) * &half),
            &((c.norm_sq() - a.norm_sq()) * &half),
        ],
    )
    .expect("independent rows");
    let r2 = center.dist_sq(a);
    AnalyticCircle::new(center, r2, normal)
}

/// Maximizes `|C ∩ P|` over circles `C` on the common sphere of `P`.
///
/// Three distinct points of a sphere are never collinear and every plane
/// meeting the sphere in three points cuts a circle, so the circles through
/// at least three points are exactly the planes through point triples.
/// Each such circle is found from its two smallest member indices.
pub fn richest_circle_on_sphere(pts: &[Point3]) -> Result<RichestCircle> {
    if pts.len() < 3 {
        return Err(Error::TooFewPoints(pts.len()));
    }
    let mut sorted: Vec<&Point3> = pts.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::CoincidentInput);
    }
    let m = pts.len();
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for i in 0..m {
        for j in i + 1..m {
            let mut by_plane: HashMap<(Point3, Rational), Vec<usize>> = HashMap::new();
            let u = &pts[j] - &pts[i];
            for k in j + 1..m {
                let n = u.cross(&(&pts[k] - &pts[i]));
                if n.is_zero() {
                    return Err(Error::InvalidArgument("collinear points are not cospherical".into()));
                }
                by_plane.entry(Plane::through(&pts[i], n).canonical()).or_default().push(k);
            }
            for rest in by_plane.into_values() {
                if best.as_ref().map_or(true, |b| rest.len() + 2 > b.2.len() + 2) {
                    best = Some((i, j, rest));
                }
            }
        }
    }
    let (i, j, rest) = best.expect("m >= 3");
    let circle = circumcircle(&pts[i], &pts[j], &pts[rest[0]])?;
    let mut members = vec![i, j];
    members.extend(rest);
    members.sort_unstable();
    Ok(RichestCircle { circle, members })
}

/// Parameters for evaluating the classical incidence bounds.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundInput {
    /// Number of points.
    pub m: f64,
    /// Number of curves or spheres.
    pub n: f64,
    /// Max circles on a common plane or sphere, or the `q` of the
    /// circle-point bound with rich spheres.
    pub b_or_q: f64,
    /// Extra additive term of the cutting-based circle bound.
    pub big_n: f64,
    pub observed: f64,
    /// Richness threshold for the rich-point form.
    pub k: Option<f64>,
    /// `(s, t)` for the Kővári–Sós–Turán form.
    pub kst: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub name: String,
    pub value: f64,
    /// `observed / value`.
    pub ratio: f64,
}

/// Every applicable bound formula with unit constants and `ε = 0`.
/// Informational only: the hidden constants are unknown.
pub fn bound_checker(inp: &BoundInput) -> Vec<BoundValue> {
    let BoundInput { m, n, b_or_q: b, big_n, .. } = *inp;
    let mut out = vec![
        ("circles-cutting", m.powf(0.5) * n.powf(0.75) + m.powf(2. / 3.) * n.powf(1. / 3.) * b.powf(1. / 3.) + m + big_n),
        (
            "circles-rich-spheres",
            m.powf(0.5) * n.powf(0.75)
                + m.powf(2. / 3.) * n.powf(13. / 15.)
                + m.powf(1. / 3.) * n.powf(8. / 9.)
                + n * b.powf(2. / 3.)
                + m,
        ),
        ("spheres-nondegenerate", m.powf(6. / 11.) * n.powf(9. / 11.) + m.powf(2. / 3.) * n.powf(2. / 3.) + m + n),
    ];
    if let Some(k) = inp.k {
        out.push(("rich-points", m.powi(4) * k.powi(-5) + m / k));
    }
    if let Some((s, t)) = inp.kst {
        out.push(("kst", t.powf(1. / s) * m * n.powf(1. - 1. / s) + s * n));
    }
    out.into_iter()
        .map(|(name, value)| BoundValue {
            name: name.to_string(),
            value,
            ratio: inp.observed / value,
        })
        .collect()
}
