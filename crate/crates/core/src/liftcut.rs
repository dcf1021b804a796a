//! Slope lift of circles to R^4, depth cycles, and cutting circles into
//! pseudo-segments.
//!
//! A non-vertical circle projects to an ellipse `f(x1, x2) = 0` in the
//! `(x1, x2)` plane. The lift adds `x4 = ∂2f / ∂1f`, which has a pole exactly
//! at the two x2-extremal points (`∂1f = 0`). Those points split the
//! ellipse into two halves on which `∂1f` has constant sign and `x2` is
//! strictly monotone; this gives an exact cyclic order on the circle.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{QuadExt, Rational};
use crate::geometry::circle::quadratic_roots;
use crate::geometry::{circle_circle_intersection, AlgPoint3, AnalyticCircle, CircleIntersection, Point3, Rotation};
use crate::rng::Lcg64;

/// `f(x1, x2) = A x1² + B x1x2 + C x2² + D x1 + E x2 + F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneQuadratic {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub e: Rational,
    pub f: Rational,
}

fn one_field(r: Result<QuadExt>) -> QuadExt {
    r.expect("operands share one radicand")
}

impl PlaneQuadratic {
    pub fn eval(&self, x1: &Rational, x2: &Rational) -> Rational {
        &self.a * x1.square() + &self.b * x1 * x2 + &self.c * x2.square() + &self.d * x1 + &self.e * x2 + &self.f
    }

    pub fn eval_alg(&self, x1: &QuadExt, x2: &QuadExt) -> QuadExt {
        let x12 = one_field(x1.try_mul(x2));
        let terms = [
            x1.square().scale(&self.a),
            x12.scale(&self.b),
            x2.square().scale(&self.c),
            x1.scale(&self.d),
            x2.scale(&self.e),
        ];
        terms
            .iter()
            .fold(QuadExt::rational(self.f.clone()), |acc, t| one_field(acc.try_add(t)))
    }

    /// `∂f/∂x1 = 2A x1 + B x2 + D`.
    pub fn d1(&self, x1: &QuadExt, x2: &QuadExt) -> QuadExt {
        let two_a = Rational::from(2) * &self.a;
        one_field(x1.scale(&two_a).try_add(&x2.scale(&self.b))).add_rational(&self.d)
    }

    /// `∂f/∂x2 = B x1 + 2C x2 + E`.
    pub fn d2(&self, x1: &QuadExt, x2: &QuadExt) -> QuadExt {
        let two_c = Rational::from(2) * &self.c;
        one_field(x1.scale(&self.b).try_add(&x2.scale(&two_c))).add_rational(&self.e)
    }
}

/// Implicit equation of the `(x1, x2)` projection of a non-vertical circle.
///
/// On the plane, `x3 − m3 = −(k1 X + k2 Y)` with `X = x1 − m1`,
/// `Y = x2 − m2`, `k = n / n3`, so the sphere equation becomes
/// `X² + Y² + (k1 X + k2 Y)² = r²`.
pub fn project_implicitize(c: &AnalyticCircle) -> Result<PlaneQuadratic> {
    if c.is_vertical() {
        return Err(Error::VerticalCircle);
    }
    let n = c.normal();
    let k1 = &n.x / &n.z;
    let k2 = &n.y / &n.z;
    let a = Rational::one() + k1.square();
    let b = Rational::from(2) * &k1 * &k2;
    let cc = Rational::one() + k2.square();
    let m = c.center();
    let two = Rational::from(2);
    let d = -(&two * &a * &m.x) - &b * &m.y;
    let e = -(&b * &m.x) - &two * &cc * &m.y;
    let f = &a * m.x.square() + &b * &m.x * &m.y + &cc * m.y.square() - c.radius_sq();
    Ok(PlaneQuadratic { a, b, c: cc, d, e, f })
}

/// `x4 = ∂2f / ∂1f` at a point of the projected curve.
pub fn lift_slope(f: &PlaneQuadratic, x1: &QuadExt, x2: &QuadExt) -> Result<QuadExt> {
    let d1 = f.d1(x1, x2);
    if d1.is_zero() {
        return Err(Error::PoleAtExtremal);
    }
    f.d2(x1, x2).try_div(&d1)
}

/// A circle point together with its lifted fourth coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedPoint {
    pub base: AlgPoint3,
    pub x4: QuadExt,
}

pub fn lift_point(f: &PlaneQuadratic, p: &AlgPoint3) -> Result<LiftedPoint> {
    Ok(LiftedPoint {
        base: p.clone(),
        x4: lift_slope(f, &p.x, &p.y)?,
    })
}

/// The two points of the circle where `∂1f = 0`, ordered by `x2`.
///
/// On `∂1f = 0` we have `x1 = p·x2 + q`; substituting into `f` leaves a
/// quadratic in `x2`, and `x3` comes back from the plane equation.
pub fn x2_extremal_points(f: &PlaneQuadratic, c: &AnalyticCircle) -> Result<[AlgPoint3; 2]> {
    if c.is_vertical() {
        return Err(Error::VerticalCircle);
    }
    let two_a = Rational::from(2) * &f.a;
    let p = -(&f.b / &two_a);
    let q = -(&f.d / &two_a);
    let qa = &f.a * p.square() + &f.b * &p + &f.c;
    let qb = Rational::from(2) * &f.a * &p * &q + &f.b * &q + &f.d * &p + &f.e;
    let qc = &f.a * q.square() + &f.d * &q + &f.f;
    let roots = quadratic_roots(&qa, &qb, &qc);
    let [lo, hi] = <[QuadExt; 2]>::try_from(roots).map_err(|_| Error::InvalidArgument("projection is not an ellipse".into()))?;
    let (n, m) = (c.normal(), c.center());
    let lift = |x2: QuadExt| -> Result<AlgPoint3> {
        let x1 = x2.scale(&p).add_rational(&q);
        // x3 = m3 − (n1 (x1 − m1) + n2 (x2 − m2)) / n3
        let dx = x1.add_rational(&-&m.x).scale(&n.x);
        let dy = x2.add_rational(&-&m.y).scale(&n.y);
        let x3 = dx.try_add(&dy)?.scale(&-(n.z.recip()?)).add_rational(&m.z);
        AlgPoint3::new(x1, x2, x3)
    };
    Ok([lift(lo)?, lift(hi)?])
}

/// Position on a circle in a fixed cyclic order: the lower extremal point,
/// the `∂1f > 0` half by increasing `x2`, the upper extremal point, then the
/// `∂1f < 0` half by decreasing `x2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CyclicKey(u8, QuadExt);

/// A non-vertical circle with its projection and extremal points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleChart {
    pub circle: AnalyticCircle,
    pub f: PlaneQuadratic,
    pub x2_min: AlgPoint3,
    pub x2_max: AlgPoint3,
}

impl CircleChart {
    pub fn new(circle: &AnalyticCircle) -> Result<Self> {
        let f = project_implicitize(circle)?;
        let [x2_min, x2_max] = x2_extremal_points(&f, circle)?;
        Ok(CircleChart {
            circle: circle.clone(),
            f,
            x2_min,
            x2_max,
        })
    }

    /// Sign of `∂1f`: which half-ellipse the point is on, 0 at extremal points.
    pub fn half(&self, p: &AlgPoint3) -> i8 {
        self.f.d1(&p.x, &p.y).sign()
    }

    pub fn slope(&self, p: &AlgPoint3) -> Result<QuadExt> {
        lift_slope(&self.f, &p.x, &p.y)
    }

    pub fn key(&self, p: &AlgPoint3) -> CyclicKey {
        match self.half(p) {
            1 => CyclicKey(1, p.y.clone()),
            -1 => CyclicKey(3, p.y.neg()),
            _ if p.y == self.x2_min.y => CyclicKey(0, QuadExt::zero()),
            _ => CyclicKey(2, QuadExt::zero()),
        }
    }
}

/// Two intersection points of the circles, if there are exactly two.
pub fn detect_lens(c1: &AnalyticCircle, c2: &AnalyticCircle) -> Result<Option<(AlgPoint3, AlgPoint3)>> {
    match circle_circle_intersection(c1, c2) {
        CircleIntersection::Coincident => Err(Error::CoincidentInput),
        CircleIntersection::Points(p) => Ok(match <[AlgPoint3; 2]>::try_from(p) {
            Ok([x, y]) => Some((x, y)),
            Err(_) => None,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DepthCycle {
    /// The slope order at `x` is opposite to the order at `y`, at least one
    /// strictly.
    Proper,
    /// Equal slopes at both points.
    Improper,
    NoCycle,
}

/// Depth-cycle test of two lifted circles at their common points `x`, `y`.
///
/// Requires both points on the same open half-ellipse of each circle:
/// points at an extremal point fail with `PoleAtExtremal`, points on
/// different halves with `SplitByExtremal`.
pub fn depth_cycle_at(c1: &CircleChart, c2: &CircleChart, x: &AlgPoint3, y: &AlgPoint3) -> Result<DepthCycle> {
    for ch in [c1, c2] {
        let (hx, hy) = (ch.half(x), ch.half(y));
        if hx == 0 || hy == 0 {
            return Err(Error::PoleAtExtremal);
        }
        if hx != hy {
            return Err(Error::SplitByExtremal);
        }
    }
    let sx = c1.slope(x)?.try_sub(&c2.slope(x)?)?.sign();
    let sy = c1.slope(y)?.try_sub(&c2.slope(y)?)?.sign();
    Ok(match (sx, sy) {
        (0, 0) => DepthCycle::Improper,
        _ if sx * sy <= 0 => DepthCycle::Proper,
        _ => DepthCycle::NoCycle,
    })
}

/// Finds the lens of two circles and runs [`depth_cycle_at`] on it.
pub fn depth_cycle_check(c1: &AnalyticCircle, c2: &AnalyticCircle) -> Result<DepthCycle> {
    let Some((x, y)) = detect_lens(c1, c2)? else {
        return Ok(DepthCycle::NoCycle);
    };
    depth_cycle_at(&CircleChart::new(c1)?, &CircleChart::new(c2)?, &x, &y)
}

/// Polynomial in one variable, coefficients from the constant term up.
type Poly = Vec<Rational>;

fn poly_mul(a: &[Rational], b: &[Rational]) -> Poly {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Poly {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn poly_scale(a: &[Rational], k: &Rational) -> Poly {
    a.iter().map(|x| x * k).collect()
}

fn poly_trim(mut a: Poly) -> Poly {
    while a.last().is_some_and(Rational::is_zero) {
        a.pop();
    }
    a
}

/// Quotient of `a` by the monic `d`, or `None` if the remainder is nonzero.
fn poly_div_exact(a: &[Rational], d: &[Rational]) -> Option<Poly> {
    let mut rem = a.to_vec();
    let dn = d.len() - 1;
    if rem.len() <= dn {
        return rem.iter().all(Rational::is_zero).then(Vec::new);
    }
    let mut q = vec![Rational::zero(); rem.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn].clone();
        for (j, dj) in d.iter().enumerate() {
            rem[i + j] -= &(&c * dj);
        }
        q[i] = c;
    }
    rem.iter().all(Rational::is_zero).then_some(q)
}

fn poly_eval(a: &[Rational], t: &QuadExt) -> QuadExt {
    a.iter()
        .rev()
        .fold(QuadExt::zero(), |acc, c| one_field(acc.try_mul(t)).add_rational(c))
}

fn rational_of(q: QuadExt) -> Result<Rational> {
    q.as_rational()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("lens points are not conjugate".into()))
}

/// Whether the projected arcs between `x` and `y` (on the half-ellipses
/// containing them) meet only at the projections of `x` and `y`.
///
/// The `x2` coordinates of all common points of the two projected conics
/// are roots of the resultant of `f1`, `f2` in `x1`, a quartic. Removing the
/// factor for `x` and `y` leaves a quadratic whose roots are checked for
/// lying strictly between them on both arcs.
pub fn projections_form_lens(c1: &CircleChart, c2: &CircleChart, x: &AlgPoint3, y: &AlgPoint3) -> Result<bool> {
    let halves = [(c1.half(x), c1.half(y)), (c2.half(x), c2.half(y))];
    if halves.iter().any(|&(a, b)| a == 0 || b == 0) {
        return Err(Error::PoleAtExtremal);
    }
    if halves.iter().any(|&(a, b)| a != b) {
        return Err(Error::SplitByExtremal);
    }
    let (f1, f2) = (&c1.f, &c2.f);
    let a1 = vec![f1.a.clone()];
    let a2 = vec![f2.a.clone()];
    let p1 = vec![f1.d.clone(), f1.b.clone()];
    let p2 = vec![f2.d.clone(), f2.b.clone()];
    let q1 = vec![f1.f.clone(), f1.e.clone(), f1.c.clone()];
    let q2 = vec![f2.f.clone(), f2.e.clone(), f2.c.clone()];
    // Res = (a1 q2 − a2 q1)² − (a1 p2 − a2 p1)(p1 q2 − p2 q1)
    let u = poly_sub(&poly_mul(&a1, &q2), &poly_mul(&a2, &q1));
    let v = poly_sub(&poly_mul(&a1, &p2), &poly_mul(&a2, &p1));
    let w = poly_sub(&poly_mul(&p1, &q2), &poly_mul(&p2, &q1));
    let res = poly_trim(poly_sub(&poly_mul(&u, &u), &poly_mul(&v, &w)));
    if res.is_empty() {
        return Err(Error::CoincidentInput);
    }
    let sum = rational_of(one_field(x.y.try_add(&y.y)))?;
    let prod = rational_of(one_field(x.y.try_mul(&y.y)))?;
    let known = vec![prod, -sum, Rational::one()];
    let rest = poly_trim(
        poly_div_exact(&res, &known).ok_or_else(|| Error::InvalidArgument("lens points are not common points".into()))?,
    );
    let roots: Vec<QuadExt> = match rest.len() {
        3 => quadratic_roots(&rest[2], &rest[1], &rest[0]),
        2 => vec![QuadExt::rational(-(&rest[0] / &rest[1]))],
        _ => vec![],
    };
    let (lo, hi) = if x.y <= y.y { (&x.y, &y.y) } else { (&y.y, &x.y) };
    // a2 f1 − a1 f2 is linear in x1 and vanishes at every common point
    let lin = poly_sub(&poly_scale(&p1, &f2.a), &poly_scale(&p2, &f1.a));
    let cst = poly_sub(&poly_scale(&q1, &f2.a), &poly_scale(&q2, &f1.a));
    for t in roots.iter().filter(|t| *t > lo && *t < hi) {
        let den = poly_eval(&lin, t);
        if den.is_zero() {
            // common points sit symmetrically; treat as a crossing
            return Ok(false);
        }
        let x1 = poly_eval(&cst, t).neg().try_div(&den)?;
        if f1.d1(&x1, t).sign() == halves[0].0 && f2.d1(&x1, t).sign() == halves[1].0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One seeded rational rotation that makes every circle non-vertical.
pub fn rotate_to_general_position(circles: &[AnalyticCircle], seed: u64) -> Result<(Rotation, Vec<AnalyticCircle>)> {
    if circles.iter().all(|c| !c.is_vertical()) {
        return Ok((Rotation::identity(), circles.to_vec()));
    }
    let mut rng = Lcg64::new(seed);
    for _ in 0..256 {
        let q = [0; 4].map(|_| rng.int_in(-9, 9));
        if q == [0; 4] {
            continue;
        }
        let rot = Rotation::from_quaternion(q[0], q[1], q[2], q[3]);
        let out: Vec<AnalyticCircle> = circles.iter().map(|c| rot.analytic_circle(c)).collect();
        if out.iter().all(|c| !c.is_vertical()) {
            return Ok((rot, out));
        }
    }
    Err(Error::VerticalCircle)
}

/// A circle with its cut points in cyclic order. The arcs are the open
/// pieces between consecutive cuts; with no cuts the circle is one arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutCircle {
    pub id: usize,
    pub chart: CircleChart,
    cuts: Vec<(CyclicKey, AlgPoint3)>,
}

/// Open arc `(start, end)` of circle `circle`; `None` ends mean the arc is
/// the whole circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub circle: usize,
    pub index: usize,
    pub start: Option<AlgPoint3>,
    pub end: Option<AlgPoint3>,
}

impl CutCircle {
    pub fn new(id: usize, chart: CircleChart, cuts: impl IntoIterator<Item = AlgPoint3>) -> Result<Self> {
        let mut c = CutCircle {
            id,
            chart,
            cuts: Vec::new(),
        };
        for p in cuts {
            c.add_cut(p)?;
        }
        Ok(c)
    }

    /// Inserts a cut; returns false if the point already was one.
    pub fn add_cut(&mut self, p: AlgPoint3) -> Result<bool> {
        if !self.chart.circle.contains_alg(&p) {
            return Err(Error::InvalidArgument("cut point is not on the circle".into()));
        }
        let k = self.chart.key(&p);
        match self.cuts.binary_search_by(|(c, _)| c.cmp(&k)) {
            Ok(_) => Ok(false),
            Err(i) => {
                self.cuts.insert(i, (k, p));
                Ok(true)
            }
        }
    }

    pub fn cut_points(&self) -> impl Iterator<Item = &AlgPoint3> {
        self.cuts.iter().map(|(_, p)| p)
    }

    pub fn cut_count(&self) -> usize {
        self.cuts.len()
    }

    pub fn arc_count(&self) -> usize {
        self.cuts.len().max(1)
    }

    /// Index of the arc containing a circle point, `None` for cut points.
    pub fn arc_of(&self, p: &AlgPoint3) -> Option<usize> {
        let len = self.cuts.len();
        if len == 0 {
            return Some(0);
        }
        let k = self.chart.key(p);
        match self.cuts.binary_search_by(|(c, _)| c.cmp(&k)) {
            Ok(_) => None,
            Err(pos) => Some((pos + len - 1) % len),
        }
    }

    pub fn arcs(&self) -> Vec<Arc> {
        let len = self.cuts.len();
        if len == 0 {
            return vec![Arc {
                circle: self.id,
                index: 0,
                start: None,
                end: None,
            }];
        }
        (0..len)
            .map(|i| Arc {
                circle: self.id,
                index: i,
                start: Some(self.cuts[i].1.clone()),
                end: Some(self.cuts[(i + 1) % len].1.clone()),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cutting {
    pub circles: Vec<CutCircle>,
    pub cut_count: usize,
    pub lens_count: usize,
}

impl Cutting {
    pub fn arcs(&self) -> Vec<Arc> {
        self.circles.iter().flat_map(|c| c.arcs()).collect()
    }
}

fn lenses(charts: &[CircleChart]) -> Result<Vec<(usize, usize, AlgPoint3, AlgPoint3)>> {
    let n = charts.len();
    let row = |i: usize| -> Result<Vec<_>> {
        let mut out = Vec::new();
        for j in i + 1..n {
            if let Some((x, y)) = detect_lens(&charts[i].circle, &charts[j].circle)? {
                out.push((i, j, x, y));
            }
        }
        Ok(out)
    };
    #[cfg(feature = "parallel")]
    let rows: Result<Vec<_>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Result<Vec<_>> = (0..n).map(row).collect();
    Ok(rows?.into_iter().flatten().collect())
}

fn same_arc(c: &CutCircle, x: &AlgPoint3, y: &AlgPoint3) -> Option<usize> {
    match (c.arc_of(x), c.arc_of(y)) {
        (Some(a), Some(b)) if a == b => Some(a),
        _ => None,
    }
}

/// Cuts every circle at its two x2-extremal points, then resolves each lens
/// whose two points share an arc on both circles by cutting the circle with
/// the larger index at the lexicographically smaller point. Cuts are only
/// ever added, so a resolved lens stays resolved and one pass suffices.
pub fn cut_to_pseudosegments(circles: &[AnalyticCircle]) -> Result<Cutting> {
    let charts = circles.iter().map(CircleChart::new).collect::<Result<Vec<_>>>()?;
    let lens_list = lenses(&charts)?;
    let mut cut: Vec<CutCircle> = charts
        .into_iter()
        .enumerate()
        .map(|(i, ch)| {
            let ext = [ch.x2_min.clone(), ch.x2_max.clone()];
            CutCircle::new(i, ch, ext)
        })
        .collect::<Result<_>>()?;
    for (i, j, x, y) in &lens_list {
        if same_arc(&cut[*i], x, y).is_some() && same_arc(&cut[*j], x, y).is_some() {
            cut[*j].add_cut(x.clone().min(y.clone()))?;
        }
    }
    Ok(Cutting {
        cut_count: cut.iter().map(|c| c.cut_count()).sum(),
        lens_count: lens_list.len(),
        circles: cut,
    })
}

/// Two arcs sharing two points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensWitness {
    pub arc_a: (usize, usize),
    pub arc_b: (usize, usize),
    pub points: [AlgPoint3; 2],
}

/// Checks that no two arcs share two points, recomputing every circle
/// intersection from scratch. Returns the first offending arc pair.
pub fn verify_pseudosegments(circles: &[CutCircle]) -> Result<Option<LensWitness>> {
    for (a, ca) in circles.iter().enumerate() {
        for cb in &circles[a + 1..] {
            let pts = match circle_circle_intersection(&ca.chart.circle, &cb.chart.circle) {
                CircleIntersection::Coincident => return Err(Error::CoincidentInput),
                CircleIntersection::Points(p) => p,
            };
            if let [x, y] = pts.as_slice() {
                if let (Some(ia), Some(ib)) = (same_arc(ca, x, y), same_arc(cb, x, y)) {
                    return Ok(Some(LensWitness {
                        arc_a: (ca.id, ia),
                        arc_b: (cb.id, ib),
                        points: [x.clone(), y.clone()],
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Largest number of circles lying on one plane or on one sphere.
pub fn max_cospherical_or_coplanar(circles: &[AnalyticCircle]) -> usize {
    if circles.is_empty() {
        return 0;
    }
    let mut planes: HashMap<(Point3, Rational), usize> = HashMap::new();
    for c in circles {
        *planes.entry(c.plane().canonical()).or_default() += 1;
    }
    let mut spheres: HashMap<(Point3, Rational), Vec<usize>> = HashMap::new();
    for (i, a) in circles.iter().enumerate() {
        for (j, b) in circles.iter().enumerate().skip(i + 1) {
            if let Some(s) = common_sphere(a, b) {
                let members = spheres.entry(s).or_default();
                for k in [i, j] {
                    if !members.contains(&k) {
                        members.push(k);
                    }
                }
            }
        }
    }
    let best_plane = planes.values().copied().max().unwrap_or(0);
    let best_sphere = spheres.values().map(Vec::len).max().unwrap_or(0);
    best_plane.max(best_sphere).max(1)
}

/// The sphere through two non-coplanar circles, as `(center, radius²)`.
/// Its center lies on both circle axes.
fn common_sphere(a: &AnalyticCircle, b: &AnalyticCircle) -> Option<(Point3, Rational)> {
    if a.plane().same_as(&b.plane()) {
        return None;
    }
    let (ca, cb) = (a.center(), b.center());
    let (na, nb) = (a.normal(), b.normal());
    let w = cb - ca;
    let cross = na.cross(nb);
    let center = if cross.is_zero() {
        if !w.is_parallel(na) {
            return None;
        }
        // coaxial: |s − ca|² + ra² = |s − cb|² + rb² along the axis ca + t·w
        let t = (w.norm_sq() + b.radius_sq() - a.radius_sq()) / (Rational::from(2) * w.norm_sq());
        ca + &w.scale(&t)
    } else {
        if !w.dot(&cross).is_zero() {
            return None;
        }
        let t = w.cross(nb).dot(&cross) / cross.norm_sq();
        ca + &na.scale(&t)
    };
    let ra = center.dist_sq(ca) + a.radius_sq();
    (ra == center.dist_sq(cb) + b.radius_sq()).then_some((center, ra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Circle;
    use crate::rat;

    fn flat_unit() -> AnalyticCircle {
        AnalyticCircle::new(Point3::origin(), rat!(1), Point3::from_ints(0, 0, 1)).unwrap()
    }

    fn q(r: Rational) -> QuadExt {
        QuadExt::rational(r)
    }

    #[test]
    fn implicitize_examples() {
        let f = project_implicitize(&flat_unit()).unwrap();
        assert_eq!((f.a.clone(), f.b.clone(), f.c.clone(), f.f.clone()), (rat!(1), rat!(0), rat!(1), rat!(-1)));
        let tilted = AnalyticCircle::new(Point3::origin(), rat!(1), Point3::from_ints(-1, 0, 1)).unwrap();
        let g = project_implicitize(&tilted).unwrap();
        assert_eq!((g.a.clone(), g.c.clone(), g.d.clone(), g.e.clone(), g.f.clone()), (rat!(2), rat!(1), rat!(0), rat!(0), rat!(-1)));
        let vertical = AnalyticCircle::new(Point3::origin(), rat!(1), Point3::from_ints(0, 1, 0)).unwrap();
        assert_eq!(project_implicitize(&vertical), Err(Error::VerticalCircle));
    }

    #[test]
    fn slope_examples() {
        let f = project_implicitize(&flat_unit()).unwrap();
        assert!(lift_slope(&f, &q(rat!(1)), &q(rat!(0))).unwrap().is_zero());
        assert_eq!(lift_slope(&f, &q(rat!(3 / 5)), &q(rat!(4 / 5))).unwrap(), q(rat!(4 / 3)));
        assert_eq!(lift_slope(&f, &q(rat!(0)), &q(rat!(1))), Err(Error::PoleAtExtremal));
    }

    #[test]
    fn extremal_points_of_circle_and_tilted() {
        let c = flat_unit();
        let f = project_implicitize(&c).unwrap();
        let [lo, hi] = x2_extremal_points(&f, &c).unwrap();
        assert_eq!(lo, AlgPoint3::from(Point3::from_ints(0, -1, 0)));
        assert_eq!(hi, AlgPoint3::from(Point3::from_ints(0, 1, 0)));
        let t = AnalyticCircle::new(Point3::origin(), rat!(1), Point3::from_ints(-1, 0, 1)).unwrap();
        let g = project_implicitize(&t).unwrap();
        let [lo, hi] = x2_extremal_points(&g, &t).unwrap();
        assert_eq!((lo.x.clone(), lo.y.clone()), (q(rat!(0)), q(rat!(-1))));
        assert_eq!((hi.x.clone(), hi.y.clone()), (q(rat!(0)), q(rat!(1))));
    }

    #[test]
    fn cyclic_order_on_unit_circle() {
        let ch = CircleChart::new(&flat_unit()).unwrap();
        let p = |x: Rational, y: Rational| AlgPoint3::from(Point3::new(x, y, rat!(0)));
        // counterclockwise from the bottom: right half up, left half down
        let order = [
            p(rat!(0), rat!(-1)),
            p(rat!(3 / 5), rat!(-4 / 5)),
            p(rat!(1), rat!(0)),
            p(rat!(3 / 5), rat!(4 / 5)),
            p(rat!(0), rat!(1)),
            p(rat!(-3 / 5), rat!(4 / 5)),
            p(rat!(-1), rat!(0)),
            p(rat!(-4 / 5), rat!(-3 / 5)),
        ];
        for w in order.windows(2) {
            assert!(ch.key(&w[0]) < ch.key(&w[1]));
        }
    }

    #[test]
    fn arcs_with_wraparound() {
        let ch = CircleChart::new(&flat_unit()).unwrap();
        let ext = [ch.x2_min.clone(), ch.x2_max.clone()];
        let c = CutCircle::new(0, ch, ext).unwrap();
        let right = AlgPoint3::from(Point3::from_ints(1, 0, 0));
        let left = AlgPoint3::from(Point3::from_ints(-1, 0, 0));
        assert_eq!(c.arc_of(&right), Some(0));
        assert_eq!(c.arc_of(&left), Some(1));
        assert_eq!(c.arc_of(&AlgPoint3::from(Point3::from_ints(0, 1, 0))), None);
        assert_eq!(c.arcs().len(), 2);
    }

    #[test]
    fn lens_detection() {
        let z = Point3::from_ints(0, 0, 1);
        let a = AnalyticCircle::new(Point3::origin(), rat!(1), z.clone()).unwrap();
        let tangent = AnalyticCircle::new(Point3::from_ints(2, 0, 0), rat!(1), z.clone()).unwrap();
        let far = AnalyticCircle::new(Point3::from_ints(9, 0, 0), rat!(1), z).unwrap();
        assert_eq!(detect_lens(&a, &far).unwrap(), None);
        assert_eq!(detect_lens(&a, &tangent).unwrap(), None);
        assert_eq!(depth_cycle_check(&a, &tangent).unwrap(), DepthCycle::NoCycle);
        assert_eq!(detect_lens(&a, &a), Err(Error::CoincidentInput));
    }

    #[test]
    fn single_and_disjoint_cuttings() {
        let a = flat_unit();
        let one = cut_to_pseudosegments(std::slice::from_ref(&a)).unwrap();
        assert_eq!((one.cut_count, one.arcs().len()), (2, 2));
        let b = AnalyticCircle::new(Point3::from_ints(5, 0, 1), rat!(1), Point3::from_ints(1, 1, 1)).unwrap();
        let two = cut_to_pseudosegments(&[a, b]).unwrap();
        assert_eq!((two.cut_count, two.arcs().len()), (4, 4));
        assert_eq!(verify_pseudosegments(&two.circles).unwrap(), None);
    }

    #[test]
    fn common_sphere_detection() {
        let p = Point3::from_ints(0, 0, 0);
        let c1 = Circle::from_pair(&p, &Point3::from_ints(1, 0, 0)).unwrap().to_analytic();
        let c2 = Circle::from_pair(&p, &Point3::from_ints(0, 1, 0)).unwrap().to_analytic();
        let c3 = Circle::from_pair(&p, &Point3::new(rat!(1 / 2), rat!(1 / 3), rat!(1))).unwrap().to_analytic();
        assert_eq!(common_sphere(&c1, &c2), Some((p.clone(), rat!(1))));
        assert_eq!(max_cospherical_or_coplanar(&[c1.clone(), c2, c3]), 3);
        let flat = AnalyticCircle::new(Point3::from_ints(0, 0, 0), rat!(1), Point3::from_ints(0, 0, 1)).unwrap();
        let higher = AnalyticCircle::new(Point3::from_ints(0, 0, 1), rat!(2), Point3::from_ints(0, 0, 3)).unwrap();
        let (center, r2) = common_sphere(&flat, &higher).unwrap();
        assert!(flat.lies_on_sphere(&crate::geometry::Sphere::new(center.clone(), r2.clone())));
        assert!(higher.lies_on_sphere(&crate::geometry::Sphere::new(center, r2)));
    }
}
