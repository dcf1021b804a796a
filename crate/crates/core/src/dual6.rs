//! The R^6 dual space: a circle `C_{pp'}` is the point `(p, p')`, and a
//! point `q` becomes the double-sphere `Z_q = S_q x S_q`.
//!
//! `q ∈ C_{pp'}` holds exactly when `(p, p') ∈ Z_q`. The tangent space of
//! `Z_q` at `w = (a, b)` is `{(u, v) : u.(a-q) = 0, v.(b-q) = 0}`, a
//! 4-dimensional space; this module builds rational spanning sets for it and
//! computes exact ranks of their sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{RatMatrix, Rational};
use crate::geometry::{orthogonal_complement, rational_sphere_point, Circle, Point3};
use crate::rng::Lcg64;

/// A point `(a, b)` of R^3 x R^3.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualPoint6 {
    pub a: Point3,
    pub b: Point3,
}

impl DualPoint6 {
    pub fn new(a: Point3, b: Point3) -> Self {
        DualPoint6 { a, b }
    }
}

/// `Z_q = S_q x S_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DoubleSphere {
    pub q: Point3,
}

impl DoubleSphere {
    pub fn new(q: Point3) -> Self {
        DoubleSphere { q }
    }

    pub fn contains(&self, w: &DualPoint6) -> bool {
        let one = Rational::one();
        w.a.dist_sq(&self.q) == one && w.b.dist_sq(&self.q) == one
    }
}

pub fn double_sphere_contains(q: &Point3, w: &DualPoint6) -> bool {
    DoubleSphere::new(q.clone()).contains(w)
}

/// Whether `q ∈ C_{pp'}` agrees with `(p, p') ∈ Z_q`. Always true; the
/// point of the function is to check it on data.
pub fn duality_check(q: &Point3, p: &Point3, p2: &Point3) -> Result<bool> {
    if p == p2 {
        return Err(Error::DegeneratePair);
    }
    let circle = Circle::from_pair(p, p2).map_err(|_| Error::DegeneratePair)?;
    let on_circle = circle.contains(q);
    let on_variety = double_sphere_contains(q, &DualPoint6::new(p.clone(), p2.clone()));
    Ok(on_circle == on_variety)
}

/// Rational spanning set (a basis) of the tangent space `T_w Z_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentBasis {
    pub w: DualPoint6,
    pub q: Point3,
    pub basis: [[Rational; 6]; 4],
}

impl TangentBasis {
    pub fn matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(&self.basis)
    }
}

pub fn tangent_basis(q: &Point3, w: &DualPoint6) -> Result<TangentBasis> {
    if !double_sphere_contains(q, w) {
        return Err(Error::NotOnVariety);
    }
    let zero = || Rational::zero();
    let embed = |v: &Point3, second: bool| -> [Rational; 6] {
        let [x, y, z] = v.coords().map(Clone::clone);
        if second {
            [zero(), zero(), zero(), x, y, z]
        } else {
            [x, y, z, zero(), zero(), zero()]
        }
    };
    let [u1, u2] = orthogonal_complement(&(&w.a - q));
    let [v1, v2] = orthogonal_complement(&(&w.b - q));
    Ok(TangentBasis {
        w: w.clone(),
        q: q.clone(),
        basis: [embed(&u1, false), embed(&u2, false), embed(&v1, true), embed(&v2, true)],
    })
}

fn check_shared(bases: &[TangentBasis]) -> Result<()> {
    let Some(first) = bases.first() else {
        return Ok(());
    };
    if bases.iter().any(|b| b.w != first.w) {
        return Err(Error::MixedBasepoints);
    }
    for (i, b) in bases.iter().enumerate() {
        if bases[..i].iter().any(|o| o.q == b.q) {
            return Err(Error::MixedCenters);
        }
    }
    Ok(())
}

/// Dimension of the sum of the tangent spaces, by exact rank.
pub fn span_rank(bases: &[TangentBasis]) -> Result<usize> {
    check_shared(bases)?;
    let rows: Vec<[Rational; 6]> = bases.iter().flat_map(|b| b.basis.iter().cloned()).collect();
    Ok(RatMatrix::from_rows(&rows).rank())
}

/// `dim(T_w Z_q1 ∩ T_w Z_q2) = 8 - dim(T_w Z_q1 + T_w Z_q2)`.
pub fn pair_intersection_dim(b1: &TangentBasis, b2: &TangentBasis) -> Result<usize> {
    Ok(8 - span_rank(&[b1.clone(), b2.clone()])?)
}

/// A shared witness `w = (a, b)` together with several centers `q` such that
/// `w ∈ Z_q` for all of them.
#[derive(Clone, Debug)]
pub struct WitnessConfig {
    pub w: DualPoint6,
    pub centers: Vec<Point3>,
}

/// Draws a rational witness on `Z_{q1}` and `extra` further centers sharing
/// it.
///
/// `a` and `b` are rational points of `S_{q1}`; every center at distance 1
/// from both lies on the circle `S_a ∩ S_b`, which passes through `q1`. Its
/// other rational points come from intersecting lines through `q1` inside the
/// circle's plane with `S_a`.
pub fn random_witness_config(rng: &mut Lcg64, extra: usize) -> WitnessConfig {
    loop {
        let q1 = Point3::new(rng.rational_in(-3, 3, 7), rng.rational_in(-3, 3, 7), rng.rational_in(-3, 3, 7));
        let mut param = || rng.rational_in(-3, 3, 6);
        let a = rational_sphere_point(&param(), &param(), &q1);
        let b = rational_sphere_point(&param(), &param(), &q1);
        if a == b || a.dist_sq(&b) >= Rational::from(4) {
            continue;
        }
        let [e1, e2] = orthogonal_complement(&(&b - &a));
        let mut centers = vec![q1.clone()];
        let mut guard = 0;
        while centers.len() < extra + 1 && guard < 100 {
            guard += 1;
            let t = rng.rational_in(-4, 4, 9);
            let d = &e1 + &e2.scale(&t);
            let lambda = Rational::from(-2) * (&q1 - &a).dot(&d) / d.norm_sq();
            let c = &q1 + &d.scale(&lambda);
            if !centers.contains(&c) {
                centers.push(c);
            }
        }
        if centers.len() == extra + 1 {
            return WitnessConfig {
                w: DualPoint6::new(a, b),
                centers,
            };
        }
    }
}

/// Totals of a seeded run of the duality and tangent-space checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCheckReport {
    pub trials: usize,
    pub duality_failures: usize,
    pub span6_failures: usize,
    pub parity_failures: usize,
    /// Histogram of observed pair intersection dimensions 0..=4.
    pub pair_dims: [usize; 5],
}

/// Random `(q, p, p')` with `p, p'` forming a circle. Roughly half of the
/// draws put `q` on the circle.
pub fn random_duality_triple(rng: &mut Lcg64) -> (Point3, Point3, Point3) {
    loop {
        let q = Point3::new(rng.rational_in(-2, 2, 5), rng.rational_in(-2, 2, 5), rng.rational_in(-2, 2, 5));
        let mut param = || rng.rational_in(-2, 2, 5);
        let p = rational_sphere_point(&param(), &param(), &q);
        let mut p2 = rational_sphere_point(&param(), &param(), &q);
        if rng.coin() {
            p2 = &p2 + &Point3::new(rng.rational_in(-1, 1, 4), Rational::zero(), Rational::zero());
        }
        let d = p.dist_sq(&p2);
        if d.is_positive() && d < Rational::from(4) {
            return (q, p, p2);
        }
    }
}

/// Runs `trials` rounds; each checks one duality triple, one triple of
/// centers (rank 6) and one pair (even intersection dimension).
pub fn run_dual_checks(trials: usize, seed: u64) -> DualCheckReport {
    let mut rng = Lcg64::new(seed);
    let mut report = DualCheckReport {
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        let (q, p, p2) = random_duality_triple(&mut rng);
        if duality_check(&q, &p, &p2) != Ok(true) {
            report.duality_failures += 1;
        }
        let cfg = random_witness_config(&mut rng, 2);
        let bases: Vec<TangentBasis> = cfg
            .centers
            .iter()
            .map(|c| tangent_basis(c, &cfg.w).expect("witness lies on every Z_q"))
            .collect();
        if span_rank(&bases) != Ok(6) {
            report.span6_failures += 1;
        }
        match pair_intersection_dim(&bases[0], &bases[1]) {
            Ok(d) => {
                report.pair_dims[d.min(4)] += 1;
                if d % 2 != 0 {
                    report.parity_failures += 1;
                }
            }
            Err(_) => report.parity_failures += 1,
        }
    }
    report
}
