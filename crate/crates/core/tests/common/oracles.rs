//! Independent reference implementations used only by tests.
//!
//! Each oracle recomputes a library result by a different method: the
//! exponent LP in the `(β, δ)` plane instead of `(β, δ, t)` space, richest
//! circles by four-point coplanarity over scaled integers, and so on.

#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use unitdist_core::exact::Rational;
use unitdist_core::exponents::{box_constraints, AffineTerm, ExponentTerm};
use unitdist_core::geometry::Point3;
use unitdist_core::rng::Lcg64;

/// A line `a·β + b·δ = c`.
type Line = (Rational, Rational, Rational);

fn meet(l1: &Line, l2: &Line) -> Option<(Rational, Rational)> {
    let det = &l1.0 * &l2.1 - &l1.1 * &l2.0;
    if det.is_zero() {
        return None;
    }
    let beta = (&l1.2 * &l2.1 - &l1.1 * &l2.2) / &det;
    let delta = (&l1.0 * &l2.2 - &l1.2 * &l2.0) / &det;
    Some((beta, delta))
}

/// Min-max of the affine terms over the feasible polygon, found among
/// pairwise intersections of the polygon edges and every crease line
/// `term_i = term_j`. Ties go to the lexicographically smallest `(β, δ)`.
pub fn lp_envelope(terms: &[ExponentTerm], alpha: &Rational) -> (Rational, Rational, Rational) {
    let mut affine: Vec<AffineTerm> = Vec::new();
    for t in terms {
        let a = t.at_alpha(alpha);
        if !affine.contains(&a) {
            affine.push(a);
        }
    }
    let boxes = box_constraints();
    let mut seen = HashSet::new();
    let mut lines: Vec<Line> = Vec::new();
    // corners of the feasible polygon; a line missing it has every corner
    // strictly on one side
    let corners = [
        (Rational::zero(), Rational::zero()),
        (Rational::frac(1, 3), Rational::zero()),
        (Rational::frac(1, 3), Rational::frac(1, 6)),
        (Rational::zero(), Rational::frac(1, 3)),
    ];
    let mut push = |l: Line| {
        let side = |(b, d): &(Rational, Rational)| (&l.0 * b + &l.1 * d - &l.2).signum();
        let signs: Vec<i8> = corners.iter().map(side).collect();
        if signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0) {
            return;
        }
        let lead = if l.0.is_zero() { l.1.clone() } else { l.0.clone() };
        if lead.is_zero() {
            return;
        }
        let l = (&l.0 / &lead, &l.1 / &lead, &l.2 / &lead);
        if seen.insert(l.clone()) {
            lines.push(l);
        }
    };
    boxes.iter().cloned().for_each(&mut push);
    for i in 0..affine.len() {
        for j in i + 1..affine.len() {
            let (a, b) = (&affine[i], &affine[j]);
            push((&a.beta - &b.beta, &a.delta - &b.delta, &b.constant - &a.constant));
        }
    }
    let feasible = |b: &Rational, d: &Rational| boxes.iter().all(|(x, y, c)| x * b + y * d >= *c);
    let mut best: Option<(Rational, Rational, Rational)> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let Some((b, d)) = meet(&lines[i], &lines[j]) else { continue };
            if !feasible(&b, &d) {
                continue;
            }
            let mut v = affine[0].eval(&b, &d);
            let mut beaten = false;
            for t in &affine[1..] {
                let x = t.eval(&b, &d);
                if x > v {
                    v = x;
                }
                if best.as_ref().is_some_and(|cur| v > cur.0) {
                    beaten = true;
                    break;
                }
            }
            if beaten {
                continue;
            }
            let cand = (v, b, d);
            if best.as_ref().map_or(true, |cur| cand < *cur) {
                best = Some(cand);
            }
        }
    }
    let (v, b, d) = best.expect("feasible region is nonempty");
    (b, d, v)
}

/// `α` drawn from `[0, 1/2]` with denominators up to `2·max_den`.
pub fn seeded_alphas(n: usize, seed: u64, max_den: i64) -> Vec<Rational> {
    let mut rng = Lcg64::new(seed);
    (0..n).map(|_| rng.rational_in(0, 1, max_den) / Rational::from(2)).collect()
}

/// `(X, Y, Z, W)` with `(X/W, Y/W, Z/W)` the point and `W` the lcm of its
/// denominators.
fn homogeneous(p: &Point3) -> Option<[i128; 4]> {
    let w = p.coords().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let s = |c: &Rational| (c.numer() * (&w / c.denom())).to_i128();
    Some([s(&p.x)?, s(&p.y)?, s(&p.z)?, w.to_i128()?])
}

fn det3(m: [[i128; 3]; 3]) -> Option<i128> {
    let t = |a: i128, b: i128, c: i128| a.checked_mul(b)?.checked_mul(c);
    let pos = t(m[0][0], m[1][1], m[2][2])?
        .checked_add(t(m[0][1], m[1][2], m[2][0])?)?
        .checked_add(t(m[0][2], m[1][0], m[2][1])?)?;
    let neg = t(m[0][2], m[1][1], m[2][0])?
        .checked_add(t(m[0][0], m[1][2], m[2][1])?)?
        .checked_add(t(m[0][1], m[1][0], m[2][2])?)?;
    pos.checked_sub(neg)
}

/// Cofactors `n` with `n · h = 0` for the homogeneous row `h` of every
/// point on the plane through the three given rows.
fn plane_cofactors(r: [&[i128; 4]; 3]) -> Option<[i128; 4]> {
    let minor = |skip: usize| {
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
        det3(std::array::from_fn(|i| std::array::from_fn(|j| r[i][cols[j]])))
    };
    Some([minor(0)?, minor(1)?.checked_neg()?, minor(2)?, minor(3)?.checked_neg()?])
}

fn dot4(n: &[i128; 4], h: &[i128; 4]) -> Option<i128> {
    (0..4).try_fold(0i128, |acc, i| acc.checked_add(n[i].checked_mul(h[i])?))
}

/// Largest number of points on one circle, for distinct points on a common
/// sphere: four such points are concyclic iff they are coplanar, so every
/// triple is tested against every fourth point. `O(m⁴)` on homogeneous
/// integer coordinates, falling back to rationals on `i128` overflow.
pub fn richest_circle_count(pts: &[Point3]) -> usize {
    let h: Vec<Option<[i128; 4]>> = pts.iter().map(homogeneous).collect();
    let m = pts.len();
    let mut best = m.min(2);
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let n = match (&h[i], &h[j], &h[k]) {
                    (Some(a), Some(b), Some(c)) => plane_cofactors([a, b, c]),
                    _ => None,
                };
                let on = (0..m)
                    .filter(|&l| {
                        let exact = || coplanar(&pts[i], &pts[j], &pts[k], &pts[l]);
                        match (&n, &h[l]) {
                            (Some(n), Some(hl)) => dot4(n, hl).map_or_else(exact, |v| v == 0),
                            _ => exact(),
                        }
                    })
                    .count();
                best = best.max(on);
            }
        }
    }
    best
}

/// Ordered pairs `(i, j)`, `i < j`, in one cell with `0 < |q_i − q_j|² < 4`.
pub fn eligible_pairs(q: &[Point3], cells: &[usize]) -> usize {
    let four = Rational::from(4);
    let mut n = 0;
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            let d = q[i].dist_sq(&q[j]);
            if cells[i] == cells[j] && !d.is_zero() && d < four {
                n += 1;
            }
        }
    }
    n
}

/// `center + r·((1 − t²), 2t) / (1 + t²)` in the plane `x3 = z`.
pub fn point_on_flat_circle(center: &Point3, r: &Rational, t: &Rational) -> Point3 {
    let den = Rational::one() + t.square();
    Point3::new(
        &center.x + r * (Rational::one() - t.square()) / &den,
        &center.y + r * Rational::from(2) * t / &den,
        center.z.clone(),
    )
}

/// Direct inversion `c + (x − c) / |x − c|²`.
pub fn invert(c: &Point3, x: &Point3) -> Point3 {
    let d = x - c;
    let k = d.norm_sq().recip().expect("point differs from the center");
    c + &d.scale(&k)
}

/// Whether four points are coplanar.
pub fn coplanar(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> bool {
    let n = (b - a).cross(&(c - a));
    n.dot(&(d - a)).is_zero()
}

/// Unordered d*-unit pairs of the Example 1 grid by counting placements of
/// each displacement. Scaling `x1, x2` by `b` and `x3` by `b²` turns the
/// unit condition into `Δi² + Δj² + |Δk| = b²` on `[0, 3b]² × [0, 9b²]`.
pub fn example1_unit_pairs(b: i64) -> u64 {
    let (side, depth) = (3 * b + 1, 9 * b * b + 1);
    let target = b * b;
    let mut ordered = 0i64;
    for di in -b..=b {
        for dj in -b..=b {
            let dk = target - di * di - dj * dj;
            if dk < 0 {
                continue;
            }
            let placements = (side - di.abs()) * (side - dj.abs());
            let ks = if dk == 0 { 1 } else { 2 };
            ordered += ks * placements * (depth - dk);
        }
    }
    (ordered / 2) as u64
}
