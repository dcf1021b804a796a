use super::{AnalyticCircle, Plane, Point3, Sphere};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Line `point + t * direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub point: Point3,
    pub direction: Point3,
}

impl Line {
    pub fn contains(&self, q: &Point3) -> bool {
        (q - &self.point).is_parallel(&self.direction)
    }
}

/// Geometric objects that inversion maps among.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Figure {
    Point(Point3),
    Sphere(Sphere),
    Plane(Plane),
    Circle(AnalyticCircle),
    Line(Line),
}

impl Figure {
    pub fn contains(&self, q: &Point3) -> bool {
        match self {
            Figure::Point(p) => p == q,
            Figure::Sphere(s) => s.contains(q),
            Figure::Plane(p) => p.contains(q),
            Figure::Circle(c) => c.contains(q),
            Figure::Line(l) => l.contains(q),
        }
    }
}

/// Inversion in the unit sphere about `center`: `x -> c + (x - c)/|x - c|^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inversion {
    pub center: Point3,
}

impl Inversion {
    pub fn new(center: Point3) -> Self {
        Inversion { center }
    }

    pub fn point(&self, x: &Point3) -> Result<Point3> {
        let d = x - &self.center;
        let n = d.norm_sq();
        if n.is_zero() {
            return Err(Error::CenterOnObject);
        }
        Ok(&self.center + &d.scale(&n.recip()?))
    }

    /// Image of a sphere: a sphere, or a plane when the sphere passes
    /// through the center.
    pub fn sphere(&self, s: &Sphere) -> Figure {
        let d = &s.center - &self.center;
        let k = d.norm_sq() - &s.radius_sq;
        if k.is_zero() {
            // |y - d|^2 = r^2 with |d|^2 = r^2 becomes 2 d . y' = 1
            let offset = d.dot(&self.center) + Rational::frac(1, 2);
            return Figure::Plane(Plane::new(d, offset));
        }
        let inv = k.recip().expect("k != 0");
        Figure::Sphere(Sphere::new(
            &self.center + &d.scale(&inv),
            &s.radius_sq * inv.square(),
        ))
    }

    /// Image of a plane: a sphere through the center, or the plane itself.
    pub fn plane(&self, p: &Plane) -> Figure {
        let h = -p.eval(&self.center);
        if h.is_zero() {
            return Figure::Plane(p.clone());
        }
        let two_h = Rational::from(2) * &h;
        let center = &self.center + &p.normal.scale(&two_h.recip().expect("h != 0"));
        let radius_sq = p.normal.norm_sq() / two_h.square();
        Figure::Sphere(Sphere::new(center, radius_sq))
    }

    /// Image of a circle: a circle, or a line when the circle passes through
    /// the center.
    pub fn circle(&self, c: &AnalyticCircle) -> Figure {
        let plane = c.plane();
        let on_plane = plane.contains(&self.center);
        // a sphere through the circle that avoids the center, unless the
        // circle itself passes through it
        let carrier = [Rational::zero(), Rational::one()]
            .into_iter()
            .map(|t| {
                Sphere::new(
                    c.center() + &c.normal().scale(&t),
                    c.radius_sq() + &(t.square() * c.normal().norm_sq()),
                )
            })
            .find(|s| !s.contains(&self.center))
            .unwrap_or_else(|| c.sphere());
        match (self.sphere(&carrier), self.plane(&plane)) {
            (Figure::Sphere(s1), Figure::Sphere(s2)) => Figure::Circle(radical_circle(&s1, &s2)),
            (Figure::Sphere(s), Figure::Plane(p)) | (Figure::Plane(p), Figure::Sphere(s)) => {
                Figure::Circle(plane_section(&s, &p))
            }
            (Figure::Plane(p1), Figure::Plane(p2)) => {
                debug_assert!(on_plane);
                let direction = p1.normal.cross(&p2.normal);
                let point = super::circle::solve3(
                    [&p1.normal, &p2.normal, &direction],
                    [&p1.offset, &p2.offset, &Rational::zero()],
                )
                .expect("planes meet in a line");
                Figure::Line(Line { point, direction })
            }
            _ => unreachable!("sphere and plane images are spheres or planes"),
        }
    }

    /// Dispatches on the figure type. Points equal to the center fail with
    /// `CenterOnObject`.
    pub fn apply(&self, f: &Figure) -> Result<Figure> {
        Ok(match f {
            Figure::Point(p) => Figure::Point(self.point(p)?),
            Figure::Sphere(s) => self.sphere(s),
            Figure::Plane(p) => self.plane(p),
            Figure::Circle(c) => self.circle(c),
            Figure::Line(l) => {
                if l.contains(&self.center) {
                    Figure::Line(l.clone())
                } else {
                    // the line is the intersection of two planes, one through the center
                    let to_c = &self.center - &l.point;
                    let n1 = l.direction.cross(&to_c);
                    let n2 = l.direction.cross(&n1);
                    let p1 = Plane::through(&l.point, n1);
                    let p2 = Plane::through(&l.point, n2);
                    match (self.plane(&p1), self.plane(&p2)) {
                        (Figure::Plane(p), Figure::Sphere(s)) => Figure::Circle(plane_section(&s, &p)),
                        _ => unreachable!("first plane passes through the center"),
                    }
                }
            }
        })
    }

    /// Like [`Inversion::apply`] but fails with `CenterOnObject` when the
    /// object passes through the center, i.e. when a sphere would become a
    /// plane or a circle a line.
    pub fn apply_preserving(&self, f: &Figure) -> Result<Figure> {
        let through = match f {
            Figure::Point(p) => p == &self.center,
            Figure::Sphere(s) => s.contains(&self.center),
            Figure::Plane(p) => p.contains(&self.center),
            Figure::Circle(c) => c.contains(&self.center),
            Figure::Line(l) => l.contains(&self.center),
        };
        if through {
            return Err(Error::CenterOnObject);
        }
        self.apply(f)
    }
}

/// Circle of intersection of two spheres that meet in a circle.
fn radical_circle(s1: &Sphere, s2: &Sphere) -> AnalyticCircle {
    let n = &s2.center - &s1.center;
    let offset = (s2.center.norm_sq() - s1.center.norm_sq() + &s1.radius_sq - &s2.radius_sq)
        * Rational::frac(1, 2);
    plane_section(s1, &Plane::new(n, offset))
}

/// Circle cut from sphere `s` by plane `p`.
fn plane_section(s: &Sphere, p: &Plane) -> AnalyticCircle {
    let nn = p.normal.norm_sq();
    let h = p.eval(&s.center);
    let center = &s.center - &p.normal.scale(&(&h / &nn));
    let radius_sq = &s.radius_sq - &(h.square() / nn);
    AnalyticCircle::new(center, radius_sq, p.normal.clone()).expect("sphere meets plane in a circle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rational_sphere_point, Circle};
    use crate::rat;

    /// Rational points of a sphere, for the sampling oracle.
    fn sphere_samples(s: &Sphere, k: usize) -> Vec<Point3> {
        // only for unit-radius or square radius spheres: scale unit points
        let r = s.radius_sq.sqrt_exact().expect("square radius");
        (0..k as i64)
            .map(|i| {
                let u = Rational::frac(i - 3, 2);
                let v = Rational::frac(2 * i + 1, 5);
                let unit = rational_sphere_point(&u, &v, &Point3::origin());
                &s.center + &unit.scale(&r)
            })
            .collect()
    }

    #[test]
    fn point_inversion() {
        let inv = Inversion::new(Point3::origin());
        assert_eq!(inv.point(&Point3::from_ints(2, 0, 0)).unwrap(), Point3::new(rat!(1 / 2), rat!(0), rat!(0)));
        assert_eq!(inv.point(&Point3::origin()), Err(Error::CenterOnObject));
    }

    #[test]
    fn sphere_image_by_sampling() {
        let inv = Inversion::new(Point3::origin());
        let s = Sphere::new(Point3::from_ints(3, 0, 0), rat!(1));
        let Figure::Sphere(img) = inv.sphere(&s) else { panic!("expected sphere") };
        assert_eq!(img.center, Point3::new(rat!(3 / 8), rat!(0), rat!(0)));
        assert_eq!(img.radius_sq, rat!(1 / 64));
        for q in sphere_samples(&s, 12) {
            assert!(s.contains(&q));
            assert!(img.contains(&inv.point(&q).unwrap()));
        }
    }

    #[test]
    fn plane_image_by_sampling() {
        let inv = Inversion::new(Point3::origin());
        let p = Plane::new(Point3::from_ints(1, 0, 0), rat!(1));
        let Figure::Sphere(img) = inv.plane(&p) else { panic!("expected sphere") };
        assert_eq!(img.center, Point3::new(rat!(1 / 2), rat!(0), rat!(0)));
        assert_eq!(img.radius_sq, rat!(1 / 4));
        assert!(img.contains(&Point3::origin()));
        for i in 0..12i64 {
            let q = Point3::new(rat!(1), Rational::frac(i - 5, 3), Rational::frac(7 - i, 2));
            assert!(img.contains(&inv.point(&q).unwrap()));
        }
    }

    #[test]
    fn sphere_through_center_maps_to_plane() {
        let c = Point3::from_ints(1, 1, 1);
        let inv = Inversion::new(c.clone());
        let s = Sphere::new(Point3::from_ints(1, 1, 2), rat!(1));
        let Figure::Plane(img) = inv.sphere(&s) else { panic!("expected plane") };
        for q in sphere_samples(&s, 12) {
            if q != c {
                assert!(img.contains(&inv.point(&q).unwrap()));
            }
        }
    }

    #[test]
    fn involution() {
        let inv = Inversion::new(Point3::new(rat!(1 / 3), rat!(-2), rat!(5 / 7)));
        let x = Point3::new(rat!(4), rat!(1 / 9), rat!(-3));
        assert_eq!(inv.point(&inv.point(&x).unwrap()).unwrap(), x);
        let s = Sphere::new(Point3::from_ints(2, 2, 0), rat!(3 / 2));
        let Figure::Sphere(img) = inv.sphere(&s) else { panic!() };
        assert_eq!(inv.sphere(&img), Figure::Sphere(s));
    }

    #[test]
    fn circle_image_preserves_incidence() {
        let inv = Inversion::new(Point3::new(rat!(1 / 2), rat!(1 / 3), rat!(7 / 3)));
        let c = Circle::from_pair(
            &Point3::new(rat!(0), rat!(0), rat!(3 / 5)),
            &Point3::new(rat!(0), rat!(0), rat!(-3 / 5)),
        )
        .unwrap();
        let Figure::Circle(img) = inv.circle(&c.to_analytic()) else { panic!() };
        for q in [
            Point3::new(rat!(4 / 5), rat!(0), rat!(0)),
            Point3::new(rat!(0), rat!(-4 / 5), rat!(0)),
            Point3::new(rat!(-16 / 25), rat!(12 / 25), rat!(0)),
        ] {
            assert!(c.contains(&q));
            assert!(img.contains(&inv.point(&q).unwrap()));
        }
        assert_eq!(
            inv.apply_preserving(&Figure::Circle(c.to_analytic())).unwrap(),
            Figure::Circle(img)
        );
    }

    #[test]
    fn circle_through_center_maps_to_line() {
        let c = AnalyticCircle::new(Point3::origin(), rat!(1), Point3::from_ints(0, 0, 1)).unwrap();
        let inv = Inversion::new(Point3::from_ints(1, 0, 0));
        let Figure::Line(l) = inv.circle(&c) else { panic!("expected line") };
        let q = Point3::new(rat!(3 / 5), rat!(4 / 5), rat!(0));
        assert!(l.contains(&inv.point(&q).unwrap()));
        assert_eq!(inv.apply_preserving(&Figure::Circle(c)), Err(Error::CenterOnObject));
    }
}
