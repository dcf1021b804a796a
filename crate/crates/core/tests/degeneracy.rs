mod common;

use common::oracles::richest_circle_count;
use unitdist_core::families::gen_sphere_points;
use unitdist_core::geometry::{Point3, Sphere};
use unitdist_core::incidence::{richest_circle_on_sphere, Incidence};
use unitdist_core::Error;

#[test]
fn matches_four_point_oracle_on_seeded_sets() {
    let unit = Sphere::new(Point3::origin(), 1.into());
    for seed in 0..20u64 {
        let m = 20 + 2 * seed as usize;
        let pts = gen_sphere_points(m, 1 + seed as usize % 4, seed);
        assert!(pts.iter().all(|p| unit.contains(p)));
        let got = richest_circle_on_sphere(&pts).unwrap();
        assert_eq!(got.count(), richest_circle_count(&pts), "seed {seed}");
        assert!(got.count() <= m);
        assert!(got.members.iter().all(|&i| got.circle.is_incident(&pts[i])));
        let on = pts.iter().filter(|p| got.circle.is_incident(p)).count();
        assert_eq!(on, got.count());
    }
}

#[test]
fn largest_instance_at_sixty() {
    let pts = gen_sphere_points(60, 3, 99);
    assert_eq!(richest_circle_on_sphere(&pts).unwrap().count(), richest_circle_count(&pts));
}

#[test]
fn scattered_points_fall_back_to_three() {
    let pts = gen_sphere_points(12, 0, 5);
    let got = richest_circle_on_sphere(&pts).unwrap();
    assert_eq!(got.count(), richest_circle_count(&pts));
    assert!(got.count() >= 3);
}

#[test]
fn too_few_points() {
    let pts = gen_sphere_points(2, 0, 1);
    assert_eq!(richest_circle_on_sphere(&pts).unwrap_err(), Error::TooFewPoints(2));
}
