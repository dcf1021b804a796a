use unitdist_core::dual6::*;
use unitdist_core::geometry::Point3;
use unitdist_core::rat;
use unitdist_core::rng::Lcg64;
use unitdist_core::Error;

#[test]
fn seeded_suite_has_no_failures() {
    let r = run_dual_checks(1000, 7);
    assert_eq!(r.trials, 1000);
    assert_eq!((r.duality_failures, r.span6_failures, r.parity_failures), (0, 0, 0));
    assert_eq!(r.pair_dims[1] + r.pair_dims[3], 0);
}

#[test]
fn degenerate_pair_and_rescue() {
    let w = DualPoint6::new(Point3::from_ints(0, 0, 1), Point3::from_ints(0, 0, 1));
    let b1 = tangent_basis(&Point3::origin(), &w).unwrap();
    let b2 = tangent_basis(&Point3::from_ints(0, 0, 2), &w).unwrap();
    let b3 = tangent_basis(&Point3::from_ints(1, 0, 1), &w).unwrap();
    assert_eq!(span_rank(&[b1.clone()]).unwrap(), 4);
    assert_eq!(span_rank(&[b1.clone(), b2.clone()]).unwrap(), 4);
    assert_eq!(pair_intersection_dim(&b1, &b2).unwrap(), 4);
    assert_eq!(span_rank(&[b1.clone(), b2, b3]).unwrap(), 6);
    assert_eq!(pair_intersection_dim(&b1, &b1.clone()).unwrap_err(), Error::MixedCenters);
}

#[test]
fn witness_configs_span_everything() {
    let mut rng = Lcg64::new(11);
    for _ in 0..100 {
        let cfg = random_witness_config(&mut rng, 2);
        let bases: Vec<TangentBasis> = cfg.centers.iter().map(|q| tangent_basis(q, &cfg.w).unwrap()).collect();
        for b in &bases {
            assert_eq!(b.matrix().rank(), 4);
        }
        assert_eq!(span_rank(&bases[..3]).unwrap(), 6);
        assert_eq!(pair_intersection_dim(&bases[0], &bases[1]).unwrap() % 2, 0);
    }
}

#[test]
fn duality_examples() {
    let (p, p2) = (Point3::new(rat!(0), rat!(0), rat!(3 / 5)), Point3::new(rat!(0), rat!(0), rat!(-3 / 5)));
    assert!(duality_check(&Point3::new(rat!(4 / 5), rat!(0), rat!(0)), &p, &p2).unwrap());
    assert!(duality_check(&Point3::from_ints(1, 1, 1), &p, &p2).unwrap());
    assert_eq!(duality_check(&Point3::origin(), &p, &p).unwrap_err(), Error::DegeneratePair);
    let off = DualPoint6::new(Point3::from_ints(0, 0, 2), Point3::from_ints(1, 0, 0));
    assert_eq!(tangent_basis(&Point3::origin(), &off).unwrap_err(), Error::NotOnVariety);
}
