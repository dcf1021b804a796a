use std::collections::BTreeMap;

use proptest::prelude::*;
use unitdist_core::exact::Rational;
use unitdist_core::families::{gen_pencil, gen_random_config};
use unitdist_core::geometry::{AlgPoint3, AnalyticCircle, Point3};
use unitdist_core::incidence::circumcircle;
use unitdist_core::liftcut::*;
use unitdist_core::{rat, Error};

fn rotated_pencil(k: usize, seed: u64) -> (Vec<CircleChart>, AlgPoint3, AlgPoint3) {
    let pen = gen_pencil(&rat!(3 / 5), k, seed).unwrap();
    let circles: Vec<AnalyticCircle> = pen.circles.iter().map(|c| c.to_analytic()).collect();
    assert!(circles.iter().all(AnalyticCircle::is_vertical));
    let (rot, moved) = rotate_to_general_position(&circles, seed + 100).unwrap();
    let charts = moved.iter().map(|c| CircleChart::new(c).unwrap()).collect();
    let x = AlgPoint3::from(rot.apply(&pen.base[0]));
    let y = AlgPoint3::from(rot.apply(&pen.base[1]));
    (charts, x, y)
}

/// Float oracle: does the projected half-arc of `a` cross that of `b`
/// strictly between the two lens points? Each half is the graph
/// `x1(x2) = (−p + h·√disc) / 2A` over `x2`.
fn sampled_interior_crossing(a: &PlaneQuadratic, b: &PlaneQuadratic, ha: i8, hb: i8, lo: f64, hi: f64) -> bool {
    let branch = |f: &PlaneQuadratic, h: i8, x2: f64| {
        let [qa, qb, qc, qd, qe, qf] = [&f.a, &f.b, &f.c, &f.d, &f.e, &f.f].map(|r| r.to_f64());
        let p = qb * x2 + qd;
        let q = qc * x2 * x2 + qe * x2 + qf;
        let disc = (p * p - 4.0 * qa * q).max(0.0);
        (-p + f64::from(h) * disc.sqrt()) / (2.0 * qa)
    };
    let steps = 4000;
    let margin = (hi - lo) * 1e-4;
    let mut prev: Option<f64> = None;
    for s in 0..=steps {
        let x2 = lo + margin + (hi - lo - 2.0 * margin) * s as f64 / steps as f64;
        let g = branch(a, ha, x2) - branch(b, hb, x2);
        if let Some(p) = prev {
            if p * g < 0.0 {
                return true;
            }
        }
        prev = Some(g);
    }
    false
}

#[test]
fn pencil_lens_tally_and_planar_lens_condition() {
    let mut tally: BTreeMap<(String, bool), usize> = BTreeMap::new();
    let mut split = 0;
    for seed in 0..20 {
        let (charts, x, y) = rotated_pencil(10, seed);
        for i in 0..charts.len() {
            for j in i + 1..charts.len() {
                let (a, b) = (&charts[i], &charts[j]);
                let verdict = match depth_cycle_at(a, b, &x, &y) {
                    Ok(v) => v,
                    Err(Error::SplitByExtremal) => {
                        split += 1;
                        continue;
                    }
                    Err(e) => panic!("{e}"),
                };
                let lens = projections_form_lens(a, b, &x, &y).unwrap();
                let (lo, hi) = {
                    let (u, v) = (x.y.to_f64(), y.y.to_f64());
                    (u.min(v), u.max(v))
                };
                let crossing = sampled_interior_crossing(&a.f, &b.f, a.half(&x), b.half(&x), lo, hi);
                assert_eq!(lens, !crossing, "seed {seed} pair ({i}, {j})");
                if lens {
                    assert_eq!(verdict, DepthCycle::Proper, "seed {seed} pair ({i}, {j})");
                }
                *tally.entry((format!("{verdict:?}"), lens)).or_default() += 1;
            }
        }
    }
    let frozen: BTreeMap<(String, bool), usize> = [
        (("NoCycle".to_string(), false), 26),
        (("Proper".to_string(), false), 2),
        (("Proper".to_string(), true), 310),
    ]
    .into_iter()
    .collect();
    assert_eq!(split, 562);
    assert_eq!(tally, frozen);
}

#[test]
fn uncut_pencil_pair_fails_verification() {
    let (charts, x, y) = rotated_pencil(6, 3);
    let (i, j) = (0..charts.len())
        .flat_map(|i| (i + 1..charts.len()).map(move |j| (i, j)))
        .find(|&(i, j)| depth_cycle_at(&charts[i], &charts[j], &x, &y).is_ok())
        .expect("a pair with both lens points on one half of each circle");
    let cut = |k: usize| {
        let ch = charts[k].clone();
        let ext = [ch.x2_min.clone(), ch.x2_max.clone()];
        CutCircle::new(k, ch, ext).unwrap()
    };
    let pair = [cut(i), cut(j)];
    let w = verify_pseudosegments(&pair).unwrap().expect("lens survives extremal cuts");
    let mut got = w.points.to_vec();
    got.sort();
    let mut want = vec![x.clone(), y.clone()];
    want.sort();
    assert_eq!(got, want);
    let single = [cut(i)];
    assert!(verify_pseudosegments(&single).unwrap().is_none());
}

#[test]
fn cutting_pencils_is_sound() {
    let mut counts = Vec::new();
    for k in [1, 2, 5, 10, 20] {
        let (charts, _, _) = rotated_pencil(k, k as u64);
        let circles: Vec<AnalyticCircle> = charts.iter().map(|c| c.circle.clone()).collect();
        let cutting = cut_to_pseudosegments(&circles).unwrap();
        assert!(verify_pseudosegments(&cutting.circles).unwrap().is_none(), "k = {k}");
        for c in &cutting.circles {
            assert!(c.cut_points().all(|p| c.chart.circle.contains_alg(p)));
        }
        assert_eq!(cutting.arcs().len(), cutting.circles.iter().map(CutCircle::arc_count).sum::<usize>());
        counts.push(cutting.cut_count);
    }
    assert_eq!(counts, vec![2, 4, 13, 21, 58]);
}

#[test]
fn cutting_random_configs_is_sound() {
    for (n, seed) in [(10, 1), (30, 2), (60, 3)] {
        let cfg = gen_random_config(n, 0, seed, 1000).unwrap();
        let circles: Vec<AnalyticCircle> = cfg.circles.iter().map(|c| c.to_analytic()).collect();
        let (_, moved) = rotate_to_general_position(&circles, seed).unwrap();
        let cutting = cut_to_pseudosegments(&moved).unwrap();
        assert!(verify_pseudosegments(&cutting.circles).unwrap().is_none(), "n = {n}");
        assert!(cutting.cut_count >= 2 * n);
    }
}

#[test]
fn tilted_unit_circle_projection() {
    let c = AnalyticCircle::new(Point3::origin(), rat!(1), Point3::from_ints(-1, 0, 1)).unwrap();
    let f = project_implicitize(&c).unwrap();
    assert_eq!([f.a, f.b, f.c, f.d, f.e, f.f], [rat!(2), rat!(0), rat!(1), rat!(0), rat!(0), rat!(-1)]);
}

fn arb_point() -> impl Strategy<Value = Point3> {
    prop::array::uniform3((-12i64..=12, 1i64..=6))
        .prop_map(|c| Point3::new(Rational::frac(c[0].0, c[0].1), Rational::frac(c[1].0, c[1].1), Rational::frac(c[2].0, c[2].1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poles_are_exactly_the_extremal_points(a in arb_point(), b in arb_point(), c in arb_point()) {
        let Ok(circle) = circumcircle(&a, &b, &c) else { return Ok(()) };
        prop_assume!(!circle.is_vertical());
        let chart = CircleChart::new(&circle).unwrap();
        for e in [&chart.x2_min, &chart.x2_max] {
            prop_assert!(circle.contains_alg(e));
            prop_assert!(chart.f.eval_alg(&e.x, &e.y).is_zero());
            prop_assert_eq!(chart.slope(e).unwrap_err(), Error::PoleAtExtremal);
        }
        prop_assert!(chart.x2_min.y < chart.x2_max.y);
        for p in [&a, &b, &c] {
            let p = AlgPoint3::from(p.clone());
            let is_extremal = p == chart.x2_min || p == chart.x2_max;
            match chart.slope(&p) {
                Ok(x4) => {
                    prop_assert!(!is_extremal);
                    let lhs = x4.try_mul(&chart.f.d1(&p.x, &p.y)).unwrap();
                    prop_assert_eq!(lhs, chart.f.d2(&p.x, &p.y));
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::PoleAtExtremal);
                    prop_assert!(is_extremal);
                }
            }
        }
    }
}
