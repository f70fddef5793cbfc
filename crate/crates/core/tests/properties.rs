mod common;

use convex_tour::geom::{convex_hull, orient, Point};
use convex_tour::io::{parse_instance, parse_tour, serialize_instance, tour_to_json, Instance};
use convex_tour::oracle::inside_tour;
use convex_tour::planner::tour_of_points;
use proptest::prelude::*;
use rand::Rng;

use common::{point_inside, random_workspace, rng};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn hull_is_convex_and_covers_input(pts in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..60)) {
        let pts: Vec<Point> = pts.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        let hull = convex_hull(&pts).unwrap();
        let h = hull.vertices();
        if h.len() >= 3 {
            for i in 0..h.len() {
                let (a, b, c) = (h[i], h[(i + 1) % h.len()], h[(i + 2) % h.len()]);
                prop_assert!(orient(a, b, c) > 0.0);
            }
        }
        for &p in &pts {
            prop_assert!(hull.distance(p) <= 1e-9);
        }
    }

    #[test]
    fn adding_points_never_lowers_curvature(seed in any::<u64>(), m in 3usize..40, n in 1usize..30) {
        let mut r = rng(seed);
        let e = random_workspace(&mut r, m);
        let mut pts: Vec<Point> = (0..n).map(|_| point_inside(&mut r, &e)).collect();
        let before = tour_of_points(&e, &pts).unwrap().kappa_star;
        pts.push(point_inside(&mut r, &e));
        let after = tour_of_points(&e, &pts).unwrap().kappa_star;
        prop_assert!(after >= before * (1.0 - 1e-12));
    }

    #[test]
    fn curvature_scales_inversely(seed in any::<u64>(), s in 0.01..100.0f64) {
        let mut r = rng(seed);
        let e = random_workspace(&mut r, 12);
        let pts: Vec<Point> = (0..8).map(|_| point_inside(&mut r, &e)).collect();
        let k = tour_of_points(&e, &pts).unwrap().kappa_star;
        let es = e.transformed(|p| p * s).unwrap();
        let ps: Vec<Point> = pts.iter().map(|&p| p * s).collect();
        let ks = tour_of_points(&es, &ps).unwrap().kappa_star;
        prop_assert!((ks * s - k).abs() <= 1e-9 * k);
    }

    #[test]
    fn tour_contains_points_and_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(3..30);
        let e = random_workspace(&mut r, m);
        let pts: Vec<Point> = (0..r.gen_range(1..20)).map(|_| point_inside(&mut r, &e)).collect();
        let t = tour_of_points(&e, &pts).unwrap().tour;
        for &p in &pts {
            prop_assert!(inside_tour(&t, p, 1e-9));
        }
        prop_assert_eq!(parse_tour(&tour_to_json(&t)).unwrap(), t);
        let obstacle = convex_hull(&pts).unwrap().into_vertices();
        let inst = Instance { outer: e, obstacle, constraints: Vec::new() };
        prop_assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }
}
