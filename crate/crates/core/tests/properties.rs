use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use logmink::geometry::{
    contains, hausdorff_distance, random_polygon, uniform_pairs, wulff_shape, SymmetricPolygon,
};
use logmink::measure::check_sscc;
use logmink::{EvenMeasure, FunctionalDescriptor, FunctionalKind, Resolution};

fn polygon(seed: u64) -> SymmetricPolygon {
    random_polygon(&mut ChaCha8Rng::seed_from_u64(seed), 3..=8, 0.5..1.5)
}

proptest! {
    #[test]
    fn wulff_shape_is_monotone(seed in any::<u64>(), bump in proptest::collection::vec(0.0f64..0.5, 8)) {
        let p = polygon(seed);
        let q: Vec<f64> = p.support().iter().zip(&bump).map(|(h, b)| h + b).collect();
        let larger = wulff_shape(p.pairs(), &q).unwrap();
        prop_assert!(contains(&larger, &p));
    }

    #[test]
    fn wulff_projection_is_idempotent(seed in any::<u64>(), q in proptest::collection::vec(0.3f64..2.0, 3..8)) {
        let pairs = uniform_pairs(q.len(), (seed % 100) as f64 * 1e-2);
        let once = wulff_shape(&pairs, &q).unwrap();
        // pairs come back in canonical angle order
        let twice = wulff_shape(once.pairs(), once.support()).unwrap();
        for (a, b) in once.support().iter().zip(twice.support()) {
            prop_assert!((a - b).abs() <= 1e-12 * a);
        }
        for (d, b) in pairs.iter().zip(&q) {
            prop_assert!(once.support_value(d.theta()) <= b * (1.0 + 1e-12));
        }
    }

    #[test]
    fn cone_volume_total_is_area(seed in any::<u64>()) {
        let p = polygon(seed);
        let total: f64 = p.cone_volume_measure().iter().sum();
        prop_assert!((total - p.area()).abs() <= 1e-12 * p.area());
    }

    #[test]
    fn hausdorff_triangle_inequality(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (p, q, r) = (polygon(a), polygon(b), polygon(c));
        let lhs = hausdorff_distance(&p, &r);
        prop_assert!(lhs <= hausdorff_distance(&p, &q) + hausdorff_distance(&q, &r) + 1e-12);
        prop_assert!((hausdorff_distance(&p, &q) - hausdorff_distance(&q, &p)).abs() <= 1e-12);
    }

    #[test]
    fn sscc_is_scale_invariant(mass in proptest::collection::vec(0.01f64..5.0, 2..9), k in -30i32..30) {
        let nu = EvenMeasure::new(uniform_pairs(mass.len(), 0.1), mass).unwrap();
        let scaled = nu.scaled(2f64.powi(k)).unwrap();
        prop_assert_eq!(check_sscc(&nu).passes(), check_sscc(&scaled).passes());
    }

    #[test]
    fn volume_scales_with_degree_two(seed in any::<u64>(), c in 0.1f64..10.0) {
        let p = polygon(seed);
        let f = FunctionalDescriptor::volume();
        let (a, b) = (f.evaluate(&p).unwrap(), f.evaluate(&p.scaled(c)).unwrap());
        prop_assert!((b - c * c * a).abs() <= 1e-12 * b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pde_functionals_scale_with_their_degree(seed in any::<u64>(), c in 0.2f64..5.0) {
        let p = polygon(seed);
        for kind in [FunctionalKind::Torsion, FunctionalKind::Eigenvalue] {
            let f = FunctionalDescriptor::with_resolution(kind, Resolution::Relative(0.1));
            let (a, b) = (f.evaluate(&p).unwrap(), f.evaluate(&p.scaled(c)).unwrap());
            let expected = c.powf(f.alpha()) * a;
            prop_assert!((b - expected).abs() <= 1e-9 * expected, "{kind}: {b} vs {expected}");
        }
    }

    #[test]
    fn torsion_is_monotone_under_inclusion(seed in any::<u64>(), shrink in 0.5f64..0.95) {
        let p = polygon(seed);
        let f = FunctionalDescriptor::with_resolution(FunctionalKind::Torsion, Resolution::Relative(0.1));
        let inner = wulff_shape(p.pairs(), &p.support().iter().map(|h| h * shrink).collect::<Vec<_>>()).unwrap();
        prop_assert!(f.evaluate(&inner).unwrap() < f.evaluate(&p).unwrap());
    }
}
