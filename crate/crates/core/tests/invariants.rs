mod common;

use hadwiger::curves::random_convex_polygon;
use hadwiger::gauge::{self_perimeter, SymmetricOval};
use hadwiger::necklace::{build_necklace, hadwiger_count, hadwiger_count_with, CountOptions};
use hadwiger::offset::{offset_perimeter, offset_polygon};
use hadwiger::point::Point2;
use hadwiger::{perimeter, ClosedCurve};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ball(i: usize) -> SymmetricOval<f64> {
    match i % 4 {
        0 => SymmetricOval::square(),
        1 => SymmetricOval::hexagon(),
        2 => SymmetricOval::disk(64).unwrap(),
        _ => common::symmetrized_triangle(),
    }
}

fn convex(n: usize, seed: u64) -> ClosedCurve<f64> {
    random_convex_polygon(n, 1.3, 0.8, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_absolutely_homogeneous(bi in 0usize..4, x in -5.0f64..5.0, y in -5.0f64..5.0, s in -4.0f64..4.0) {
        let b = ball(bi);
        let v = Point2::new(x, y);
        let lhs = b.norm(v * s);
        let rhs = s.abs() * b.norm(v);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn norm_is_subadditive(bi in 0usize..4, a in prop::array::uniform4(-3.0f64..3.0)) {
        let b = ball(bi);
        let u = Point2::new(a[0], a[1]);
        let v = Point2::new(a[2], a[3]);
        prop_assert!(b.norm(u + v) <= b.norm(u) + b.norm(v) + 1e-12);
    }

    #[test]
    fn self_perimeter_lies_in_range(m in 2usize..12, phase in 0.0f64..1.0) {
        let b = SymmetricOval::regular(2 * m, 1.0, phase).unwrap();
        let p = self_perimeter(&b);
        prop_assert!((6.0 - 1e-9..=8.0 + 1e-9).contains(&p), "{p}");
    }

    #[test]
    fn convex_offsets_obey_the_tube_formula(n in 3usize..10, seed in 0u64..1000, bi in 0usize..4, lam in 0.01f64..0.5) {
        let b = ball(bi);
        let q = convex(n, seed);
        let w = offset_polygon(&q, &b, lam);
        let expect = perimeter(&b, &q) + lam * self_perimeter(&b);
        prop_assert!((offset_perimeter(&w, &b) - expect).abs() <= 1e-9 * expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn greedy_necklaces_are_valid(n in 3usize..9, seed in 0u64..1000, bi in 0usize..4, lam in 0.05f64..0.5, t in 0.0f64..1.0) {
        let b = ball(bi);
        let f = convex(n, seed);
        let nk = build_necklace(&f, &b, lam, t * perimeter(&SymmetricOval::square(), &f)).unwrap();
        prop_assert!(nk.validate(&f, &b).is_ok(), "{:?}", nk.validate(&f, &b));
    }

    #[test]
    fn counts_respect_the_sandwich(n in 3usize..9, seed in 0u64..1000, bi in 0usize..4, lam in 0.02f64..0.5) {
        let b = ball(bi);
        let f = convex(n, seed);
        let k = hadwiger_count(&f, &b, lam).unwrap() as f64;
        let p = perimeter(&b, &f);
        let slack = 1e-9 * p;
        prop_assert!(2.0 * lam * k >= p - 2.0 * lam - slack);
        prop_assert!(2.0 * lam * k <= p + lam * self_perimeter(&b) + slack);
    }

    #[test]
    fn counts_are_monotone_in_lambda(n in 3usize..9, seed in 0u64..1000, bi in 0usize..4, lam in 0.05f64..0.5) {
        let b = ball(bi);
        let f = convex(n, seed);
        let big = hadwiger_count(&f, &b, lam).unwrap();
        let small = hadwiger_count(&f, &b, 0.8 * lam).unwrap();
        prop_assert!(small + 1 >= big, "{small} at {} vs {big} at {lam}", 0.8 * lam);
    }
}

#[test]
fn disk_counts_do_not_depend_on_the_start() {
    let b = SymmetricOval::<f64>::disk(256).unwrap();
    let f = common::disk_f(256);
    for lam in [0.3, 0.17, 0.1] {
        let rep = hadwiger_count_with(&f, &b, lam, &CountOptions { starts: 32, ..CountOptions::default() }).unwrap();
        assert!(rep.min_count + 1 >= rep.count);
        assert!(rep.certified());
    }
}

#[test]
fn scalar_types_agree() {
    let b32 = SymmetricOval::<f32>::square();
    let f32c = ClosedCurve::new(b32.vertices().to_vec()).unwrap();
    let b64 = SymmetricOval::<f64>::square();
    let f64c = ClosedCurve::new(b64.vertices().to_vec()).unwrap();
    for lam in [0.45, 0.27, 0.16] {
        assert_eq!(hadwiger_count(&f32c, &b32, lam as f32).unwrap(), hadwiger_count(&f64c, &b64, lam).unwrap());
    }
}
