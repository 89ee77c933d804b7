//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use hadwiger::curves::{generate_shape, random_convex_polygon, ClosedCurve, ShapeSpec};
use hadwiger::gauge::{symmetrize, SymmetricOval};
use hadwiger::point::Point2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn square_f() -> ClosedCurve<f64> {
    generate_shape(&ShapeSpec::Staircase { k: 1, step: 2.0 }).unwrap()
}

pub fn staircase(k: usize, step: f64) -> ClosedCurve<f64> {
    generate_shape(&ShapeSpec::Staircase { k, step }).unwrap()
}

pub fn disk_f(m: usize) -> ClosedCurve<f64> {
    generate_shape(&ShapeSpec::Disk { m, radius: 1.0 }).unwrap()
}

pub fn ngon_f(n: usize) -> ClosedCurve<f64> {
    generate_shape(&ShapeSpec::RegularNgon { n, radius: 1.0, phase: 0.0 }).unwrap()
}

pub fn random_convex(n: usize, seed: u64) -> ClosedCurve<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_convex_polygon(n, 1.2, 0.9, &mut rng)
}

pub fn symmetrized_triangle() -> SymmetricOval<f64> {
    let h = 3f64.sqrt() / 2.0;
    symmetrize(&[Point2::new(-0.5, -h / 3.0), Point2::new(0.5, -h / 3.0), Point2::new(0.0, 2.0 * h / 3.0)]).unwrap()
}

/// The balls of the small-instance matrix.
pub fn matrix_balls() -> Vec<(&'static str, SymmetricOval<f64>)> {
    vec![
        ("square", SymmetricOval::square()),
        ("hexagon", SymmetricOval::hexagon()),
        ("octagon", SymmetricOval::regular(8, 1.0, 0.0).unwrap()),
        ("disk64", SymmetricOval::disk(64).unwrap()),
        ("sym_triangle", symmetrized_triangle()),
    ]
}

/// The shapes of the small-instance matrix.
pub fn matrix_shapes() -> Vec<(&'static str, ClosedCurve<f64>)> {
    vec![
        ("square", square_f()),
        ("pentagon", ngon_f(5)),
        ("random_heptagon", random_convex(7, 7)),
        ("staircase2", staircase(2, 1.0)),
    ]
}

pub const MATRIX_LAMBDAS: [f64; 5] = [0.5, 0.3, 0.2, 0.15, 0.1];
