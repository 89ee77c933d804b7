//! Bead packings along planar curves in a Minkowski plane.
//!
//! The unit ball `B` of the plane is a centrally symmetric convex polygon
//! ([`SymmetricOval`]); smooth balls such as the Euclidean disk are fine
//! regular polygons. Around a domain `F` bounded by a closed polyline
//! ([`ClosedCurve`]) we place *beads*, translates of `λB` touching `F` only
//! on its boundary, and count the largest number with disjoint interiors:
//! the generalized Hadwiger number `N_λ(F, B)`. As `λ → 0`, `2λN_λ`
//! converges to the Minkowski perimeter of `∂F`.
//!
//! Modules:
//!
//! - [`gauge`]: ball, gauge norm, dual directions, symmetrization.
//! - [`curves`]: closed curves, shape generators, perimeters, reach.
//! - [`offset`]: offset chains `W_λ`, level sets, cone regularity checks.
//! - [`necklace`]: bead placement, sliding, necklaces and counts.
//! - [`asymptotics`]: λ sweeps and the limits extracted from them.
//! - [`oracle`]: slow independent reference computations for testing.
//!
//! Geometry is generic over the scalar. Gauge norms, distances and
//! perimeters need only field arithmetic ([`Field`]) and run on exact
//! rationals; everything else needs [`Scalar`] (`f32` or `f64`). The
//! aliases below fix `f64`, which is what the command line tool uses.

pub mod asymptotics;
pub mod curves;
pub mod error;
pub mod export;
pub mod gauge;
pub mod necklace;
pub mod offset;
pub mod oracle;
pub mod point;
pub mod scalar;

pub use error::{Error, Result};
pub use point::Point2;
pub use scalar::{Field, Scalar};

pub use asymptotics::{
    gap_set, hadwiger_dimension, perimeter_limit, second_order, sweep, sweep_with, Estimate,
    GapSetReport, Schedule, SecondOrder, SweepOptions, SweepRow, SweepTable,
};
pub use curves::{generate_shape, perimeter, reach_estimate, ClosedCurve, PiecewiseCurve, Reach, ShapeSpec};
pub use gauge::{
    alpha_angle, dual_direction, gauge_norm, minkowski_distance, self_perimeter, symmetrize,
    Direction, SymmetricOval,
};
pub use necklace::{
    beads_overlap, build_necklace, hadwiger_count, hadwiger_count_with, next_contact, oracle_count,
    place_bead, Bead, CountOptions, CountReport, Necklace, NecklaceStatus, Overlap,
};
pub use offset::{cone_check, level_set, offset_perimeter, offset_polygon, LevelSetSample, OffsetCurve};

/// Double-precision instantiations.
pub mod f64 {
    pub type Point = crate::Point2<f64>;
    pub type Oval = crate::SymmetricOval<f64>;
    pub type Curve = crate::ClosedCurve<f64>;
    pub type Bead = crate::Bead<f64>;
    pub type Necklace = crate::Necklace<f64>;
    pub type OffsetCurve = crate::OffsetCurve<f64>;
    pub type SweepTable = crate::SweepTable<f64>;
}

/// Single-precision instantiations.
pub mod f32 {
    pub type Point = crate::Point2<f32>;
    pub type Oval = crate::SymmetricOval<f32>;
    pub type Curve = crate::ClosedCurve<f32>;
    pub type Bead = crate::Bead<f32>;
    pub type Necklace = crate::Necklace<f32>;
    pub type OffsetCurve = crate::OffsetCurve<f32>;
    pub type SweepTable = crate::SweepTable<f32>;
}

/// Exact rational instantiations (gauge norms, distances, perimeters).
pub mod exact {
    pub type Rational = num_rational::Ratio<i128>;
    pub type Point = crate::Point2<Rational>;
    pub type Oval = crate::SymmetricOval<Rational>;
}

/// `f64` ball, the default precision.
pub type Oval = SymmetricOval<f64>;
/// `f64` closed curve.
pub type Curve = ClosedCurve<f64>;
