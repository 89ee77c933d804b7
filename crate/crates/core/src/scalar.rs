//! Scalar abstractions.
//!
//! Two tiers are used throughout the crate:
//!
//! - [`Field`]: ordered field arithmetic only. Enough for gauge norms of
//!   polygonal balls, Minkowski distances and perimeters, so these also run on
//!   exact rationals (`Ratio<i64>`, `Ratio<i128>`).
//! - [`Scalar`]: a [`Field`] that is also a [`num_traits::Float`]. Everything
//!   that needs square roots, angles or iterative solves is written against it
//!   and is instantiated for `f32` and `f64`.

use std::fmt::Debug;
use std::iter::Sum;

use num_rational::Ratio;
use std::ops::Neg;

use num_traits::{Float, FromPrimitive, Num, NumCast, ToPrimitive};

/// Ordered field arithmetic.
pub trait Field:
    Copy + PartialOrd + Num + Neg<Output = Self> + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    /// Unit roundoff of the representation; zero for exact types.
    const MACHINE_EPS: f64;

    /// Converts an `f64` literal. Panics only if the literal is not
    /// representable at all (NaN into a rational, for instance).
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    /// A tolerance of `base`, floored at a small multiple of the machine
    /// epsilon so that `f32` instantiations get a usable slack.
    #[inline]
    fn tol(base: f64) -> Self {
        Self::lit(base.max(64.0 * Self::MACHINE_EPS))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn magnitude(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    #[inline]
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    #[inline]
    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Field for f64 {
    const MACHINE_EPS: f64 = f64::EPSILON;
}

impl Field for f32 {
    const MACHINE_EPS: f64 = f32::EPSILON as f64;
}

impl Field for Ratio<i64> {
    const MACHINE_EPS: f64 = 0.0;
}

impl Field for Ratio<i128> {
    const MACHINE_EPS: f64 = 0.0;
}

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar: Field + Float + Sum + std::fmt::Display + std::fmt::LowerExp {
    #[inline]
    fn pi() -> Self {
        Self::lit(std::f64::consts::PI)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn cast<U: NumCast>(u: U) -> Self {
        <Self as NumCast>::from(u).expect("numeric cast")
    }
}

impl Scalar for f64 {}
impl Scalar for f32 {}
