//! Cone condition on extracted level sets.

use std::fmt::Write as _;

use crate::gauge::{alpha_angle, SymmetricOval};
use crate::point::Point2;
use crate::scalar::Scalar;

use super::level::LevelSetSample;

/// Neighbors closer than this many grid cells enter the local Lipschitz
/// estimate.
pub const LOCAL_CELLS: f64 = 3.0;

/// Maximal number of violating pairs kept in a report.
pub const MAX_LISTED: usize = 32;

#[derive(Debug, Clone)]
pub struct ConeReport<T> {
    /// `α(B)`.
    pub alpha: T,
    /// Cone half-angle `β = π - α(B) - ε`.
    pub beta: T,
    pub checked: usize,
    pub violations: usize,
    /// First violating pairs `(x, y)`: `y` lies in the cone at `x`.
    pub listed: Vec<(Point2<T>, Point2<T>)>,
    /// Largest local slope of the level set over the line orthogonal to `cx`.
    pub lipschitz: T,
    /// `1 / tan β`.
    pub lipschitz_bound: T,
}

impl<T: Scalar> ConeReport<T> {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alpha {:.12}", self.alpha);
        let _ = writeln!(s, "beta {:.12}", self.beta);
        let _ = writeln!(s, "points {}", self.checked);
        let _ = writeln!(s, "violations {}", self.violations);
        let _ = writeln!(s, "lipschitz {:.12}", self.lipschitz);
        let _ = writeln!(s, "lipschitz_bound {:.12}", self.lipschitz_bound);
        for (x, y) in &self.listed {
            let _ = writeln!(s, "violation {:.16e} {:.16e} {:.16e} {:.16e}", x.x, x.y, y.x, y.y);
        }
        s
    }
}

/// For every extracted point `x`, counts the other extracted points inside
/// the cone with apex `x`, axis the ray from `c` through `x` and half-angle
/// `β = π - α(B) - ε`; also reports the largest slope of chords to
/// neighbors within [`LOCAL_CELLS`] cells, measured against the line
/// orthogonal to that axis.
pub fn cone_check<T: Scalar>(sample: &LevelSetSample<T>, b: &SymmetricOval<T>, c: Point2<T>, epsilon: T) -> ConeReport<T> {
    let alpha = alpha_angle(b);
    let beta = T::pi() - alpha - epsilon;
    let cos_beta = beta.cos();
    let pts: Vec<Point2<T>> = sample.points().copied().collect();
    let min_sep = sample.radius * T::lit(1e-9);
    let local = sample.cell * T::lit(LOCAL_CELLS);
    let tiny = sample.cell * T::lit(1e-6);
    let mut violations = 0;
    let mut listed = Vec::new();
    let mut lipschitz = T::zero();
    for &x in &pts {
        let Some(u) = (x - c).normalized() else {
            continue;
        };
        let v = u.perp();
        for &y in &pts {
            let w = y - x;
            let len = w.norm();
            if len <= min_sep {
                continue;
            }
            if w.dot(u) > len * cos_beta {
                violations += 1;
                if listed.len() < MAX_LISTED {
                    listed.push((x, y));
                }
            }
            if len <= local && len > tiny {
                let across = w.dot(v).abs();
                let slope = if across > T::zero() { w.dot(u).abs() / across } else { T::infinity() };
                lipschitz = lipschitz.max(slope);
            }
        }
    }
    ConeReport {
        alpha,
        beta,
        checked: pts.len(),
        violations,
        listed,
        lipschitz,
        lipschitz_bound: T::one() / beta.tan(),
    }
}

/// Radius beyond which the cone lemma applies to sets of Euclidean radius
/// `r0`: inverting `sin(γ/2) <= r0 r_max / (r r_min)` at `γ = ε`.
pub fn sufficient_radius<T: Scalar>(b: &SymmetricOval<T>, r0: T, epsilon: T) -> T {
    let (r_min, r_max) = b.radii();
    r0 * r_max / (r_min * (epsilon * T::half()).sin())
}
