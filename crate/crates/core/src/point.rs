//! Planar points, segment predicates and a sweep for polyline self-intersections.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::{Field, Scalar};

/// A point (or free vector) of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Field> Point2<T> {
    #[inline]
    pub const fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    /// Rotation by +90 degrees.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    /// Rotation by -90 degrees. For a counterclockwise boundary edge this is
    /// the outward normal.
    #[inline]
    pub fn perp_cw(self) -> Self {
        Self::new(self.y, -self.x)
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn lerp(self, o: Self, t: T) -> Self {
        self + (o - self) * t
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.x == T::zero() && self.y == T::zero()
    }
}

impl<T: Scalar> Point2<T> {
    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn from_angle(theta: T) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    /// Euclidean unit vector; `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(self * (T::one() / n))
        } else {
            None
        }
    }

    pub fn distance(self, o: Self) -> T {
        (self - o).norm()
    }

    pub fn to_f64(self) -> Point2<f64> {
        Point2::new(self.x.as_f64(), self.y.as_f64())
    }
}

impl<T: Field> Add for Point2<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Field> AddAssign for Point2<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Field> Sub for Point2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Field> Mul<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Field> Neg for Point2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Twice the signed area of a closed polygon (positive when counterclockwise).
pub fn signed_area2<T: Field>(pts: &[Point2<T>]) -> T {
    let n = pts.len();
    let mut acc = T::zero();
    for i in 0..n {
        acc = acc + pts[i].cross(pts[(i + 1) % n]);
    }
    acc
}

/// Orientation of `c` relative to the directed line `a -> b`, with a
/// tolerance relative to the operand magnitudes: `1` left, `-1` right, `0`
/// collinear.
pub fn orient<T: Field>(a: Point2<T>, b: Point2<T>, c: Point2<T>, rel_tol: T) -> i8 {
    let u = b - a;
    let v = c - a;
    let det = u.cross(v);
    let scale = (u.x.magnitude() + u.y.magnitude()) * (v.x.magnitude() + v.y.magnitude());
    if det > rel_tol * scale {
        1
    } else if det < -(rel_tol * scale) {
        -1
    } else {
        0
    }
}

/// Intersection of closed segments `[a,b]` and `[c,d]`. Collinear overlaps
/// count as intersecting.
pub fn segments_intersect<T: Field>(
    a: Point2<T>,
    b: Point2<T>,
    c: Point2<T>,
    d: Point2<T>,
    rel_tol: T,
) -> bool {
    let o1 = orient(a, b, c, rel_tol);
    let o2 = orient(a, b, d, rel_tol);
    let o3 = orient(c, d, a, rel_tol);
    let o4 = orient(c, d, b, rel_tol);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    let on = |p: Point2<T>, q: Point2<T>, r: Point2<T>| {
        // r collinear with pq: inside the bounding box?
        let (lx, hx) = if p.x < q.x { (p.x, q.x) } else { (q.x, p.x) };
        let (ly, hy) = if p.y < q.y { (p.y, q.y) } else { (q.y, p.y) };
        r.x >= lx && r.x <= hx && r.y >= ly && r.y <= hy
    };
    (o1 == 0 && on(a, b, c))
        || (o2 == 0 && on(a, b, d))
        || (o3 == 0 && on(c, d, a))
        || (o4 == 0 && on(c, d, b))
}

/// Parameter pair `(s, t)` of the intersection of the lines `a + s(b-a)` and
/// `c + t(d-c)`; `None` for parallel lines.
pub fn line_intersection<T: Field>(
    a: Point2<T>,
    b: Point2<T>,
    c: Point2<T>,
    d: Point2<T>,
) -> Option<(T, T)> {
    let r = b - a;
    let q = d - c;
    let den = r.cross(q);
    if den == T::zero() {
        return None;
    }
    let w = c - a;
    Some((w.cross(q) / den, w.cross(r) / den))
}

/// Finds pairs of non-adjacent segments of a closed polyline that intersect.
///
/// Sweep over x: segments are sorted by their left end and only pairs whose
/// x-extents overlap are tested. Returns at most `limit` pairs of segment
/// indices (segment `i` joins `pts[i]` and `pts[i+1]`).
pub fn closed_polyline_crossings<T: Field>(
    pts: &[Point2<T>],
    rel_tol: T,
    limit: usize,
) -> Vec<(usize, usize)> {
    let n = pts.len();
    if n < 4 {
        return Vec::new();
    }
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    let mut order: Vec<(T, T, usize)> = (0..n)
        .map(|i| {
            let (a, b) = seg(i);
            let (lo, hi) = if a.x < b.x { (a.x, b.x) } else { (b.x, a.x) };
            (lo, hi, i)
        })
        .collect();
    order.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut active: Vec<(T, usize)> = Vec::new();
    let mut out = Vec::new();
    for &(lo, hi, i) in &order {
        active.retain(|&(h, _)| h >= lo);
        for &(_, j) in &active {
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if segments_intersect(a, b, c, d, rel_tol) {
                out.push((i.min(j), i.max(j)));
                if out.len() >= limit {
                    return out;
                }
            }
        }
        active.push((hi, i));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    #[test]
    fn cross_and_perp() {
        assert_eq!(p(1.0, 0.0).cross(p(0.0, 1.0)), 1.0);
        assert_eq!(p(1.0, 0.0).perp_cw(), p(0.0, -1.0));
        assert_eq!(signed_area2(&[p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]), 2.0);
    }

    #[test]
    fn crossing_segments() {
        assert!(segments_intersect(p(0., 0.), p(2., 2.), p(0., 2.), p(2., 0.), 1e-12));
        assert!(!segments_intersect(p(0., 0.), p(1., 0.), p(0., 1.), p(1., 1.), 1e-12));
        // touching at an endpoint
        assert!(segments_intersect(p(0., 0.), p(1., 0.), p(1., 0.), p(1., 1.), 1e-12));
    }

    #[test]
    fn bowtie_is_detected() {
        let bow = [p(0., 0.), p(2., 2.), p(2., 0.), p(0., 2.)];
        assert!(!closed_polyline_crossings(&bow, 1e-12, 4).is_empty());
        let sq = [p(0., 0.), p(2., 0.), p(2., 2.), p(0., 2.)];
        assert!(closed_polyline_crossings(&sq, 1e-12, 4).is_empty());
    }

    #[test]
    fn line_params() {
        let (s, t) = line_intersection(p(0., 0.), p(2., 0.), p(1., -1.), p(1., 1.)).unwrap();
        assert_eq!((s, t), (0.5, 0.5));
        assert!(line_intersection(p(0., 0.), p(1., 0.), p(0., 1.), p(1., 1.)).is_none());
    }
}
