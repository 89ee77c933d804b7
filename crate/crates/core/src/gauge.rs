//! The symmetric unit ball and its gauge norm.
//!
//! A [`SymmetricOval`] is a centrally symmetric convex polygon; smooth ovals
//! such as the Euclidean disk are represented by fine regular polygons. For a
//! facet with outward normal `n_i` and support value `h_i = <n_i, v_i>` the
//! gauge is
//!
//! ```text
//! ||v||_B = max_i <n_i, v> / h_i
//! ```
//!
//! which is exact over any ordered field. [`gauge_norm`] evaluates that
//! maximum over every facet; [`SymmetricOval::norm`] locates the active facet
//! by angular binary search and is the one used on hot paths.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::point::{signed_area2, Point2};
use crate::scalar::{Field, Scalar};

/// Relative tolerance for treating a support line contact as a flat edge.
pub const FLAT_CONTACT_TOL: f64 = 1e-9;

/// Relative tolerance of the central-symmetry check.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Number of uniform samples used by [`alpha_angle`] on top of its breakpoints.
pub const ALPHA_GRID: usize = 4096;

/// Centrally symmetric convex polygon, centered at the origin, vertices
/// counterclockwise.
#[derive(Debug, Clone)]
pub struct SymmetricOval<T> {
    vertices: Vec<Point2<T>>,
    /// Outward (unnormalized) normal of facet `i = v_i -> v_{i+1}`.
    normals: Vec<Point2<T>>,
    /// `<normals[i], vertices[i]>`, strictly positive.
    support: Vec<T>,
    /// Vertex angles relative to vertex 0, increasing in `[0, 2pi)`.
    vertex_angles: Vec<f64>,
    /// Facet normal angles relative to facet 0, increasing in `[0, 2pi)`.
    normal_angles: Vec<f64>,
}

/// Where a support line of given normal touches the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contact {
    Vertex(usize),
    /// The whole facet `i` (vertices `i` and `i + 1`).
    Facet(usize),
}

fn rel_angle(theta: f64, base: f64) -> f64 {
    let mut r = (theta - base) % (2.0 * PI);
    if r < 0.0 {
        r += 2.0 * PI;
    }
    r
}

/// Index `i` with `angles[i] <= r < angles[i+1]` (cyclically).
fn sector(angles: &[f64], r: f64) -> usize {
    match angles.partition_point(|&a| a <= r) {
        0 => angles.len() - 1,
        k => k - 1,
    }
}

impl<T: Field> SymmetricOval<T> {
    /// Validates and builds the ball. A clockwise vertex list is reversed.
    pub fn new(mut vertices: Vec<Point2<T>>) -> Result<Self> {
        let n = vertices.len();
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidOval(format!(
                "need an even number (>= 4) of vertices, got {n}"
            )));
        }
        let area2 = signed_area2(&vertices);
        if area2 == T::zero() {
            return Err(Error::InvalidOval("zero area".into()));
        }
        if area2 < T::zero() {
            vertices.reverse();
        }
        let scale = vertices
            .iter()
            .fold(T::zero(), |m, v| m.max_of(v.x.magnitude()).max_of(v.y.magnitude()));
        let sym_tol = T::tol(SYMMETRY_TOL) * scale;
        let half = n / 2;
        for i in 0..half {
            let s = vertices[i] + vertices[i + half];
            if s.x.magnitude() > sym_tol || s.y.magnitude() > sym_tol {
                return Err(Error::InvalidOval(format!(
                    "not centrally symmetric: vertex {i} and {} do not cancel",
                    i + half
                )));
            }
        }
        let mut normals = Vec::with_capacity(n);
        let mut support = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let e = b - a;
            if e.is_zero() {
                return Err(Error::InvalidOval(format!("repeated vertex {i}")));
            }
            let turn = e.cross(c - b);
            let mag = (e.x.magnitude() + e.y.magnitude())
                * ((c - b).x.magnitude() + (c - b).y.magnitude());
            if turn <= T::tol(1e-14) * mag {
                return Err(Error::InvalidOval(format!(
                    "not strictly convex at vertex {}",
                    (i + 1) % n
                )));
            }
            let nrm = e.perp_cw();
            let h = nrm.dot(a);
            if h <= T::zero() {
                return Err(Error::InvalidOval("origin not interior".into()));
            }
            normals.push(nrm);
            support.push(h);
        }
        let angle = |p: &Point2<T>| p.y.as_f64().atan2(p.x.as_f64());
        let v0 = angle(&vertices[0]);
        let vertex_angles = vertices.iter().map(|v| rel_angle(angle(v), v0)).collect();
        let n0 = angle(&normals[0]);
        let normal_angles = normals.iter().map(|v| rel_angle(angle(v), n0)).collect();
        Ok(Self {
            vertices,
            normals,
            support,
            vertex_angles,
            normal_angles,
        })
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Outward normal (unnormalized) and support value of facet `i`.
    pub fn facet(&self, i: usize) -> (Point2<T>, T) {
        (self.normals[i], self.support[i])
    }

    #[inline]
    fn facet_value(&self, i: usize, v: Point2<T>) -> T {
        self.normals[i].dot(v) / self.support[i]
    }

    /// Index of a facet whose cone contains `v` (the active facet of the gauge).
    pub fn facet_of(&self, v: Point2<T>) -> usize {
        let n = self.len();
        if n <= 8 {
            let mut best = 0;
            let mut bv = self.facet_value(0, v);
            for i in 1..n {
                let fv = self.facet_value(i, v);
                if fv > bv {
                    best = i;
                    bv = fv;
                }
            }
            return best;
        }
        let r = rel_angle(
            v.y.as_f64().atan2(v.x.as_f64()),
            self.vertex_angles_base(),
        );
        let i = sector(&self.vertex_angles, r);
        // The f64 angle may be off by one sector near a vertex direction.
        let prev = (i + n - 1) % n;
        let next = (i + 1) % n;
        let mut best = i;
        let mut bv = self.facet_value(i, v);
        for j in [prev, next] {
            let fv = self.facet_value(j, v);
            if fv > bv {
                best = j;
                bv = fv;
            }
        }
        best
    }

    fn vertex_angles_base(&self) -> f64 {
        let v = self.vertices[0];
        v.y.as_f64().atan2(v.x.as_f64())
    }

    /// Gauge norm `||v||_B`, O(log m).
    #[inline]
    pub fn norm(&self, v: Point2<T>) -> T {
        if v.is_zero() {
            return T::zero();
        }
        self.facet_value(self.facet_of(v), v)
    }

    /// Minkowski distance `d_B(p, q)`.
    #[inline]
    pub fn distance(&self, p: Point2<T>, q: Point2<T>) -> T {
        self.norm(q - p)
    }

    /// Largest `<n, v>` over the ball.
    pub fn support_value(&self, n: Point2<T>) -> T {
        let k = match self.contact(n) {
            Contact::Vertex(k) | Contact::Facet(k) => k,
        };
        n.dot(self.vertices[k])
    }

    /// Contact of the support line with outward normal `n`. Two vertices
    /// within [`FLAT_CONTACT_TOL`] (relative) of the support value make a
    /// flat contact.
    pub fn contact(&self, n: Point2<T>) -> Contact {
        let m = self.len();
        let r = rel_angle(
            n.y.as_f64().atan2(n.x.as_f64()),
            self.normals[0].y.as_f64().atan2(self.normals[0].x.as_f64()),
        );
        // Facet i is followed by vertex i+1, whose normal cone spans
        // normal_angles[i]..normal_angles[i+1].
        let i = sector(&self.normal_angles, r);
        let mut best = (i + 1) % m;
        let mut bv = n.dot(self.vertices[best]);
        for k in [i, (i + 2) % m] {
            let v = n.dot(self.vertices[k]);
            if v > bv {
                best = k;
                bv = v;
            }
        }
        let tol = T::tol(FLAT_CONTACT_TOL) * bv.magnitude();
        let prev = (best + m - 1) % m;
        let next = (best + 1) % m;
        if (bv - n.dot(self.vertices[next])).magnitude() <= tol {
            Contact::Facet(best)
        } else if (bv - n.dot(self.vertices[prev])).magnitude() <= tol {
            Contact::Facet(prev)
        } else {
            Contact::Vertex(best)
        }
    }

    /// Canonical support point for normal `n`: the contact vertex, or the
    /// midpoint of the contact facet. Always lies on the boundary, so its
    /// gauge is 1.
    pub fn support_point(&self, n: Point2<T>) -> Point2<T> {
        match self.contact(n) {
            Contact::Vertex(k) => self.vertices[k],
            Contact::Facet(i) => {
                let two = T::one() + T::one();
                (self.vertices[i] + self.vertices[(i + 1) % self.len()]) * (T::one() / two)
            }
        }
    }

    /// Boundary chain of the ball traced from the support point of `n_from`
    /// counterclockwise to the support point of `n_to`; the turn from
    /// `n_from` to `n_to` must be in `[0, pi)`. Endpoints included.
    pub fn boundary_arc(&self, n_from: Point2<T>, n_to: Point2<T>) -> Vec<Point2<T>> {
        let m = self.len();
        let start = self.support_point(n_from);
        let k0 = match self.contact(n_from) {
            Contact::Facet(i) => (i + 1) % m,
            Contact::Vertex(k) => (k + 1) % m,
        };
        let (end_idx, end_mid) = match self.contact(n_to) {
            Contact::Facet(i) => (i, true),
            Contact::Vertex(k) => (k, false),
        };
        let steps = (end_idx + m + 1 - k0) % m;
        let mut out = vec![start];
        if n_from.cross(n_to) <= T::zero() && n_from.dot(n_to) > T::zero() {
            // zero turn
            return out;
        }
        for s in 0..steps {
            let v = self.vertices[(k0 + s) % m];
            if *out.last().unwrap() != v {
                out.push(v);
            }
        }
        if end_mid {
            let e = self.support_point(n_to);
            if *out.last().unwrap() != e {
                out.push(e);
            }
        }
        out
    }

    /// `p_B(dB)`: length of the ball's own boundary in its gauge.
    pub fn self_perimeter(&self) -> T {
        let n = self.len();
        (0..n).fold(T::zero(), |acc, i| {
            acc + self.norm(self.vertices[(i + 1) % n] - self.vertices[i])
        })
    }

    /// The ball scaled by `s > 0`, as a vertex list.
    pub fn scaled_vertices(&self, s: T) -> Vec<Point2<T>> {
        self.vertices.iter().map(|&v| v * s).collect()
    }

    /// True when the ball is a parallelogram.
    pub fn is_parallelogram(&self) -> bool {
        self.len() == 4
    }
}

impl<T: Scalar> SymmetricOval<T> {
    /// Regular `m`-gon (`m` even) inscribed in the circle of radius `r`, with a
    /// vertex at angle `phase`.
    pub fn regular(m: usize, r: T, phase: T) -> Result<Self> {
        if m < 4 || m % 2 != 0 {
            return Err(Error::InvalidOval(format!(
                "regular ball needs an even vertex count >= 4, got {m}"
            )));
        }
        let half = m / 2;
        let mut verts = Vec::with_capacity(m);
        for k in 0..half {
            let th = phase + T::two() * T::pi() * T::cast(k) / T::cast(m);
            verts.push(Point2::new(r * th.cos(), r * th.sin()));
        }
        for k in 0..half {
            verts.push(-verts[k]);
        }
        Self::new(verts)
    }

    /// Axis-aligned square with vertices `(+-1, +-1)`.
    pub fn square() -> Self {
        let o = T::one();
        Self::new(vec![
            Point2::new(o, o),
            Point2::new(-o, o),
            Point2::new(-o, -o),
            Point2::new(o, -o),
        ])
        .expect("square is a valid ball")
    }

    /// Regular hexagon of circumradius 1 with vertices at angles `60k` degrees.
    pub fn hexagon() -> Self {
        Self::regular(6, T::one(), T::zero()).expect("hexagon is a valid ball")
    }

    /// Euclidean unit disk approximated by the inscribed regular `m`-gon.
    pub fn disk(m: usize) -> Result<Self> {
        Self::regular(m, T::one(), T::zero())
    }

    /// Euclidean inradius and circumradius `(r_min, r_max)`.
    pub fn radii(&self) -> (T, T) {
        let r_max = self
            .vertices
            .iter()
            .fold(T::zero(), |m, v| m.max_of(v.norm()));
        let r_min = (0..self.len()).fold(T::infinity(), |m, i| {
            m.min_of(self.support[i] / self.normals[i].norm())
        });
        (r_min, r_max)
    }

    /// Minimum of `t -> ||p - (a + t (b - a))||_B` over `t` in `[0, 1]`.
    ///
    /// The function is convex and piecewise linear; the minimizer is located
    /// by bisection on the slope of the active facet, and when the minimum
    /// is attained on a flat piece the whole interval of minimizers is
    /// returned.
    pub fn segment_distance(&self, p: Point2<T>, a: Point2<T>, b: Point2<T>) -> SegmentDistance<T> {
        let e = b - a;
        let w = p - a;
        let g = |t: T| self.norm(w - e * t);
        if e.is_zero() {
            let d = g(T::zero());
            return SegmentDistance { distance: d, t_lo: T::zero(), t_hi: T::zero() };
        }
        // slope of the active facet at t (derivative of g)
        let slope = |t: T| {
            let v = w - e * t;
            let i = self.facet_of(v);
            -(self.normals[i].dot(e)) / self.support[i]
        };
        let flat_tol = T::tol(1e-12);
        let (mut lo, mut hi) = (T::zero(), T::one());
        let s0 = slope(T::zero());
        let s1 = slope(T::one());
        let t_star = if s0 >= T::zero() {
            T::zero()
        } else if s1 <= T::zero() {
            T::one()
        } else {
            for _ in 0..64 {
                let mid = (lo + hi) * T::half();
                let s = slope(mid);
                if s < T::zero() {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= T::epsilon() {
                    break;
                }
            }
            (lo + hi) * T::half()
        };
        let mut best = g(t_star);
        let mut t_best = t_star;
        // Polish: the true minimum sits at a vertex-direction breakpoint near t*.
        let i = self.facet_of(w - e * t_star);
        let m = self.len();
        for k in [i, (i + 1) % m] {
            let v = self.vertices[k];
            let den = e.cross(v);
            if den != T::zero() {
                let t = w.cross(v) / den;
                if t >= T::zero() && t <= T::one() {
                    let d = g(t);
                    if d < best {
                        best = d;
                        t_best = t;
                    }
                }
            }
        }
        for t in [T::zero(), T::one()] {
            let d = g(t);
            if d < best {
                best = d;
                t_best = t;
            }
        }
        // Flat bottom: widen to the full interval of minimizers.
        let level = best * (T::one() + flat_tol) + T::tol(1e-15);
        let widen = |inside: T, outside: T| {
            let (mut a, mut b) = (inside, outside);
            if g(b) <= level {
                return b;
            }
            for _ in 0..64 {
                let mid = (a + b) * T::half();
                if g(mid) <= level {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            a
        };
        let t_lo = widen(t_best, T::zero());
        let t_hi = widen(t_best, T::one());
        SegmentDistance { distance: best, t_lo, t_hi }
    }

    /// Minkowski distance from `p` to the closed polyline `pts`.
    pub fn polyline_distance(&self, p: Point2<T>, pts: &[Point2<T>], closed: bool) -> T {
        let n = pts.len();
        if n == 1 {
            return self.distance(pts[0], p);
        }
        let segs = if closed { n } else { n - 1 };
        let (r_min, r_max) = self.radii();
        let mut best = T::infinity();
        for i in 0..segs {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            // Euclidean lower bound: ||v||_B >= |v| / r_max.
            if euclid_segment_distance(p, a, b) / r_max >= best {
                continue;
            }
            let _ = r_min;
            let d = self.segment_distance(p, a, b).distance;
            if d < best {
                best = d;
            }
        }
        best
    }
}

/// Result of [`SymmetricOval::segment_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentDistance<T> {
    pub distance: T,
    /// Interval of minimizing parameters (equal unless the contact is flat).
    pub t_lo: T,
    pub t_hi: T,
}

/// Euclidean distance from `p` to segment `[a, b]`.
pub fn euclid_segment_distance<T: Scalar>(p: Point2<T>, a: Point2<T>, b: Point2<T>) -> T {
    let e = b - a;
    let l2 = e.norm_sq();
    if l2 == T::zero() {
        return (p - a).norm();
    }
    let t = ((p - a).dot(e) / l2).max(T::zero()).min(T::one());
    (p - a.lerp(b, t)).norm()
}

/// Unit line direction (`v` and `-v` denote the same direction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction<T> {
    v: Point2<T>,
}

impl<T: Scalar> Direction<T> {
    pub fn new(v: Point2<T>) -> Result<Self> {
        v.normalized()
            .map(|v| Self { v })
            .ok_or_else(|| Error::InvalidInput("direction must be a nonzero finite vector".into()))
    }

    pub fn from_angle(theta: T) -> Self {
        Self { v: Point2::from_angle(theta) }
    }

    pub fn vector(&self) -> Point2<T> {
        self.v
    }

    /// Unsigned angle between two line directions, in `[0, pi/2]`.
    pub fn line_angle(&self, other: &Self) -> T {
        self.v.cross(other.v).abs().atan2(self.v.dot(other.v).abs())
    }

    /// Same line direction up to `tol` radians.
    pub fn same_line(&self, other: &Self, tol: T) -> bool {
        self.line_angle(other) <= tol
    }
}

/// Gauge norm by scanning every facet. Exact over any [`Field`].
pub fn gauge_norm<T: Field>(b: &SymmetricOval<T>, v: Point2<T>) -> T {
    (0..b.len()).fold(T::zero(), |m, i| m.max_of(b.facet_value(i, v)))
}

/// Minkowski distance `d_B(p, q) = ||q - p||_B`.
pub fn minkowski_distance<T: Field>(b: &SymmetricOval<T>, p: Point2<T>, q: Point2<T>) -> T {
    gauge_norm(b, q - p)
}

/// Birkhoff-dual direction of `d` with respect to `b`.
///
/// The support lines parallel to `d` touch the ball at `p+` and `p- = -p+`;
/// the dual is the direction `p+ p-`. When the contact is a facet
/// `[z+, t+]`, the dual is the direction of the parallelogram sides
/// `z+ (-t+)` and `t+ (-z+)`, i.e. of `z+ + t+`, the facet midpoint.
pub fn dual_direction<T: Scalar>(b: &SymmetricOval<T>, d: &Direction<T>) -> Direction<T> {
    let n = d.vector().perp();
    Direction::new(b.support_point(n)).expect("support point of a ball is nonzero")
}

/// `p_B(dB)`.
pub fn self_perimeter<T: Field>(b: &SymmetricOval<T>) -> T {
    b.self_perimeter()
}

/// Supremum over directions `d` of the angle `max(angle(d, d*), angle(d, -d*))`.
///
/// Evaluated on a uniform grid of [`ALPHA_GRID`] directions plus every edge
/// and vertex direction of the ball, each nudged to both sides, since the
/// dual jumps exactly at edge directions and the supremum is approached
/// there.
pub fn alpha_angle<T: Scalar>(b: &SymmetricOval<T>) -> T {
    let mut thetas: Vec<T> = (0..ALPHA_GRID)
        .map(|k| T::pi() * T::cast(k) / T::cast(ALPHA_GRID))
        .collect();
    let nudge = T::lit(1e-9);
    let n = b.len();
    for i in 0..n {
        let e = b.vertices[(i + 1) % n] - b.vertices[i];
        for base in [e.angle(), b.vertices[i].angle()] {
            thetas.push(base);
            thetas.push(base + nudge);
            thetas.push(base - nudge);
        }
    }
    thetas
        .into_iter()
        .map(|th| {
            let d = Direction::from_angle(th);
            let dual = dual_direction(b, &d);
            T::pi() - d.line_angle(&dual)
        })
        .fold(T::pi() * T::half(), |m, a| m.max(a))
}

/// `1/2 (K + (-K))`: the symmetrization of a convex polygon `K`.
pub fn symmetrize<T: Scalar>(k: &[Point2<T>]) -> Result<SymmetricOval<T>> {
    let mut pts: Vec<Point2<T>> = k.to_vec();
    if pts.len() < 3 {
        return Err(Error::Degenerate("symmetrize needs at least 3 points".into()));
    }
    let area2 = signed_area2(&pts);
    let scale = pts.iter().fold(T::zero(), |m, p| m.max(p.norm()));
    if area2.abs() <= T::tol(1e-12) * scale * scale {
        return Err(Error::Degenerate("convex body has zero area".into()));
    }
    if area2 < T::zero() {
        pts.reverse();
    }
    let n = pts.len();
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let c = pts[(i + 2) % n];
        if (b - a).cross(c - b) < -(T::tol(1e-12) * scale * scale) {
            return Err(Error::InvalidInput("symmetrize needs a convex polygon".into()));
        }
    }
    // Edge vectors of K and of -K, merged by angle.
    let mut edges: Vec<Point2<T>> = Vec::with_capacity(2 * n);
    for i in 0..n {
        let e = pts[(i + 1) % n] - pts[i];
        if !e.is_zero() {
            edges.push(e);
            edges.push(-e);
        }
    }
    let ang = |e: &Point2<T>| {
        let a = e.angle();
        if a < T::zero() {
            a + T::two() * T::pi()
        } else {
            a
        }
    };
    edges.sort_by(|a, b| ang(a).partial_cmp(&ang(b)).unwrap());
    // merge parallel edges
    let par_tol = T::tol(1e-12);
    let mut merged: Vec<Point2<T>> = Vec::new();
    for e in edges {
        if let Some(last) = merged.last_mut() {
            if last.cross(e).abs() <= par_tol * last.norm() * e.norm() && last.dot(e) > T::zero() {
                *last = *last + e;
                continue;
            }
        }
        merged.push(e);
    }
    if merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if last.cross(first).abs() <= par_tol * last.norm() * first.norm()
            && last.dot(first) > T::zero()
        {
            merged[0] = first + last;
            merged.pop();
        }
    }
    let mut verts = Vec::with_capacity(merged.len());
    let mut cur = Point2::zero();
    for e in &merged {
        verts.push(cur);
        cur = cur + *e;
    }
    let m = verts.len();
    let centroid = verts.iter().fold(Point2::zero(), |acc, &v| acc + v) * (T::one() / T::cast(m));
    let half = m / 2;
    let mut out: Vec<Point2<T>> = verts.iter().map(|&v| (v - centroid) * T::half()).collect();
    // enforce exact symmetry against rounding in the running sum
    for i in 0..half {
        let avg = (out[i] - out[i + half]) * T::half();
        out[i] = avg;
        out[i + half] = -avg;
    }
    SymmetricOval::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type P = Point2<f64>;

    fn p(x: f64, y: f64) -> P {
        Point2::new(x, y)
    }

    #[test]
    fn square_gauge_is_sup_norm() {
        let b = SymmetricOval::<f64>::square();
        assert_eq!(b.norm(p(1.0, 1.0)), 1.0);
        assert_eq!(b.norm(p(3.0, -0.5)), 3.0);
        assert_eq!(gauge_norm(&b, p(-0.25, 2.0)), 2.0);
        assert_eq!(b.norm(P::zero()), 0.0);
    }

    #[test]
    fn disk_gauge_is_euclidean() {
        let b = SymmetricOval::<f64>::disk(512).unwrap();
        let v = b.norm(p(3.0, 4.0));
        // inscribed polygon: gauge in [|v|, |v| / cos(pi/m)]
        assert!(v >= 5.0 - 1e-12 && v <= 5.0 / (PI / 512.0).cos() + 1e-12, "{v}");
    }

    #[test]
    fn hexagon_gauge_matches_ray_casting() {
        // Values frozen from an independent ray-edge intersection script.
        let b = SymmetricOval::<f64>::hexagon();
        assert!((b.norm(p(0.0, 1.0)) - 1.1547005383792515).abs() < 1e-14);
        assert!((minkowski_distance(&b, p(0.0, 0.0), p(1.0, 1.0)) - 1.5773502691896257).abs() < 1e-14);
        assert!((b.distance(p(0.0, 0.0), p(1.0, 1.0)) - 1.5773502691896257).abs() < 1e-14);
    }

    #[test]
    fn distance_examples() {
        let b = SymmetricOval::<f64>::square();
        assert_eq!(minkowski_distance(&b, p(0.0, 0.0), p(2.0, 0.0)), 2.0);
        assert_eq!(minkowski_distance(&b, p(0.3, 0.7), p(0.3, 0.7)), 0.0);
    }

    #[test]
    fn exact_rational_gauge() {
        let r = |a: i64, b: i64| Ratio::new(a, b);
        let pt = |x: Ratio<i64>, y: Ratio<i64>| Point2::new(x, y);
        // symmetric hexagon with rational vertices
        let verts = vec![
            pt(r(2, 1), r(0, 1)),
            pt(r(1, 1), r(1, 1)),
            pt(r(-1, 1), r(1, 1)),
            pt(r(-2, 1), r(0, 1)),
            pt(r(-1, 1), r(-1, 1)),
            pt(r(1, 1), r(-1, 1)),
        ];
        let b = SymmetricOval::new(verts).unwrap();
        assert_eq!(gauge_norm(&b, pt(r(3, 2), r(1, 2))), r(1, 1));
        assert_eq!(b.norm(pt(r(0, 1), r(3, 1))), r(3, 1));
        assert_eq!(b.self_perimeter(), r(6, 1));
        for v in b.vertices() {
            assert_eq!(gauge_norm(&b, *v), r(1, 1));
        }
    }

    #[test]
    fn rejects_invalid_balls() {
        let tri = vec![p(1.0, 0.0), p(0.0, 1.0), p(-1.0, -1.0)];
        assert!(SymmetricOval::new(tri).is_err());
        let asym = vec![p(1.0, 0.0), p(0.0, 1.0), p(-1.0, 0.0), p(0.0, -2.0)];
        assert!(SymmetricOval::new(asym).is_err());
        let collinear = vec![
            p(1.0, 0.0),
            p(1.0, 1.0),
            p(0.0, 1.0),
            p(-1.0, 1.0),
            p(-1.0, 0.0),
            p(-1.0, -1.0),
            p(0.0, -1.0),
            p(1.0, -1.0),
        ];
        assert!(SymmetricOval::new(collinear).is_err());
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let cw = vec![p(1.0, 1.0), p(1.0, -1.0), p(-1.0, -1.0), p(-1.0, 1.0)];
        let b = SymmetricOval::new(cw).unwrap();
        assert!(signed_area2(b.vertices()) > 0.0);
        assert_eq!(b.norm(p(0.5, 0.0)), 0.5);
    }

    #[test]
    fn dual_directions() {
        let disk = SymmetricOval::<f64>::disk(512).unwrap();
        let d = Direction::new(p(1.0, 0.0)).unwrap();
        let dual = dual_direction(&disk, &d);
        assert!(dual.same_line(&Direction::new(p(0.0, 1.0)).unwrap(), 1e-9));

        let sq = SymmetricOval::<f64>::square();
        let dual = dual_direction(&sq, &d);
        assert!(dual.same_line(&Direction::new(p(0.0, 1.0)).unwrap(), 1e-12));

        let diag = Direction::new(p(1.0, 1.0)).unwrap();
        let dual = dual_direction(&sq, &diag);
        assert!(dual.same_line(&Direction::new(p(1.0, -1.0)).unwrap(), 1e-12));
    }

    #[test]
    fn dual_matches_brute_force_support() {
        // brute force: maximize <n, v> over vertices, average the maximizers
        let b = SymmetricOval::<f64>::regular(10, 1.3, 0.2).unwrap();
        for k in 0..200 {
            let th = PI * k as f64 / 200.0 + 1e-4;
            let d = Direction::from_angle(th);
            let n = d.vector().perp();
            let vals: Vec<f64> = b.vertices().iter().map(|v| n.dot(*v)).collect();
            let mx = vals.iter().cloned().fold(f64::MIN, f64::max);
            let hits: Vec<P> = b
                .vertices()
                .iter()
                .zip(&vals)
                .filter(|(_, &v)| (v - mx).abs() <= 1e-9 * mx)
                .map(|(p, _)| *p)
                .collect();
            let z = hits.iter().fold(P::zero(), |a, &q| a + q) * (1.0 / hits.len() as f64);
            let expect = Direction::new(z).unwrap();
            assert!(dual_direction(&b, &d).same_line(&expect, 1e-12));
        }
    }

    #[test]
    fn self_perimeters() {
        assert_eq!(SymmetricOval::<f64>::square().self_perimeter(), 8.0);
        let hex = SymmetricOval::<f64>::hexagon();
        assert!((self_perimeter(&hex) - 6.0).abs() < 1e-12);
        let disk = SymmetricOval::<f64>::disk(512).unwrap();
        assert!((disk.self_perimeter() - 2.0 * PI).abs() < 1e-3);
    }

    #[test]
    fn alpha_angles() {
        let sq = SymmetricOval::<f64>::square();
        assert!((alpha_angle(&sq) - 0.75 * PI).abs() < 1e-6);
        let disk = SymmetricOval::<f64>::disk(512).unwrap();
        let a = alpha_angle(&disk);
        assert!(a >= PI / 2.0 && a - PI / 2.0 < 0.01, "{a}");
        let hex = SymmetricOval::<f64>::hexagon();
        assert!((alpha_angle(&hex) - 2.0 * PI / 3.0).abs() < 1e-6);
    }

    #[test]
    fn symmetrize_examples() {
        let sq = vec![p(2.0, 3.0), p(4.0, 3.0), p(4.0, 5.0), p(2.0, 5.0)];
        let b = symmetrize(&sq).unwrap();
        assert_eq!(b.len(), 4);
        for v in b.vertices() {
            assert!((v.x.abs() - 1.0).abs() < 1e-12 && (v.y.abs() - 1.0).abs() < 1e-12);
        }
        // equilateral triangle -> regular hexagon of circumradius sqrt(3)/2
        let tri: Vec<P> = (0..3)
            .map(|k| Point2::from_angle(PI / 2.0 + 2.0 * PI * k as f64 / 3.0))
            .collect();
        let h = symmetrize(&tri).unwrap();
        assert_eq!(h.len(), 6);
        for v in h.vertices() {
            assert!((v.norm() - 3f64.sqrt() / 2.0).abs() < 1e-12);
        }
        let flat = vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)];
        assert!(matches!(symmetrize(&flat), Err(Error::Degenerate(_))));
    }

    #[test]
    fn segment_distance_flat_contact() {
        let sq = SymmetricOval::<f64>::square();
        let d = sq.segment_distance(p(0.0, 1.0), p(-2.0, 0.0), p(2.0, 0.0));
        assert!((d.distance - 1.0).abs() < 1e-12);
        // minimizers x in [-1, 1] -> t in [0.25, 0.75]
        assert!((d.t_lo - 0.25).abs() < 1e-9 && (d.t_hi - 0.75).abs() < 1e-9, "{d:?}");
        let hex = SymmetricOval::<f64>::hexagon();
        let d = hex.segment_distance(p(5.0, 5.0), p(0.0, 0.0), p(1.0, 0.0));
        // brute force over a fine grid
        let brute = (0..=100_000)
            .map(|k| hex.norm(p(5.0, 5.0) - p(k as f64 / 100_000.0, 0.0)))
            .fold(f64::MAX, f64::min);
        assert!((d.distance - brute).abs() < 1e-6 && d.distance <= brute + 1e-12);
    }

    #[test]
    fn boundary_arc_of_square() {
        let sq = SymmetricOval::<f64>::square();
        // from bottom facet normal to right facet normal: midpoint, corner, midpoint
        let arc = sq.boundary_arc(p(0.0, -1.0), p(1.0, 0.0));
        assert_eq!(arc, vec![p(0.0, -1.0), p(1.0, -1.0), p(1.0, 0.0)]);
        let arc = sq.boundary_arc(p(0.0, -1.0), p(1.0, -0.5));
        assert_eq!(arc, vec![p(0.0, -1.0), p(1.0, -1.0)]);
    }
}
