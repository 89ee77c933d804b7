//! Domain boundaries: closed polylines, shape generators, Minkowski
//! perimeters and a sampled reach estimate.
//!
//! Curves are counterclockwise, so the outward side of an edge is on its
//! right and the outward normal of edge `a -> b` is `(b - a).perp_cw()`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::{euclid_segment_distance, SymmetricOval};
use crate::point::{closed_polyline_crossings, signed_area2, Point2};
use crate::scalar::{Field, Scalar};

/// Largest admissible De Rham depth.
pub const MAX_DE_RHAM_DEPTH: u32 = 12;

/// Simple closed polyline, counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedCurve<T> {
    points: Vec<Point2<T>>,
}

impl<T: Field> ClosedCurve<T> {
    /// Validates and builds the curve. Clockwise input is reversed; a
    /// repeated closing point is dropped.
    pub fn new(mut points: Vec<Point2<T>>) -> Result<Self> {
        if points.len() > 1 && points.first() == points.last() {
            points.pop();
        }
        if points.len() < 3 {
            return Err(Error::InvalidCurve(format!(
                "need at least 3 points, got {}",
                points.len()
            )));
        }
        let n = points.len();
        for i in 0..n {
            if points[i] == points[(i + 1) % n] {
                return Err(Error::InvalidCurve(format!("points {i} and {} coincide", (i + 1) % n)));
            }
        }
        let area2 = signed_area2(&points);
        if area2 == T::zero() {
            return Err(Error::InvalidCurve("zero enclosed area".into()));
        }
        if area2 < T::zero() {
            points.reverse();
        }
        let crossings = closed_polyline_crossings(&points, T::tol(1e-14), 1);
        if let Some(&(i, j)) = crossings.first() {
            return Err(Error::InvalidCurve(format!("edges {i} and {j} intersect")));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Endpoints of edge `i` (from point `i` to point `i + 1`).
    #[inline]
    pub fn edge(&self, i: usize) -> (Point2<T>, Point2<T>) {
        let n = self.points.len();
        (self.points[i], self.points[(i + 1) % n])
    }

    /// Turn at vertex `i`: positive for a convex corner, negative for a
    /// reflex one.
    pub fn turn(&self, i: usize) -> T {
        let n = self.points.len();
        let a = self.points[(i + n - 1) % n];
        let b = self.points[i];
        let c = self.points[(i + 1) % n];
        (b - a).cross(c - b)
    }

    /// True when no vertex turns right (beyond a relative tolerance).
    pub fn is_convex(&self) -> bool {
        let n = self.points.len();
        (0..n).all(|i| {
            let a = self.points[(i + n - 1) % n];
            let b = self.points[i];
            let c = self.points[(i + 1) % n];
            let u = b - a;
            let v = c - b;
            let scale = (u.x.magnitude() + u.y.magnitude()) * (v.x.magnitude() + v.y.magnitude());
            u.cross(v) >= -(T::tol(1e-9) * scale)
        })
    }

    /// Point-in-polygon by winding number; boundary points count as inside.
    pub fn contains(&self, p: Point2<T>) -> bool {
        let n = self.points.len();
        let mut wn = 0i32;
        for i in 0..n {
            let (a, b) = self.edge(i);
            let c = (b - a).cross(p - a);
            if c == T::zero() {
                let within = |lo: T, hi: T, v: T| (lo <= v && v <= hi) || (hi <= v && v <= lo);
                if within(a.x, b.x, p.x) && within(a.y, b.y, p.y) {
                    return true;
                }
            }
            if a.y <= p.y {
                if b.y > p.y && c > T::zero() {
                    wn += 1;
                }
            } else if b.y <= p.y && c < T::zero() {
                wn -= 1;
            }
        }
        wn != 0
    }
}

impl<T: Scalar> ClosedCurve<T> {
    /// Cumulative Euclidean arc length at each vertex; the last entry is the
    /// total length (one more entry than vertices).
    pub fn arc_lengths(&self) -> Vec<T> {
        let n = self.points.len();
        let mut out = Vec::with_capacity(n + 1);
        let mut acc = T::zero();
        out.push(acc);
        for i in 0..n {
            let (a, b) = self.edge(i);
            acc = acc + (b - a).norm();
            out.push(acc);
        }
        out
    }

    /// Euclidean length.
    pub fn length(&self) -> T {
        *self.arc_lengths().last().unwrap()
    }

    /// Largest Euclidean distance from the origin.
    pub fn radius(&self) -> T {
        self.points.iter().fold(T::zero(), |m, p| m.max(p.norm()))
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Point2<T>, Point2<T>) {
        bbox(&self.points)
    }

    /// The curve with every edge split into `k` equal pieces.
    pub fn subdivided(&self, k: usize) -> Self {
        let n = self.points.len();
        let mut pts = Vec::with_capacity(n * k);
        for i in 0..n {
            let (a, b) = self.edge(i);
            for j in 0..k {
                pts.push(a.lerp(b, T::cast(j) / T::cast(k)));
            }
        }
        Self { points: pts }
    }
}

pub(crate) fn bbox<T: Scalar>(pts: &[Point2<T>]) -> (Point2<T>, Point2<T>) {
    let mut lo = pts[0];
    let mut hi = pts[0];
    for p in pts {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

/// Curvature tag of a boundary piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArcTag {
    Convex,
    Concave,
}

/// Maximal run of edges turning the same way.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedArc<T> {
    /// Open chain of points; consecutive arcs share endpoints.
    pub points: Vec<Point2<T>>,
    pub tag: ArcTag,
}

/// A closed curve split into convex and concave pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCurve<T> {
    pub arcs: Vec<TaggedArc<T>>,
}

impl<T: Field> PiecewiseCurve<T> {
    /// Splits `c` at the vertices where the turning sign changes. Straight
    /// vertices (turn within a relative `1e-9`) join the current piece. Each
    /// vertex belongs to the piece matching its own turn, so pieces break in
    /// the middle of the edge joining two opposite vertices, as a smooth
    /// curve breaks at an inflection point.
    pub fn from_curve(c: &ClosedCurve<T>) -> Self {
        let n = c.len();
        let pts = c.points();
        let sign = |i: usize| {
            let a = pts[(i + n - 1) % n];
            let b = pts[i];
            let d = pts[(i + 1) % n];
            let u = b - a;
            let v = d - b;
            let scale = (u.x.magnitude() + u.y.magnitude()) * (v.x.magnitude() + v.y.magnitude());
            let t = u.cross(v);
            if t > T::tol(1e-9) * scale {
                1i8
            } else if t < -(T::tol(1e-9) * scale) {
                -1
            } else {
                0
            }
        };
        let signs: Vec<i8> = (0..n).map(sign).collect();
        // resolve straight vertices to the preceding nonzero sign
        let first_nz = signs.iter().position(|&s| s != 0);
        let Some(f) = first_nz else {
            return Self { arcs: Vec::new() };
        };
        let mut resolved = signs.clone();
        let mut cur = signs[f];
        for k in 0..n {
            let i = (f + k) % n;
            if signs[i] == 0 {
                resolved[i] = cur;
            } else {
                cur = signs[i];
            }
        }
        let tag = |s: i8| if s > 0 { ArcTag::Convex } else { ArcTag::Concave };
        let half = T::one() / (T::one() + T::one());
        // find a sign change to start from
        let start = (0..n).find(|&i| resolved[i] != resolved[(i + n - 1) % n]);
        let Some(s0) = start else {
            let mut points = pts.to_vec();
            points.push(pts[0]);
            return Self { arcs: vec![TaggedArc { points, tag: tag(resolved[0]) }] };
        };
        let mut arcs = Vec::new();
        // s0 is the first vertex of a new piece; it begins at the midpoint of edge s0-1 -> s0
        let mid = |i: usize| (pts[i] + pts[(i + 1) % n]) * half;
        let mut current = vec![mid((s0 + n - 1) % n)];
        let mut cur_sign = resolved[s0];
        for k in 0..n {
            let i = (s0 + k) % n;
            if resolved[i] != cur_sign {
                let m = mid((i + n - 1) % n);
                current.push(m);
                arcs.push(TaggedArc { points: std::mem::take(&mut current), tag: tag(cur_sign) });
                current.push(m);
                cur_sign = resolved[i];
            }
            current.push(pts[i]);
        }
        current.push(mid((s0 + n - 1) % n));
        arcs.push(TaggedArc { points: current, tag: tag(cur_sign) });
        Self { arcs }
    }

    /// `c(F)`: number of convex pieces.
    pub fn convex_pieces(&self) -> usize {
        self.arcs.iter().filter(|a| a.tag == ArcTag::Convex).count()
    }

    /// `d(F)`: number of concave pieces.
    pub fn concave_pieces(&self) -> usize {
        self.arcs.iter().filter(|a| a.tag == ArcTag::Concave).count()
    }
}

/// Generator parameters for test shapes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeSpec<T> {
    /// Explicit vertex list.
    Polygon { points: Vec<Point2<T>> },
    /// Regular `n`-gon of circumradius `radius`, first vertex at angle `phase`.
    RegularNgon { n: usize, radius: T, phase: T },
    /// Circle of radius `radius` sampled by its inscribed regular `m`-gon.
    Disk { m: usize, radius: T },
    /// Rectilinear staircase with `k` stairs of size `step`.
    Staircase { k: usize, step: T },
    /// Corner-cutting curve with the given `depth` and `ratio`.
    DeRham { depth: u32, ratio: T },
}

/// Builds the curve described by `spec`.
///
/// `staircase(k, s)` has vertices `(0,0)`, `(k s, 0)` and then, for
/// `i = 1..=k`, `((k-i+1) s, i s)` and `((k-i) s, i s)`; `k = 1` is the
/// square of side `s`. `de_rham(depth, a)` starts from the open path
/// `(-1,-1) (-1,1) (1,1) (1,-1)`, replaces every segment `[p, q]` by the two
/// points at fractions `a` and `1 - a` (endpoints kept) `depth` times, and
/// closes the result with the base segment.
pub fn generate_shape<T: Scalar>(spec: &ShapeSpec<T>) -> Result<ClosedCurve<T>> {
    match spec {
        ShapeSpec::Polygon { points } => ClosedCurve::new(points.clone()),
        ShapeSpec::RegularNgon { n, radius, phase } => {
            if *n < 3 {
                return Err(Error::InvalidShape(format!("regular_ngon needs n >= 3, got {n}")));
            }
            if !(*radius > T::zero()) || !radius.is_finite() {
                return Err(Error::InvalidShape("radius must be positive".into()));
            }
            let pts = (0..*n)
                .map(|k| {
                    let th = *phase + T::two() * T::pi() * T::cast(k) / T::cast(*n);
                    Point2::new(*radius * th.cos(), *radius * th.sin())
                })
                .collect();
            ClosedCurve::new(pts)
        }
        ShapeSpec::Disk { m, radius } => generate_shape(&ShapeSpec::RegularNgon {
            n: *m,
            radius: *radius,
            phase: T::zero(),
        }),
        ShapeSpec::Staircase { k, step } => {
            if *k < 1 {
                return Err(Error::InvalidShape("staircase needs k >= 1".into()));
            }
            if !(*step > T::zero()) || !step.is_finite() {
                return Err(Error::InvalidShape("staircase step must be positive".into()));
            }
            let s = *step;
            let kk = T::cast(*k);
            let mut pts = vec![Point2::zero(), Point2::new(kk * s, T::zero())];
            for i in 1..=*k {
                let fi = T::cast(i);
                pts.push(Point2::new(T::cast(k - i + 1) * s, fi * s));
                pts.push(Point2::new(T::cast(k - i) * s, fi * s));
            }
            // the last stair ends on the y axis, which closes to the origin
            ClosedCurve::new(pts)
        }
        ShapeSpec::DeRham { depth, ratio } => {
            if *depth > MAX_DE_RHAM_DEPTH {
                return Err(Error::InvalidShape(format!(
                    "de_rham depth must be <= {MAX_DE_RHAM_DEPTH}, got {depth}"
                )));
            }
            if !(*ratio > T::zero() && *ratio < T::half()) {
                return Err(Error::InvalidShape("de_rham ratio must lie in (0, 1/2)".into()));
            }
            ClosedCurve::new(de_rham_path(*depth, *ratio))
        }
    }
}

/// Open corner-cutting path; see [`generate_shape`].
pub fn de_rham_path<T: Scalar>(depth: u32, a: T) -> Vec<Point2<T>> {
    let o = T::one();
    let mut path = vec![
        Point2::new(-o, -o),
        Point2::new(-o, o),
        Point2::new(o, o),
        Point2::new(o, -o),
    ];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(2 * path.len());
        next.push(path[0]);
        for w in path.windows(2) {
            next.push(w[0].lerp(w[1], a));
            next.push(w[0].lerp(w[1], T::one() - a));
        }
        next.push(*path.last().unwrap());
        path = next;
    }
    path
}

/// Random convex polygon with `n` vertices on an axis-aligned ellipse with
/// semi-axes `rx`, `ry`; consecutive vertex angles differ by at least a
/// fifth of the mean spacing.
pub fn random_convex_polygon<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    rx: T,
    ry: T,
    rng: &mut R,
) -> ClosedCurve<T> {
    assert!(n >= 3);
    let min_gap = 2.0 * std::f64::consts::PI / n as f64 / 5.0;
    loop {
        let mut th: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 * std::f64::consts::PI).collect();
        th.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ok = (0..n).all(|i| {
            let d = if i + 1 < n { th[i + 1] - th[i] } else { th[0] + 2.0 * std::f64::consts::PI - th[i] };
            d >= min_gap
        });
        if !ok {
            continue;
        }
        let pts = th
            .iter()
            .map(|&t| Point2::new(rx * T::lit(t.cos()), ry * T::lit(t.sin())))
            .collect();
        if let Ok(c) = ClosedCurve::new(pts) {
            return c;
        }
    }
}

/// Minkowski perimeter `p_B(c)`: the sum of the gauge lengths of the edges.
pub fn perimeter<T: Field>(b: &SymmetricOval<T>, c: &ClosedCurve<T>) -> T {
    (0..c.len()).fold(T::zero(), |acc, i| {
        let (p, q) = c.edge(i);
        acc + b.norm(q - p)
    })
}

/// Gauge length of an open polyline.
pub fn polyline_length<T: Field>(b: &SymmetricOval<T>, pts: &[Point2<T>]) -> T {
    pts.windows(2).fold(T::zero(), |acc, w| acc + b.norm(w[1] - w[0]))
}

/// Outcome of [`reach_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reach<T> {
    /// No violation found anywhere in the tested band.
    Unbounded,
    /// Largest tested radius below which every sample had a unique nearest
    /// point (0 when the smallest tested radius already fails).
    Radius(T),
}

impl<T: Scalar> Reach<T> {
    /// The radius, with `Unbounded` mapped to infinity.
    pub fn value(&self) -> T {
        match self {
            Reach::Unbounded => T::infinity(),
            Reach::Radius(r) => *r,
        }
    }
}

/// Sampling controls of [`reach_estimate_with`].
#[derive(Debug, Clone, Copy)]
pub struct ReachOptions {
    /// Samples along the curve per tested radius.
    pub samples: usize,
    /// Minimizers farther apart than this many sample spacings are distinct.
    pub cluster_spacings: f64,
}

impl Default for ReachOptions {
    fn default() -> Self {
        Self { samples: 2048, cluster_spacings: 3.0 }
    }
}

/// Sampled estimate of the outer reach of `f` in the gauge of `b`, tested up
/// to `band`. See [`reach_estimate_with`].
pub fn reach_estimate<T: Scalar>(f: &ClosedCurve<T>, b: &SymmetricOval<T>, band: T) -> Reach<T> {
    reach_estimate_with(f, b, band, ReachOptions::default())
}

/// Radii `band, band/2, band/4, ...` down to the resolution floor of two
/// sample spacings are tested from the smallest up. At each radius `r`,
/// points at Euclidean distance `r` outside every sample of the curve (and
/// along each vertex fan) are checked: all near-minimizers of `d_B(x, F)`
/// are collected, and the point fails when they span more than
/// `cluster_spacings` sample spacings of arc length. The estimate is the
/// last radius before the first failure.
pub fn reach_estimate_with<T: Scalar>(
    f: &ClosedCurve<T>,
    b: &SymmetricOval<T>,
    band: T,
    opts: ReachOptions,
) -> Reach<T> {
    let cum = f.arc_lengths();
    let total = cum[f.len()];
    let h = total / T::cast(opts.samples);
    let cluster = h * T::lit(opts.cluster_spacings);
    let floor = h * T::two();
    let mut radii = Vec::new();
    let mut r = band;
    while r >= floor {
        radii.push(r);
        r = r * T::half();
    }
    if radii.is_empty() {
        radii.push(band);
    }
    radii.reverse();
    let probes = probe_directions(f, &cum, opts.samples);
    let mut last_ok: Option<T> = None;
    for &r in &radii {
        let ok = probes.iter().all(|(p, u)| {
            let x = *p + *u * r;
            if f.contains(x) {
                return true;
            }
            minimizer_spread(f, b, &cum, x) <= cluster
        });
        if !ok {
            return Reach::Radius(last_ok.unwrap_or(T::zero()));
        }
        last_ok = Some(r);
    }
    Reach::Unbounded
}

/// Base points with unit outward directions: uniform samples with the edge
/// normal, plus each vertex with both adjacent normals and their bisector.
fn probe_directions<T: Scalar>(
    f: &ClosedCurve<T>,
    cum: &[T],
    samples: usize,
) -> Vec<(Point2<T>, Point2<T>)> {
    let n = f.len();
    let total = cum[n];
    let normal = |i: usize| {
        let (a, b) = f.edge(i);
        (b - a).perp_cw().normalized().unwrap()
    };
    let mut out = Vec::with_capacity(samples + 3 * n);
    let mut e = 0;
    for k in 0..samples {
        let s = total * T::cast(k) / T::cast(samples);
        while e + 1 < n && cum[e + 1] <= s {
            e += 1;
        }
        let (a, b) = f.edge(e);
        let t = (s - cum[e]) / (cum[e + 1] - cum[e]);
        out.push((a.lerp(b, t), normal(e)));
    }
    for i in 0..n {
        let n0 = normal((i + n - 1) % n);
        let n1 = normal(i);
        let p = f.points()[i];
        out.push((p, n0));
        out.push((p, n1));
        if let Some(bis) = (n0 + n1).normalized() {
            out.push((p, bis));
        }
    }
    out
}

/// Smallest cyclic arc-length window containing every near-minimizer of
/// `d_B(x, f)`.
fn minimizer_spread<T: Scalar>(f: &ClosedCurve<T>, b: &SymmetricOval<T>, cum: &[T], x: Point2<T>) -> T {
    let n = f.len();
    let total = cum[n];
    let (_, r_max) = b.radii();
    let mut lower: Vec<(T, usize)> = (0..n)
        .map(|i| {
            let (a, c) = f.edge(i);
            (euclid_segment_distance(x, a, c) / r_max, i)
        })
        .collect();
    lower.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let rel = T::tol(1e-9);
    let mut best = T::infinity();
    let mut hits: Vec<(T, T, T)> = Vec::new();
    for &(lb, i) in &lower {
        if lb > best * (T::one() + rel) {
            break;
        }
        let (a, c) = f.edge(i);
        let sd = b.segment_distance(x, a, c);
        if sd.distance < best {
            best = sd.distance;
        }
        let len = cum[i + 1] - cum[i];
        hits.push((sd.distance, cum[i] + sd.t_lo * len, cum[i] + sd.t_hi * len));
    }
    let level = best * (T::one() + rel);
    let mut params: Vec<T> = Vec::new();
    for (d, lo, hi) in hits {
        if d <= level {
            params.push(lo);
            params.push(hi);
        }
    }
    params.sort_by(|p, q| p.partial_cmp(q).unwrap());
    // smallest covering arc = total minus the largest cyclic gap
    let m = params.len();
    let mut max_gap = params[0] + total - params[m - 1];
    for w in params.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    total - max_gap
}

/// Largest distance from the vertices of `poly` to the circle of radius
/// `radius` about the origin (a Hausdorff bound for inscribed polygons when
/// combined with the edge sagitta).
pub fn circle_deviation<T: Scalar>(poly: &ClosedCurve<T>, radius: T) -> T {
    let n = poly.len();
    let mut worst = T::zero();
    for i in 0..n {
        let (a, b) = poly.edge(i);
        let mid = a.lerp(b, T::half());
        worst = worst
            .max((a.norm() - radius).abs())
            .max((mid.norm() - radius).abs());
    }
    worst
}
