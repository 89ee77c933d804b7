//! The chain of admissible bead centers.
//!
//! A λ-bead touching `F` from outside has its center at gauge distance `λ`
//! from `F`, so every center lies on the offset chain `W_λ`. The chain is
//! parametrized by Euclidean arc length; parameters are unbounded and taken
//! modulo the chain length. For nonconvex `F` some stretches of the chain
//! come closer than `λ` to other parts of `F` and are marked invalid.

use crate::curves::ClosedCurve;
use crate::error::{Error, Result};
use crate::gauge::{euclid_segment_distance, SymmetricOval};
use crate::offset::{coincide, offset_polygon, Element};
use crate::point::{segments_intersect, Point2};
use crate::scalar::Scalar;

/// Relative penetration tolerance of a bead into `F`.
pub const PENETRATION_TOL: f64 = 1e-9;

/// Where a chain segment comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Src {
    Edge(usize),
    Arc(usize),
}

pub(crate) struct Locus<'a, T> {
    pub f: &'a ClosedCurve<T>,
    pub b: &'a SymmetricOval<T>,
    pub lambda: T,
    pub f_cum: Vec<T>,
    pub pts: Vec<Point2<T>>,
    pub cum: Vec<T>,
    pub src: Vec<Src>,
    shifts: Vec<Point2<T>>,
    /// Per segment, sorted disjoint local parameter intervals that are invalid.
    invalid: Vec<Vec<(T, T)>>,
    pub convex: bool,
    pub self_intersecting: bool,
}

impl<'a, T: Scalar> Locus<'a, T> {
    pub fn new(f: &'a ClosedCurve<T>, b: &'a SymmetricOval<T>, lambda: T) -> Result<Self> {
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(Error::InvalidInput("lambda must be positive".into()));
        }
        let w = offset_polygon(f, b, lambda);
        let mut pts = Vec::new();
        let mut src = Vec::new();
        let mut push = |p: Point2<T>, q: Point2<T>, s: Src| {
            if !coincide(p, q) {
                pts.push(p);
                src.push(s);
            }
        };
        for el in &w.elements {
            match el {
                Element::Edge { edge, from, to, .. } => push(*from, *to, Src::Edge(*edge)),
                Element::Arc { vertex, points } => {
                    for s in points.windows(2) {
                        push(s[0], s[1], Src::Arc(*vertex));
                    }
                }
            }
        }
        let n = pts.len();
        if n < 2 {
            return Err(Error::Degenerate("offset chain has fewer than two segments".into()));
        }
        let mut cum = Vec::with_capacity(n + 1);
        let mut acc = T::zero();
        cum.push(acc);
        for k in 0..n {
            acc = acc + (pts[(k + 1) % n] - pts[k]).norm();
            cum.push(acc);
        }
        let convex = f.is_convex();
        let mut locus = Self {
            f,
            b,
            lambda,
            f_cum: f.arc_lengths(),
            pts,
            cum,
            src,
            shifts: w.shifts.clone(),
            invalid: vec![Vec::new(); n],
            convex,
            self_intersecting: w.self_intersecting,
        };
        if !convex {
            locus.invalid = (0..n).map(|k| locus.invalid_intervals(k)).collect();
        }
        Ok(locus)
    }

    #[inline]
    pub fn len(&self) -> T {
        self.cum[self.pts.len()]
    }

    #[inline]
    pub fn segments(&self) -> usize {
        self.pts.len()
    }

    #[inline]
    pub fn seg(&self, k: usize) -> (Point2<T>, Point2<T>) {
        let n = self.pts.len();
        (self.pts[k], self.pts[(k + 1) % n])
    }

    /// Splits an unbounded parameter into `(turns, segment, local u)`.
    pub fn locate(&self, t: T) -> (T, usize, T) {
        let p = self.len();
        let turns = (t / p).floor();
        let mut r = t - turns * p;
        if r >= p {
            r = r - p;
        }
        let n = self.pts.len();
        let k = self.cum.partition_point(|&c| c <= r).saturating_sub(1).min(n - 1);
        let len = self.cum[k + 1] - self.cum[k];
        let u = ((r - self.cum[k]) / len).max(T::zero()).min(T::one());
        (turns, k, u)
    }

    pub fn point(&self, t: T) -> Point2<T> {
        let (_, k, u) = self.locate(t);
        let (a, c) = self.seg(k);
        a.lerp(c, u)
    }

    #[inline]
    fn param(&self, turns: T, k: usize, u: T) -> T {
        turns * self.len() + self.cum[k] + u * (self.cum[k + 1] - self.cum[k])
    }

    /// Contact parameter (arc length on `F`, in `[0, |F|)`) and contact point
    /// of the bead centered at `t`. Edge pieces touch at `center - λ z(n_e)`,
    /// which for a flat contact is the midpoint of the contact segment; arc
    /// pieces touch at their vertex.
    pub fn contact(&self, t: T) -> (T, Point2<T>) {
        let (_, k, _) = self.locate(t);
        let c = self.point(t);
        match self.src[k] {
            Src::Edge(e) => {
                let (a, _) = self.f.edge(e);
                let x = c - self.shifts[e];
                let lo = self.f_cum[e];
                let hi = self.f_cum[e + 1];
                let s = (lo + (x - a).norm()).max(lo).min(hi);
                let total = self.f_cum[self.f.len()];
                let s = if s >= total { s - total } else { s };
                (s, x)
            }
            Src::Arc(v) => (self.f_cum[v], self.f.points()[v]),
        }
    }

    /// Chain parameter of the center `x + shift_e` on the translate of edge
    /// `e`, or `None` when that point was clipped away.
    pub fn edge_param(&self, e: usize, x: Point2<T>) -> Option<T> {
        let c = x + self.shifts[e];
        let tol = T::lit(1e-12);
        for k in 0..self.pts.len() {
            if self.src[k] != Src::Edge(e) {
                continue;
            }
            let (p, q) = self.seg(k);
            let d = q - p;
            let u = (c - p).dot(d) / d.norm_sq();
            if u >= -tol && u <= T::one() + tol {
                return Some(self.param(T::zero(), k, u.max(T::zero()).min(T::one())));
            }
        }
        None
    }

    pub fn is_valid(&self, t: T) -> bool {
        if self.convex {
            return true;
        }
        let (_, k, u) = self.locate(t);
        !self.invalid[k].iter().any(|&(a, c)| u > a && u < c)
    }

    /// First valid parameter `>= t`, or `None` past `limit`.
    pub fn next_valid(&self, t: T, limit: T) -> Option<T> {
        let mut cur = t;
        if !self.convex {
            let n = self.pts.len();
            for _ in 0..=2 * n + 2 {
                if cur > limit {
                    return None;
                }
                let (turns, k, u) = self.locate(cur);
                match self.invalid[k].iter().find(|&&(a, c)| u > a && u < c) {
                    None => break,
                    Some(&(_, c)) if c < T::one() => {
                        // merged intervals are disjoint, so the end is valid
                        cur = self.param(turns, k, c);
                        break;
                    }
                    Some(_) => {
                        let (turns, k) = if k + 1 == n { (turns + T::one(), 0) } else { (turns, k + 1) };
                        cur = self.param(turns, k, T::zero());
                    }
                }
            }
        }
        if cur <= limit {
            Some(cur)
        } else {
            None
        }
    }

    /// First parameter `t' >= t` with `d_B(c(t'), center) >= level`, or
    /// `None` past `limit`.
    ///
    /// Along one segment the distance is convex, so the first crossing of
    /// the level is unique; it is found by Newton steps on the active facet
    /// from the far end, which decrease monotonically to the crossing and
    /// end after finitely many steps because the function is piecewise
    /// linear.
    pub fn first_far(&self, t: T, center: Point2<T>, level: T, limit: T) -> Option<T> {
        let (mut turns, mut k, u0) = self.locate(t);
        let n = self.pts.len();
        let mut start_u = u0;
        let mut first = true;
        loop {
            let seg_start = if first { t } else { self.param(turns, k, T::zero()) };
            if seg_start > limit {
                return None;
            }
            if let Some(u) = self.crossing(k, start_u, center, level) {
                let mut p = if first && u == start_u { t } else { self.param(turns, k, u) };
                // the parameter must reproduce a point at the level
                let mut step = self.len() * T::epsilon();
                while self.b.distance(self.point(p), center) < level {
                    p = p + step;
                    step = step * T::two();
                }
                return if p <= limit { Some(p) } else { None };
            }
            first = false;
            start_u = T::zero();
            k += 1;
            if k == n {
                k = 0;
                turns = turns + T::one();
            }
        }
    }

    /// First local `u >= u0` on segment `k` with `||c(u) - center|| >= level`.
    fn crossing(&self, k: usize, u0: T, center: Point2<T>, level: T) -> Option<T> {
        let (p, q) = self.seg(k);
        let d = q - p;
        let w0 = p - center;
        let f = |u: T| self.b.norm(w0 + d * u);
        if f(T::one()) < level {
            return None;
        }
        if f(u0) >= level {
            return Some(u0);
        }
        let (mut lo, mut hi) = (u0, T::one());
        let mut newton_ok = true;
        for _ in 0..200 {
            let v = w0 + d * hi;
            let i = self.b.facet_of(v);
            let (nrm, h) = self.b.facet(i);
            let slope = nrm.dot(d) / h;
            let val = nrm.dot(v) / h;
            if slope <= T::zero() {
                newton_ok = false;
                break;
            }
            let cand = hi - (val - level) / slope;
            if !(cand < hi) {
                break;
            }
            if cand <= lo {
                newton_ok = false;
                break;
            }
            if f(cand) >= level {
                hi = cand;
                continue;
            }
            // rounding put us just below the level
            let bump = cand + T::epsilon() * T::lit(8.0);
            if bump < hi && f(bump) >= level {
                hi = bump;
                break;
            }
            lo = cand;
            newton_ok = false;
            break;
        }
        if !newton_ok {
            for _ in 0..80 {
                let mid = (lo + hi) * T::half();
                if f(mid) >= level {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= T::epsilon() * T::two() {
                    break;
                }
            }
        }
        Some(hi)
    }

    /// Local intervals of segment `k` whose points are closer than
    /// `λ (1 - tol)` to `F`.
    fn invalid_intervals(&self, k: usize) -> Vec<(T, T)> {
        let (p, q) = self.seg(k);
        let (_, r_max) = self.b.radii();
        let thr = self.lambda * (T::one() - T::lit(PENETRATION_TOL));
        let mut out: Vec<(T, T)> = Vec::new();
        for e in 0..self.f.len() {
            let (a, c) = self.f.edge(e);
            if seg_seg_distance(p, q, a, c) / r_max >= thr {
                continue;
            }
            let g = |u: T| self.b.segment_distance(p.lerp(q, u), a, c).distance;
            // golden-section minimum of the convex function g
            let phi = T::lit(0.618_033_988_749_894_8);
            let (mut x0, mut x1) = (T::zero(), T::one());
            let mut xa = x1 - (x1 - x0) * phi;
            let mut xb = x0 + (x1 - x0) * phi;
            let (mut ga, mut gb) = (g(xa), g(xb));
            for _ in 0..80 {
                if ga < gb {
                    x1 = xb;
                    xb = xa;
                    gb = ga;
                    xa = x1 - (x1 - x0) * phi;
                    ga = g(xa);
                } else {
                    x0 = xa;
                    xa = xb;
                    ga = gb;
                    xb = x0 + (x1 - x0) * phi;
                    gb = g(xb);
                }
            }
            let mut um = (x0 + x1) * T::half();
            let mut gm = g(um);
            for u in [T::zero(), T::one()] {
                let gu = g(u);
                if gu < gm {
                    gm = gu;
                    um = u;
                }
            }
            if gm >= thr {
                continue;
            }
            let edge_of = |inside: T, outside: T| {
                if g(outside) < thr {
                    return outside;
                }
                let (mut i, mut o) = (inside, outside);
                for _ in 0..60 {
                    let mid = (i + o) * T::half();
                    if g(mid) < thr {
                        i = mid;
                    } else {
                        o = mid;
                    }
                }
                o
            };
            let ua = edge_of(um, T::zero());
            let ub = edge_of(um, T::one());
            let ua = if ua <= T::zero() { -T::one() } else { ua };
            let ub = if ub >= T::one() { T::two() } else { ub };
            out.push((ua, ub));
        }
        out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut merged: Vec<(T, T)> = Vec::new();
        for iv in out {
            if let Some(last) = merged.last_mut() {
                if iv.0 <= last.1 {
                    last.1 = last.1.max(iv.1);
                    continue;
                }
            }
            merged.push(iv);
        }
        // intervals are open; clamp to the segment while keeping the
        // "touches an end" information in values outside [0, 1]
        merged
            .into_iter()
            .map(|(a, c)| (if a < T::zero() { -T::one() } else { a }, if c > T::one() { T::two() } else { c }))
            .collect()
    }
}

/// Euclidean distance between segments `[p, q]` and `[a, c]`.
pub(crate) fn seg_seg_distance<T: Scalar>(p: Point2<T>, q: Point2<T>, a: Point2<T>, c: Point2<T>) -> T {
    if segments_intersect(p, q, a, c, T::zero()) {
        return T::zero();
    }
    euclid_segment_distance(p, a, c)
        .min(euclid_segment_distance(q, a, c))
        .min(euclid_segment_distance(a, p, q))
        .min(euclid_segment_distance(c, p, q))
}
