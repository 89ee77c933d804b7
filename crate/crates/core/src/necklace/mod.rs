//! Beads, necklaces and generalized Hadwiger numbers.
//!
//! Bead centers live on the offset chain `W_λ` (see [`locus`]). A necklace
//! is built greedily: from a start, each next bead is the first admissible
//! center along the chain at gauge distance `2λ` from the previous one,
//! until the chain wraps around to the first bead. `N_λ` is the best count
//! over a grid of starts, and is certified when `N_λ + 1` beads are proven
//! impossible.

mod locus;

use std::collections::HashMap;

use serde::Serialize;

use crate::curves::{perimeter, ClosedCurve};
use crate::error::{Error, Result};
use crate::gauge::SymmetricOval;
use crate::point::Point2;
use crate::scalar::Scalar;

pub use locus::PENETRATION_TOL;
pub(crate) use locus::Locus;

pub use crate::oracle::oracle_count;

/// Relative tolerance for touching beads.
pub const TOUCH_TOL: f64 = 1e-9;

/// Placement level: consecutive centers are put at `2λ (1 - PLACE_SLACK)`.
pub const PLACE_SLACK: f64 = 1e-10;

/// A translate of `λB` touching `F` from outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bead<T> {
    pub center: Point2<T>,
    pub lambda: T,
    /// Arc length on `F` of the contact point.
    pub contact_param: T,
    pub contact_point: Point2<T>,
    /// Arc length of the center along the offset chain.
    pub locus_param: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NecklaceStatus {
    /// Every consecutive pair touches.
    Complete,
    /// All consecutive pairs but one touch.
    AlmostComplete,
    Partial,
}

impl NecklaceStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            NecklaceStatus::Complete => "complete",
            NecklaceStatus::AlmostComplete => "almost_complete",
            NecklaceStatus::Partial => "partial",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Necklace<T> {
    pub beads: Vec<Bead<T>>,
    pub lambda: T,
    pub status: NecklaceStatus,
    /// `d_B` between the beads of the widest consecutive pair (0 when
    /// complete): center distance minus `2λ`.
    pub gap: T,
}

impl<T: Scalar> Necklace<T> {
    pub fn len(&self) -> usize {
        self.beads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }

    /// Independent re-validation: pairwise center distances at least
    /// `2λ(1 - tol)` and every bead at distance at least `λ(1 - tol)` from
    /// `F`. Quadratic; meant for tests and final checks.
    pub fn validate(&self, f: &ClosedCurve<T>, b: &SymmetricOval<T>) -> std::result::Result<(), String> {
        let lam = self.lambda;
        let tol = T::lit(TOUCH_TOL);
        for (i, x) in self.beads.iter().enumerate() {
            let d = b.polyline_distance(x.center, f.points(), true);
            if d < lam * (T::one() - tol) {
                return Err(format!("bead {i} penetrates F: distance {d}"));
            }
            for (j, y) in self.beads.iter().enumerate().skip(i + 1) {
                let d = b.distance(x.center, y.center);
                if d < T::two() * lam * (T::one() - tol) {
                    return Err(format!("beads {i} and {j} overlap: distance {d}"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Overlap {
    Disjoint,
    Touching,
    Overlapping,
}

/// Classifies two beads by `d_B` of their centers against `2λ`, with a
/// relative tolerance [`TOUCH_TOL`].
pub fn beads_overlap<T: Scalar>(b1: &Bead<T>, b2: &Bead<T>, b: &SymmetricOval<T>) -> Result<Overlap> {
    if b1.lambda != b2.lambda {
        return Err(Error::MismatchedLambda(b1.lambda.as_f64(), b2.lambda.as_f64()));
    }
    let lam = b1.lambda;
    let d = b.distance(b1.center, b2.center);
    let two = T::two() * lam;
    let tol = lam * T::lit(TOUCH_TOL);
    Ok(if (d - two).abs() <= tol {
        Overlap::Touching
    } else if d > two {
        Overlap::Disjoint
    } else {
        Overlap::Overlapping
    })
}

/// Bead touching `F` at contact parameter `t` (arc length, taken modulo the
/// length of `F`), using the edge's support line on an edge interior and
/// the incoming edge's support line at a vertex.
pub fn place_bead<T: Scalar>(f: &ClosedCurve<T>, b: &SymmetricOval<T>, lambda: T, t: T) -> Result<Bead<T>> {
    let locus = Locus::new(f, b, lambda)?;
    place_on(&locus, t)
}

fn place_on<T: Scalar>(locus: &Locus<'_, T>, t: T) -> Result<Bead<T>> {
    let f = locus.f;
    let total = locus.f_cum[f.len()];
    let mut s = t % total;
    if s < T::zero() {
        s = s + total;
    }
    let n = f.len();
    let k = locus.f_cum.partition_point(|&c| c <= s).saturating_sub(1).min(n - 1);
    // a vertex belongs to the end of its incoming edge
    let (e, x) = if s == locus.f_cum[k] {
        let e = (k + n - 1) % n;
        (e, f.points()[k])
    } else {
        let (a, c) = f.edge(k);
        let u = (s - locus.f_cum[k]) / (locus.f_cum[k + 1] - locus.f_cum[k]);
        (k, a.lerp(c, u))
    };
    let virtual_only = Error::VirtualOnly { param: t.as_f64() };
    let lp = locus.edge_param(e, x).ok_or(virtual_only.clone())?;
    let center = locus.point(lp);
    let d = locus.b.polyline_distance(center, f.points(), true);
    if d < locus.lambda * (T::one() - T::lit(PENETRATION_TOL)) || !locus.is_valid(lp) {
        return Err(virtual_only);
    }
    Ok(Bead { center, lambda: locus.lambda, contact_param: s, contact_point: x, locus_param: lp })
}

/// Contact parameter of the next bead of a greedy necklace after the bead at
/// contact parameter `t`.
pub fn next_contact<T: Scalar>(f: &ClosedCurve<T>, b: &SymmetricOval<T>, lambda: T, t: T) -> Result<T> {
    let locus = Locus::new(f, b, lambda)?;
    if locus.self_intersecting {
        return Err(Error::GalleryDetected { param: t.as_f64() });
    }
    let bead = place_on(&locus, t)?;
    let level = place_level(lambda);
    let limit = bead.locus_param + locus.len();
    let mut cur = bead.locus_param;
    loop {
        let Some(next) = locus.first_far(cur, bead.center, level, limit) else {
            return Err(Error::Stalled { param: t.as_f64() });
        };
        match locus.next_valid(next, limit) {
            None => return Err(Error::Stalled { param: t.as_f64() }),
            Some(v) if v == next => return Ok(locus.contact(v).0),
            Some(v) => cur = v,
        }
    }
}

#[inline]
fn place_level<T: Scalar>(lambda: T) -> T {
    T::two() * lambda * (T::one() - T::lit(PLACE_SLACK))
}

/// Greedy necklace from contact parameter `t0`.
pub fn build_necklace<T: Scalar>(f: &ClosedCurve<T>, b: &SymmetricOval<T>, lambda: T, t0: T) -> Result<Necklace<T>> {
    let locus = Locus::new(f, b, lambda)?;
    if locus.self_intersecting {
        return Err(Error::GalleryDetected { param: t0.as_f64() });
    }
    let bead = place_on(&locus, t0)?;
    let params = greedy(&locus, bead.locus_param, Mode::General)
        .ok_or(Error::Stalled { param: t0.as_f64() })?;
    Ok(assemble(&locus, &params))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Conflicts checked against the previous and the first bead only.
    Fast,
    /// Conflicts checked against every bead nearby.
    General,
}

/// Greedy placement from locus parameter `t0`; `None` when `t0` is not
/// admissible.
fn greedy<T: Scalar>(locus: &Locus<'_, T>, t0: T, mode: Mode) -> Option<Vec<T>> {
    if !locus.is_valid(t0) {
        return None;
    }
    let lambda = locus.lambda;
    let level = place_level(lambda);
    let limit = t0 + locus.len();
    let first = locus.point(t0);
    let mut params = vec![t0];
    let mut centers = vec![first];
    let (_, r_max) = locus.b.radii();
    let cell = T::two() * lambda * r_max;
    let key = |p: Point2<T>| ((p.x / cell).floor().as_f64() as i64, (p.y / cell).floor().as_f64() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    if mode == Mode::General {
        grid.entry(key(first)).or_default().push(0);
    }
    'outer: loop {
        let last = *params.last().unwrap();
        let c_last = *centers.last().unwrap();
        let Some(mut t) = locus.first_far(last, c_last, level, limit) else {
            break;
        };
        loop {
            let Some(v) = locus.next_valid(t, limit) else {
                break 'outer;
            };
            t = v;
            let c = locus.point(t);
            let conflict = match mode {
                Mode::Fast => {
                    if locus.b.distance(c, first) < level {
                        Some(first)
                    } else {
                        None
                    }
                }
                Mode::General => {
                    let (kx, ky) = key(c);
                    let mut hit = None;
                    'scan: for dx in -1..=1 {
                        for dy in -1..=1 {
                            if let Some(list) = grid.get(&(kx + dx, ky + dy)) {
                                for &j in list {
                                    if locus.b.distance(c, centers[j]) < level {
                                        hit = Some(centers[j]);
                                        break 'scan;
                                    }
                                }
                            }
                        }
                    }
                    hit
                }
            };
            match conflict {
                None => break,
                Some(other) => match locus.first_far(t, other, level, limit) {
                    Some(next) => t = next,
                    None => break 'outer,
                },
            }
        }
        let c = locus.point(t);
        if mode == Mode::General {
            grid.entry(key(c)).or_default().push(centers.len());
        }
        params.push(t);
        centers.push(c);
    }
    Some(params)
}

fn assemble<T: Scalar>(locus: &Locus<'_, T>, params: &[T]) -> Necklace<T> {
    let lambda = locus.lambda;
    let beads: Vec<Bead<T>> = params
        .iter()
        .map(|&t| {
            let (s, x) = locus.contact(t);
            Bead { center: locus.point(t), lambda, contact_param: s, contact_point: x, locus_param: t }
        })
        .collect();
    let n = beads.len();
    let two = T::two() * lambda;
    // the closing pair collects the placement slack of every step
    let tol = lambda * (T::lit(TOUCH_TOL) + T::cast(2 * n) * T::lit(PLACE_SLACK));
    let mut loose = 0;
    let mut gap = T::zero();
    if n >= 2 {
        for i in 0..n {
            let d = locus.b.distance(beads[i].center, beads[(i + 1) % n].center);
            if (d - two).abs() > tol {
                loose += 1;
                gap = gap.max(d - two);
            }
        }
    }
    let status = match (n, loose) {
        (0 | 1, _) => NecklaceStatus::Partial,
        (_, 0) => NecklaceStatus::Complete,
        (_, 1) => NecklaceStatus::AlmostComplete,
        _ => NecklaceStatus::Partial,
    };
    Necklace { beads, lambda, status, gap }
}

/// Controls of [`hadwiger_count_with`].
#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    /// Uniformly spaced starts along the offset chain.
    pub starts: usize,
    /// Also start at every vertex of the offset chain.
    pub vertex_starts: bool,
    /// Vertex starts are used only when `F` has at most this many vertices.
    pub vertex_start_limit: usize,
    /// Try to prove that one more bead is impossible.
    pub certify: bool,
    /// Maximal bisection depth of the certification cells.
    pub refine_depth: u32,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self { starts: 64, vertex_starts: true, vertex_start_limit: 64, certify: true, refine_depth: 10 }
    }
}

impl CountOptions {
    /// Options for sweeps: no certification.
    pub fn fast() -> Self {
        Self { certify: false, ..Self::default() }
    }
}

/// How a count was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// `2λ(N + 1) > p_B(F) + λ p_B(∂B)` (convex `F` only).
    PerimeterBound,
    /// Every start interval was shown to wrap before `N + 1` beads.
    IntervalSweep,
    None,
}

#[derive(Debug, Clone)]
pub struct CountReport<T> {
    pub count: usize,
    /// Necklace realizing the count.
    pub necklace: Necklace<T>,
    pub certificate: Certificate,
    /// Every start tried gave the same count.
    pub constant_over_starts: bool,
    /// Admissible starts run. On convex `F` the search stops once a count
    /// one above the smallest seen, or the perimeter cap, is reached.
    pub starts_tried: usize,
    pub min_count: usize,
}

impl<T> CountReport<T> {
    pub fn certified(&self) -> bool {
        self.certificate != Certificate::None
    }
}

/// `N_λ(F, B)` with default options.
pub fn hadwiger_count<T: Scalar>(f: &ClosedCurve<T>, b: &SymmetricOval<T>, lambda: T) -> Result<usize> {
    hadwiger_count_with(f, b, lambda, &CountOptions::default()).map(|r| r.count)
}

/// Largest greedy necklace over the start grid, with certification.
pub fn hadwiger_count_with<T: Scalar>(
    f: &ClosedCurve<T>,
    b: &SymmetricOval<T>,
    lambda: T,
    opts: &CountOptions,
) -> Result<CountReport<T>> {
    let locus = Locus::new(f, b, lambda)?;
    if locus.self_intersecting {
        return Err(Error::GalleryDetected { param: 0.0 });
    }
    let starts = start_params(&locus, opts);
    // On a convex chain the advance map is monotone, so greedy counts from
    // different starts differ by at most one; the perimeter bound caps them.
    let upper = if locus.convex { Some(perimeter_cap(&locus)) } else { None };
    let run = |mode: Mode| -> Option<(usize, usize, Vec<T>, bool, usize)> {
        let mut best: Option<Vec<T>> = None;
        let mut min_count = usize::MAX;
        let mut max_count = 0usize;
        let mut tried = 0;
        for &s in &starts {
            let Some(params) = greedy(&locus, s, mode) else {
                continue;
            };
            tried += 1;
            min_count = min_count.min(params.len());
            if params.len() > max_count {
                max_count = params.len();
                best = Some(params);
            }
            if mode == Mode::Fast {
                let cap = upper.map_or(min_count + 1, |u| u.min(min_count + 1));
                if max_count >= cap {
                    break;
                }
            }
        }
        best.map(|p| (max_count, min_count, p, min_count == max_count, tried))
    };
    let stalled = Error::Stalled { param: 0.0 };
    let mode = if locus.convex { Mode::Fast } else { Mode::General };
    let (mut count, mut min_count, params, mut constant, mut tried) = run(mode).ok_or(stalled.clone())?;
    let mut necklace = assemble(&locus, &params);
    if mode == Mode::Fast && !pairwise_ok(&locus, &necklace) {
        let params;
        (count, min_count, params, constant, tried) = run(Mode::General).ok_or(stalled)?;
        necklace = assemble(&locus, &params);
    }
    let certificate = certify(&locus, count, opts);
    Ok(CountReport { count, necklace, certificate, constant_over_starts: constant, starts_tried: tried, min_count })
}

fn start_params<T: Scalar>(locus: &Locus<'_, T>, opts: &CountOptions) -> Vec<T> {
    let p = locus.len();
    let mut starts: Vec<T> = (0..opts.starts.max(1))
        .map(|k| p * T::cast(k) / T::cast(opts.starts.max(1)))
        .collect();
    if opts.vertex_starts && locus.f.len() <= opts.vertex_start_limit {
        starts.extend(locus.cum[..locus.segments()].iter().copied());
    }
    starts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    starts.dedup();
    starts
}

/// Pairwise check of a necklace built in fast mode, with a spatial hash.
fn pairwise_ok<T: Scalar>(locus: &Locus<'_, T>, n: &Necklace<T>) -> bool {
    let level = place_level(locus.lambda) * (T::one() - T::lit(1e-12));
    let (_, r_max) = locus.b.radii();
    let cell = T::two() * locus.lambda * r_max;
    let key = |p: Point2<T>| ((p.x / cell).floor().as_f64() as i64, (p.y / cell).floor().as_f64() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, bead) in n.beads.iter().enumerate() {
        let (kx, ky) = key(bead.center);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = grid.get(&(kx + dx, ky + dy)) {
                    for &j in list {
                        if locus.b.distance(bead.center, n.beads[j].center) < level {
                            return false;
                        }
                    }
                }
            }
        }
        grid.entry((kx, ky)).or_default().push(i);
    }
    true
}

/// Largest count allowed by `2λN <= p_B(F) + λ p_B(∂B)` (convex `F`).
fn perimeter_cap<T: Scalar>(locus: &Locus<'_, T>) -> usize {
    let lambda = locus.lambda;
    let upper = perimeter(locus.b, locus.f) + lambda * locus.b.self_perimeter();
    (upper * (T::one() + T::lit(1e-12)) / (T::two() * lambda)).floor().as_f64() as usize
}

/// Proves that `count + 1` beads are impossible, if it can.
fn certify<T: Scalar>(locus: &Locus<'_, T>, count: usize, opts: &CountOptions) -> Certificate {
    if locus.convex && count + 1 > perimeter_cap(locus) {
        return Certificate::PerimeterBound;
    }
    if !opts.certify {
        return Certificate::None;
    }
    if interval_sweep(locus, count + 1, opts) {
        Certificate::IntervalSweep
    } else {
        Certificate::None
    }
}

/// The advance map `T(s)`: first admissible parameter after `s` at gauge
/// distance `2λ(1 - slack)` from `c(s)`.
fn advance<T: Scalar>(locus: &Locus<'_, T>, s: T, limit: T) -> Option<T> {
    let level = place_level(locus.lambda);
    let c = locus.point(s);
    let mut t = s;
    loop {
        let far = locus.first_far(t, c, level, limit)?;
        let v = locus.next_valid(far, limit)?;
        if v == far {
            return Some(v);
        }
        t = v;
    }
}

/// Any packing of `k` beads, listed by chain parameter `s_1 < ... < s_k`,
/// has `s_{i+1} >= T(s_i)`; with `T` nondecreasing this gives
/// `T^k(s_1) <= s_1 + P`. So `k` beads are impossible once
/// `T^k(a) > b + P` on every cell `[a, b]` of a cover of one period, which
/// is checked on a grid refined where it fails. Monotonicity of `T` at the
/// cell ends is checked along the way.
fn interval_sweep<T: Scalar>(locus: &Locus<'_, T>, k: usize, opts: &CountOptions) -> bool {
    let p = locus.len();
    let cells = opts.starts.max(8);
    let iterate = |s: T| -> Option<T> {
        let limit = s + p * T::two();
        let mut t = s;
        for _ in 0..k {
            t = advance(locus, t, limit)?;
        }
        Some(t)
    };
    let mut stack: Vec<(T, T, u32)> = (0..cells)
        .rev()
        .map(|i| (p * T::cast(i) / T::cast(cells), p * T::cast(i + 1) / T::cast(cells), 0))
        .collect();
    let mut checks = 0usize;
    while let Some((a, c, depth)) = stack.pop() {
        checks += 1;
        if checks > 1 << 16 {
            return false;
        }
        let ok = match iterate(a) {
            None => true,
            Some(v) => v > c + p,
        };
        let monotone = match (advance(locus, a, a + p * T::two()), advance(locus, c, c + p * T::two())) {
            (Some(x), Some(y)) => x <= y,
            _ => true,
        };
        if ok && monotone {
            continue;
        }
        if depth >= opts.refine_depth || !monotone {
            return false;
        }
        let mid = (a + c) * T::half();
        stack.push((mid, c, depth + 1));
        stack.push((a, mid, depth + 1));
    }
    true
}
