//! Independent reference computations for cross-checking.
//!
//! Nothing here shares code with the gauge, offset or necklace modules
//! beyond the input types: the gauge is evaluated by ray casting, support
//! points by scanning vertices, and the bead chain is rebuilt from
//! untrimmed edge translates and vertex fans. Everything runs in `f64`.

use crate::curves::ClosedCurve;
use crate::gauge::SymmetricOval;
use crate::point::Point2;
use crate::scalar::Scalar;

type P = Point2<f64>;

/// Largest number of start positions tried by [`oracle_count`].
pub const ORACLE_MAX_STARTS: usize = 256;

/// `‖v‖_B` by intersecting the ray through `v` with every edge of `B`.
pub fn ray_gauge(b: &[P], v: P) -> f64 {
    if v.x == 0.0 && v.y == 0.0 {
        return 0.0;
    }
    let n = b.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let p = b[i];
        let q = b[(i + 1) % n];
        let e = q - p;
        // s v = p + u e
        let den = v.cross(e);
        if den.abs() < 1e-300 {
            continue;
        }
        let s = p.cross(e) / den;
        let u = p.cross(v) / den;
        if s > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) {
            best = best.min(s);
        }
    }
    1.0 / best
}

/// Support point of the polygon `b` in direction `n`; the midpoint of the
/// facet when two vertices tie.
pub fn brute_support(b: &[P], n: P) -> P {
    let vals: Vec<f64> = b.iter().map(|v| v.dot(n)).collect();
    let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = n.norm() * b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let ties: Vec<P> = b.iter().zip(&vals).filter(|(_, &x)| m - x <= 1e-9 * scale).map(|(v, _)| *v).collect();
    if ties.len() >= 2 {
        let (mut lo, mut hi) = (ties[0], ties[0]);
        let t = n.perp();
        for &p in &ties {
            if p.dot(t) < lo.dot(t) {
                lo = p;
            }
            if p.dot(t) > hi.dot(t) {
                hi = p;
            }
        }
        lo.lerp(hi, 0.5)
    } else {
        ties[0]
    }
}

/// Gauge distance from `x` to the segment `[a, c]` by ternary search.
pub fn brute_segment_distance(b: &[P], x: P, a: P, c: P) -> f64 {
    let g = |u: f64| ray_gauge(b, x - a.lerp(c, u));
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) <= g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    g(0.5 * (lo + hi)).min(g(0.0)).min(g(1.0))
}

/// The bead chain rebuilt independently, sampled by Euclidean arc length.
struct Chain {
    pts: Vec<P>,
    cum: Vec<f64>,
}

impl Chain {
    fn build(f: &[P], b: &[P], lambda: f64) -> Self {
        let n = f.len();
        let outward = |i: usize| {
            let e = f[(i + 1) % n] - f[i];
            Point2::new(e.y, -e.x)
        };
        // counterclockwise copy of B with outward facet normal angles
        let mut bb = b.to_vec();
        let area: f64 = (0..bb.len()).map(|i| bb[i].cross(bb[(i + 1) % bb.len()])).sum();
        if area < 0.0 {
            bb.reverse();
        }
        let m = bb.len();
        let phi: Vec<f64> = (0..m)
            .map(|i| {
                let e = bb[(i + 1) % m] - bb[i];
                e.y.atan2(e.x) - std::f64::consts::FRAC_PI_2
            })
            .collect();
        let tau = std::f64::consts::TAU;
        let wrap = |x: f64| x.rem_euclid(tau);
        let mut pts = Vec::new();
        for j in 0..n {
            let prev = (j + n - 1) % n;
            let (np, nj) = (outward(prev), outward(j));
            let zp = brute_support(&bb, np);
            let zj = brute_support(&bb, nj);
            pts.push(f[j] + zp * lambda);
            let turn = np.cross(nj);
            if turn > 0.0 {
                // vertex fan: vertices of B whose normal cone starts in
                // [a0, a0 + sweep)
                let a0 = np.y.atan2(np.x);
                let sweep = wrap(nj.y.atan2(nj.x) - a0);
                let mut fan: Vec<(f64, P)> = (0..m)
                    .filter_map(|i| {
                        let d = wrap(phi[i] - a0 + 1e-12);
                        (d < sweep).then(|| (d, bb[(i + 1) % m]))
                    })
                    .collect();
                fan.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
                pts.extend(fan.into_iter().map(|(_, v)| f[j] + v * lambda));
            }
            pts.push(f[j] + zj * lambda);
            pts.push(f[(j + 1) % n] + zj * lambda);
        }
        pts.dedup_by(|a, b| (*a - *b).norm() < 1e-14);
        if pts.len() > 1 && (pts[0] - *pts.last().unwrap()).norm() < 1e-14 {
            pts.pop();
        }
        let mut cum = vec![0.0];
        for k in 0..pts.len() {
            let d = (pts[(k + 1) % pts.len()] - pts[k]).norm();
            cum.push(cum[k] + d);
        }
        Chain { pts, cum }
    }

    fn len(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn at(&self, t: f64) -> P {
        let p = self.len();
        let r = t.rem_euclid(p);
        let k = self.cum.partition_point(|&c| c <= r).saturating_sub(1).min(self.pts.len() - 1);
        let len = self.cum[k + 1] - self.cum[k];
        let u = if len > 0.0 { (r - self.cum[k]) / len } else { 0.0 };
        self.pts[k].lerp(self.pts[(k + 1) % self.pts.len()], u.clamp(0.0, 1.0))
    }
}

fn convex(f: &[P]) -> bool {
    let n = f.len();
    (0..n).all(|i| (f[(i + 1) % n] - f[i]).cross(f[(i + 2) % n] - f[(i + 1) % n]) >= 0.0)
}

/// Maximal number of beads found by greedy stepping along an independently
/// built center chain.
///
/// The chain is sampled at `grid_n` uniform positions; from each of up to
/// [`ORACLE_MAX_STARTS`] evenly spread start samples, and from every chain
/// vertex when there are at most that many, beads are placed one
/// after another at the first admissible sample (not penetrating `F`, at
/// gauge distance at least `2λ` from every placed bead), refined by
/// bisection between that sample and the previous one, until one lap is
/// used up.
pub fn oracle_count<T: Scalar>(f: &ClosedCurve<T>, b: &SymmetricOval<T>, lambda: T, grid_n: usize) -> usize {
    let fp: Vec<P> = f.points().iter().map(|p| p.to_f64()).collect();
    let bp: Vec<P> = b.vertices().iter().map(|p| p.to_f64()).collect();
    let lam = lambda.as_f64();
    let chain = Chain::build(&fp, &bp, lam);
    let total = chain.len();
    let grid_n = grid_n.max(16);
    let h = total / grid_n as f64;
    let check_f = !convex(&fp);
    let thr = lam * (1.0 - 1e-9);
    let level = 2.0 * lam * (1.0 - 1e-9);
    let r_max = bp.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let valid = |x: P| -> bool {
        if !check_f {
            return true;
        }
        let n = fp.len();
        (0..n).all(|i| {
            let (a, c) = (fp[i], fp[(i + 1) % n]);
            // Euclidean pruning: far edges cannot be closer than λ in the gauge
            let ab = c - a;
            let u = ((x - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
            if (x - a.lerp(c, u)).norm() > 1.01 * lam * r_max {
                return true;
            }
            brute_segment_distance(&bp, x, a, c) >= thr
        })
    };
    let stride = grid_n.div_ceil(ORACLE_MAX_STARTS).max(1);
    let mut starts: Vec<f64> = (0..grid_n).step_by(stride).map(|s| s as f64 * h).collect();
    if chain.pts.len() <= ORACLE_MAX_STARTS {
        starts.extend(chain.cum[..chain.pts.len()].iter().copied());
    }
    // first t in [from, end) with pred(t): sample scan, then bisection
    let first_where = |pred: &dyn Fn(f64) -> bool, from: f64, end: f64| -> Option<f64> {
        if pred(from) {
            return Some(from);
        }
        let mut prev = from;
        let mut i = (from / h).floor() + 1.0;
        loop {
            let mut t = i * h;
            if t >= end {
                t = end - 1e-12 * total;
                if t <= prev || !pred(t) {
                    return None;
                }
            } else if !pred(t) {
                prev = t;
                i += 1.0;
                continue;
            }
            let (mut lo, mut hi) = (prev, t);
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if pred(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some(hi);
        }
    };
    let (chain, bq) = (&chain, &bp[..]);
    let far = |c: P| move |t: f64| ray_gauge(bq, chain.at(t) - c) >= level;
    let mut best = 0;
    for t0 in starts {
        let x0 = chain.at(t0);
        if !valid(x0) {
            continue;
        }
        let end = t0 + total;
        let mut beads: Vec<P> = vec![x0];
        let mut cur = t0;
        'place: loop {
            let last = *beads.last().unwrap();
            let Some(mut t) = first_where(&far(last), cur, end) else {
                break;
            };
            loop {
                let x = chain.at(t);
                let next = if !valid(x) {
                    first_where(&|t: f64| valid(chain.at(t)), t, end)
                } else if let Some(&c) = beads.iter().find(|&&c| ray_gauge(&bp, x - c) < level) {
                    first_where(&far(c), t, end)
                } else {
                    break;
                };
                match next {
                    Some(v) => t = v,
                    None => break 'place,
                }
            }
            beads.push(chain.at(t));
            cur = t;
        }
        best = best.max(beads.len());
    }
    best
}

/// Box-counting dimension of a polyline: slope of `log N(ε)` against
/// `log(1/ε)` over the given box sizes, with the polyline sampled at a
/// spacing of a quarter of the smallest box.
pub fn box_counting_dimension(pts: &[P], closed: bool, sizes: &[f64]) -> Option<(f64, f64)> {
    if sizes.len() < 2 || pts.len() < 2 {
        return None;
    }
    let eps_min = sizes.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut dense = Vec::new();
    let m = if closed { pts.len() } else { pts.len() - 1 };
    for i in 0..m {
        let (a, c) = (pts[i], pts[(i + 1) % pts.len()]);
        let k = (((c - a).norm() / (0.25 * eps_min)).ceil() as usize).max(1);
        for j in 0..k {
            dense.push(a.lerp(c, j as f64 / k as f64));
        }
    }
    if !closed {
        dense.push(*pts.last().unwrap());
    }
    let xs: Vec<f64> = sizes.iter().map(|e| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = sizes
        .iter()
        .map(|&e| {
            let mut boxes: Vec<(i64, i64)> =
                dense.iter().map(|p| ((p.x / e).floor() as i64, (p.y / e).floor() as i64)).collect();
            boxes.sort_unstable();
            boxes.dedup();
            (boxes.len() as f64).ln()
        })
        .collect();
    least_squares(&xs, &ys)
}

/// Slope and intercept of the least-squares line.
pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{generate_shape, ShapeSpec};

    #[test]
    fn ray_gauge_hexagon() {
        let hex = SymmetricOval::<f64>::hexagon();
        let v = hex.vertices().to_vec();
        assert!((ray_gauge(&v, Point2::new(0.0, 1.0)) - 1.1547005383792515).abs() < 1e-12);
        assert!((ray_gauge(&v, Point2::new(1.9, 0.9)) - 2.419615242270663).abs() < 1e-12);
    }

    #[test]
    fn oracle_small_cases() {
        let sq = SymmetricOval::<f64>::square();
        let f = generate_shape(&ShapeSpec::Staircase { k: 1, step: 2.0 }).unwrap();
        assert_eq!(oracle_count(&f, &sq, 0.5, 4096), 12);
        let disk = SymmetricOval::<f64>::disk(512).unwrap();
        let c = generate_shape(&ShapeSpec::Disk { m: 512, radius: 1.0 }).unwrap();
        assert_eq!(oracle_count(&c, &disk, 0.25, 4096), 15);
    }

    #[test]
    fn box_counting_segment_and_square() {
        let seg = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)];
        let (s, _) = box_counting_dimension(&seg, false, &[0.1, 0.05, 0.02, 0.01]).unwrap();
        assert!((s - 1.0).abs() < 0.05, "{s}");
    }
}
