//! Marching-squares extraction of `M_r = {x : d_B(x, M) = r}`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::curves::{bbox, ClosedCurve};
use crate::error::{Error, Result};
use crate::gauge::SymmetricOval;
use crate::point::Point2;
use crate::scalar::Scalar;

/// The set whose distance level is extracted.
#[derive(Debug, Clone)]
pub enum LevelSource<T> {
    Points(Vec<Point2<T>>),
    Curve(ClosedCurve<T>),
}

impl<T: Scalar> LevelSource<T> {
    fn points(&self) -> &[Point2<T>] {
        match self {
            LevelSource::Points(p) => p,
            LevelSource::Curve(c) => c.points(),
        }
    }

    /// `d_B(x, M)`.
    pub fn distance(&self, b: &SymmetricOval<T>, x: Point2<T>) -> T {
        match self {
            LevelSource::Points(ps) => ps.iter().fold(T::infinity(), |m, &p| m.min(b.norm(x - p))),
            LevelSource::Curve(c) => b.polyline_distance(x, c.points(), true),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LevelSetOptions {
    /// Cells per axis.
    pub grid: usize,
    /// Move each interpolated crossing onto the exact level by bisection
    /// along its grid edge.
    pub refine: bool,
    /// Re-extract at half resolution and compare component counts.
    pub stability_check: bool,
}

impl Default for LevelSetOptions {
    fn default() -> Self {
        Self { grid: 512, refine: true, stability_check: true }
    }
}

/// Extracted level set.
#[derive(Debug, Clone)]
pub struct LevelSetSample<T> {
    pub radius: T,
    /// Polylines; `closed[i]` tells whether polyline `i` closes on itself
    /// (open ones end on the grid boundary).
    pub polylines: Vec<Vec<Point2<T>>>,
    pub closed: Vec<bool>,
    /// Grid cell size.
    pub cell: T,
    /// Largest `|d_B(x, M) - r|` over the extracted points.
    pub max_residual: T,
    /// Component count at half resolution differs.
    pub unstable: bool,
}

impl<T: Scalar> LevelSetSample<T> {
    pub fn components(&self) -> usize {
        self.polylines.len()
    }

    pub fn points(&self) -> impl Iterator<Item = &Point2<T>> {
        self.polylines.iter().flatten()
    }
}

/// Extracts the `r`-level of `x -> d_B(x, M)` on a `grid x grid` lattice
/// covering `M` enlarged by the Euclidean circumradius of `rB`.
pub fn level_set<T: Scalar>(
    m: &LevelSource<T>,
    b: &SymmetricOval<T>,
    r: T,
    grid: usize,
) -> Result<LevelSetSample<T>> {
    level_set_with(m, b, r, LevelSetOptions { grid, ..LevelSetOptions::default() })
}

pub fn level_set_with<T: Scalar>(
    m: &LevelSource<T>,
    b: &SymmetricOval<T>,
    r: T,
    opts: LevelSetOptions,
) -> Result<LevelSetSample<T>> {
    if m.points().is_empty() {
        return Err(Error::InvalidInput("level set of an empty set".into()));
    }
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::InvalidInput("level radius must be positive".into()));
    }
    if opts.grid < 4 {
        return Err(Error::InvalidInput("level set grid needs at least 4 cells".into()));
    }
    let (polylines, closed, cell) = extract(m, b, r, opts.grid, opts.refine);
    let max_residual = polylines
        .iter()
        .flatten()
        .fold(T::zero(), |acc, &x| acc.max((m.distance(b, x) - r).abs()));
    let unstable = if opts.stability_check && opts.grid >= 8 {
        let (coarse, _, _) = extract(m, b, r, opts.grid / 2, false);
        coarse.len() != polylines.len()
    } else {
        false
    };
    Ok(LevelSetSample { radius: r, polylines, closed, cell, max_residual, unstable })
}

type Lines<T> = (Vec<Vec<Point2<T>>>, Vec<bool>, T);

fn extract<T: Scalar>(m: &LevelSource<T>, b: &SymmetricOval<T>, r: T, n: usize, refine: bool) -> Lines<T> {
    let (lo, hi) = bbox(m.points());
    let (_, r_max) = b.radii();
    let center = lo.lerp(hi, T::half());
    let half_extent = (hi.x - lo.x).max(hi.y - lo.y) * T::half() + r * r_max * T::lit(1.05);
    let half_extent = half_extent * (T::one() + T::lit(1e-3)) + T::lit(1e-9);
    let origin = center - Point2::new(half_extent, half_extent);
    let cell = T::two() * half_extent / T::cast(n);
    let at = |i: usize, j: usize| origin + Point2::new(T::cast(i) * cell, T::cast(j) * cell);
    let nv = n + 1;
    let values: Vec<T> = (0..nv)
        .into_par_iter()
        .flat_map_iter(|j| (0..nv).map(move |i| (i, j)))
        .map(|(i, j)| m.distance(b, at(i, j)) - r)
        .collect();
    let val = |i: usize, j: usize| values[j * nv + i];

    // Edge keys: horizontal (i,j)-(i+1,j) -> 2*(j*nv+i), vertical (i,j)-(i,j+1) -> 2*(j*nv+i)+1.
    let hkey = |i: usize, j: usize| 2 * (j * nv + i) as u64;
    let vkey = |i: usize, j: usize| 2 * (j * nv + i) as u64 + 1;
    let mut segments: Vec<(u64, u64)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let v = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            let mut case = 0u8;
            for (k, &x) in v.iter().enumerate() {
                if x >= T::zero() {
                    case |= 1 << k;
                }
            }
            let bottom = hkey(i, j);
            let right = vkey(i + 1, j);
            let top = hkey(i, j + 1);
            let left = vkey(i, j);
            let center_pos = (v[0] + v[1] + v[2] + v[3]) >= T::zero();
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 => {
                    // corners 0 and 2 high
                    if center_pos {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                10 => {
                    if center_pos {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    } else {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // Crossing position for each edge key.
    let crossing = |key: u64| {
        let base = (key / 2) as usize;
        let (i, j) = (base % nv, base / nv);
        let (i2, j2) = if key % 2 == 0 { (i + 1, j) } else { (i, j + 1) };
        let (p, q) = (at(i, j), at(i2, j2));
        let (fp, fq) = (val(i, j), val(i2, j2));
        let t = fp / (fp - fq);
        let mut x = p.lerp(q, t);
        if refine {
            let (mut a, mut c) = (T::zero(), T::one());
            let neg_at_a = fp < T::zero();
            for _ in 0..48 {
                let mid = (a + c) * T::half();
                let f = m.distance(b, p.lerp(q, mid)) - r;
                if (f < T::zero()) == neg_at_a {
                    a = mid;
                } else {
                    c = mid;
                }
            }
            let cand = p.lerp(q, (a + c) * T::half());
            x = cand;
        }
        x
    };

    // Chain segments through shared edge keys.
    let mut incident: HashMap<u64, Vec<usize>> = HashMap::new();
    for (s, &(a, c)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(s);
        incident.entry(c).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    let mut closed = Vec::new();
    let mut starts: Vec<usize> = Vec::new();
    // open chains first: segments touching a degree-1 key
    let mut keys: Vec<&u64> = incident.keys().collect();
    keys.sort();
    for k in keys {
        let inc = &incident[k];
        if inc.len() == 1 {
            starts.push(inc[0]);
        }
    }
    starts.extend(0..segments.len());
    let mut cache: HashMap<u64, Point2<T>> = HashMap::new();
    let mut point = |key: u64| *cache.entry(key).or_insert_with(|| crossing(key));
    for s0 in starts {
        if used[s0] {
            continue;
        }
        let (a, c) = segments[s0];
        // orient so that an open chain starts at its free end
        let (first, mut cur_key) = if incident[&c].len() == 1 && incident[&a].len() != 1 { (c, a) } else { (a, c) };
        used[s0] = true;
        let mut keys_line = vec![first, cur_key];
        let mut is_closed = false;
        loop {
            let next = incident[&cur_key].iter().copied().find(|&s| !used[s]);
            let Some(s) = next else {
                break;
            };
            used[s] = true;
            let (p, q) = segments[s];
            cur_key = if p == cur_key { q } else { p };
            if cur_key == first {
                is_closed = true;
                break;
            }
            keys_line.push(cur_key);
        }
        lines.push(keys_line.into_iter().map(&mut point).collect());
        closed.push(is_closed);
    }
    (lines, closed, cell)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    #[test]
    fn unit_square_level() {
        let b = SymmetricOval::<f64>::square();
        let s = level_set(&LevelSource::Points(vec![p(0.0, 0.0)]), &b, 1.0, 128).unwrap();
        assert_eq!(s.components(), 1);
        assert!(s.closed[0]);
        assert!(s.max_residual < 1e-9);
        for x in s.points() {
            assert!((x.x.abs().max(x.y.abs()) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn two_separate_squares() {
        let b = SymmetricOval::<f64>::square();
        let s = level_set(&LevelSource::Points(vec![p(0.0, 0.0), p(10.0, 0.0)]), &b, 1.0, 256).unwrap();
        assert_eq!(s.components(), 2);
        assert!(!s.unstable);
    }

    #[test]
    fn rejects_bad_input() {
        let b = SymmetricOval::<f64>::square();
        assert!(level_set(&LevelSource::Points(vec![]), &b, 1.0, 64).is_err());
        assert!(level_set(&LevelSource::Points(vec![p(0.0, 0.0)]), &b, 0.0, 64).is_err());
    }
}
