//! Outer parallel chains `W_λ(Q)`, level sets of the gauge distance and
//! their cone regularity.
//!
//! Each edge `e` of `Q` is translated by `λ z(n_e)`, where `n_e` is its
//! outward normal and `z(n)` the canonical support point of `B` (a vertex,
//! or a facet midpoint for flat contact). At a convex vertex the two
//! translates are joined by the boundary chain of `λB` between the two
//! support points; at a reflex vertex they are clipped at their
//! intersection `C_j`.

mod cone;
mod level;

pub use cone::{cone_check, sufficient_radius, ConeReport};
pub use level::{level_set, LevelSetOptions, LevelSetSample, LevelSource};

use serde::Serialize;

use crate::curves::ClosedCurve;
use crate::gauge::SymmetricOval;
use crate::point::{closed_polyline_crossings, line_intersection, Point2};
use crate::scalar::Scalar;

/// One piece of an offset chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Element<T> {
    /// Translate of edge `edge`, trimmed to the edge parameters `s0..s1`.
    Edge {
        edge: usize,
        from: Point2<T>,
        to: Point2<T>,
        s0: T,
        s1: T,
    },
    /// Chain of `v + λ∂B` around convex vertex `vertex`.
    Arc { vertex: usize, points: Vec<Point2<T>> },
}

impl<T: Scalar> Element<T> {
    pub fn start(&self) -> Point2<T> {
        match self {
            Element::Edge { from, .. } => *from,
            Element::Arc { points, .. } => points[0],
        }
    }

    pub fn end(&self) -> Point2<T> {
        match self {
            Element::Edge { to, .. } => *to,
            Element::Arc { points, .. } => *points.last().unwrap(),
        }
    }
}

/// The chain `W_λ(Q)`.
#[derive(Debug, Clone)]
pub struct OffsetCurve<T> {
    pub source: ClosedCurve<T>,
    pub lambda: T,
    /// Elements in order: arc at vertex 0 (if convex), edge 0, arc at
    /// vertex 1, edge 1, ...
    pub elements: Vec<Element<T>>,
    /// Per edge, the translation vector `λ z(n_e)`.
    pub shifts: Vec<Point2<T>>,
    /// Some reflex pair of translates did not meet and was joined through
    /// the intersection of their supporting lines.
    pub surgery: bool,
    /// Non-adjacent pieces of the chain cross.
    pub self_intersecting: bool,
}

impl<T: Scalar> OffsetCurve<T> {
    /// The chain as a closed polyline with consecutive (near) duplicates
    /// removed.
    pub fn polyline(&self) -> Vec<Point2<T>> {
        let mut out: Vec<Point2<T>> = Vec::new();
        let mut push = |p: Point2<T>| {
            if !out.last().is_some_and(|&q| coincide(p, q)) {
                out.push(p);
            }
        };
        for el in &self.elements {
            match el {
                Element::Edge { from, to, .. } => {
                    push(*from);
                    push(*to);
                }
                Element::Arc { points, .. } => points.iter().for_each(|&p| push(p)),
            }
        }
        if out.len() > 1 && coincide(out[0], *out.last().unwrap()) {
            out.pop();
        }
        out
    }
}

/// Points closer than a few ulps of their magnitude.
pub(crate) fn coincide<T: Scalar>(p: Point2<T>, q: Point2<T>) -> bool {
    let scale = T::one() + p.x.abs().max(p.y.abs());
    (p - q).norm() <= scale * T::epsilon() * T::lit(64.0)
}

/// Builds `W_λ(q)`.
pub fn offset_polygon<T: Scalar>(q: &ClosedCurve<T>, b: &SymmetricOval<T>, lambda: T) -> OffsetCurve<T> {
    let n = q.len();
    let pts = q.points();
    let normals: Vec<Point2<T>> = (0..n)
        .map(|i| {
            let (a, c) = q.edge(i);
            (c - a).perp_cw()
        })
        .collect();
    let shifts: Vec<Point2<T>> = normals.iter().map(|&nrm| b.support_point(nrm) * lambda).collect();
    // edge parameter windows, trimmed at reflex vertices
    let mut s0 = vec![T::zero(); n];
    let mut s1 = vec![T::one(); n];
    let mut surgery = false;
    let mut arcs: Vec<Option<Vec<Point2<T>>>> = vec![None; n];
    for j in 0..n {
        let prev = (j + n - 1) % n;
        let turn = q.turn(j);
        if turn > T::zero() {
            let arc: Vec<Point2<T>> = b
                .boundary_arc(normals[prev], normals[j])
                .into_iter()
                .map(|z| pts[j] + z * lambda)
                .collect();
            arcs[j] = Some(arc);
        } else if turn < T::zero() {
            let (pa, pb) = q.edge(prev);
            let (na, nb) = q.edge(j);
            let a0 = pa + shifts[prev];
            let a1 = pb + shifts[prev];
            let b0 = na + shifts[j];
            let b1 = nb + shifts[j];
            match line_intersection(a0, a1, b0, b1) {
                Some((s, t)) => {
                    if s < T::zero() || s > T::one() || t < T::zero() || t > T::one() {
                        surgery = true;
                    }
                    s1[prev] = s;
                    s0[j] = t;
                }
                None => surgery = true,
            }
        } else if shifts[prev] != shifts[j] {
            // straight vertex whose two normals pick different support points
            arcs[j] = Some(vec![pts[j] + shifts[prev], pts[j] + shifts[j]]);
        }
    }
    let mut elements = Vec::with_capacity(2 * n);
    for j in 0..n {
        if let Some(arc) = arcs[j].take() {
            elements.push(Element::Arc { vertex: j, points: arc });
        }
        let (a, c) = q.edge(j);
        if s0[j] > s1[j] {
            surgery = true;
        }
        elements.push(Element::Edge {
            edge: j,
            from: a.lerp(c, s0[j]) + shifts[j],
            to: a.lerp(c, s1[j]) + shifts[j],
            s0: s0[j],
            s1: s1[j],
        });
    }
    let mut w = OffsetCurve {
        source: q.clone(),
        lambda,
        elements,
        shifts,
        surgery,
        self_intersecting: false,
    };
    let poly = w.polyline();
    w.self_intersecting = !closed_polyline_crossings(&poly, T::tol(1e-12), 1).is_empty();
    w
}

/// Gauge length of `W`: edge pieces plus arc chains.
pub fn offset_perimeter<T: Scalar>(w: &OffsetCurve<T>, b: &SymmetricOval<T>) -> T {
    let mut acc = T::zero();
    for el in &w.elements {
        match el {
            Element::Edge { from, to, .. } => acc = acc + b.norm(*to - *from),
            Element::Arc { points, .. } => {
                for s in points.windows(2) {
                    acc = acc + b.norm(s[1] - s[0]);
                }
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{perimeter, random_convex_polygon, generate_shape, ShapeSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn square_f() -> ClosedCurve<f64> {
        generate_shape(&ShapeSpec::Staircase { k: 1, step: 2.0 }).unwrap()
    }

    #[test]
    fn square_tube_formula() {
        let b = SymmetricOval::<f64>::square();
        let w = offset_polygon(&square_f(), &b, 0.25);
        assert!((offset_perimeter(&w, &b) - 10.0).abs() < 1e-12);
        assert!(!w.surgery && !w.self_intersecting);
        let w0 = offset_polygon(&square_f(), &b, 0.0);
        assert!((offset_perimeter(&w0, &b) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn chain_is_closed() {
        let b = SymmetricOval::<f64>::hexagon();
        let f = generate_shape(&ShapeSpec::Staircase { k: 3, step: 1.0 }).unwrap();
        let w = offset_polygon(&f, &b, 0.1);
        let m = w.elements.len();
        for i in 0..m {
            let e = w.elements[i].end();
            let s = w.elements[(i + 1) % m].start();
            assert!((e - s).norm() < 1e-12, "{i}: {e:?} {s:?}");
        }
    }

    #[test]
    fn convex_equality_and_nonconvex_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let hex = SymmetricOval::<f64>::hexagon();
        for _ in 0..10 {
            let q = random_convex_polygon(7, 1.3, 0.8, &mut rng);
            for lam in [0.05, 0.1, 0.2] {
                let w = offset_polygon(&q, &hex, lam);
                let expect = perimeter(&hex, &q) + lam * hex.self_perimeter();
                assert!((offset_perimeter(&w, &hex) - expect).abs() < 1e-9 * expect);
            }
        }
        let sq = SymmetricOval::<f64>::square();
        let st = generate_shape(&ShapeSpec::Staircase { k: 2, step: 2.0 }).unwrap();
        // rectilinear staircase under the square gauge: each reflex clip
        // removes exactly what a convex corner adds, so the bound is attained
        let w = offset_polygon(&st, &sq, 0.1);
        let p = offset_perimeter(&w, &sq);
        assert!((p - (perimeter(&sq, &st) + 0.8)).abs() < 1e-12, "{p}");
        // under the Euclidean gauge the clip (2λ) exceeds the corner arc (πλ/2)
        let disk = SymmetricOval::<f64>::disk(512).unwrap();
        let st3 = generate_shape(&ShapeSpec::Staircase { k: 3, step: 1.0 }).unwrap();
        let w = offset_polygon(&st3, &disk, 0.05);
        let bound = perimeter(&disk, &st3) + 0.05 * disk.self_perimeter();
        assert!(offset_perimeter(&w, &disk) < bound - 1e-3);
    }

    #[test]
    fn edge_pieces_sit_at_distance_lambda() {
        let b = SymmetricOval::<f64>::regular(10, 1.0, 0.1).unwrap();
        let f = generate_shape(&ShapeSpec::Staircase { k: 2, step: 1.0 }).unwrap();
        let lam = 0.2;
        let w = offset_polygon(&f, &b, lam);
        for el in &w.elements {
            if let Element::Edge { from, to, .. } = el {
                let mid = from.lerp(*to, 0.5);
                let d = b.polyline_distance(mid, f.points(), true);
                assert!((d - lam).abs() < 1e-9, "{d}");
            }
        }
    }
}
