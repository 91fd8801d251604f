//! Distances between convex polytopes.

use super::Polytope;
use crate::geom::{UnitVector, Vector};

/// Euclidean distance from `p` to the polytope (zero inside).
///
/// The nearest boundary point always lies on a facet whose plane separates
/// `p` from the body, so only those facets are searched.
pub fn point_distance(w: &Polytope, p: &Vector) -> f64 {
    let mut best = f64::INFINITY;
    let mut outside = false;
    for f in w.facets() {
        let h = f.normal.dot(p) - f.offset;
        if h <= 0.0 {
            continue;
        }
        outside = true;
        let d = if w.dim() == 2 {
            segment_distance(p, &w.vertices()[f.ring[0]], &w.vertices()[f.ring[1]])
        } else {
            polygon_distance(w, &f.ring, &f.normal, h, p)
        };
        best = best.min(d);
    }
    if outside {
        best
    } else {
        0.0
    }
}

fn segment_distance(p: &Vector, a: &Vector, b: &Vector) -> f64 {
    let ab = *b - *a;
    let len2 = ab.norm_squared();
    let t = if len2 > 0.0 {
        ((*p - *a).dot(&ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    p.distance(&(*a + ab.scale(t)))
}

fn polygon_distance(w: &Polytope, ring: &[usize], n: &UnitVector, height: f64, p: &Vector) -> f64 {
    let v = w.vertices();
    let q = *p - n.scale(height);
    let k = ring.len();
    let inside = (0..k).all(|i| {
        let (a, b) = (v[ring[i]], v[ring[(i + 1) % k]]);
        (b - a).cross(&(q - a)).dot(n) >= 0.0
    });
    if inside {
        return height;
    }
    (0..k)
        .map(|i| segment_distance(p, &v[ring[i]], &v[ring[(i + 1) % k]]))
        .fold(f64::INFINITY, f64::min)
}

/// Pompeiu–Hausdorff distance between two polytopes of the same dimension.
///
/// The distance to a convex set is a convex function, so the farthest point
/// of either body from the other is one of its vertices; this is exact.
pub fn hausdorff_distance(a: &Polytope, b: &Polytope) -> f64 {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch");
    let one = |x: &Polytope, y: &Polytope| {
        x.vertices()
            .iter()
            .map(|v| point_distance(y, v))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Hausdorff distance from `w` to the origin-centred ball of radius `r`,
/// via `max_u |h_W(u) − r|`.
pub fn hausdorff_to_ball(w: &Polytope, r: f64) -> f64 {
    let outer = w.max_vertex_norm() - r;
    let inner = r - w.min_facet_offset();
    outer.max(inner).max(0.0)
}

/// `max_u |h_A(u) − h_B(u)|` over the given directions: a lower bound for the
/// Hausdorff distance, exact once `dirs` contains both normal fans.
pub fn support_discrepancy(a: &Polytope, b: &Polytope, dirs: &[UnitVector]) -> f64 {
    dirs.iter()
        .map(|u| (a.support(u) - b.support(u)).abs())
        .fold(0.0, f64::max)
}
