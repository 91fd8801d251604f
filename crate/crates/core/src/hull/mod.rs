//! Convex-polytope engine for the plane and 3-space.
//!
//! Bodies are kept in a canonical form: vertices are the extreme points only,
//! sorted lexicographically; coplanar triangles are merged into maximal facets
//! whose vertex rings run counter-clockwise about the outward normal.

mod halfspace;
mod metric;
mod planar;
mod spatial;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{UnitVector, Vector};

pub use halfspace::halfspace_intersection;
pub use metric::{hausdorff_distance, hausdorff_to_ball, point_distance, support_discrepancy};

/// The closed half-space `{x : normal·x ≤ offset}` with the origin strictly inside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HalfSpace {
    pub normal: UnitVector,
    offset: f64,
}

impl HalfSpace {
    pub fn new(normal: UnitVector, offset: f64) -> Result<Self> {
        if !(offset > 0.0) || !offset.is_finite() {
            return Err(Error::NonPositiveOffset(offset));
        }
        Ok(HalfSpace { normal, offset })
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.normal.dot(x) <= self.offset + tol
    }
}

/// A maximal facet: outward unit normal, offset and its vertex ring.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Facet {
    pub normal: UnitVector,
    pub offset: f64,
    pub ring: Vec<usize>,
}

/// A bounded convex polytope with nonempty interior, in dimension 2 or 3.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Facet>,
    adjacency: Vec<Vec<usize>>,
    origin_interior: bool,
}

/// Candidate facet handed to [`Polytope::assemble`]: plane plus the indices
/// of the candidate points lying on it.
pub(crate) struct PlaneIncidence {
    pub normal: UnitVector,
    pub offset: f64,
    pub members: Vec<usize>,
}

/// Convex hull of a point set in dimension 2 (monotone chain) or 3
/// (incremental with conflict lists).
pub fn convex_hull(points: &[Vector], dim: usize, hull_tol: f64) -> Result<Polytope> {
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    if dim == 2 {
        planar::hull(points, hull_tol)
    } else {
        spatial::hull(points, hull_tol)
    }
}

impl Polytope {
    /// Builds the canonical polytope from candidate points and planes.
    ///
    /// Points incident to fewer than `dim` independent planes are dropped
    /// (they sit inside a facet or on an edge); planes left with fewer than
    /// `dim` vertices are dropped as well.
    pub(crate) fn assemble(
        dim: usize,
        points: &[Vector],
        planes: Vec<PlaneIncidence>,
        tol: f64,
    ) -> Result<Polytope> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
        for (j, p) in planes.iter().enumerate() {
            for &i in &p.members {
                incident[i].push(j);
            }
        }
        let extreme: Vec<bool> = incident
            .iter()
            .map(|inc| {
                let normals: Vec<Vector> = inc.iter().map(|&j| *planes[j].normal).collect();
                rank(&normals, 1e-9) >= dim
            })
            .collect();

        // Deduplicate extreme points within tol, then order lexicographically.
        let mut order: Vec<usize> = (0..points.len()).filter(|&i| extreme[i]).collect();
        order.sort_by(|&a, &b| points[a].lex_cmp(&points[b]));
        let mut remap = vec![usize::MAX; points.len()];
        let mut vertices: Vec<Vector> = Vec::new();
        let mut first_coord: Vec<f64> = Vec::new();
        for &i in &order {
            let p = points[i];
            let mut found = None;
            for k in (0..vertices.len()).rev() {
                if p[0] - first_coord[k] > tol {
                    break;
                }
                if vertices[k].distance(&p) <= tol {
                    found = Some(k);
                    break;
                }
            }
            match found {
                Some(k) => remap[i] = k,
                None => {
                    remap[i] = vertices.len();
                    first_coord.push(p[0]);
                    vertices.push(p);
                }
            }
        }
        if vertices.len() < dim + 1 {
            return Err(Error::Degenerate {
                rank: vertices.len().saturating_sub(1),
                required: dim,
            });
        }

        let mut facets: Vec<Facet> = Vec::new();
        let mut seen: std::collections::HashSet<Vec<usize>> = Default::default();
        for p in planes {
            let mut ring: Vec<usize> = p
                .members
                .iter()
                .filter(|&&i| extreme[i])
                .map(|&i| remap[i])
                .collect();
            ring.sort_unstable();
            ring.dedup();
            if ring.len() < dim || !seen.insert(ring.clone()) {
                continue;
            }
            let ring = order_ring(dim, &vertices, &p.normal, ring);
            facets.push(Facet {
                normal: p.normal,
                offset: p.offset,
                ring,
            });
        }
        if facets.len() < dim + 1 {
            return Err(Error::Degenerate {
                rank: dim - 1,
                required: dim,
            });
        }
        facets.sort_by(|a, b| a.normal.lex_cmp(&b.normal));

        let adjacency = facet_adjacency(dim, vertices.len(), &facets);
        let origin_interior = facets.iter().all(|f| f.offset > tol);
        Ok(Polytope {
            dim,
            vertices,
            facets,
            adjacency,
            origin_interior,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Facet-to-facet adjacency: facets sharing a ridge.
    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// True when every facet offset exceeds the hull tolerance.
    pub fn origin_interior(&self) -> bool {
        self.origin_interior
    }

    /// Undirected edges as sorted vertex pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = if self.dim == 2 {
            self.facets
                .iter()
                .map(|f| (f.ring[0].min(f.ring[1]), f.ring[0].max(f.ring[1])))
                .collect()
        } else {
            self.facets
                .iter()
                .flat_map(|f| {
                    let n = f.ring.len();
                    (0..n).map(move |i| {
                        let (a, b) = (f.ring[i], f.ring[(i + 1) % n]);
                        (a.min(b), a.max(b))
                    })
                })
                .collect()
        };
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Support function `max_v v·u`.
    pub fn support(&self, u: &Vector) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Distance from the origin to the boundary along `u`.
    pub fn radial(&self, u: &UnitVector) -> Result<f64> {
        if !self.origin_interior {
            return Err(Error::OriginNotInterior);
        }
        let score = |f: &Facet| f.normal.dot(u) / f.offset;
        if self.facets.len() <= 64 {
            return Ok(1.0
                / self
                    .facets
                    .iter()
                    .map(score)
                    .fold(f64::NEG_INFINITY, f64::max));
        }
        // 1/ρ(u) is the support of the polar body, whose vertices are the
        // points n/c and whose edges join adjacent facets: a linear objective
        // over a polytope graph, so steepest ascent ends at the maximum.
        let mut at = 0;
        let mut best = score(&self.facets[0]);
        loop {
            let next = self.adjacency[at]
                .iter()
                .map(|&g| (g, score(&self.facets[g])))
                .max_by(|a, b| a.1.total_cmp(&b.1));
            match next {
                Some((g, s)) if s > best => (at, best) = (g, s),
                _ => return Ok(1.0 / best),
            }
        }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.facets
            .iter()
            .all(|f| f.normal.dot(x) <= f.offset + tol)
    }

    /// `max_j (n_j·x − c_j)`: negative inside, zero on the boundary.
    pub fn facet_margin(&self, x: &Vector) -> f64 {
        self.facets
            .iter()
            .map(|f| f.normal.dot(x) - f.offset)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_vertex_norm(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_facet_offset(&self) -> f64 {
        self.facets
            .iter()
            .map(|f| f.offset)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn facet_diameter(&self, facet: usize) -> f64 {
        diameter(self.facets[facet].ring.iter().map(|&i| &self.vertices[i]))
    }

    /// Facets whose vertex-set diameter exceeds `threshold`, largest first.
    pub fn flat_spots(&self, threshold: f64) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = (0..self.facets.len())
            .map(|j| (j, self.facet_diameter(j)))
            .filter(|&(_, d)| d > threshold)
            .collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        out
    }

    /// Polar body `{y : y·x ≤ 1 ∀x ∈ W}`.
    pub fn polar_body(&self, hull_tol: f64) -> Result<Polytope> {
        if !self.origin_interior {
            return Err(Error::OriginNotInterior);
        }
        let hs = self
            .vertices
            .iter()
            .map(|v| {
                let r = v.norm();
                HalfSpace::new(UnitVector::new_unchecked(v.scale(1.0 / r)), 1.0 / r)
            })
            .collect::<Result<Vec<_>>>()?;
        halfspace_intersection(&hs, self.dim, hull_tol)
    }

    /// Image under `x ↦ s·x` for `s ≠ 0`; negative `s` reflects through the origin.
    pub fn scaled(&self, s: f64) -> Polytope {
        assert!(s != 0.0 && s.is_finite());
        let points: Vec<Vector> = self.vertices.iter().map(|v| v.scale(s)).collect();
        let planes = self
            .facets
            .iter()
            .map(|f| PlaneIncidence {
                normal: if s > 0.0 { f.normal } else { -f.normal },
                offset: f.offset * s.abs(),
                members: f.ring.clone(),
            })
            .collect();
        // Extreme points and incidences carry over unchanged.
        let mut p = Polytope::assemble(self.dim, &points, planes, 0.0)
            .expect("scaling preserves a valid polytope");
        p.origin_interior = self.origin_interior;
        p
    }

    /// Reflection through the origin.
    pub fn reflected(&self) -> Polytope {
        self.scaled(-1.0)
    }

    /// Largest violation of `normal·v ≤ offset` over all vertex/facet pairs.
    pub fn max_inequality_violation(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| self.facet_margin(v))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn diameter<'a>(points: impl Iterator<Item = &'a Vector> + Clone) -> f64 {
    let pts: Vec<&Vector> = points.collect();
    let mut d: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max(pts[i].distance(pts[j]));
        }
    }
    d
}

/// Numerical rank of a set of vectors via modified Gram–Schmidt.
pub(crate) fn rank(vectors: &[Vector], tol: f64) -> usize {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut w = *v;
        for b in &basis {
            w = w - b.scale(w.dot(b));
        }
        let n = w.norm();
        if n > tol * v.norm().max(1.0) {
            basis.push(w.scale(1.0 / n));
            if basis.len() == v.dim() {
                break;
            }
        }
    }
    basis.len()
}

fn order_ring(
    dim: usize,
    vertices: &[Vector],
    normal: &UnitVector,
    mut ring: Vec<usize>,
) -> Vec<usize> {
    if dim == 2 {
        let t = Vector::new(&[-normal[1], normal[0]]);
        ring.sort_by(|&a, &b| vertices[a].dot(&t).total_cmp(&vertices[b].dot(&t)));
        return ring;
    }
    let n = ring.len() as f64;
    let c = ring
        .iter()
        .fold(Vector::zeros(3), |acc, &i| acc + vertices[i])
        .scale(1.0 / n);
    let far = *ring
        .iter()
        .max_by(|&&a, &&b| {
            vertices[a]
                .distance(&c)
                .total_cmp(&vertices[b].distance(&c))
        })
        .unwrap();
    let d = vertices[far] - c;
    let e1 = (d - normal.scale(d.dot(normal)))
        .normalize()
        .expect("facet has extent");
    let e2 = normal.cross(&e1);
    let angle = |i: usize| {
        let w = vertices[i] - c;
        w.dot(&e2).atan2(w.dot(&e1))
    };
    ring.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
    let start = ring
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(k, _)| k)
        .unwrap();
    ring.rotate_left(start);
    ring
}

fn facet_adjacency(dim: usize, nverts: usize, facets: &[Facet]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); facets.len()];
    if dim == 2 {
        let mut by_vertex = vec![Vec::new(); nverts];
        for (j, f) in facets.iter().enumerate() {
            for &v in &f.ring {
                by_vertex[v].push(j);
            }
        }
        for list in by_vertex {
            for &a in &list {
                for &b in &list {
                    if a != b {
                        adj[a].push(b);
                    }
                }
            }
        }
    } else {
        let mut by_edge: std::collections::HashMap<(usize, usize), Vec<usize>> = Default::default();
        for (j, f) in facets.iter().enumerate() {
            let n = f.ring.len();
            for i in 0..n {
                let (a, b) = (f.ring[i], f.ring[(i + 1) % n]);
                by_edge.entry((a.min(b), a.max(b))).or_default().push(j);
            }
        }
        for list in by_edge.values() {
            for &a in list {
                for &b in list {
                    if a != b {
                        adj[a].push(b);
                    }
                }
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

#[cfg(test)]
mod tests;
