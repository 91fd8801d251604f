//! Half-space intersection through the polar dual.
//!
//! With the origin strictly inside every half-space `n·x ≤ c`, the
//! intersection is the polar of `conv{n/c}`: facets of the dual hull are
//! vertices of the intersection and vice versa.

use std::collections::HashMap;

use super::{convex_hull, rank, HalfSpace, PlaneIncidence, Polytope};
use crate::error::{Error, Result};
use crate::geom::Vector;

const PARALLEL_ANGLE: f64 = 1e-10;

pub fn halfspace_intersection(hs: &[HalfSpace], dim: usize, hull_tol: f64) -> Result<Polytope> {
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if let Some(h) = hs.iter().find(|h| h.normal.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: h.normal.dim(),
        });
    }
    let hs = dedup_parallel(hs);

    let normals: Vec<Vector> = hs.iter().map(|h| *h.normal).collect();
    if rank(&normals, 1e-12) < dim {
        return Err(Error::Unbounded {
            witness: orthogonal_witness(&normals, dim).as_slice().to_vec(),
        });
    }

    // The origin joins the dual point set so that a dual hull touching it
    // exposes the unbounded direction as a facet normal.
    let mut dual: Vec<Vector> = Vec::with_capacity(hs.len() + 1);
    dual.push(Vector::zeros(dim));
    dual.extend(hs.iter().map(|h| h.normal.scale(1.0 / h.offset())));
    let scale = dual.iter().map(|d| d.norm()).fold(1.0, f64::max);
    let hull = convex_hull(&dual, dim, hull_tol)?;
    if let Some(f) = hull.facets().iter().find(|f| f.offset <= hull_tol * scale) {
        return Err(Error::Unbounded {
            witness: f.normal.as_slice().to_vec(),
        });
    }

    let index: HashMap<Vec<u64>, usize> = dual
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, d)| (key(d), i - 1))
        .collect();

    let points: Vec<Vector> = hull
        .facets()
        .iter()
        .map(|f| f.normal.scale(1.0 / f.offset))
        .collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); hull.vertices().len()];
    for (fi, f) in hull.facets().iter().enumerate() {
        for &v in &f.ring {
            members[v].push(fi);
        }
    }
    let planes = hull
        .vertices()
        .iter()
        .zip(members)
        .map(|(d, members)| {
            let h = &hs[index[&key(d)]];
            PlaneIncidence {
                normal: h.normal,
                offset: h.offset(),
                members,
            }
        })
        .collect();

    let mut poly = Polytope::assemble(dim, &points, planes, hull_tol)?;
    poly.origin_interior = true;
    Ok(poly)
}

fn key(v: &Vector) -> Vec<u64> {
    v.as_slice().iter().map(|c| c.to_bits()).collect()
}

/// Drops half-spaces whose normal is within [`PARALLEL_ANGLE`] of another,
/// keeping the tighter one. Output order follows the input.
fn dedup_parallel(hs: &[HalfSpace]) -> Vec<HalfSpace> {
    let mut order: Vec<usize> = (0..hs.len()).collect();
    order.sort_by(|&a, &b| hs[a].normal.lex_cmp(&hs[b].normal));
    let mut keep = vec![true; hs.len()];
    for (k, &i) in order.iter().enumerate() {
        if !keep[i] {
            continue;
        }
        for &j in &order[k + 1..] {
            if hs[j].normal[0] - hs[i].normal[0] > PARALLEL_ANGLE {
                break;
            }
            if keep[j] && hs[i].normal.angle_to(&hs[j].normal) < PARALLEL_ANGLE {
                if hs[j].offset() < hs[i].offset() {
                    keep[i] = false;
                    break;
                }
                keep[j] = false;
            }
        }
    }
    hs.iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(h, _)| *h)
        .collect()
}

/// A unit vector orthogonal to every normal, for rank-deficient input.
fn orthogonal_witness(normals: &[Vector], dim: usize) -> Vector {
    let mut basis: Vec<Vector> = Vec::new();
    for n in normals {
        let mut w = *n;
        for b in &basis {
            w = w - b.scale(w.dot(b));
        }
        if w.norm() > 1e-12 {
            basis.push(w.scale(1.0 / w.norm()));
        }
    }
    for i in 0..dim {
        let mut w = Vector::basis(dim, i);
        for b in &basis {
            w = w - b.scale(w.dot(b));
        }
        if w.norm() > 1e-6 {
            return w.scale(1.0 / w.norm());
        }
    }
    Vector::basis(dim, 0)
}
