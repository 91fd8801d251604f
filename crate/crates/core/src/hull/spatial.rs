//! Incremental 3D hull with conflict lists.
//!
//! Every unprocessed point sits in the conflict list of one face it sees;
//! the farthest conflict point of a face is inserted next, the visible region
//! is carved out, and orphaned points are redistributed over the new cone.
//! Visibility uses a strict `> tol` test, so points within `tol` of the
//! current hull are absorbed rather than creating slivers.

use std::collections::{HashMap, VecDeque};

use super::{PlaneIncidence, Polytope};
use crate::error::{Error, Result};
use crate::geom::{UnitVector, Vector};

struct Face {
    v: [usize; 3],
    normal: Vector,
    offset: f64,
    conflicts: Vec<usize>,
    alive: bool,
}

impl Face {
    fn new(points: &[Vector], v: [usize; 3]) -> Face {
        let (a, b, c) = (points[v[0]], points[v[1]], points[v[2]]);
        let n = (b - a).cross(&(c - a));
        let len = n.norm();
        let normal = if len > 0.0 { n.scale(1.0 / len) } else { n };
        Face {
            v,
            normal,
            offset: normal.dot(&a),
            conflicts: Vec::new(),
            alive: true,
        }
    }

    fn height(&self, p: &Vector) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

pub(super) fn hull(points: &[Vector], tol: f64) -> Result<Polytope> {
    let scale = points.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let tol = tol * scale;
    let simplex = initial_simplex(points, tol)?;

    let mut faces: Vec<Face> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let centroid = simplex
        .iter()
        .fold(Vector::zeros(3), |acc, &i| acc + points[i])
        .scale(0.25);
    for skip in 0..4 {
        let mut tri = [0usize; 3];
        let mut k = 0;
        for (j, &s) in simplex.iter().enumerate() {
            if j != skip {
                tri[k] = s;
                k += 1;
            }
        }
        let mut f = Face::new(points, tri);
        if f.height(&centroid) > 0.0 {
            tri.swap(1, 2);
            f = Face::new(points, tri);
        }
        add_face(&mut faces, &mut edges, f);
    }

    let in_simplex = |i: usize| simplex.contains(&i);
    for i in 0..points.len() {
        if in_simplex(i) {
            continue;
        }
        assign(&mut faces, 0..4, i, points, tol);
    }

    let mut queue: VecDeque<usize> = (0..4).collect();
    while let Some(fi) = queue.pop_front() {
        if !faces[fi].alive || faces[fi].conflicts.is_empty() {
            continue;
        }
        let face = &faces[fi];
        let apex = *face
            .conflicts
            .iter()
            .max_by(|&&a, &&b| {
                face.height(&points[a])
                    .total_cmp(&face.height(&points[b]))
                    .then(b.cmp(&a))
            })
            .unwrap();
        let p = points[apex];

        // Visible region: connected set of faces strictly below the apex.
        let mut visible = vec![fi];
        let mut marked: HashMap<usize, bool> = HashMap::new();
        marked.insert(fi, true);
        let mut stack = vec![fi];
        while let Some(f) = stack.pop() {
            let v = faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                let nb = edges[&(b, a)];
                if marked.contains_key(&nb) {
                    continue;
                }
                let vis = faces[nb].height(&p) > tol;
                marked.insert(nb, vis);
                if vis {
                    visible.push(nb);
                    stack.push(nb);
                }
            }
        }

        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &f in &visible {
            let v = faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                let nb = edges[&(b, a)];
                if !marked[&nb] {
                    horizon.push((a, b));
                }
            }
        }

        let mut orphans: Vec<usize> = Vec::new();
        for &f in &visible {
            faces[f].alive = false;
            orphans.append(&mut faces[f].conflicts);
            let v = faces[f].v;
            for e in 0..3 {
                edges.remove(&(v[e], v[(e + 1) % 3]));
            }
        }

        let first_new = faces.len();
        for &(a, b) in &horizon {
            let f = Face::new(points, [a, b, apex]);
            add_face(&mut faces, &mut edges, f);
        }
        let new_range = first_new..faces.len();
        orphans.sort_unstable();
        for i in orphans {
            if i != apex {
                assign(&mut faces, new_range.clone(), i, points, tol);
            }
        }
        queue.extend(new_range);
    }

    finish(points, &faces, &edges, tol)
}

fn add_face(faces: &mut Vec<Face>, edges: &mut HashMap<(usize, usize), usize>, f: Face) {
    let id = faces.len();
    for e in 0..3 {
        edges.insert((f.v[e], f.v[(e + 1) % 3]), id);
    }
    faces.push(f);
}

fn assign(
    faces: &mut [Face],
    range: std::ops::Range<usize>,
    i: usize,
    points: &[Vector],
    tol: f64,
) {
    let p = points[i];
    let mut best: Option<(usize, f64)> = None;
    for f in range {
        let h = faces[f].height(&p);
        if h > tol && best.is_none_or(|(_, bh)| h > bh) {
            best = Some((f, h));
        }
    }
    if let Some((f, _)) = best {
        faces[f].conflicts.push(i);
    }
}

fn initial_simplex(points: &[Vector], tol: f64) -> Result<[usize; 4]> {
    if points.is_empty() {
        return Err(Error::Degenerate {
            rank: 0,
            required: 3,
        });
    }
    let i0 = (0..points.len())
        .min_by(|&a, &b| points[a].lex_cmp(&points[b]))
        .unwrap();
    let p0 = points[i0];
    let i1 = argmax(points, |p| p.distance(&p0));
    let axis = points[i1] - p0;
    if axis.norm() <= tol {
        return Err(Error::Degenerate {
            rank: 0,
            required: 3,
        });
    }
    let dir = axis.scale(1.0 / axis.norm());
    let line_dist = |p: &Vector| {
        let w = *p - p0;
        (w - dir.scale(w.dot(&dir))).norm()
    };
    let i2 = argmax(points, line_dist);
    if line_dist(&points[i2]) <= tol {
        return Err(Error::Degenerate {
            rank: 1,
            required: 3,
        });
    }
    let n = axis.cross(&(points[i2] - p0));
    let n = n.scale(1.0 / n.norm());
    let i3 = argmax(points, |p| (*p - p0).dot(&n).abs());
    if (points[i3] - p0).dot(&n).abs() <= tol {
        return Err(Error::Degenerate {
            rank: 2,
            required: 3,
        });
    }
    Ok([i0, i1, i2, i3])
}

fn argmax(points: &[Vector], f: impl Fn(&Vector) -> f64) -> usize {
    let mut best = 0;
    let mut bv = f64::NEG_INFINITY;
    for (i, p) in points.iter().enumerate() {
        let v = f(p);
        if v > bv {
            bv = v;
            best = i;
        }
    }
    best
}

/// Merges coplanar triangles into maximal facets and hands the result to the
/// canonical assembler.
fn finish(
    points: &[Vector],
    faces: &[Face],
    edges: &HashMap<(usize, usize), usize>,
    tol: f64,
) -> Result<Polytope> {
    let alive: Vec<usize> = (0..faces.len()).filter(|&f| faces[f].alive).collect();
    let mut group = vec![usize::MAX; faces.len()];
    let mut planes: Vec<PlaneIncidence> = Vec::new();

    for &seed in &alive {
        if group[seed] != usize::MAX {
            continue;
        }
        let gid = planes.len();
        let (sn, so) = (faces[seed].normal, faces[seed].offset);
        let mut members = vec![seed];
        group[seed] = gid;
        let mut stack = vec![seed];
        while let Some(f) = stack.pop() {
            let v = faces[f].v;
            for e in 0..3 {
                let nb = edges[&(v[(e + 1) % 3], v[e])];
                if group[nb] != usize::MAX || faces[nb].normal.dot(&sn) <= 0.0 {
                    continue;
                }
                let coplanar = faces[nb]
                    .v
                    .iter()
                    .all(|&i| (sn.dot(&points[i]) - so).abs() <= tol);
                if coplanar {
                    group[nb] = gid;
                    members.push(nb);
                    stack.push(nb);
                }
            }
        }

        // Area-weighted normal of the merged facet.
        let mut n = Vector::zeros(3);
        let mut verts: Vec<usize> = Vec::new();
        for &f in &members {
            let [a, b, c] = faces[f].v;
            n += (points[b] - points[a]).cross(&(points[c] - points[a]));
            verts.extend_from_slice(&faces[f].v);
        }
        verts.sort_unstable();
        verts.dedup();
        let normal = UnitVector::new(n).unwrap_or_else(|_| UnitVector::new_unchecked(sn));
        let offset =
            verts.iter().map(|&i| normal.dot(&points[i])).sum::<f64>() / verts.len() as f64;
        planes.push(PlaneIncidence {
            normal,
            offset,
            members: verts,
        });
    }

    Polytope::assemble(3, points, planes, tol)
}
