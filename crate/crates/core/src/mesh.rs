//! Deterministic direction meshes on S¹ and S².

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{UnitVector, Vector};

/// Which family a direction set was drawn from. Analysis needs the mesh
/// connectivity, so samples remember where they came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshKind {
    /// `count` directions at angles 2πk/count on S¹.
    Circle { count: usize },
    /// Vertices of the icosphere after `level` subdivisions.
    Icosphere { level: usize },
    /// Anything else (facet normals, user tables).
    Custom,
}

impl MeshKind {
    pub fn sphere_dim(&self) -> Option<usize> {
        match self {
            MeshKind::Circle { .. } => Some(1),
            MeshKind::Icosphere { .. } => Some(2),
            MeshKind::Custom => None,
        }
    }

    /// Largest angular gap between neighbouring mesh directions.
    pub fn spacing(&self) -> Option<f64> {
        match *self {
            MeshKind::Circle { count } => Some(2.0 * PI / count as f64),
            MeshKind::Icosphere { level } => Icosphere::new(level).ok().map(|m| m.max_edge_angle()),
            MeshKind::Custom => None,
        }
    }
}

/// Discretizes Sⁿ for n ∈ {1, 2}.
///
/// For n = 1, `level` is the number of directions; for n = 2 it is the number
/// of icosahedron subdivisions (level 1 gives 42 vertices).
pub fn sphere_mesh(n: usize, level: usize) -> Result<Vec<UnitVector>> {
    match n {
        1 => circle_mesh(level),
        2 => Ok(Icosphere::new(level)?.vertices),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// The mesh kind produced by [`sphere_mesh`] for the same arguments.
pub fn mesh_kind(n: usize, level: usize) -> MeshKind {
    match n {
        1 => MeshKind::Circle { count: level },
        _ => MeshKind::Icosphere { level },
    }
}

pub fn circle_mesh(count: usize) -> Result<Vec<UnitVector>> {
    if count == 0 {
        return Err(Error::InvalidLevel(count));
    }
    Ok((0..count)
        .map(|k| UnitVector::from_angle(2.0 * PI * k as f64 / count as f64))
        .collect())
}

/// A subdivided icosahedron projected onto the unit sphere.
#[derive(Clone, Debug)]
pub struct Icosphere {
    pub level: usize,
    pub vertices: Vec<UnitVector>,
    /// Outward-oriented (counter-clockwise seen from outside) triangles.
    pub triangles: Vec<[usize; 3]>,
}

impl Icosphere {
    /// Canonical icosahedron with vertices at both poles of the last axis,
    /// subdivided `level` times. Coordinate axes appear as vertices from level 2 on.
    pub fn new(level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidLevel(level));
        }
        let (mut verts, mut tris) = base_icosahedron();
        for _ in 0..level {
            let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
            let mut next = Vec::with_capacity(tris.len() * 4);
            for &[a, b, c] in &tris {
                let ab = midpoint(&mut verts, &mut cache, a, b);
                let bc = midpoint(&mut verts, &mut cache, b, c);
                let ca = midpoint(&mut verts, &mut cache, c, a);
                next.push([a, ab, ca]);
                next.push([b, bc, ab]);
                next.push([c, ca, bc]);
                next.push([ab, bc, ca]);
            }
            tris = next;
        }
        Ok(Icosphere {
            level,
            vertices: verts.into_iter().map(UnitVector::new_unchecked).collect(),
            triangles: tris,
        })
    }

    /// Neighbouring vertex indices, sorted.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.vertices.len()];
        for t in &self.triangles {
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                nb[a].push(b);
                nb[b].push(a);
            }
        }
        for list in &mut nb {
            list.sort_unstable();
            list.dedup();
        }
        nb
    }

    /// Triangles incident to each vertex.
    pub fn incident_triangles(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (ti, t) in self.triangles.iter().enumerate() {
            for &v in t {
                inc[v].push(ti);
            }
        }
        inc
    }

    pub fn max_edge_angle(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| (0..3).map(move |i| (t[i], t[(i + 1) % 3])))
            .map(|(a, b)| self.vertices[a].angle_to(&self.vertices[b]))
            .fold(0.0, f64::max)
    }
}

fn base_icosahedron() -> (Vec<Vector>, Vec<[usize; 3]>) {
    let z = 1.0 / 5f64.sqrt();
    let r = 2.0 / 5f64.sqrt();
    let mut v = vec![Vector::new(&[0.0, 0.0, 1.0])];
    for k in 0..5 {
        let a = 2.0 * PI * k as f64 / 5.0;
        v.push(Vector::new(&[r * a.cos(), r * a.sin(), z]));
    }
    for k in 0..5 {
        let a = 2.0 * PI * k as f64 / 5.0 + PI / 5.0;
        v.push(Vector::new(&[r * a.cos(), r * a.sin(), -z]));
    }
    v.push(Vector::new(&[0.0, 0.0, -1.0]));

    let up = |k: usize| 1 + k % 5;
    let lo = |k: usize| 6 + k % 5;
    let mut t = Vec::with_capacity(20);
    for k in 0..5 {
        t.push([0, up(k), up(k + 1)]);
        t.push([up(k), lo(k), up(k + 1)]);
        t.push([up(k + 1), lo(k), lo(k + 1)]);
        t.push([11, lo(k + 1), lo(k)]);
    }
    for tri in &mut t {
        let [a, b, c] = *tri;
        let n = (v[b] - v[a]).cross(&(v[c] - v[a]));
        if n.dot(&v[a]) < 0.0 {
            tri.swap(1, 2);
        }
    }
    (v, t)
}

fn midpoint(
    verts: &mut Vec<Vector>,
    cache: &mut HashMap<(usize, usize), usize>,
    a: usize,
    b: usize,
) -> usize {
    let key = (a.min(b), a.max(b));
    if let Some(&i) = cache.get(&key) {
        return i;
    }
    let m = verts[a] + verts[b];
    verts.push(m.scale(1.0 / m.norm()));
    cache.insert(key, verts.len() - 1);
    verts.len() - 1
}
