//! Spherical polar sets and the checks built on them.

use rand::Rng;
use rayon::prelude::*;

use super::{arc_point, MembershipReport, SpherePoint, SphericalConvexBody};
use crate::error::{Error, Result};
use crate::geom::{Tolerance, UnitVector, Vector};
use crate::hull::{convex_hull, rank};
use crate::sampling::{cap_point, rng, sphere_point};

/// Generators of the polar cone of a body on S².
///
/// Rank-deficient cones have a lineality space, which contributes both of
/// its unit directions.
pub fn polar_rays(body: &SphericalConvexBody, tol: &Tolerance) -> Result<Vec<SpherePoint>> {
    let layout = PolarLayout::new(body, tol)?;
    Ok(match layout {
        PolarLayout::Cap { g, e1, e2 } => vec![g, e1, -e1, e2, -e2],
        PolarLayout::Lune { m, a_perp, b_perp } => vec![m, -m, a_perp, b_perp],
        PolarLayout::Polygon { rays } => rays,
    })
}

enum PolarLayout {
    /// Single generator direction `g`; `e1, e2` span its orthogonal plane.
    Cap {
        g: SpherePoint,
        e1: SpherePoint,
        e2: SpherePoint,
    },
    /// Generators on one great circle with normal `m`; the polar is the lune
    /// bounded by the great circles orthogonal to the two extreme generators.
    Lune {
        m: SpherePoint,
        a_perp: SpherePoint,
        b_perp: SpherePoint,
    },
    /// Pointed polar cone; rays in counter-clockwise order about its axis.
    Polygon { rays: Vec<SpherePoint> },
}

impl PolarLayout {
    fn new(body: &SphericalConvexBody, tol: &Tolerance) -> Result<Self> {
        if body.ambient_dim() != 3 {
            return Err(Error::UnsupportedDimension(body.ambient_dim()));
        }
        let Some(witness) = body.witness() else {
            return Err(Error::EmptyPolarInterior);
        };
        let axis = -*witness;
        let gens = body.generators();
        let vecs: Vec<Vector> = gens.iter().map(|g| **g).collect();
        match rank(&vecs, 1e-9) {
            1 => {
                let g = gens[0];
                let (e1, e2) = orthonormal_pair(&g);
                Ok(PolarLayout::Cap { g, e1, e2 })
            }
            2 => {
                // Extreme generators: the pair with the widest angle.
                let (mut a, mut b, mut best) = (gens[0], gens[0], -1.0);
                for i in 0..gens.len() {
                    for j in i + 1..gens.len() {
                        let ang = gens[i].angle_to(&gens[j]);
                        if ang > best {
                            (a, b, best) = (gens[i], gens[j], ang);
                        }
                    }
                }
                let m = UnitVector::new(a.cross(&b))?;
                let mut a_perp = UnitVector::new(m.cross(&a))?;
                if a_perp.dot(&b) < 0.0 {
                    a_perp = -a_perp;
                }
                let mut b_perp = UnitVector::new(m.cross(&b))?;
                if b_perp.dot(&a) < 0.0 {
                    b_perp = -b_perp;
                }
                Ok(PolarLayout::Lune { m, a_perp, b_perp })
            }
            _ => {
                let mut pts = vecs.clone();
                pts.push(Vector::zeros(3));
                let hull = convex_hull(&pts, 3, tol.hull_tol)?;
                let mut rays: Vec<SpherePoint> = hull
                    .facets()
                    .iter()
                    .filter(|f| f.offset.abs() <= tol.hull_tol)
                    .map(|f| -f.normal)
                    .collect();
                let (e1, e2) = orthonormal_pair(&axis);
                rays.sort_by(|p, q| {
                    let ap = p.dot(&e2).atan2(p.dot(&e1));
                    let aq = q.dot(&e2).atan2(q.dot(&e1));
                    ap.total_cmp(&aq)
                });
                Ok(PolarLayout::Polygon { rays })
            }
        }
    }
}

fn orthonormal_pair(u: &UnitVector) -> (UnitVector, UnitVector) {
    let k = (0..3)
        .min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
        .unwrap();
    let e1 = UnitVector::new(u.cross(&Vector::basis(3, k))).expect("nonparallel");
    let e2 = UnitVector::new(u.cross(&e1)).expect("orthogonal");
    (e1, e2)
}

/// Boundary of the polar set of a body on S² as a closed polyline
/// (the first point is not repeated). Each boundary arc is split into
/// `segments` pieces.
pub fn polar_boundary(
    body: &SphericalConvexBody,
    segments: usize,
    tol: &Tolerance,
) -> Result<Vec<SpherePoint>> {
    let segments = segments.max(1);
    let great = |p: &SpherePoint, q: &SpherePoint, steps: usize, out: &mut Vec<SpherePoint>| {
        // Half great circle from p through q (p ⟂ q) to −p.
        for s in 0..steps {
            let t = std::f64::consts::PI * s as f64 / steps as f64;
            out.push(UnitVector::new_unchecked(
                p.scale(t.cos()) + q.scale(t.sin()),
            ));
        }
    };
    let mut out = Vec::new();
    match PolarLayout::new(body, tol)? {
        PolarLayout::Cap { e1, e2, .. } => {
            great(&e1, &e2, 2 * segments, &mut out);
            great(&-e1, &-e2, 2 * segments, &mut out);
        }
        PolarLayout::Lune { m, a_perp, b_perp } => {
            great(&m, &a_perp, 2 * segments, &mut out);
            great(&-m, &b_perp, 2 * segments, &mut out);
        }
        PolarLayout::Polygon { rays } => {
            let k = rays.len();
            for i in 0..k {
                let (p, q) = (rays[i], rays[(i + 1) % k]);
                for s in 0..segments {
                    out.push(arc_point(&p, &q, s as f64 / segments as f64, tol.abs_tol)?);
                }
            }
        }
    }
    Ok(out)
}

fn probes(dim: usize, count: usize, seed: u64) -> Vec<SpherePoint> {
    let mut r = rng(seed);
    (0..count).map(|_| sphere_point(&mut r, dim)).collect()
}

fn fold(parts: Vec<(bool, bool, f64)>, band: f64, seed: u64) -> MembershipReport {
    let mut rep = MembershipReport::new(band, seed);
    for (a, b, m) in parts {
        rep.record(a, b, m);
    }
    rep
}

fn hemispherical_body(points: &[SpherePoint], tol: &Tolerance) -> Result<SphericalConvexBody> {
    let body = SphericalConvexBody::new(points, tol.abs_tol, tol.hull_tol)?;
    if !body.is_hemispherical() {
        return Err(Error::NotHemispherical);
    }
    Ok(body)
}

/// Compares the polar of `s-conv(points)`, evaluated as an LP over the hull,
/// with the intersection of the generator hemispheres `⋂ H(Pᵢ)`.
pub fn maehara_check(
    points: &[SpherePoint],
    probe_count: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<MembershipReport> {
    let body = hemispherical_body(points, tol)?;
    let qs = probes(body.ambient_dim(), probe_count, seed);
    let parts = qs
        .par_iter()
        .map(|q| {
            let lhs = body.polar_margin_lp(q)?;
            let caps = body.generators().iter().all(|p| p.dot(q) >= -tol.abs_tol);
            Ok((lhs >= -tol.abs_tol, caps, lhs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold(parts, tol.report_tol, seed))
}

/// Compares `s-conv(points)` (cone LP) with its twice-polar set. On S² the
/// first polar is enumerated explicitly; elsewhere it is reached through an
/// LP over the first polar.
pub fn double_polar_check(
    points: &[SpherePoint],
    probe_count: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<MembershipReport> {
    let body = hemispherical_body(points, tol)?;
    let d = body.ambient_dim();
    let rays = if d == 3 {
        Some(polar_rays(&body, tol)?)
    } else {
        None
    };
    let gens: Vec<Vector> = body.generators().iter().map(|g| **g).collect();
    let qs = probes(d, probe_count, seed);
    let parts = qs
        .par_iter()
        .map(|q| {
            let residual = body.cone_residual(q)?;
            let margin = match &rays {
                Some(rays) => rays.iter().map(|r| r.dot(q)).fold(f64::INFINITY, f64::min),
                None => super::lp::polar_min(&gens, q)?,
            };
            let twice_polar = margin >= -tol.abs_tol;
            // The LP margin is zero throughout the interior, so inside the
            // twice-polar set the cone residual measures the distance.
            let distance = if twice_polar { residual } else { margin };
            Ok((residual <= tol.report_tol, twice_polar, distance))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold(parts, tol.report_tol, seed))
}

/// For generator sets `A ⊆ B`, every probe in `B°` must lie in `A°`.
pub fn polar_antitone_check(
    a: &[SpherePoint],
    b: &[SpherePoint],
    probe_count: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<MembershipReport> {
    if !a
        .iter()
        .all(|p| b.iter().any(|q| p.distance(q) <= tol.hull_tol))
    {
        return Err(Error::NotNested);
    }
    let body_a = SphericalConvexBody::new(a, tol.abs_tol, tol.hull_tol)?;
    let body_b = SphericalConvexBody::new(b, tol.abs_tol, tol.hull_tol)?;
    let qs = probes(body_a.ambient_dim(), probe_count, seed);
    let parts = qs
        .par_iter()
        .map(|q| {
            let in_b = body_b.polar_contains(q, tol.abs_tol);
            let m_a = body_a.polar_margin_lp(q)?;
            let in_a = m_a >= -tol.abs_tol;
            // Only `in B° but not in A°` counts against the inclusion.
            Ok((in_b, in_b && in_a, m_a))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold(parts, tol.report_tol, seed))
}

/// `k` points in a random cap of angular radius between 10° and 80°.
pub fn random_hemispherical<R: Rng>(rng: &mut R, dim: usize, k: usize) -> Vec<SpherePoint> {
    let center = sphere_point(rng, dim);
    let radius = rng.random_range(10f64.to_radians()..80f64.to_radians());
    (0..k).map(|_| cap_point(rng, &center, radius)).collect()
}
