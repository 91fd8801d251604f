//! The dual Wulff shape `D(W) = {z : z·v ≥ −1 for every vertex v of W}`.
//!
//! Under the embedding `x ↦ (x, 1)` the spherical polar condition
//! `(z, 1)·(v, 1) ≥ 0` is exactly `z·v ≥ −1`, so the spherical construction
//! reduces to a Euclidean half-space intersection.

use rayon::prelude::*;
use serde::Serialize;

use super::{central_unproject, MembershipReport, SpherePoint};
use crate::error::{Error, Result};
use crate::geom::{Tolerance, UnitVector};
use crate::hull::{halfspace_intersection, hausdorff_distance, HalfSpace, Polytope};
use crate::mesh::MeshKind;
use crate::sampling::{box_point, rng};
use crate::wulff::convex_integrand;

pub fn dual_wulff(w: &Polytope, tol: &Tolerance) -> Result<Polytope> {
    if !w.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let hs = w
        .vertices()
        .iter()
        .map(|v| {
            let r = v.norm();
            HalfSpace::new(UnitVector::new_unchecked(-v.scale(1.0 / r)), 1.0 / r)
        })
        .collect::<Result<Vec<_>>>()?;
    halfspace_intersection(&hs, w.dim(), tol.hull_tol)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualOracleReport {
    /// Hausdorff distance from `D(W)` to the reflected polar body `−W°`.
    pub oracle_distance: f64,
    /// Hausdorff distance from `D(D(W))` to `W`.
    pub involution_distance: f64,
}

/// Checks `D(W)` against `−W°` and `D(D(W))` against `W`.
pub fn dual_oracle_check(w: &Polytope, tol: &Tolerance) -> Result<DualOracleReport> {
    let d = dual_wulff(w, tol)?;
    let oracle = w.polar_body(tol.hull_tol)?.reflected();
    let dd = dual_wulff(&d, tol)?;
    Ok(DualOracleReport {
        oracle_distance: hausdorff_distance(&d, &oracle),
        involution_distance: hausdorff_distance(&dd, w),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DualIntegrandReport {
    pub directions: usize,
    /// `max |γ_{D(W)}(u) − 1/ρ_W(−u)|`.
    pub dual_deviation: f64,
    /// `max |γ_W(u) − 1/ρ_{D(W)}(−u)|`.
    pub primal_deviation: f64,
}

/// The integrand of `D(W)` is the inverted boundary of `W`, and vice versa.
pub fn dual_integrand_check(
    w: &Polytope,
    dirs: &[UnitVector],
    tol: &Tolerance,
) -> Result<DualIntegrandReport> {
    let d = dual_wulff(w, tol)?;
    let gd = convex_integrand(&d, dirs, MeshKind::Custom, tol)?;
    let gw = convex_integrand(w, dirs, MeshKind::Custom, tol)?;
    let devs = dirs
        .par_iter()
        .enumerate()
        .map(|(i, u)| {
            let a = (gd.values[i] - 1.0 / w.radial(&-*u)?).abs();
            let b = (gw.values[i] - 1.0 / d.radial(&-*u)?).abs();
            Ok((a, b))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    Ok(DualIntegrandReport {
        directions: dirs.len(),
        dual_deviation: devs.iter().map(|d| d.0).fold(0.0, f64::max),
        primal_deviation: devs.iter().map(|d| d.1).fold(0.0, f64::max),
    })
}

/// Membership in `D(W)` against the spherical polar of the unprojected
/// vertices of `W`, on random probes.
pub fn dual_membership_check(
    w: &Polytope,
    probe_count: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<MembershipReport> {
    let d = dual_wulff(w, tol)?;
    let gens: Vec<SpherePoint> = w.vertices().iter().map(central_unproject).collect();
    let half = 1.5 * d.max_vertex_norm();
    let mut r = rng(seed);
    let probes: Vec<_> = (0..probe_count)
        .map(|_| box_point(&mut r, w.dim(), half))
        .collect();
    let rows: Vec<(bool, bool, f64)> = probes
        .par_iter()
        .map(|z| {
            let u = central_unproject(z);
            let spherical = gens.iter().all(|g| g.dot(&u) >= -tol.abs_tol);
            let margin = d.facet_margin(z);
            (spherical, margin <= tol.abs_tol, margin)
        })
        .collect();
    let mut rep = MembershipReport::new(tol.report_tol, seed);
    for (a, b, m) in rows {
        rep.record(a, b, m);
    }
    Ok(rep)
}

/// Vertex/facet counts of a polytope and its dual Wulff shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopeDuality {
    pub vertices: usize,
    pub facets: usize,
    pub dual_vertices: usize,
    pub dual_facets: usize,
}

impl PolytopeDuality {
    /// Vertices and facets swap roles.
    pub fn swapped(&self) -> bool {
        self.vertices == self.dual_facets && self.facets == self.dual_vertices
    }
}

pub fn polytope_duality(w: &Polytope, tol: &Tolerance) -> Result<PolytopeDuality> {
    let d = dual_wulff(w, tol)?;
    Ok(PolytopeDuality {
        vertices: w.vertices().len(),
        facets: w.facets().len(),
        dual_vertices: d.vertices().len(),
        dual_facets: d.facets().len(),
    })
}
