//! Pedal points of a polytope boundary, facet by facet.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Tolerance, UnitVector, Vector};
use crate::hull::Polytope;
use crate::mesh::MeshKind;
use crate::wulff::convex_integrand;

#[derive(Clone, Debug, Serialize)]
pub struct PedalPoint {
    /// Normal of the facet plane.
    pub direction: UnitVector,
    /// Foot of the perpendicular from the base point to that plane.
    pub point: Vector,
}

/// Feet of the perpendiculars from an interior point `p` to the facet planes.
pub fn pedal(w: &Polytope, p: &Vector, tol: &Tolerance) -> Result<Vec<PedalPoint>> {
    if p.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: p.dim(),
        });
    }
    if w.facet_margin(p) >= -tol.abs_tol {
        return Err(Error::PointOutside);
    }
    Ok(w.facets()
        .iter()
        .map(|f| PedalPoint {
            direction: f.normal,
            point: *p + f.normal.scale(f.offset - f.normal.dot(p)),
        })
        .collect())
}

/// `max |pedal radius − γ_W(normal)|` over the facets, for the pedal taken
/// from the origin.
pub fn pedal_integrand_deviation(w: &Polytope, tol: &Tolerance) -> Result<f64> {
    let feet = pedal(w, &Vector::zeros(w.dim()), tol)?;
    let normals: Vec<UnitVector> = feet.iter().map(|f| f.direction).collect();
    let gw = convex_integrand(w, &normals, MeshKind::Custom, tol)?;
    Ok(feet
        .iter()
        .zip(&gw.values)
        .map(|(f, g)| (f.point.norm() - g).abs())
        .fold(0.0, f64::max))
}
