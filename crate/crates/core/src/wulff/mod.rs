//! Wulff shapes, Γ_γ hulls and convex integrands.
//!
//! `W_γ = ⋂ {x : x·θ ≤ γ(θ)}` is realized over a direction mesh. The convex
//! integrand of a body is obtained by inverting points of the polar plot,
//! taking their hull, and inverting the hull boundary back.

mod gamma;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{PolarPoint, Tolerance, UnitVector, Vector};
use crate::hull::{convex_hull, halfspace_intersection, hausdorff_distance, HalfSpace, Polytope};
use crate::mesh::{mesh_kind, sphere_mesh, MeshKind};

pub use gamma::{GammaField, Preset, SampleTable, MONOMIALS};

/// Values of a convex integrand on a direction mesh.
#[derive(Clone, Debug, Serialize)]
pub struct IntegrandSamples {
    pub directions: Vec<UnitVector>,
    pub values: Vec<f64>,
    pub mesh: MeshKind,
    /// Free-form description of the body the samples came from.
    pub provenance: String,
}

impl IntegrandSamples {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Interpolating field through the samples.
    pub fn to_field(&self, tol: &Tolerance) -> Result<GammaField> {
        let n = self.directions.first().map_or(0, |d| d.dim() - 1);
        let dirs: Vec<Vector> = self.directions.iter().map(|d| **d).collect();
        GammaField::sampled(n, &dirs, &self.values, tol.hull_tol, tol.abs_tol)
    }
}

/// Half-spaces `{x·θ ≤ γ(θ)}` for each direction.
pub fn wulff_halfspaces(gamma: &GammaField, dirs: &[UnitVector]) -> Result<Vec<HalfSpace>> {
    dirs.par_iter()
        .map(|d| HalfSpace::new(*d, gamma.eval(d)?))
        .collect()
}

/// `W_γ` sampled on `sphere_mesh(n, level)`.
pub fn wulff_shape(gamma: &GammaField, level: usize, tol: &Tolerance) -> Result<Polytope> {
    let dirs = sphere_mesh(gamma.n(), level)?;
    wulff_shape_on(gamma, &dirs, tol)
}

pub fn wulff_shape_on(
    gamma: &GammaField,
    dirs: &[UnitVector],
    tol: &Tolerance,
) -> Result<Polytope> {
    let hs = wulff_halfspaces(gamma, dirs)?;
    halfspace_intersection(&hs, gamma.ambient_dim(), tol.hull_tol)
}

/// Cartesian form of `inv(θ, γ(θ))`, i.e. `−θ/γ(θ)`, for each direction.
pub fn inverted_graph(gamma: &GammaField, dirs: &[UnitVector]) -> Result<Vec<Vector>> {
    dirs.par_iter()
        .map(|d| Ok(PolarPoint::new(*d, gamma.eval(d)?)?.invert().to_cartesian()))
        .collect()
}

/// Convex hull of the inverted graph of γ over `sphere_mesh(n, level)`;
/// its boundary is Γ_γ.
pub fn gamma_hull(gamma: &GammaField, level: usize, tol: &Tolerance) -> Result<Polytope> {
    let dirs = sphere_mesh(gamma.n(), level)?;
    gamma_hull_on(gamma, &dirs, tol)
}

pub fn gamma_hull_on(gamma: &GammaField, dirs: &[UnitVector], tol: &Tolerance) -> Result<Polytope> {
    let pts = inverted_graph(gamma, dirs)?;
    convex_hull(&pts, gamma.ambient_dim(), tol.hull_tol)
}

/// The convex integrand γ_W on the given directions.
///
/// The facets of `W` supply a polar plot `(normal, offset)` of an admissible
/// γ on finitely many directions; its inverted points span the Γ-hull, and
/// `γ_W(θ) = 1/ρ(−θ)` where ρ is the radial function of that hull.
pub fn convex_integrand(
    w: &Polytope,
    dirs: &[UnitVector],
    mesh: MeshKind,
    tol: &Tolerance,
) -> Result<IntegrandSamples> {
    if !w.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let hull = integrand_hull(w, tol.hull_tol)?;
    let values = dirs
        .par_iter()
        .map(|d| {
            if d.dim() != w.dim() {
                return Err(Error::DimensionMismatch {
                    expected: w.dim(),
                    found: d.dim(),
                });
            }
            Ok(1.0 / hull.radial(&-*d)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(IntegrandSamples {
        directions: dirs.to_vec(),
        values,
        mesh,
        provenance: format!(
            "polytope with {} vertices and {} facets",
            w.vertices().len(),
            w.facets().len()
        ),
    })
}

/// [`convex_integrand`] on `sphere_mesh(dim − 1, level)`.
pub fn convex_integrand_at(
    w: &Polytope,
    level: usize,
    tol: &Tolerance,
) -> Result<IntegrandSamples> {
    let n = w.dim() - 1;
    convex_integrand(w, &sphere_mesh(n, level)?, mesh_kind(n, level), tol)
}

/// Hull of the inverted facet polar plot `{−n_j / c_j}`.
fn integrand_hull(w: &Polytope, hull_tol: f64) -> Result<Polytope> {
    let pts: Vec<Vector> = w
        .facets()
        .iter()
        .map(|f| Ok(PolarPoint::new(f.normal, f.offset)?.invert().to_cartesian()))
        .collect::<Result<_>>()?;
    convex_hull(&pts, w.dim(), hull_tol)
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub direction: UnitVector,
    /// Distance of the inverted graph point below the hull boundary.
    pub depth: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrandTest {
    pub is_integrand: bool,
    /// Number of mesh directions whose inverted point is interior beyond tol.
    pub interior_count: usize,
    pub worst: Witness,
}

/// Checks that every inverted graph point lies on the boundary of the Γ-hull.
pub fn is_convex_integrand(
    gamma: &GammaField,
    level: usize,
    tol: f64,
    tols: &Tolerance,
) -> Result<IntegrandTest> {
    let dirs = sphere_mesh(gamma.n(), level)?;
    is_convex_integrand_on(gamma, &dirs, tol, tols)
}

pub fn is_convex_integrand_on(
    gamma: &GammaField,
    dirs: &[UnitVector],
    tol: f64,
    tols: &Tolerance,
) -> Result<IntegrandTest> {
    let pts = inverted_graph(gamma, dirs)?;
    let hull = convex_hull(&pts, gamma.ambient_dim(), tols.hull_tol)?;
    let depths: Vec<f64> = pts.par_iter().map(|p| -hull.facet_margin(p)).collect();
    let (i, depth) = depths
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc },
        );
    let interior_count = depths.iter().filter(|&&d| d > tol).count();
    Ok(IntegrandTest {
        is_integrand: interior_count == 0,
        interior_count,
        worst: Witness {
            direction: dirs[i],
            depth,
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalityReport {
    pub holds: bool,
    /// `max_θ (γ_W(θ) − γ(θ))`; at most report_tol when minimality holds.
    pub max_violation: f64,
    /// `max_θ (γ(θ) − γ_W(θ))`.
    pub max_gap: f64,
    pub max_gap_direction: UnitVector,
    /// Directions where `|γ_W − γ| ≤ report_tol`.
    pub equality_count: usize,
    pub total: usize,
    #[serde(skip)]
    pub gamma: Vec<f64>,
    #[serde(skip)]
    pub integrand: IntegrandSamples,
}

impl MinimalityReport {
    /// Mesh directions where the inequality is strict beyond report_tol.
    pub fn strict_directions(&self, report_tol: f64) -> Vec<UnitVector> {
        self.integrand
            .directions
            .iter()
            .zip(self.gamma.iter().zip(&self.integrand.values))
            .filter(|(_, (g, gw))| *g - *gw > report_tol)
            .map(|(d, _)| *d)
            .collect()
    }
}

/// `γ_W ≤ γ` with `W = W_γ`, on the mesh used to build `W`.
pub fn minimality_check(
    gamma: &GammaField,
    level: usize,
    tol: &Tolerance,
) -> Result<MinimalityReport> {
    let n = gamma.n();
    let dirs = sphere_mesh(n, level)?;
    let w = wulff_shape_on(gamma, &dirs, tol)?;
    let integrand = convex_integrand(&w, &dirs, mesh_kind(n, level), tol)?;
    let g = gamma.eval_all(&dirs)?;
    let mut max_violation = f64::NEG_INFINITY;
    let mut max_gap = f64::NEG_INFINITY;
    let mut gap_at = 0;
    let mut equality_count = 0;
    for (i, (gv, wv)) in g.iter().zip(&integrand.values).enumerate() {
        max_violation = max_violation.max(wv - gv);
        if gv - wv > max_gap {
            max_gap = gv - wv;
            gap_at = i;
        }
        if (gv - wv).abs() <= tol.report_tol {
            equality_count += 1;
        }
    }
    Ok(MinimalityReport {
        holds: max_violation <= tol.report_tol,
        max_violation,
        max_gap,
        max_gap_direction: dirs[gap_at],
        equality_count,
        total: dirs.len(),
        gamma: g,
        integrand,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SameWulffReport {
    pub hull_distance: f64,
    pub wulff_distance: f64,
    pub hulls_equal: bool,
    pub wulffs_equal: bool,
    /// Set when the two sides of the equivalence disagree.
    pub inconsistent: bool,
}

/// Compares `Γ_{γ₁}` with `Γ_{γ₂}` and `W_{γ₁}` with `W_{γ₂}`.
pub fn same_wulff_check(
    g1: &GammaField,
    g2: &GammaField,
    level: usize,
    tol: &Tolerance,
) -> Result<SameWulffReport> {
    if g1.n() != g2.n() {
        return Err(Error::DimensionMismatch {
            expected: g1.n() + 1,
            found: g2.n() + 1,
        });
    }
    let dirs = sphere_mesh(g1.n(), level)?;
    let hull_distance = hausdorff_distance(
        &gamma_hull_on(g1, &dirs, tol)?,
        &gamma_hull_on(g2, &dirs, tol)?,
    );
    let wulff_distance = hausdorff_distance(
        &wulff_shape_on(g1, &dirs, tol)?,
        &wulff_shape_on(g2, &dirs, tol)?,
    );
    let hulls_equal = hull_distance <= tol.report_tol;
    let wulffs_equal = wulff_distance <= tol.report_tol;
    Ok(SameWulffReport {
        hull_distance,
        wulff_distance,
        hulls_equal,
        wulffs_equal,
        inconsistent: hulls_equal != wulffs_equal,
    })
}
