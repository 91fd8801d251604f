//! Central projection from the north pole and the map Ψ_N.

use rayon::prelude::*;
use serde::Serialize;

use super::{north, MembershipReport, SpherePoint};
use crate::error::{Error, Result};
use crate::geom::{PolarPoint, Tolerance, UnitVector, Vector};
use crate::mesh::sphere_mesh;
use crate::sampling::{box_point, rng};
use crate::wulff::{wulff_shape_on, GammaField};

/// `α_N(P) = (P₁/P_last, …)`, defined on the open upper hemisphere.
pub fn central_project(p: &SpherePoint, abs_tol: f64) -> Result<Vector> {
    let last = p.last();
    if !(last > abs_tol) {
        return Err(Error::ProjectionBlowUp(last));
    }
    Ok(p.truncate().scale(1.0 / last))
}

/// `(x, 1)/|(x, 1)|`: the inverse of [`central_project`] composed with the
/// embedding `x ↦ (x, 1)`.
pub fn central_unproject(x: &Vector) -> SpherePoint {
    let lifted = x.extend(1.0);
    UnitVector::new_unchecked(lifted.scale(1.0 / lifted.norm()))
}

/// `Ψ_N(P) = (N − (N·P)P)/√(1 − (N·P)²)`.
pub fn psi_n(p: &SpherePoint, abs_tol: f64) -> Result<SpherePoint> {
    let c = p.last();
    if c.abs() >= 1.0 - abs_tol {
        return Err(Error::AtPole(c));
    }
    // For unit P = (h·u, c) with |u| = 1 this is (−c·u, h).
    let horizontal = p.truncate();
    let h = horizontal.norm();
    Ok(UnitVector::new_unchecked(
        horizontal.scale(-c / h).extend(h),
    ))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PsiReport {
    pub points: usize,
    /// Points rejected at the poles.
    pub skipped: usize,
    /// `max |P·Ψ_N(P)|`.
    pub orthogonality: f64,
    /// Largest component of Ψ_N(P) outside span{N, P}.
    pub span_residual: f64,
    /// `min N·Ψ_N(P)`.
    pub min_north: f64,
    /// `max |Ψ_N(Ψ_N(P)) − P|` over points of the open upper hemisphere.
    pub involution: f64,
}

/// Measures the defining properties of Ψ_N on a point set.
pub fn psi_property_check(points: &[SpherePoint], abs_tol: f64) -> PsiReport {
    // (orthogonality, span residual, N·Ψ, involution residual) per point.
    type Row = (f64, f64, f64, Option<f64>);
    let rows: Vec<Option<Row>> = points
        .par_iter()
        .map(|p| {
            let q = psi_n(p, abs_tol).ok()?;
            let n = north(p.dim());
            let ortho = p.dot(&q).abs();
            let e2 = (**p - n.scale(p.last())).scale(1.0 / p.truncate().norm());
            let span = (*q - n.scale(q.dot(&n)) - e2.scale(q.dot(&e2))).norm();
            let inv = if p.last() > 0.0 {
                psi_n(&q, abs_tol).ok().map(|r| r.distance(p))
            } else {
                None
            };
            Some((ortho, span, q.dot(&n), inv))
        })
        .collect();
    let mut rep = PsiReport {
        min_north: f64::INFINITY,
        ..Default::default()
    };
    for row in rows {
        match row {
            None => rep.skipped += 1,
            Some((o, s, nq, inv)) => {
                rep.points += 1;
                rep.orthogonality = rep.orthogonality.max(o);
                rep.span_residual = rep.span_residual.max(s);
                rep.min_north = rep.min_north.min(nq);
                if let Some(i) = inv {
                    rep.involution = rep.involution.max(i);
                }
            }
        }
    }
    rep
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub samples: usize,
    pub max_discrepancy: f64,
    pub worst_index: usize,
}

/// Compares `inv` with the composite `α_N ∘ Ψ_N ∘ α_N⁻¹` (through the
/// embedding `x ↦ (x, 1)`) on each sample.
pub fn inversion_factorization_check(
    samples: &[PolarPoint],
    abs_tol: f64,
) -> Result<FactorizationReport> {
    let errs = samples
        .par_iter()
        .map(|p| {
            let direct = p.invert().to_cartesian();
            let via = central_project(
                &psi_n(&central_unproject(&p.to_cartesian()), abs_tol)?,
                abs_tol,
            )?;
            Ok(direct.distance(&via))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (worst_index, max_discrepancy) =
        errs.iter().enumerate().fold(
            (0, 0.0),
            |acc, (i, &e)| if e > acc.1 { (i, e) } else { acc },
        );
    Ok(FactorizationReport {
        samples: samples.len(),
        max_discrepancy,
        worst_index,
    })
}

/// Wulff-shape membership along the spherical route versus the half-space
/// kernel.
///
/// The generators are `Ψ_N` images of the unprojected graph points; a point
/// `x` belongs to the spherical-route body iff its unprojection lies in the
/// polar of that generator set. Probes are drawn from a box around the
/// shape, plus any `extra` probes; disagreements within `report_tol` of the
/// boundary are tallied separately.
pub fn spherical_wulff_route(
    gamma: &GammaField,
    level: usize,
    probe_count: usize,
    extra: &[Vector],
    seed: u64,
    tol: &Tolerance,
) -> Result<MembershipReport> {
    let dirs = sphere_mesh(gamma.n(), level)?;
    let values = gamma.eval_all(&dirs)?;
    let gens = dirs
        .iter()
        .zip(&values)
        .map(|(d, &g)| psi_n(&central_unproject(&d.scale(g)), tol.abs_tol))
        .collect::<Result<Vec<SpherePoint>>>()?;
    let w = wulff_shape_on(gamma, &dirs, tol)?;

    let half = 1.5 * w.max_vertex_norm();
    let mut r = rng(seed);
    let mut probes: Vec<Vector> = (0..probe_count)
        .map(|_| box_point(&mut r, gamma.ambient_dim(), half))
        .collect();
    probes.extend_from_slice(extra);

    let rows: Vec<(bool, bool, f64)> = probes
        .par_iter()
        .map(|x| {
            let u = central_unproject(x);
            let spherical = gens.iter().all(|g| u.dot(g) >= -tol.abs_tol);
            let margin = w.facet_margin(x);
            (spherical, margin <= tol.abs_tol, margin)
        })
        .collect();
    let mut rep = MembershipReport::new(tol.report_tol, seed);
    for (a, b, m) in rows {
        rep.record(a, b, m);
    }
    Ok(rep)
}
