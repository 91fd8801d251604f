//! Regularity and convexity detectors, their cross-check, and the pedal map.
//!
//! Neither smoothness nor strict convexity can be decided from finitely many
//! samples. Both detectors look for features that survive mesh refinement:
//! a kink keeps its slope jump, a flat spot keeps its diameter.

mod c1;
mod convexity;
mod pedal;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::Tolerance;
use crate::hull::{halfspace_intersection, HalfSpace};
use crate::mesh::{mesh_kind, sphere_mesh, MeshKind};
use crate::spherical::{dual_integrand_check, dual_wulff};
use crate::wulff::{convex_integrand, wulff_shape, GammaField, IntegrandSamples};

pub use c1::{c1_report, C1Report, Kink};
pub use convexity::{strict_convexity_report, FlatSpot, FlatSpotReport};
pub use pedal::{pedal, pedal_integrand_deviation, PedalPoint};

/// Detector thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalysisConfig {
    /// Minimum ratio of consecutive-level slope jumps for a kink to persist.
    pub kink_persistence: f64,
    /// Minimum ratio of consecutive-level diameters for a flat spot to persist.
    pub flat_persistence: f64,
    /// Flat-spot threshold as a multiple of mesh spacing times body radius.
    pub flat_factor: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            kink_persistence: 0.75,
            flat_persistence: 0.9,
            flat_factor: 10.0,
        }
    }
}

/// Outcome of one detector. A decision needs at least two level pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Detection {
    /// Some feature persists over every level pair.
    Present,
    /// No feature persists over every level pair.
    Absent,
    /// Fewer than three levels.
    Undetermined,
}

impl Detection {
    fn from_counts(levels: usize, persistent: usize) -> Self {
        if levels < 3 {
            Detection::Undetermined
        } else if persistent > 0 {
            Detection::Present
        } else {
            Detection::Absent
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    /// Both detectors are determined and disagree.
    Inconsistent,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub levels: Vec<usize>,
    pub tolerances: Tolerance,
    pub config: AnalysisConfig,
    pub seed: Option<u64>,
    /// Kinks of the field the body was built from.
    pub input_kinks: C1Report,
    /// Kinks of the convex integrand of the body.
    pub integrand_kinks: C1Report,
    pub flat_spots: FlatSpotReport,
    pub verdict: Verdict,
    /// The input field is kinked while the body is strictly convex.
    pub non_smooth_admissible: bool,
}

/// Levels used when none are given: direction counts on S¹, subdivision
/// levels on S².
pub fn default_levels(n: usize) -> Vec<usize> {
    match n {
        1 => vec![128, 256, 512],
        _ => vec![3, 4, 5],
    }
}

fn samples_of(gamma: &GammaField, level: usize) -> Result<IntegrandSamples> {
    let directions = sphere_mesh(gamma.n(), level)?;
    let values = gamma.eval_all(&directions)?;
    Ok(IntegrandSamples {
        directions,
        values,
        mesh: mesh_kind(gamma.n(), level),
        provenance: "input field".into(),
    })
}

/// Runs both detectors on `W_γ` and its integrand and compares them.
pub fn regularity_crosscheck(
    gamma: &GammaField,
    levels: &[usize],
    tol: &Tolerance,
    cfg: &AnalysisConfig,
) -> Result<AnalysisReport> {
    let n = gamma.n();
    let kinds: Vec<MeshKind> = levels.iter().map(|&l| mesh_kind(n, l)).collect();
    let built = levels
        .par_iter()
        .map(|&l| {
            let dirs = sphere_mesh(n, l)?;
            let w = wulff_shape(gamma, l, tol)?;
            let gw = convex_integrand(&w, &dirs, mesh_kind(n, l), tol)?;
            Ok((w, gw, samples_of(gamma, l)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut bodies = Vec::new();
    let mut integrands = Vec::new();
    let mut inputs = Vec::new();
    for (w, gw, s) in built {
        bodies.push(w);
        integrands.push(gw);
        inputs.push(s);
    }
    let input_kinks = c1_report(&inputs, tol.report_tol, cfg)?;
    let integrand_kinks = c1_report(&integrands, tol.report_tol, cfg)?;
    let flat_spots = strict_convexity_report(&bodies, &kinds, cfg)?;

    let verdict = match (integrand_kinks.detection, flat_spots.detection) {
        (Detection::Undetermined, _) | (_, Detection::Undetermined) => Verdict::Inconclusive,
        (k, f) if k == f => Verdict::Consistent,
        _ => Verdict::Inconsistent,
    };
    let non_smooth_admissible = input_kinks.detection == Detection::Present
        && integrand_kinks.is_smooth()
        && flat_spots.is_strictly_convex();
    Ok(AnalysisReport {
        n,
        levels: levels.to_vec(),
        tolerances: *tol,
        config: *cfg,
        seed: None,
        input_kinks,
        integrand_kinks,
        flat_spots,
        verdict,
        non_smooth_admissible,
    })
}

/// Smooth-field consequences: a strictly convex body that is not a polytope,
/// whose dual Wulff shape has a smooth integrand matching the inverted
/// boundary of the body.
#[derive(Clone, Debug, Serialize)]
pub struct SmoothFieldEntry {
    pub name: String,
    pub strictly_convex: bool,
    /// Strictly convex and the facet count grows with every refinement.
    pub not_polytope: bool,
    pub dual_smooth: bool,
    /// Largest deviation reported by [`dual_integrand_check`] over all levels.
    pub dual_deviation: f64,
    pub flat_spots: FlatSpotReport,
    pub dual_kinks: C1Report,
    pub passed: bool,
}

pub fn smooth_field_suite(
    fields: &[(String, GammaField)],
    levels: &[usize],
    tol: &Tolerance,
    cfg: &AnalysisConfig,
) -> Result<Vec<SmoothFieldEntry>> {
    fields
        .iter()
        .map(|(name, g)| smooth_field_entry(name, g, levels, tol, cfg))
        .collect()
}

fn smooth_field_entry(
    name: &str,
    gamma: &GammaField,
    levels: &[usize],
    tol: &Tolerance,
    cfg: &AnalysisConfig,
) -> Result<SmoothFieldEntry> {
    let n = gamma.n();
    let kinds: Vec<MeshKind> = levels.iter().map(|&l| mesh_kind(n, l)).collect();
    let built = levels
        .par_iter()
        .map(|&l| {
            let dirs = sphere_mesh(n, l)?;
            let w = wulff_shape(gamma, l, tol)?;
            let d = dual_wulff(&w, tol)?;
            let gd = convex_integrand(&d, &dirs, mesh_kind(n, l), tol)?;
            let dev = dual_integrand_check(&w, &dirs, tol)?;
            Ok((w, gd, dev.dual_deviation.max(dev.primal_deviation)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut bodies = Vec::new();
    let mut dual_samples = Vec::new();
    let mut dual_deviation: f64 = 0.0;
    for (w, gd, dev) in built {
        bodies.push(w);
        dual_samples.push(gd);
        dual_deviation = dual_deviation.max(dev);
    }
    let flat_spots = strict_convexity_report(&bodies, &kinds, cfg)?;
    let dual_kinks = c1_report(&dual_samples, tol.report_tol, cfg)?;
    let strictly_convex = flat_spots.is_strictly_convex();
    let not_polytope = strictly_convex && flat_spots.facet_counts.windows(2).all(|w| w[1] > w[0]);
    let dual_smooth = dual_kinks.is_smooth();
    Ok(SmoothFieldEntry {
        name: name.to_string(),
        strictly_convex,
        not_polytope,
        dual_smooth,
        dual_deviation,
        passed: strictly_convex && not_polytope && dual_smooth && dual_deviation <= tol.report_tol,
        flat_spots,
        dual_kinks,
    })
}

/// Support field of a random polytope whose facet normals are drawn from a
/// coarse mesh (8 directions on S¹, level 1 on S²) with offsets in
/// `[0.7, 1.3]`. The coarse mesh is contained in every default level.
pub fn random_polytope_field<R: Rng>(n: usize, rng: &mut R, tol: &Tolerance) -> Result<GammaField> {
    let (coarse, picks) = match n {
        1 => (sphere_mesh(1, 8)?, 4..=6),
        2 => (sphere_mesh(2, 1)?, 8..=14),
        _ => return Err(Error::UnsupportedDimension(n)),
    };
    loop {
        let k = rng.random_range(picks.clone());
        let chosen = sample(rng, coarse.len(), k);
        let hs = chosen
            .iter()
            .map(|i| HalfSpace::new(coarse[i], rng.random_range(0.7..1.3)))
            .collect::<Result<Vec<_>>>()?;
        match halfspace_intersection(&hs, n + 1, tol.hull_tol) {
            Ok(w) => return GammaField::polytope_support(&w, tol.abs_tol),
            Err(Error::Unbounded { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests;
