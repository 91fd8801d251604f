//! Refinement-persistent flat spots of Wulff polytopes.
//!
//! Facets are grouped into families by the coarse facet normal they fall
//! near. On a curved boundary every family shrinks with the mesh; a flat
//! piece of the boundary keeps one facet of fixed diameter in its family.

use rayon::prelude::*;
use serde::Serialize;

use super::{AnalysisConfig, Detection};
use crate::error::{Error, Result};
use crate::geom::UnitVector;
use crate::hull::Polytope;
use crate::mesh::MeshKind;

#[derive(Clone, Debug, Serialize)]
pub struct FlatSpot {
    pub normal: UnitVector,
    /// Largest facet diameter in the family at each level, coarse first.
    pub diameters: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatSpotReport {
    pub levels: Vec<MeshKind>,
    /// Diameter a family must exceed at the finest level.
    pub threshold: f64,
    /// Largest facet diameter at each level.
    pub max_diameter: Vec<f64>,
    pub facet_counts: Vec<usize>,
    pub flats: Vec<FlatSpot>,
    pub tentative: usize,
    pub detection: Detection,
}

impl FlatSpotReport {
    pub fn is_strictly_convex(&self) -> bool {
        self.detection == Detection::Absent
    }
}

/// Flat-spot evidence for one body built at two or more increasing levels.
pub fn strict_convexity_report(
    bodies: &[Polytope],
    levels: &[MeshKind],
    cfg: &AnalysisConfig,
) -> Result<FlatSpotReport> {
    if bodies.len() != levels.len() || bodies.len() < 2 {
        return Err(Error::MeshMismatch(format!(
            "{} bodies for {} levels (need at least two)",
            bodies.len(),
            levels.len()
        )));
    }
    let spacing: Vec<f64> = levels
        .iter()
        .map(|l| {
            l.spacing()
                .ok_or_else(|| Error::MeshMismatch(format!("{l:?} has no spacing")))
        })
        .collect::<Result<_>>()?;
    let finest = bodies.last().unwrap();
    let threshold = cfg.flat_factor * spacing.last().unwrap() * finest.max_vertex_norm();

    let diameters: Vec<Vec<f64>> = bodies
        .iter()
        .map(|b| {
            (0..b.facets().len())
                .into_par_iter()
                .map(|f| b.facet_diameter(f))
                .collect()
        })
        .collect();
    let cos_r = (spacing[0] * (1.0 + 1e-9)).cos();

    let families: Vec<Vec<f64>> = bodies[0]
        .facets()
        .par_iter()
        .map(|f| {
            bodies
                .iter()
                .zip(&diameters)
                .map(|(b, d)| {
                    b.facets()
                        .iter()
                        .zip(d)
                        .filter(|(g, _)| g.normal.dot(&f.normal) >= cos_r)
                        .map(|(_, &x)| x)
                        .fold(0.0, f64::max)
                })
                .collect()
        })
        .collect();

    let mut flats = Vec::new();
    let mut tentative = 0;
    for (f, diams) in bodies[0].facets().iter().zip(families) {
        if *diams.last().unwrap() <= threshold {
            continue;
        }
        let held = diams
            .windows(2)
            .filter(|w| w[1] >= cfg.flat_persistence * w[0])
            .count();
        if held == diams.len() - 1 {
            flats.push(FlatSpot {
                normal: f.normal,
                diameters: diams,
            });
        } else if held > 0 {
            tentative += 1;
        }
    }
    flats.sort_by(|a, b| {
        b.diameters
            .last()
            .unwrap()
            .total_cmp(a.diameters.last().unwrap())
    });
    Ok(FlatSpotReport {
        levels: levels.to_vec(),
        threshold,
        max_diameter: diameters
            .iter()
            .map(|d| d.iter().copied().fold(0.0, f64::max))
            .collect(),
        facet_counts: bodies.iter().map(|b| b.facets().len()).collect(),
        detection: Detection::from_counts(levels.len(), flats.len()),
        flats,
        tentative,
    })
}
