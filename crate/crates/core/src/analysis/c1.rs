//! Refinement-persistent kinks of sampled integrands.
//!
//! Each sample gets a local slope-jump measure `J` whose stencil has radius
//! about one mesh spacing. Away from kinks `J` decays linearly with the
//! spacing; across a kink it tends to the size of the slope discontinuity.
//! Levels are compared on fixed windows centred on the coarsest samples.

use rayon::prelude::*;
use serde::Serialize;

use super::{AnalysisConfig, Detection};
use crate::error::{Error, Result};
use crate::geom::{UnitVector, Vector};
use crate::mesh::{circle_mesh, Icosphere, MeshKind};
use crate::wulff::IntegrandSamples;

#[derive(Clone, Debug, Serialize)]
pub struct Kink {
    pub direction: UnitVector,
    /// Window maximum of the slope-jump measure at each level, coarse first.
    pub gaps: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct C1Report {
    pub levels: Vec<MeshKind>,
    /// Largest slope-jump measure over the whole mesh at each level.
    pub max_gap: Vec<f64>,
    /// Persistent candidates, largest finest-level gap first.
    pub kinks: Vec<Kink>,
    /// Windows that persist over some level pairs but not all of them.
    pub tentative: usize,
    pub detection: Detection,
}

impl C1Report {
    pub fn is_smooth(&self) -> bool {
        self.detection == Detection::Absent
    }

    /// Strongest candidate of each group of candidates closer than `radius`.
    pub fn cluster_peaks(&self, radius: f64) -> Vec<&Kink> {
        let mut peaks: Vec<&Kink> = Vec::new();
        for k in &self.kinks {
            if peaks
                .iter()
                .all(|p| p.direction.angle_to(&k.direction) > radius)
            {
                peaks.push(k);
            }
        }
        peaks
    }
}

/// Kink evidence for one field sampled at two or more increasing mesh levels.
pub fn c1_report(
    samples: &[IntegrandSamples],
    threshold: f64,
    cfg: &AnalysisConfig,
) -> Result<C1Report> {
    let levels = check_meshes(samples)?;
    let jumps: Vec<Vec<f64>> = samples.iter().map(slope_jumps).collect::<Result<_>>()?;
    let coarse = &samples[0].directions;
    let radius = levels[0].spacing().expect("mesh kind checked") * (1.0 + 1e-9);
    let cos_r = radius.cos();

    let windows: Vec<Vec<f64>> = coarse
        .par_iter()
        .map(|c| {
            samples
                .iter()
                .zip(&jumps)
                .map(|(s, j)| {
                    s.directions
                        .iter()
                        .zip(j)
                        .filter(|(d, _)| d.dot(c) >= cos_r)
                        .map(|(_, &v)| v)
                        .fold(0.0, f64::max)
                })
                .collect()
        })
        .collect();

    let mut kinks = Vec::new();
    let mut tentative = 0;
    for (c, gaps) in coarse.iter().zip(windows) {
        if gaps[0] <= threshold {
            continue;
        }
        let held = gaps
            .windows(2)
            .filter(|w| w[1] >= cfg.kink_persistence * w[0])
            .count();
        if held == gaps.len() - 1 {
            kinks.push(Kink {
                direction: *c,
                gaps,
            });
        } else if held > 0 {
            tentative += 1;
        }
    }
    kinks.sort_by(|a, b| b.gaps.last().unwrap().total_cmp(a.gaps.last().unwrap()));
    let detection = Detection::from_counts(levels.len(), kinks.len());
    Ok(C1Report {
        max_gap: jumps
            .iter()
            .map(|j| j.iter().copied().fold(0.0, f64::max))
            .collect(),
        levels,
        kinks,
        tentative,
        detection,
    })
}

fn check_meshes(samples: &[IntegrandSamples]) -> Result<Vec<MeshKind>> {
    if samples.len() < 2 {
        return Err(Error::MeshMismatch("need at least two levels".into()));
    }
    let mut out = Vec::with_capacity(samples.len());
    for s in samples {
        let expected = match s.mesh {
            MeshKind::Circle { count } => circle_mesh(count)?,
            MeshKind::Icosphere { level } => Icosphere::new(level)?.vertices,
            MeshKind::Custom => {
                return Err(Error::MeshMismatch(
                    "samples are not on a standard mesh".into(),
                ))
            }
        };
        let same = expected.len() == s.directions.len()
            && s.values.len() == s.directions.len()
            && expected
                .iter()
                .zip(&s.directions)
                .all(|(a, b)| a.distance(b) <= 1e-12);
        if !same {
            return Err(Error::MeshMismatch(format!(
                "directions do not match {:?}",
                s.mesh
            )));
        }
        out.push(s.mesh);
    }
    for w in out.windows(2) {
        let ok = match (w[0], w[1]) {
            (MeshKind::Circle { count: a }, MeshKind::Circle { count: b }) => b > a,
            (MeshKind::Icosphere { level: a }, MeshKind::Icosphere { level: b }) => b > a,
            _ => false,
        };
        if !ok {
            return Err(Error::MeshMismatch(format!(
                "{:?} does not refine {:?}",
                w[1], w[0]
            )));
        }
    }
    Ok(out)
}

fn slope_jumps(s: &IntegrandSamples) -> Result<Vec<f64>> {
    match s.mesh {
        MeshKind::Circle { count } => Ok(circle_jumps(&s.values, count)),
        MeshKind::Icosphere { level } => Ok(fan_jumps(&Icosphere::new(level)?, &s.values)),
        MeshKind::Custom => unreachable!("rejected by check_meshes"),
    }
}

/// `J(k) = |s_{k+1} − s_{k−2}|` with `s_k` the slope on `[θ_k, θ_{k+1}]`.
/// Any kink in `[θ_{k−1}, θ_{k+1}]` lies between the two slopes compared.
fn circle_jumps(values: &[f64], count: usize) -> Vec<f64> {
    let h = 2.0 * std::f64::consts::PI / count as f64;
    let slope = |k: usize| (values[(k + 1) % count] - values[k % count]) / h;
    (0..count)
        .map(|k| (slope(k + 1) - slope(k + count - 2)).abs())
        .collect()
}

/// Largest pairwise difference between the gradients of the linear
/// interpolants on the triangles around each vertex, in gnomonic coordinates
/// on the tangent plane at that vertex.
fn fan_jumps(mesh: &Icosphere, values: &[f64]) -> Vec<f64> {
    let incident = mesh.incident_triangles();
    (0..mesh.vertices.len())
        .into_par_iter()
        .map(|v| {
            let c = mesh.vertices[v];
            let (e1, e2) = tangent_frame(&c);
            let chart = |u: &UnitVector| {
                let p = u.scale(1.0 / u.dot(&c)) - *c;
                (p.dot(&e1), p.dot(&e2))
            };
            let grads: Vec<(f64, f64)> = incident[v]
                .iter()
                .filter_map(|&t| {
                    let others: Vec<usize> = mesh.triangles[t]
                        .iter()
                        .copied()
                        .filter(|&i| i != v)
                        .collect();
                    let (a, b) = (others[0], others[1]);
                    let (ax, ay) = chart(&mesh.vertices[a]);
                    let (bx, by) = chart(&mesh.vertices[b]);
                    let (da, db) = (values[a] - values[v], values[b] - values[v]);
                    let det = ax * by - ay * bx;
                    (det.abs() > 0.0)
                        .then(|| ((da * by - db * ay) / det, (ax * db - bx * da) / det))
                })
                .collect();
            let mut worst: f64 = 0.0;
            for i in 0..grads.len() {
                for j in i + 1..grads.len() {
                    worst = worst.max((grads[i].0 - grads[j].0).hypot(grads[i].1 - grads[j].1));
                }
            }
            worst
        })
        .collect()
}

fn tangent_frame(u: &UnitVector) -> (Vector, Vector) {
    let k = (0..3)
        .min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
        .unwrap();
    let e1 = u
        .cross(&Vector::basis(3, k))
        .normalize()
        .expect("nonparallel");
    let e2 = u.cross(&e1);
    (*e1, e2)
}
