//! Anisotropy functions γ: Sⁿ → ℝ₊.

use std::collections::HashMap;
use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{UnitVector, Vector};
use crate::hull::{convex_hull, Polytope};
use crate::mesh::{circle_mesh, sphere_mesh};

/// Closed-form γ families.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum Preset {
    /// γ ≡ r.
    Constant { r: f64 },
    /// Support function of the ellipse/ellipsoid with the given semi-axes:
    /// `√(Σ aᵢ² θᵢ²)`.
    Ellipsoid { axes: Vec<f64> },
    /// `Σ wᵢ |θᵢ|`, the support function of the box with half-widths `wᵢ`.
    CubeSupport { weights: Vec<f64> },
    /// `min(1 + a cos θ, 1 − a cos θ)` on S¹: the minimum of the support
    /// functions of two unit disks centred at `(±a, 0)`.
    Lens { offset: f64 },
    /// On S¹: `c₀ + Σ (c_{2k−1} cos kθ + c_{2k} sin kθ)`.
    /// On S²: `Σ c_m x^i y^j z^k` over monomials of degree ≤ 3 in the order
    /// of [`MONOMIALS`].
    TrigPoly { coeffs: Vec<f64> },
    /// `max_v v·θ`, the support function of a polytope.
    PolytopeSupport { vertices: Vec<Vector> },
}

/// Exponents `(i, j, k)` of the S² trig-poly basis, by degree then lexicographically descending.
pub const MONOMIALS: [(u8, u8, u8); 20] = [
    (0, 0, 0),
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (2, 0, 0),
    (1, 1, 0),
    (1, 0, 1),
    (0, 2, 0),
    (0, 1, 1),
    (0, 0, 2),
    (3, 0, 0),
    (2, 1, 0),
    (2, 0, 1),
    (1, 2, 0),
    (1, 1, 1),
    (1, 0, 2),
    (0, 3, 0),
    (0, 2, 1),
    (0, 1, 2),
    (0, 0, 3),
];

/// A direction/value table with its interpolation structure.
#[derive(Clone, Debug, Serialize)]
pub struct SampleTable {
    directions: Vec<UnitVector>,
    values: Vec<f64>,
    #[serde(skip)]
    interp: Interp,
}

#[derive(Clone, Debug)]
enum Interp {
    /// Samples sorted by angle in [0, 2π).
    Circle { angles: Vec<f64>, values: Vec<f64> },
    /// Triangulated hull of the directions with a value per hull vertex.
    Sphere { hull: Polytope, values: Vec<f64> },
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
enum Kind {
    Preset(Preset),
    Sampled(SampleTable),
}

/// A strictly positive continuous function on Sⁿ, n ∈ {1, 2}.
#[derive(Clone, Debug, Serialize)]
pub struct GammaField {
    n: usize,
    #[serde(flatten)]
    kind: Kind,
}

impl GammaField {
    pub fn preset(n: usize, preset: Preset, abs_tol: f64) -> Result<Self> {
        if !(1..=2).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let d = n + 1;
        let bad = |msg: String| Err(Error::InvalidGamma(msg));
        match &preset {
            Preset::Constant { r } if !(*r > 0.0 && r.is_finite()) => {
                return bad(format!("constant must be positive, got {r}"));
            }
            Preset::Ellipsoid { axes } | Preset::CubeSupport { weights: axes } => {
                if axes.len() != d {
                    return bad(format!("expected {d} axis parameters, got {}", axes.len()));
                }
                if axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
                    return bad("axis parameters must be positive".into());
                }
            }
            Preset::Lens { offset } => {
                if n != 1 {
                    return bad("lens preset is only defined on S¹".into());
                }
                if !(*offset > 0.0 && *offset < 1.0) {
                    return bad(format!("lens offset must lie in (0, 1), got {offset}"));
                }
            }
            Preset::TrigPoly { coeffs } => {
                if coeffs.is_empty() || (n == 2 && coeffs.len() > MONOMIALS.len()) {
                    return bad(format!("invalid coefficient count {}", coeffs.len()));
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return bad("coefficients must be finite".into());
                }
            }
            Preset::PolytopeSupport { vertices } => {
                if vertices.iter().any(|v| v.dim() != d) {
                    return bad(format!("polytope vertices must have {d} coordinates"));
                }
            }
            Preset::Constant { .. } => {}
        }
        let field = GammaField {
            n,
            kind: Kind::Preset(preset),
        };
        field.check_positive(abs_tol)?;
        Ok(field)
    }

    pub fn constant(n: usize, r: f64) -> Result<Self> {
        GammaField::preset(n, Preset::Constant { r }, 0.0)
    }

    pub fn ellipsoid(axes: &[f64]) -> Result<Self> {
        GammaField::preset(
            axes.len().saturating_sub(1),
            Preset::Ellipsoid {
                axes: axes.to_vec(),
            },
            0.0,
        )
    }

    pub fn cube_support(weights: &[f64]) -> Result<Self> {
        GammaField::preset(
            weights.len().saturating_sub(1),
            Preset::CubeSupport {
                weights: weights.to_vec(),
            },
            0.0,
        )
    }

    pub fn lens() -> Self {
        GammaField::preset(1, Preset::Lens { offset: 0.5 }, 0.0).expect("valid lens")
    }

    pub fn polytope_support(w: &Polytope, abs_tol: f64) -> Result<Self> {
        GammaField::preset(
            w.dim() - 1,
            Preset::PolytopeSupport {
                vertices: w.vertices().to_vec(),
            },
            abs_tol,
        )
    }

    /// A random smooth positive field: constant term 1 plus terms whose
    /// coefficients have total magnitude at most 1/2.
    pub fn random_trig_poly<R: Rng>(n: usize, rng: &mut R) -> Result<Self> {
        let len = match n {
            1 => 9,
            2 => MONOMIALS.len(),
            _ => return Err(Error::UnsupportedDimension(n)),
        };
        let mut coeffs: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        let total: f64 = coeffs[1..].iter().map(|c| c.abs()).sum();
        let budget = rng.random_range(0.1..0.5);
        coeffs[0] = 1.0;
        for c in &mut coeffs[1..] {
            *c *= budget / total;
        }
        GammaField::preset(n, Preset::TrigPoly { coeffs }, 0.0)
    }

    /// A field interpolating a direction/value table: linear in angle on S¹,
    /// barycentric on the hull triangulation of the directions on S².
    pub fn sampled(
        n: usize,
        directions: &[Vector],
        values: &[f64],
        hull_tol: f64,
        abs_tol: f64,
    ) -> Result<Self> {
        if !(1..=2).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if directions.len() != values.len() {
            return Err(Error::InvalidGamma(format!(
                "{} directions but {} values",
                directions.len(),
                values.len()
            )));
        }
        if directions.len() < n + 2 {
            return Err(Error::InvalidGamma("too few samples".into()));
        }
        let mut dirs = Vec::with_capacity(directions.len());
        for (i, (d, &v)) in directions.iter().zip(values).enumerate() {
            if d.dim() != n + 1 {
                return Err(Error::DimensionMismatch {
                    expected: n + 1,
                    found: d.dim(),
                });
            }
            if !(v > abs_tol && v.is_finite()) {
                return Err(Error::InvalidGamma(format!(
                    "sample {i}: value {v} is not positive"
                )));
            }
            let u = d
                .normalize()
                .map_err(|_| Error::InvalidGamma(format!("sample {i}: zero direction")))?;
            dirs.push(u);
        }
        let mut sorted: Vec<usize> = (0..dirs.len()).collect();
        sorted.sort_by(|&a, &b| dirs[a].lex_cmp(&dirs[b]));
        for w in sorted.windows(2) {
            if dirs[w[0]].distance(&dirs[w[1]]) <= hull_tol {
                return Err(Error::InvalidGamma(format!(
                    "samples {} and {} share a direction",
                    w[0], w[1]
                )));
            }
        }

        let interp = if n == 1 {
            let mut order: Vec<usize> = (0..dirs.len()).collect();
            let angle = |i: usize| dirs[i].angle().rem_euclid(2.0 * PI);
            order.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
            Interp::Circle {
                angles: order.iter().map(|&i| angle(i)).collect(),
                values: order.iter().map(|&i| values[i]).collect(),
            }
        } else {
            let pts: Vec<Vector> = dirs.iter().map(|d| **d).collect();
            let hull = convex_hull(&pts, 3, hull_tol)?;
            if !hull.origin_interior() || hull.vertices().len() != pts.len() {
                return Err(Error::InvalidGamma(
                    "sample directions do not cover the sphere".into(),
                ));
            }
            let index: HashMap<Vec<u64>, usize> =
                pts.iter().enumerate().map(|(i, p)| (bits(p), i)).collect();
            let vals = hull
                .vertices()
                .iter()
                .map(|v| values[index[&bits(v)]])
                .collect();
            Interp::Sphere { hull, values: vals }
        };
        Ok(GammaField {
            n,
            kind: Kind::Sampled(SampleTable {
                directions: dirs,
                values: values.to_vec(),
                interp,
            }),
        })
    }

    /// Sphere dimension n (the field lives on Sⁿ ⊂ ℝⁿ⁺¹).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 1
    }

    pub fn as_preset(&self) -> Option<&Preset> {
        match &self.kind {
            Kind::Preset(p) => Some(p),
            Kind::Sampled(_) => None,
        }
    }

    pub fn eval(&self, theta: &UnitVector) -> Result<f64> {
        if theta.dim() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                found: theta.dim(),
            });
        }
        Ok(match &self.kind {
            Kind::Preset(p) => eval_preset(p, theta),
            Kind::Sampled(t) => match &t.interp {
                Interp::Circle { angles, values } => interp_circle(angles, values, theta.angle()),
                Interp::Sphere { hull, values } => interp_sphere(hull, values, theta),
            },
        })
    }

    /// Evaluates on every direction of a list, in order.
    pub fn eval_all(&self, dirs: &[UnitVector]) -> Result<Vec<f64>> {
        use rayon::prelude::*;
        dirs.par_iter().map(|d| self.eval(d)).collect()
    }

    fn check_positive(&self, abs_tol: f64) -> Result<()> {
        let probes = if self.n == 1 {
            circle_mesh(4096)?
        } else {
            sphere_mesh(2, 4)?
        };
        let vals = self.eval_all(&probes)?;
        let (i, min) = vals
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| {
                if v < acc.1 || v.is_nan() {
                    (i, v)
                } else {
                    acc
                }
            });
        if !(min > abs_tol && min.is_finite()) {
            return Err(Error::InvalidGamma(format!(
                "field is not positive: value {min} at direction {:?}",
                probes[i].as_slice()
            )));
        }
        Ok(())
    }
}

fn bits(v: &Vector) -> Vec<u64> {
    v.as_slice().iter().map(|c| c.to_bits()).collect()
}

fn eval_preset(p: &Preset, t: &UnitVector) -> f64 {
    let c = t.as_slice();
    match p {
        Preset::Constant { r } => *r,
        Preset::Ellipsoid { axes } => axes
            .iter()
            .zip(c)
            .map(|(a, x)| (a * x).powi(2))
            .sum::<f64>()
            .sqrt(),
        Preset::CubeSupport { weights } => weights.iter().zip(c).map(|(w, x)| w * x.abs()).sum(),
        Preset::Lens { offset } => 1.0 - offset * c[0].abs(),
        Preset::TrigPoly { coeffs } => {
            if c.len() == 2 {
                let th = t.angle();
                let mut s = coeffs[0];
                for (k, pair) in coeffs[1..].chunks(2).enumerate() {
                    let f = (k + 1) as f64 * th;
                    s += pair[0] * f.cos() + pair.get(1).map_or(0.0, |b| b * f.sin());
                }
                s
            } else {
                coeffs
                    .iter()
                    .zip(MONOMIALS)
                    .map(|(a, (i, j, k))| {
                        a * c[0].powi(i as i32) * c[1].powi(j as i32) * c[2].powi(k as i32)
                    })
                    .sum()
            }
        }
        Preset::PolytopeSupport { vertices } => vertices
            .iter()
            .map(|v| v.dot(t))
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

fn interp_circle(angles: &[f64], values: &[f64], theta: f64) -> f64 {
    let th = theta.rem_euclid(2.0 * PI);
    let n = angles.len();
    // First sample strictly after th; the bracketing interval wraps around.
    let hi = angles.partition_point(|&a| a <= th);
    let (i0, i1) = if hi == 0 || hi == n {
        (n - 1, 0)
    } else {
        (hi - 1, hi)
    };
    let (a0, mut a1) = (angles[i0], angles[i1]);
    let mut x = th;
    if i1 <= i0 {
        a1 += 2.0 * PI;
        if x < a0 {
            x += 2.0 * PI;
        }
    }
    let t = if a1 > a0 { (x - a0) / (a1 - a0) } else { 0.0 };
    values[i0] * (1.0 - t) + values[i1] * t
}

fn interp_sphere(hull: &Polytope, values: &[f64], theta: &UnitVector) -> f64 {
    let (f, _) = hull
        .facets()
        .iter()
        .enumerate()
        .map(|(j, f)| (j, f.normal.dot(theta) / f.offset))
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );
    let facet = &hull.facets()[f];
    let q = theta.scale(facet.offset / facet.normal.dot(theta));
    let v = hull.vertices();
    let ring = &facet.ring;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 1..ring.len() - 1 {
        let (a, b, c) = (v[ring[0]], v[ring[k]], v[ring[k + 1]]);
        let area = (b - a).cross(&(c - a)).dot(&facet.normal);
        let la = (b - q).cross(&(c - q)).dot(&facet.normal) / area;
        let lb = (c - q).cross(&(a - q)).dot(&facet.normal) / area;
        let lc = 1.0 - la - lb;
        let worst = la.min(lb).min(lc);
        if worst > best.0 {
            let (la, lb, lc) = (la.max(0.0), lb.max(0.0), lc.max(0.0));
            let s = la + lb + lc;
            let val = (la * values[ring[0]] + lb * values[ring[k]] + lc * values[ring[k + 1]]) / s;
            best = (worst, val);
        }
    }
    best.1
}
