//! Spherical convexity: hemispheres, polar sets, central projection and
//! the dual Wulff shape.
//!
//! A spherical convex body is stored as the finite generator set of a convex
//! cone. Polar sets are handled through generator inequalities; on S² they
//! can also be enumerated explicitly from the 3D hull of the cone.

mod dual;
mod lp;
mod polar;
mod projection;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{UnitVector, Vector};

pub use dual::{
    dual_integrand_check, dual_membership_check, dual_oracle_check, dual_wulff, polytope_duality,
    DualIntegrandReport, DualOracleReport, PolytopeDuality,
};
pub use polar::{
    double_polar_check, maehara_check, polar_antitone_check, polar_boundary, polar_rays,
    random_hemispherical,
};
pub use projection::{
    central_project, central_unproject, inversion_factorization_check, psi_n, psi_property_check,
    spherical_wulff_route, FactorizationReport, PsiReport,
};

/// A point of S^d, d ∈ {1, 2, 3}, as a unit vector in ℝ^{d+1}.
pub type SpherePoint = UnitVector;

/// The north pole `(0, …, 0, 1)` of S^{dim−1}.
pub fn north(dim: usize) -> SpherePoint {
    UnitVector::basis(dim, dim - 1)
}

/// `Q ∈ H(P)`, the closed hemisphere centred at `P`.
pub fn cap_contains(p: &SpherePoint, q: &SpherePoint, abs_tol: f64) -> bool {
    p.dot(q) >= -abs_tol
}

/// The point at parameter `t` on the arc from `P` to `Q`.
pub fn arc_point(p: &SpherePoint, q: &SpherePoint, t: f64, abs_tol: f64) -> Result<SpherePoint> {
    if (**p + **q).norm() <= abs_tol {
        return Err(Error::AntipodalArc);
    }
    if t == 0.0 {
        return Ok(*p);
    }
    if t == 1.0 {
        return Ok(*q);
    }
    UnitVector::new(p.scale(1.0 - t) + q.scale(t))
}

/// Outcome of the hemisphericity test.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Hemisphericity {
    /// `P·x < −abs_tol` for every point; `margin = −max P·x`.
    Witness { point: SpherePoint, margin: f64 },
    /// Convex weights whose combination of the points is within `residual`
    /// (L¹) of the origin.
    Certificate { weights: Vec<f64>, residual: f64 },
}

impl Hemisphericity {
    pub fn witness(&self) -> Option<&SpherePoint> {
        match self {
            Hemisphericity::Witness { point, .. } => Some(point),
            Hemisphericity::Certificate { .. } => None,
        }
    }
}

/// Searches for `P` with the points strictly outside `H(P)`.
///
/// The negated centroid is tried first; failing that, an LP maximizes the
/// separation margin. When no strict separation exists the LP residual of a
/// convex combination reaching the origin is returned instead.
pub fn is_hemispherical(points: &[SpherePoint], abs_tol: f64) -> Result<Hemisphericity> {
    let Some(first) = points.first() else {
        return Err(Error::Empty);
    };
    let d = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.dim(),
        });
    }
    let worst = |c: &UnitVector| {
        points
            .iter()
            .map(|x| c.dot(x))
            .fold(f64::NEG_INFINITY, f64::max)
    };

    let sum = points.iter().fold(Vector::zeros(d), |acc, p| acc + **p);
    if let Ok(c) = UnitVector::new(-sum) {
        let m = worst(&c);
        if m < -abs_tol {
            return Ok(Hemisphericity::Witness {
                point: c,
                margin: -m,
            });
        }
    }

    let vecs: Vec<Vector> = points.iter().map(|p| **p).collect();
    let (s, p) = lp::separation(&vecs)?;
    if s > abs_tol {
        if let Ok(c) = UnitVector::new(p) {
            let m = worst(&c);
            if m < -abs_tol {
                return Ok(Hemisphericity::Witness {
                    point: c,
                    margin: -m,
                });
            }
        }
    }
    let (weights, residual) = lp::combination(&vecs, &Vector::zeros(d), true)?;
    Ok(Hemisphericity::Certificate { weights, residual })
}

/// `s-conv(generators)`: the normalized convex cone of a finite point set.
#[derive(Clone, Debug, Serialize)]
pub struct SphericalConvexBody {
    generators: Vec<SpherePoint>,
    witness: Option<SpherePoint>,
}

impl SphericalConvexBody {
    /// Deduplicates generators within `hull_tol` and records a
    /// hemisphericity witness when one exists.
    pub fn new(generators: &[SpherePoint], abs_tol: f64, hull_tol: f64) -> Result<Self> {
        let mut gens: Vec<SpherePoint> = Vec::with_capacity(generators.len());
        for g in generators {
            if !gens.iter().any(|h| h.distance(g) <= hull_tol) {
                gens.push(*g);
            }
        }
        let witness = is_hemispherical(&gens, abs_tol)?.witness().copied();
        Ok(SphericalConvexBody {
            generators: gens,
            witness,
        })
    }

    pub fn generators(&self) -> &[SpherePoint] {
        &self.generators
    }

    pub fn witness(&self) -> Option<&SpherePoint> {
        self.witness.as_ref()
    }

    pub fn is_hemispherical(&self) -> bool {
        self.witness.is_some()
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators[0].dim()
    }

    /// `min_g Q·g`: nonnegative exactly on the polar set.
    pub fn polar_margin(&self, q: &SpherePoint) -> f64 {
        self.generators
            .iter()
            .map(|g| g.dot(q))
            .fold(f64::INFINITY, f64::min)
    }

    /// Membership in the spherical polar set by the generator test.
    pub fn polar_contains(&self, q: &SpherePoint, abs_tol: f64) -> bool {
        self.polar_margin(q) >= -abs_tol
    }

    /// Polar membership margin computed as an LP over `s-conv`:
    /// `min {Q·x : x = Σλᵢgᵢ, λ in the simplex}`.
    pub fn polar_margin_lp(&self, q: &SpherePoint) -> Result<f64> {
        let values: Vec<f64> = self.generators.iter().map(|g| g.dot(q)).collect();
        lp::simplex_min(&values)
    }

    /// L¹ distance from `Q` to the cone spanned by the generators.
    pub fn cone_residual(&self, q: &SpherePoint) -> Result<f64> {
        let vecs: Vec<Vector> = self.generators.iter().map(|g| **g).collect();
        Ok(lp::combination(&vecs, q, false)?.1)
    }

    /// Membership in `s-conv(generators)` by cone LP.
    pub fn contains(&self, q: &SpherePoint, abs_tol: f64) -> Result<bool> {
        Ok(self.cone_residual(q)? <= abs_tol)
    }
}

/// Free-function form of [`SphericalConvexBody::polar_contains`].
pub fn polar_contains(body: &SphericalConvexBody, q: &SpherePoint, abs_tol: f64) -> bool {
    body.polar_contains(q, abs_tol)
}

/// Two-route membership comparison over random probes.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MembershipReport {
    pub probes: usize,
    /// Probes where the routes disagree although the probe is farther than
    /// `band` from the boundary.
    pub disagreements: usize,
    /// Probes where the routes disagree inside the boundary band.
    pub in_band: usize,
    /// Probes both routes place inside.
    pub inside: usize,
    /// Largest boundary margin among out-of-band disagreements (0 if none).
    pub max_margin: f64,
    pub band: f64,
    pub seed: u64,
}

impl MembershipReport {
    pub(crate) fn new(band: f64, seed: u64) -> Self {
        MembershipReport {
            band,
            seed,
            ..Default::default()
        }
    }

    /// Records one probe: each route's verdict plus the probe's distance-like
    /// margin to the boundary.
    pub(crate) fn record(&mut self, a: bool, b: bool, margin: f64) {
        self.probes += 1;
        if a && b {
            self.inside += 1;
        }
        if a != b {
            if margin.abs() <= self.band {
                self.in_band += 1;
            } else {
                self.disagreements += 1;
                self.max_margin = self.max_margin.max(margin.abs());
            }
        }
    }

    pub fn merge(&mut self, other: &MembershipReport) {
        self.probes += other.probes;
        self.disagreements += other.disagreements;
        self.in_band += other.in_band;
        self.inside += other.inside;
        self.max_margin = self.max_margin.max(other.max_margin);
    }

    pub fn passed(&self) -> bool {
        self.disagreements == 0
    }
}
