//! Shared geometric vocabulary: small fixed-capacity vectors, unit directions,
//! polar-plot points, the inversion map and the tolerance policy.
//!
//! Everything here is `Copy` and immutable; shapes live in the plane or in
//! 3-space, and the spherical machinery needs one extra coordinate, so vectors
//! carry at most four components.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Deref, Index, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest ambient dimension used anywhere in the crate.
pub const MAX_DIM: usize = 4;

/// A point or displacement in ℝ^d for d ≤ [`MAX_DIM`].
#[derive(Clone, Copy, PartialEq)]
pub struct Vector {
    coords: [f64; MAX_DIM],
    dim: usize,
}

impl Vector {
    /// Builds a vector from its components.
    ///
    /// Panics when `coords` is empty or longer than [`MAX_DIM`]; dimensions are
    /// fixed by the caller, never by data.
    pub fn new(coords: &[f64]) -> Self {
        assert!(
            !coords.is_empty() && coords.len() <= MAX_DIM,
            "vector dimension {} out of range",
            coords.len()
        );
        let mut c = [0.0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Vector {
            coords: c,
            dim: coords.len(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector::new(&[0.0; MAX_DIM][..dim])
    }

    /// The `i`-th standard basis vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v.coords[i] = 1.0;
        v
    }

    pub fn from_angle(theta: f64) -> Self {
        Vector::new(&[theta.cos(), theta.sin()])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    #[inline]
    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut s = 0.0;
        for i in 0..self.dim {
            s += self.coords[i] * other.coords[i];
        }
        s
    }

    #[inline]
    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (*self - *other).norm()
    }

    pub fn scale(&self, s: f64) -> Vector {
        let mut v = *self;
        for c in &mut v.coords[..self.dim] {
            *c *= s;
        }
        v
    }

    /// Appends one coordinate, lifting ℝ^d into ℝ^{d+1}.
    pub fn extend(&self, last: f64) -> Vector {
        assert!(self.dim < MAX_DIM, "cannot extend a {}-vector", self.dim);
        let mut v = *self;
        v.coords[self.dim] = last;
        v.dim += 1;
        v
    }

    /// Drops the last coordinate.
    pub fn truncate(&self) -> Vector {
        assert!(self.dim > 1);
        let mut v = *self;
        v.coords[self.dim - 1] = 0.0;
        v.dim -= 1;
        v
    }

    pub fn last(&self) -> f64 {
        self.coords[self.dim - 1]
    }

    /// Cross product; both operands must be 3-vectors.
    pub fn cross(&self, other: &Vector) -> Vector {
        debug_assert!(self.dim == 3 && other.dim == 3);
        let a = &self.coords;
        let b = &other.coords;
        Vector::new(&[
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    /// Planar cross product `self.x * other.y - self.y * other.x`.
    pub fn perp_dot(&self, other: &Vector) -> f64 {
        debug_assert!(self.dim == 2 && other.dim == 2);
        self.coords[0] * other.coords[1] - self.coords[1] * other.coords[0]
    }

    pub fn normalize(&self) -> Result<UnitVector> {
        UnitVector::new(*self)
    }

    /// Lexicographic comparison, used for canonical orderings.
    pub fn lex_cmp(&self, other: &Vector) -> Ordering {
        for i in 0..self.dim.min(other.dim) {
            match self.coords[i].total_cmp(&other.coords[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.dim.cmp(&other.dim)
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|c| c.is_finite())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut v = self;
        for i in 0..self.dim {
            v.coords[i] += rhs.coords[i];
        }
        v
    }
}

impl AddAssign for Vector {
    fn add_assign(&mut self, rhs: Vector) {
        *self = *self + rhs;
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut v = self;
        for i in 0..self.dim {
            v.coords[i] -= rhs.coords[i];
        }
        v
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        self.scale(s)
    }
}

/// A direction: a vector of unit Euclidean norm.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct UnitVector(Vector);

impl UnitVector {
    /// Normalizes `v`. Fails on (numerically) zero or non-finite input.
    pub fn new(v: Vector) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n <= f64::MIN_POSITIVE.sqrt() {
            return Err(Error::ZeroVector);
        }
        Ok(UnitVector(v.scale(1.0 / n)))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        UnitVector::new(Vector::new(coords))
    }

    pub fn from_angle(theta: f64) -> Self {
        UnitVector(Vector::from_angle(theta))
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        UnitVector(Vector::basis(dim, i))
    }

    /// Wraps a vector the caller knows is already unit length.
    pub(crate) fn new_unchecked(v: Vector) -> Self {
        debug_assert!((v.norm() - 1.0).abs() < 1e-9, "not unit: {v:?}");
        UnitVector(v)
    }

    pub fn into_vector(self) -> Vector {
        self.0
    }

    pub fn vector(&self) -> &Vector {
        &self.0
    }

    /// Polar angle in (-π, π]; only meaningful in the plane.
    pub fn angle(&self) -> f64 {
        self.0[1].atan2(self.0[0])
    }

    /// Angle between two directions, in [0, π].
    pub fn angle_to(&self, other: &UnitVector) -> f64 {
        // atan2 form stays accurate for nearly parallel directions.
        let d = self.0.dot(&other.0);
        let c = (self.0 - other.0.scale(d)).norm();
        c.atan2(d)
    }
}

impl Deref for UnitVector {
    type Target = Vector;
    fn deref(&self) -> &Vector {
        &self.0
    }
}

impl Neg for UnitVector {
    type Output = UnitVector;
    fn neg(self) -> UnitVector {
        UnitVector(-self.0)
    }
}

impl Serialize for UnitVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// A point of punctured Euclidean space in polar-plot form `(direction, radius)`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct PolarPoint {
    pub direction: UnitVector,
    radius: f64,
}

impl PolarPoint {
    pub fn new(direction: UnitVector, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::NonPositiveRadius(radius));
        }
        Ok(PolarPoint { direction, radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Inversion with respect to the origin: `(θ, r) ↦ (−θ, 1/r)`.
    pub fn invert(&self) -> PolarPoint {
        PolarPoint {
            direction: -self.direction,
            radius: 1.0 / self.radius,
        }
    }

    pub fn to_cartesian(&self) -> Vector {
        self.direction.scale(self.radius)
    }

    /// Polar form of a Cartesian point. The origin (within `abs_tol`) has none.
    pub fn from_cartesian(x: &Vector, abs_tol: f64) -> Result<Self> {
        let r = x.norm();
        if !(r > abs_tol) {
            return Err(Error::Origin);
        }
        Ok(PolarPoint {
            direction: UnitVector::new_unchecked(x.scale(1.0 / r)),
            radius: r,
        })
    }
}

/// Free-function form of [`PolarPoint::invert`].
pub fn invert(p: &PolarPoint) -> PolarPoint {
    p.invert()
}

/// Explicit tolerances threaded through every geometric predicate.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct Tolerance {
    /// Point/predicate slack for membership tests.
    pub abs_tol: f64,
    /// Snapping distance for hull and half-space kernels.
    pub hull_tol: f64,
    /// Acceptance band for reported numerical identities.
    pub report_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-9,
            hull_tol: 1e-9,
            report_tol: 1e-6,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, hull_tol: f64, report_tol: f64) -> Result<Self> {
        let t = Tolerance {
            abs_tol,
            hull_tol,
            report_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn with_report_tol(self, report_tol: f64) -> Result<Self> {
        Tolerance::new(self.abs_tol, self.hull_tol, report_tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("abs_tol", self.abs_tol),
            ("hull_tol", self.hull_tol),
            ("report_tol", self.report_tol),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.abs_tol > self.report_tol {
            return Err(Error::InvalidTolerance(format!(
                "abs_tol {} exceeds report_tol {}",
                self.abs_tol, self.report_tol
            )));
        }
        Ok(())
    }
}
