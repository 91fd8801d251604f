//! Wulff shapes, convex integrands and their spherical duals.
//!
//! Bodies are convex polytopes in ℝ² or ℝ³ built from fields `γ` sampled on
//! direction meshes. The crate constructs Wulff shapes, convex integrands,
//! dual Wulff shapes and spherical polar sets, and checks the relations
//! between them numerically.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod geom;
pub mod hull;
pub mod mesh;
pub mod sampling;
pub mod spherical;
pub mod verify;
pub mod wulff;

pub use error::{Error, Result};
pub use geom::{PolarPoint, Tolerance, UnitVector, Vector};
pub use hull::{Facet, HalfSpace, Polytope};
pub use wulff::{GammaField, IntegrandSamples, Preset};
