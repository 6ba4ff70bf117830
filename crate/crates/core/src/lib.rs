//! Chart-based surface calculus and diffusion on evolving surfaces with boundary.
//!
//! Surfaces are described by time-dependent charts over parameter rectangles.
//! The [`geometry`] module computes metric frames, normals, co-normals and
//! curvature; [`calculus`] turns the integral theorems into numerical residuals;
//! [`solver`] integrates the diffusion and heat systems on one evolving patch;
//! [`bubble`] couples five patches on the evolving double bubble.

pub mod bubble;
pub mod calculus;
pub mod error;
pub mod geometry;
pub mod solver;

pub use error::{Error, Result};

/// Three-vector used for positions, tangents and normals.
pub type Vec3 = nalgebra::Vector3<f64>;
