//! Charts, metric frames, co-normals, curvature and quadrature.

pub mod chart;
pub mod charts;
pub mod frame;
pub mod grid;
pub mod quadrature;

pub use chart::{
    periodic_mismatch, Affine, BoundarySegment, Chart, Edge, EdgeRole, EdgeRoles, FiniteDifferenced, Param, ParamRect,
    SecondDerivativeMode, SecondDerivatives,
};
pub use charts::{Cylinder, FlatDisc, Graph, Plane, Profile, ProfileJet, ProjectedCap, Revolution, SphereCap};
pub use frame::{
    conormal, frame, hessian, line_element, mean_curvature, normal_derivatives, velocity_derivatives,
    velocity_divergence, weingarten_coeffs, weingarten_residual, FrameData, EPS_G,
};
pub use grid::{Field, ParamGrid};
pub use quadrature::{
    boundary_integral, boundary_integral_with, sqrt_g_field, surface_divergence, surface_gradient, surface_integral,
    surface_integral_fn, Rule,
};
