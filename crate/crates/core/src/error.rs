use crate::geometry::Edge;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("degenerate metric at X = ({r}, {s}), t = {t}: G = {g:e}")]
    DegenerateMetric { r: f64, s: f64, t: f64, g: f64 },

    #[error("paired edges do not coincide: Hausdorff distance {distance:e}")]
    PairingMismatch { distance: f64 },

    #[error("non-parabolic energy density: e'({r}) = {value}")]
    NonparabolicEnergy { r: f64, value: f64 },

    #[error("time step {dt:e} exceeds the stability bound {bound:e}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("invalid bubble geometry at t = {t}: {reason}")]
    GeometryInvalid { t: f64, reason: String },

    #[error("edge {edge:?} has role {role}, which this operation does not accept")]
    UnsupportedEdge { edge: Edge, role: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("test field does not vanish on the boundary layers (max |psi| = {max:e})")]
    SupportTouchesBoundary { max: f64 },

    #[error("field has {got} values, grid needs {expected}")]
    FieldSize { expected: usize, got: usize },

    #[error("non-finite value in the solution at cell ({i}, {j})")]
    NonFinite { i: usize, j: usize },
}
