//! Finite-volume time integration on a single evolving patch.

mod energy;
mod flux;
mod geometry;
mod report;
mod state;

pub use energy::{EnergyDensity, EnergyKind};
pub use flux::{assemble, boundary_faces, stable_dt, Assembly, Boundaries, BoundaryCondition, BoundaryFace};
pub use geometry::GridGeometry;
pub use report::{simulate, ConservationReport, EnergyReport, History, LawSample, ReportRow, Run};
pub use state::{Integrator, Rates, SolverState, StepOptions, System, DEFAULT_CFL_SAFETY};
