//! The double bubble: five charts over the polar rectangle and the coupled
//! diffusion solver on them.

mod geometry;

pub use geometry::{
    analytic_conormals, charts_for, junction_mismatch, junction_normal_b, piece_chart, BubbleChart, BubbleGeometry,
    BubbleParams, BubbleProfile, Conormals, Piece, Surface, JUNCTION, SEAM_A, SEAM_B,
};

mod checks;

pub use checks::{bubble_divergence_check, bubble_transport_check};

mod state;

pub use state::{
    bubble_laws_report, simulate_bubble, BubbleLawRow, BubbleLawsReport, BubbleRun, BubbleState, InitialCondition,
    NodeValues,
};
