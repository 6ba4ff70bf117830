use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use super::geometry::{piece_chart, BubbleGeometry, Piece, Surface};
use crate::geometry::{Chart, Edge, Param, ParamGrid};
use crate::solver::{
    boundary_faces, Boundaries, BoundaryCondition, EnergyDensity, History, Integrator, LawSample, Rates, SolverState,
    StepOptions,
};
use crate::{Error, Result, Vec3};

/// Initial data on one of the three surfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    Constant(f64),
    /// `exp(-d^2 / (2 width^2))`, `d` the angular distance from `theta0`.
    Gaussian {
        theta0: f64,
        width: f64,
    },
    /// One on the surface.
    Indicator,
}

impl InitialCondition {
    pub fn value(&self, x: Param) -> f64 {
        match *self {
            InitialCondition::Constant(c) => c,
            InitialCondition::Indicator => 1.0,
            InitialCondition::Gaussian { theta0, width } => {
                let d = (x[1] - theta0).rem_euclid(TAU);
                let d = if d > PI { TAU - d } else { d };
                (-d * d / (2.0 * width * width)).exp()
            }
        }
    }
}

/// Patch edges that meet at one family of interface nodes.
const JUNCTION_EDGES: [(Piece, Edge); 3] = [(Piece::A2, Edge::RHi), (Piece::B1, Edge::RHi), (Piece::S, Edge::RHi)];
const SEAM_A_EDGES: [(Piece, Edge); 2] = [(Piece::A1, Edge::RHi), (Piece::A2, Edge::RLo)];
const SEAM_B_EDGES: [(Piece, Edge); 2] = [(Piece::B1, Edge::RLo), (Piece::B2, Edge::RHi)];

/// Values shared by all traces at the interface nodes, one per `theta` cell.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodeValues {
    pub junction: Vec<f64>,
    pub seam_a: Vec<f64>,
    pub seam_b: Vec<f64>,
}

/// Coupled diffusion on the five bubble pieces.
#[derive(Clone)]
pub struct BubbleState {
    pub geom: BubbleGeometry,
    /// Patch states in the order of [`Piece::ALL`].
    pub patches: Vec<SolverState>,
    pub kappa: [f64; 3],
    pub nodes: NodeValues,
    pub t: f64,
}

impl BubbleState {
    /// Linear diffusion with constant `kappa` per surface (A, B, S).
    pub fn new(
        geom: BubbleGeometry,
        kappa: [f64; 3],
        nr: usize,
        ntheta: usize,
        t0: f64,
        init: [InitialCondition; 3],
    ) -> Result<Self> {
        Self::with_energy(geom, kappa, EnergyDensity::linear(), nr, ntheta, t0, init)
    }

    /// As [`BubbleState::new`] with diffusivity `kappa * e'` on each surface.
    #[allow(clippy::too_many_arguments)]
    pub fn with_energy(
        geom: BubbleGeometry,
        kappa: [f64; 3],
        energy: EnergyDensity,
        nr: usize,
        ntheta: usize,
        t0: f64,
        init: [InitialCondition; 3],
    ) -> Result<Self> {
        geom.check_at(t0)?;
        if let Some(k) = kappa.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
            return Err(Error::NonparabolicEnergy { r: 0.0, value: *k });
        }
        let mut patches = Vec::with_capacity(5);
        for piece in Piece::ALL {
            let chart: Arc<dyn Chart> = Arc::new(piece_chart(geom, piece));
            let grid = ParamGrid::for_chart(chart.as_ref(), nr, ntheta)?;
            let s = piece.surface().index();
            let ic = init[s];
            patches.push(SolverState::diffusion(
                chart,
                grid,
                energy.scaled(kappa[s]),
                Boundaries::neumann(),
                t0,
                move |x: Param, _: Vec3| ic.value(x),
            )?);
        }
        let nodes = couple(&mut patches)?;
        Ok(Self { geom, patches, kappa, nodes, t: t0 })
    }

    pub fn patch(&self, piece: Piece) -> &SolverState {
        &self.patches[piece.index()]
    }

    pub fn mass(&self) -> f64 {
        self.patches.iter().map(|p| p.mass()).sum()
    }

    pub fn mass_of(&self, surface: Surface) -> f64 {
        surface.pieces().iter().map(|p| self.patch(*p).mass()).sum()
    }

    pub fn energy(&self) -> f64 {
        self.patches.iter().map(|p| p.energy_value()).sum()
    }

    pub fn rates(&self) -> Result<Rates> {
        let mut r = Rates { dissipation: 0.0, dilation: 0.0, boundary_work: 0.0 };
        for p in &self.patches {
            let q = p.rates()?;
            r.dissipation += q.dissipation;
            r.dilation += q.dilation;
            r.boundary_work += q.boundary_work;
        }
        Ok(r)
    }

    pub fn sample(&self) -> Result<LawSample> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &self.patches {
            let u = p.primitive();
            lo = lo.min(u.min());
            hi = hi.max(u.max());
        }
        Ok(LawSample {
            t: self.t,
            mass: self.mass(),
            energy: self.energy(),
            rates: self.rates()?,
            min_u: lo,
            max_u: hi,
        })
    }

    /// Stability bound over all patches with the current interface values.
    pub fn cfl_dt(&self, safety: f64) -> Result<f64> {
        self.patches.iter().try_fold(f64::INFINITY, |dt, p| Ok(dt.min(p.cfl_dt(safety)?)))
    }

    /// One step of all patches with interface values re-solved at each stage.
    pub fn coupled_step(&self, dt: f64, opts: &StepOptions) -> Result<BubbleState> {
        self.geom.check_at(self.t + dt)?;
        if !opts.allow_unstable {
            let bound = self.cfl_dt(1.0)?;
            if dt > bound {
                return Err(Error::CflViolation { dt, bound });
            }
        }
        let r0 = self.patches.iter().map(|p| Ok(p.pde_rhs()?.rhs)).collect::<Result<Vec<_>>>()?;
        let mut next = self.patches.iter().zip(&r0).map(|(p, r)| p.advanced(dt, r)).collect::<Result<Vec<_>>>()?;
        if opts.integrator == Integrator::Heun {
            couple(&mut next)?;
            let mut out = Vec::with_capacity(5);
            for ((p, stage), a) in self.patches.iter().zip(next).zip(&r0) {
                let b = stage.pde_rhs()?.rhs;
                let avg: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
                out.push(p.replaced(stage, dt, &avg)?);
            }
            next = out;
        }
        let nodes = couple(&mut next)?;
        Ok(BubbleState { patches: next, nodes, t: self.t + dt, ..self.clone() })
    }

    /// Step size from the stability bound and `dt_max`.
    pub fn auto_dt(&self, opts: &StepOptions) -> Result<f64> {
        Ok(self.cfl_dt(opts.cfl_safety)?.min(opts.dt_max))
    }
}

fn solve_nodes(patches: &mut [SolverState], members: &[(Piece, Edge)]) -> Result<Vec<f64>> {
    let ns = patches[0].grid.ns;
    let mut faces = Vec::with_capacity(members.len());
    let mut traces = Vec::with_capacity(members.len());
    for &(piece, edge) in members {
        let p = &patches[piece.index()];
        let u = p.primitive();
        faces.push(boundary_faces(&p.grid, &p.geometry, &u, &p.energy, &p.bcs, edge)?);
        let i = if edge == Edge::RLo { 0 } else { p.grid.nr - 1 };
        traces.push((0..ns).map(|j| u.get(i, j)).collect::<Vec<_>>());
    }
    let mut values = vec![0.0; ns];
    for (j, v) in values.iter_mut().enumerate() {
        let (mut num, mut den) = (0.0, 0.0);
        for (f, u) in faces.iter().zip(&traces) {
            num += f[j].cond * u[j] - f[j].sign * f[j].cross;
            den += f[j].cond;
        }
        *v = if den > 0.0 { num / den } else { traces.iter().map(|u| u[j]).sum::<f64>() / traces.len() as f64 };
    }
    for &(piece, edge) in members {
        patches[piece.index()].bcs.set(edge, BoundaryCondition::DirichletFaces(values.clone()));
    }
    Ok(values)
}

/// Solves the zero-net-flux balance at every interface node and installs the
/// node values as Dirichlet data on the adjacent patch edges.
fn couple(patches: &mut [SolverState]) -> Result<NodeValues> {
    Ok(NodeValues {
        junction: solve_nodes(patches, &JUNCTION_EDGES)?,
        seam_a: solve_nodes(patches, &SEAM_A_EDGES)?,
        seam_b: solve_nodes(patches, &SEAM_B_EDGES)?,
    })
}

/// One row of the bubble law CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleLawRow {
    pub t: f64,
    pub mass_total: f64,
    pub energy_total: f64,
    pub dissipation_cum: f64,
    pub mass_drift: f64,
    pub energy_residual: f64,
}

impl BubbleLawRow {
    pub const HEADER: &'static str = "t,mass_total,energy_total,dissipation_cum,mass_drift,energy_residual";
}

#[derive(Debug, Clone, PartialEq)]
pub struct BubbleLawsReport {
    pub rows: Vec<BubbleLawRow>,
    /// `max |mass(t) - mass(t0)| / |mass(t0)|`.
    pub relative_mass_drift: f64,
    pub max_energy_residual: f64,
    pub final_energy_residual: f64,
    /// Residual of the law without the dilation term.
    pub final_residual_without_dilation: f64,
    pub monotone: bool,
}

pub fn bubble_laws_report(history: &History) -> BubbleLawsReport {
    let c = history.conservation();
    let e = history.energy();
    let m0 = c.masses.first().copied().unwrap_or(0.0);
    let rows: Vec<BubbleLawRow> = e
        .rows
        .iter()
        .map(|r| BubbleLawRow {
            t: r.t,
            mass_total: r.mass,
            energy_total: r.energy,
            dissipation_cum: r.dissipation_cum,
            mass_drift: r.mass - m0,
            energy_residual: r.law_residual,
        })
        .collect();
    BubbleLawsReport {
        rows,
        relative_mass_drift: c.relative_drift,
        max_energy_residual: e.max_residual,
        final_energy_residual: e.final_residual,
        final_residual_without_dilation: e.final_residual_without_dilation,
        monotone: e.monotone,
    }
}

pub struct BubbleRun {
    pub state: BubbleState,
    pub history: History,
    pub steps: usize,
}

/// Advances to `t_end`, storing a sample every `every` steps and at the end.
pub fn simulate_bubble(
    mut state: BubbleState,
    t_end: f64,
    dt: Option<f64>,
    opts: &StepOptions,
    every: usize,
    mut on_step: impl FnMut(&BubbleState) -> Result<()>,
) -> Result<BubbleRun> {
    state.geom.validate(state.t, t_end, 1000)?;
    let mut history = History::default();
    history.push(state.sample()?);
    let every = every.max(1);
    let tol = 1e-12 * t_end.abs().max(1.0);
    let mut steps = 0;
    while state.t < t_end - tol {
        let mut h = match dt {
            Some(h) => h,
            None => state.auto_dt(opts)?,
        };
        if state.t + h > t_end {
            h = t_end - state.t;
        }
        state = state.coupled_step(h, opts)?;
        steps += 1;
        on_step(&state)?;
        let sample = state.sample()?;
        if steps % every == 0 || state.t >= t_end - tol {
            history.push(sample);
        } else {
            history.observe(sample);
        }
    }
    Ok(BubbleRun { state, history, steps })
}
