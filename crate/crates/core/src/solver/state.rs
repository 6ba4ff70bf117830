use std::sync::Arc;

use super::energy::EnergyDensity;
use super::flux::{assemble, stable_dt, Assembly, Boundaries};
use super::geometry::GridGeometry;
use crate::geometry::{Chart, Field, Param, ParamGrid};
use crate::{Error, Result, Vec3};

pub const DEFAULT_CFL_SAFETY: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Euler,
    Heun,
}

/// Which system the conserved field belongs to.
#[derive(Debug, Clone, PartialEq)]
pub enum System {
    /// Generalized diffusion: the conserved field is `C sqrt(G)`.
    Diffusion,
    /// Generalized heat system: the conserved field is `rho theta sqrt(G)`,
    /// and `rho sqrt(G)` is frozen at the initial time.
    Heat { rho_sqrt_g: Field },
}

/// Time-stepping options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub integrator: Integrator,
    pub cfl_safety: f64,
    /// Upper clamp on the time step, for states where the stability bound is unbounded.
    pub dt_max: f64,
    /// Accept time steps above the stability bound.
    pub allow_unstable: bool,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            integrator: Integrator::Euler,
            cfl_safety: DEFAULT_CFL_SAFETY,
            dt_max: f64::INFINITY,
            allow_unstable: false,
        }
    }
}

/// Discrete solution on one patch at one time.
#[derive(Clone)]
pub struct SolverState {
    pub chart: Arc<dyn Chart>,
    pub grid: ParamGrid,
    /// Conserved density per unit parameter area.
    pub u: Field,
    pub system: System,
    pub t: f64,
    pub energy: EnergyDensity,
    pub bcs: Boundaries,
    pub geometry: Arc<GridGeometry>,
}

/// Instantaneous rates entering the energy law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    /// Discrete `int e'(|grad u|^2) |grad u|^2`.
    pub dissipation: f64,
    /// `1/2 int (div w) u^2`; zero for the heat system.
    pub dilation: f64,
    /// Work done by Dirichlet data, `sum g * inflow`.
    pub boundary_work: f64,
}

impl SolverState {
    /// Diffusion system with initial data `c0(X, x)`.
    pub fn diffusion(
        chart: Arc<dyn Chart>,
        grid: ParamGrid,
        energy: EnergyDensity,
        bcs: Boundaries,
        t0: f64,
        c0: impl Fn(Param, Vec3) -> f64,
    ) -> Result<Self> {
        let geometry = Arc::new(GridGeometry::new(chart.as_ref(), &grid, t0)?);
        let mut u = Field::zeros(&grid);
        for i in 0..grid.nr {
            for j in 0..grid.ns {
                let k = grid.idx(i, j);
                u.data[k] = c0(grid.center(i, j), geometry.cell_position[k]) * geometry.cell_sqrt_g[k];
            }
        }
        Ok(Self { chart, grid, u, system: System::Diffusion, t: t0, energy, bcs, geometry })
    }

    /// Heat system with density `rho0` and temperature `theta0`.
    #[allow(clippy::too_many_arguments)]
    pub fn heat(
        chart: Arc<dyn Chart>,
        grid: ParamGrid,
        energy: EnergyDensity,
        bcs: Boundaries,
        t0: f64,
        rho0: impl Fn(Param, Vec3) -> f64,
        theta0: impl Fn(Param, Vec3) -> f64,
    ) -> Result<Self> {
        let geometry = Arc::new(GridGeometry::new(chart.as_ref(), &grid, t0)?);
        let mut aux = Field::zeros(&grid);
        let mut u = Field::zeros(&grid);
        for i in 0..grid.nr {
            for j in 0..grid.ns {
                let k = grid.idx(i, j);
                let (x, p) = (grid.center(i, j), geometry.cell_position[k]);
                aux.data[k] = rho0(x, p) * geometry.cell_sqrt_g[k];
                u.data[k] = aux.data[k] * theta0(x, p);
            }
        }
        Ok(Self { chart, grid, u, system: System::Heat { rho_sqrt_g: aux }, t: t0, energy, bcs, geometry })
    }

    /// Weight `w` with `u = w * primitive`: `sqrt(G)` or the frozen `rho sqrt(G)`.
    fn weight(&self, geo: &GridGeometry, k: usize) -> f64 {
        match &self.system {
            System::Diffusion => geo.cell_sqrt_g[k],
            System::Heat { rho_sqrt_g } => rho_sqrt_g.data[k],
        }
    }

    fn primitive_of(&self, u: &Field, geo: &GridGeometry) -> Field {
        Field { data: u.data.iter().enumerate().map(|(k, v)| v / self.weight(geo, k)).collect(), ..u.clone() }
    }

    /// Pulled-back `C` (diffusion) or `theta` (heat) at cell centers.
    pub fn primitive(&self) -> Field {
        self.primitive_of(&self.u, &self.geometry)
    }

    /// Flux divergence of the conserved field at the current time.
    pub fn pde_rhs(&self) -> Result<Assembly> {
        assemble(&self.grid, &self.geometry, &self.primitive(), &self.energy, &self.bcs)
    }

    /// Stable explicit time step for the current state.
    pub fn cfl_dt(&self, safety: f64) -> Result<f64> {
        let w = match &self.system {
            System::Diffusion => None,
            System::Heat { rho_sqrt_g } => Some(rho_sqrt_g.data.as_slice()),
        };
        stable_dt(&self.grid, &self.geometry, &self.primitive(), &self.energy, &self.bcs, w, safety)
    }

    fn geometry_at(&self, t: f64) -> Result<Arc<GridGeometry>> {
        if self.chart.is_static() {
            Ok(self.geometry.clone())
        } else {
            Ok(Arc::new(GridGeometry::new(self.chart.as_ref(), &self.grid, t)?))
        }
    }

    /// Advances by `dt` without a stability check.
    pub fn step(&self, dt: f64, integrator: Integrator) -> Result<SolverState> {
        let r0 = self.pde_rhs()?.rhs;
        let stage = self.advanced(dt, &r0)?;
        match integrator {
            Integrator::Euler => Ok(stage),
            Integrator::Heun => {
                let r1 = stage.pde_rhs()?.rhs;
                let avg: Vec<f64> = r0.iter().zip(&r1).map(|(a, b)| 0.5 * (a + b)).collect();
                self.replaced(stage, dt, &avg)
            }
        }
    }

    /// `u + dt * rhs` at time `t + dt`, with the geometry re-evaluated.
    pub fn advanced(&self, dt: f64, rhs: &[f64]) -> Result<SolverState> {
        let geo = self.geometry_at(self.t + dt)?;
        self.replaced(SolverState { geometry: geo, t: self.t + dt, ..self.clone() }, dt, rhs)
    }

    /// `target` with its field replaced by `u + dt * rhs` of `self`.
    pub fn replaced(&self, mut target: SolverState, dt: f64, rhs: &[f64]) -> Result<SolverState> {
        for (k, v) in target.u.data.iter_mut().enumerate() {
            *v = self.u.data[k] + dt * rhs[k];
            if !v.is_finite() {
                return Err(Error::NonFinite { i: k / self.grid.ns, j: k % self.grid.ns });
            }
        }
        Ok(target)
    }

    /// Advances by `dt`, rejecting steps above the stability bound unless allowed.
    pub fn step_checked(&self, dt: f64, opts: &StepOptions) -> Result<SolverState> {
        if !opts.allow_unstable {
            let bound = self.cfl_dt(1.0)?;
            if dt > bound {
                return Err(Error::CflViolation { dt, bound });
            }
        }
        self.step(dt, opts.integrator)
    }

    /// Step size chosen from the stability bound and `dt_max`.
    pub fn auto_dt(&self, opts: &StepOptions) -> Result<f64> {
        Ok(self.cfl_dt(opts.cfl_safety)?.min(opts.dt_max))
    }

    /// `int C` (diffusion) or `int rho theta` (heat).
    pub fn mass(&self) -> f64 {
        self.u.data.iter().sum::<f64>() * self.grid.cell_area()
    }

    /// `1/2 int C^2` or `1/2 int rho theta^2`.
    pub fn energy_value(&self) -> f64 {
        let s: f64 =
            (0..self.grid.len()).map(|k| self.u.data[k] * self.u.data[k] / self.weight(&self.geometry, k)).sum();
        0.5 * s * self.grid.cell_area()
    }

    /// `int rho` for the heat system.
    pub fn rho_integral(&self) -> Option<f64> {
        match &self.system {
            System::Heat { rho_sqrt_g } => Some(rho_sqrt_g.data.iter().sum::<f64>() * self.grid.cell_area()),
            System::Diffusion => None,
        }
    }

    pub fn rates(&self) -> Result<Rates> {
        let a = self.pde_rhs()?;
        let dilation = match self.system {
            System::Diffusion => {
                let p = self.primitive();
                let s: f64 =
                    (0..self.grid.len()).map(|k| p.data[k] * p.data[k] * self.geometry.cell_sqrt_g_rate[k]).sum();
                0.5 * s * self.grid.cell_area()
            }
            System::Heat { .. } => 0.0,
        };
        Ok(Rates { dissipation: a.dissipation, dilation, boundary_work: a.boundary_work })
    }
}
