//! `cli run` and `cli bubble`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use surfdiff::bubble::{bubble_laws_report, simulate_bubble, BubbleLawRow, BubbleState, Piece};
use surfdiff::geometry::{Chart, ParamGrid};
use surfdiff::solver::{simulate, Boundaries, ReportRow, SolverState};

use crate::config::{BcKind, BubbleConfig, PatchInit, RunConfig, SystemKind};
use crate::output::{self, Csv, SNAPSHOT_HEADER};
use crate::Failure;

pub struct RunSummary {
    pub steps: usize,
    pub t: f64,
    pub mass_drift: f64,
    pub final_residual: f64,
    pub files: Vec<PathBuf>,
}

fn boundaries(cfg: &RunConfig) -> Boundaries {
    match cfg.bc {
        BcKind::Neumann => Boundaries::neumann(),
        BcKind::Dirichlet => Boundaries::dirichlet(cfg.bc_value),
    }
}

pub fn initial_state(cfg: &RunConfig) -> Result<SolverState, Failure> {
    let chart: Arc<dyn Chart> = Arc::from(cfg.geometry.chart());
    let grid = ParamGrid::for_chart(chart.as_ref(), cfg.n_r, cfg.n_s)?;
    let r0 = cfg.geometry.radius0;
    let init = PatchInit::parse("run.initial", &cfg.initial)?;
    let energy = cfg.energy();
    Ok(match cfg.system {
        SystemKind::Diffusion => {
            SolverState::diffusion(chart, grid, energy, boundaries(cfg), 0.0, move |_, x| init.value(x, r0))?
        }
        SystemKind::Heat => {
            let rho = PatchInit::parse("run.density", &cfg.density)?;
            SolverState::heat(
                chart,
                grid,
                energy,
                boundaries(cfg),
                0.0,
                move |_, x| rho.value(x, r0),
                move |_, x| init.value(x, r0),
            )?
        }
    })
}

pub fn run(cfg: &RunConfig, out: &Path) -> Result<RunSummary, Failure> {
    let opts = cfg.validate()?;
    let state = initial_state(cfg)?;
    let mut snap = Csv::create(out, "snapshot.csv", SNAPSHOT_HEADER)?;
    output::snapshot(&mut snap, &state)?;
    let every = cfg.snapshot_every;
    let (mut steps, mut last_written) = (0usize, 0usize);
    let mut io_err = None;
    let result = simulate(state, cfg.t_end, cfg.dt, &opts, cfg.report_every, |s| {
        steps += 1;
        if every > 0 && steps % every == 0 && io_err.is_none() {
            last_written = steps;
            io_err = output::snapshot(&mut snap, s).err();
        }
        Ok(())
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    if last_written != result.steps {
        output::snapshot(&mut snap, &result.state)?;
    }
    let energy = result.history.energy();
    let mut report = Csv::create(out, "report.csv", ReportRow::HEADER)?;
    output::report_rows(&mut report, &energy.rows)?;
    Ok(RunSummary {
        steps: result.steps,
        t: result.state.t,
        mass_drift: result.history.conservation().relative_drift,
        final_residual: energy.final_residual,
        files: vec![snap.finish()?, report.finish()?],
    })
}

fn bubble_snapshots(files: &mut [Csv], state: &BubbleState) -> std::io::Result<()> {
    for (csv, p) in files.iter_mut().zip(&state.patches) {
        output::snapshot(csv, p)?;
    }
    Ok(())
}

pub fn bubble(cfg: &BubbleConfig, out: &Path) -> Result<RunSummary, Failure> {
    let setup = cfg.validate()?;
    let state = BubbleState::new(setup.geom, setup.kappa, cfg.n_r, cfg.n_theta, 0.0, setup.init)?;
    let mut snaps = Piece::ALL
        .iter()
        .map(|p| Csv::create(out, &format!("snapshot_{}.csv", p.name()), SNAPSHOT_HEADER))
        .collect::<std::io::Result<Vec<_>>>()?;
    bubble_snapshots(&mut snaps, &state)?;
    let (mut steps, mut last_written) = (0usize, 0usize);
    let mut io_err = None;
    let every = cfg.snapshot_every;
    let result = simulate_bubble(state, cfg.t_end, cfg.dt, &setup.opts, cfg.report_every, |s| {
        steps += 1;
        if every > 0 && steps % every == 0 && io_err.is_none() {
            last_written = steps;
            io_err = bubble_snapshots(&mut snaps, s).err();
        }
        Ok(())
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    if last_written != result.steps {
        bubble_snapshots(&mut snaps, &result.state)?;
    }
    let laws = bubble_laws_report(&result.history);
    let mut csv = Csv::create(out, "bubble_laws.csv", BubbleLawRow::HEADER)?;
    output::bubble_rows(&mut csv, &laws.rows)?;
    let mut files = snaps.into_iter().map(Csv::finish).collect::<std::io::Result<Vec<_>>>()?;
    files.push(csv.finish()?);
    Ok(RunSummary {
        steps: result.steps,
        t: result.state.t,
        mass_drift: laws.relative_mass_drift,
        final_residual: laws.final_energy_residual,
        files,
    })
}
