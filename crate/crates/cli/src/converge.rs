//! `cli converge`: one residual on a ladder of resolutions or time steps.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use surfdiff::bubble::{bubble_divergence_check, BubbleGeometry};
use surfdiff::calculus::{
    divergence_theorem_residual, fitted_order, transport_theorem_residual, union_divergence_residual, EdgePairing,
    Quadratic, Resolution, VectorField,
};
use surfdiff::geometry::{Affine, Chart, Edge, ParamGrid, SphereCap};
use surfdiff::solver::{simulate, Boundaries, EnergyDensity, SolverState, StepOptions};
use surfdiff::{Result, Vec3};

use crate::config::{ConvergeCheck, ConvergeConfig, FieldName};
use crate::output::{Cell, Csv};
use crate::verify::test_fields;
use crate::Failure;

pub const HEADER: &str = "level,n,dt,value";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: usize,
    pub dt: Option<f64>,
    pub value: f64,
}

pub struct Study {
    pub levels: Vec<Level>,
    /// `None` when fewer than two values lie above the floor.
    pub order: Option<f64>,
    pub pass: bool,
    pub file: PathBuf,
}

fn field(name: FieldName) -> Quadratic {
    let [(_, position), (_, affine), (_, quadratic)] = test_fields();
    match name {
        FieldName::Zero => Quadratic::linear(nalgebra::Matrix3::zeros()),
        FieldName::Position => position,
        FieldName::Affine => affine,
        FieldName::Quadratic => quadratic,
    }
}

fn level(cfg: &ConvergeConfig, bubble: &BubbleGeometry, k: usize) -> Result<Level> {
    let n = cfg.n0 << k;
    let res = Resolution::new(n, n, 4 * n).with_rule(cfg.rule.into());
    let phi = field(cfg.field);
    let finest = cfg.n0 << (cfg.levels - 1);
    let dt = cfg.dt0 / f64::from(1u32 << k);
    Ok(match cfg.check {
        ConvergeCheck::Divergence => {
            let chart = cfg.geometry.chart();
            Level { n, dt: None, value: divergence_theorem_residual(chart.as_ref(), &phi, cfg.time, res)?.value }
        }
        ConvergeCheck::Union => {
            let radius = Affine::constant(cfg.geometry.radius0);
            let (a, b) = (SphereCap::hemisphere(radius, 1.0), SphereCap::hemisphere(radius, -1.0));
            let pair = EdgePairing::new((0, Edge::RHi), (1, Edge::RHi), true);
            let u = union_divergence_residual(&[&a, &b], &[pair], &phi, 0.0, res)?;
            Level { n, dt: None, value: u.divergence.value }
        }
        ConvergeCheck::BubbleDivergence => {
            let reps = bubble_divergence_check(bubble, &phi, cfg.time, res)?;
            let value = reps.iter().map(|r| r.divergence.value.abs()).fold(0.0, f64::max);
            Level { n, dt: None, value }
        }
        ConvergeCheck::Transport => {
            let chart = cfg.geometry.chart();
            let f = move |x: Vec3, t: f64| phi.value(x, t).dot(&Vec3::new(1.0, -0.5, 0.25)) * (1.0 + t);
            let res = Resolution::new(finest, finest, 4 * finest);
            let r = transport_theorem_residual(&[chart.as_ref()], &f, cfg.time, dt, res)?;
            Level { n: finest, dt: Some(dt), value: r.value }
        }
        ConvergeCheck::EnergyLaw => {
            let chart: Arc<dyn Chart> = Arc::from(cfg.geometry.chart());
            let grid = ParamGrid::for_chart(chart.as_ref(), cfg.n0, cfg.n0)?;
            let s =
                SolverState::diffusion(chart, grid, EnergyDensity::linear(), Boundaries::neumann(), 0.0, |_, x| {
                    (2.0 * x.y).cos() + x.z
                })?;
            let opts = StepOptions { integrator: cfg.integrator.into(), ..StepOptions::default() };
            let t_end = cfg.dt0 * cfg.steps as f64;
            let run = simulate(s, t_end, Some(dt), &opts, usize::MAX, |_| Ok(()))?;
            Level { n: cfg.n0, dt: Some(dt), value: run.history.energy().final_residual }
        }
    })
}

pub fn run(cfg: &ConvergeConfig, bubble: &BubbleGeometry, out: &Path) -> std::result::Result<Study, Failure> {
    cfg.validate()?;
    let levels = (0..cfg.levels).into_par_iter().map(|k| level(cfg, bubble, k)).collect::<Result<Vec<_>>>()?;
    let h: Vec<f64> = levels.iter().map(|l| l.dt.unwrap_or(1.0 / l.n as f64)).collect();
    let values: Vec<f64> = levels.iter().map(|l| l.value).collect();
    let order = fitted_order(&h, &values, cfg.floor);
    let pass = order.is_none_or(|p| p >= cfg.min_order);
    let mut csv = Csv::create(out, "convergence.csv", HEADER)?;
    for (k, l) in levels.iter().enumerate() {
        csv.row(&[Cell::I(k), Cell::I(l.n), Cell::F(l.dt.unwrap_or(0.0)), Cell::F(l.value)])?;
    }
    Ok(Study { levels, order, pass, file: csv.finish()? })
}
