//! Law trackers over a sequence of states.

use super::state::{Rates, SolverState, StepOptions};
use crate::Result;

/// One recorded instant of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawSample {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub rates: Rates,
    pub min_u: f64,
    pub max_u: f64,
}

impl LawSample {
    pub fn of(state: &SolverState) -> Result<Self> {
        let p = state.primitive();
        Ok(Self {
            t: state.t,
            mass: state.mass(),
            energy: state.energy_value(),
            rates: state.rates()?,
            min_u: p.min(),
            max_u: p.max(),
        })
    }
}

/// Stored samples in increasing `t`, with the rate integrals accumulated over
/// every observed step by the trapezoid rule.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct History {
    pub samples: Vec<LawSample>,
    /// Integrals of (dissipation, dilation, boundary work) up to each stored sample.
    integrals: Vec<[f64; 3]>,
    last: Option<LawSample>,
    acc: [f64; 3],
}

/// One row of the report CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub dissipation_cum: f64,
    pub law_residual: f64,
    pub min_u: f64,
    pub max_u: f64,
}

impl ReportRow {
    pub const HEADER: &'static str = "t,mass,energy,dissipation_cum,law_residual,min_u,max_u";
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    pub masses: Vec<f64>,
    /// `max |mass(t) - mass(t0)| / |mass(t0)|`, or absolute if the initial mass is zero.
    pub relative_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub rows: Vec<ReportRow>,
    /// Residual including the dilation term `1/2 int (div w) C^2`.
    pub max_residual: f64,
    pub final_residual: f64,
    /// Residual of the law without the dilation term.
    pub final_residual_without_dilation: f64,
    /// Energy never increased between consecutive samples.
    pub monotone: bool,
}

impl History {
    pub fn record(&mut self, state: &SolverState) -> Result<()> {
        self.push(LawSample::of(state)?);
        Ok(())
    }

    /// Feeds `s` into the integrals without storing it.
    pub fn observe(&mut self, s: LawSample) {
        if let Some(p) = self.last {
            let h = 0.5 * (s.t - p.t);
            self.acc[0] += h * (p.rates.dissipation + s.rates.dissipation);
            self.acc[1] += h * (p.rates.dilation + s.rates.dilation);
            self.acc[2] += h * (p.rates.boundary_work + s.rates.boundary_work);
        }
        self.last = Some(s);
    }

    /// Feeds and stores `s`.
    pub fn push(&mut self, s: LawSample) {
        self.observe(s);
        self.samples.push(s);
        self.integrals.push(self.acc);
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn conservation(&self) -> ConservationReport {
        let masses: Vec<f64> = self.samples.iter().map(|s| s.mass).collect();
        let m0 = masses.first().copied().unwrap_or(0.0);
        let scale = if m0 != 0.0 { m0.abs() } else { 1.0 };
        let relative_drift = masses.iter().map(|m| (m - m0).abs() / scale).fold(0.0, f64::max);
        ConservationReport { masses, relative_drift }
    }

    pub fn energy(&self) -> EnergyReport {
        let e0 = self.samples.first().map(|s| s.energy).unwrap_or(0.0);
        let mut rows = Vec::with_capacity(self.samples.len());
        let mut printed = 0.0;
        for (k, s) in self.samples.iter().enumerate() {
            let [diss, dil, work] = self.integrals[k];
            let base = s.energy - e0 + diss - work;
            printed = base;
            rows.push(ReportRow {
                t: s.t,
                mass: s.mass,
                energy: s.energy,
                dissipation_cum: diss,
                law_residual: base + dil,
                min_u: s.min_u,
                max_u: s.max_u,
            });
        }
        let monotone = self.samples.windows(2).all(|w| w[1].energy <= w[0].energy);
        EnergyReport {
            max_residual: rows.iter().map(|r| r.law_residual.abs()).fold(0.0, f64::max),
            final_residual: rows.last().map(|r| r.law_residual).unwrap_or(0.0),
            final_residual_without_dilation: printed,
            monotone,
            rows,
        }
    }
}

/// Result of [`simulate`].
pub struct Run {
    pub state: SolverState,
    pub history: History,
    pub steps: usize,
}

/// Advances `state` to `t_end`, storing a sample every `every` steps and at the end.
/// The law integrals see every step.
/// With `dt = None` each step uses the stability bound from `opts`.
pub fn simulate(
    mut state: SolverState,
    t_end: f64,
    dt: Option<f64>,
    opts: &StepOptions,
    every: usize,
    mut on_step: impl FnMut(&SolverState) -> Result<()>,
) -> Result<Run> {
    let mut history = History::default();
    history.record(&state)?;
    let mut steps = 0;
    let every = every.max(1);
    let tol = 1e-12 * t_end.abs().max(1.0);
    while state.t < t_end - tol {
        let mut h = match dt {
            Some(h) => h,
            None => state.auto_dt(opts)?,
        };
        if state.t + h > t_end {
            h = t_end - state.t;
        }
        state = state.step_checked(h, opts)?;
        steps += 1;
        on_step(&state)?;
        let sample = LawSample::of(&state)?;
        if steps % every == 0 || state.t >= t_end - tol {
            history.push(sample);
        } else {
            history.observe(sample);
        }
    }
    Ok(Run { state, history, steps })
}
