//! Scenario files: TOML with one section per subcommand.

use std::path::Path;

use serde::Deserialize;
use surfdiff::bubble::InitialCondition;
use surfdiff::geometry::{Affine, Chart, Cylinder, FlatDisc, Graph, Plane, Rule, SphereCap};
use surfdiff::solver::{EnergyDensity, Integrator, StepOptions};
use surfdiff::Vec3;

/// Rejected configuration, with the offending key.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
}

fn invalid(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.into(), reason: reason.into() }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Seed for randomly sampled check points.
    pub seed: u64,
    pub verify: VerifyConfig,
    pub run: RunConfig,
    pub bubble: BubbleConfig,
    pub converge: ConvergeConfig,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 1,
            verify: VerifyConfig::default(),
            run: RunConfig::default(),
            bubble: BubbleConfig::default(),
            converge: ConvergeConfig::default(),
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text).map_err(|e| match e {
            ConfigError::Parse(m) => ConfigError::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleName {
    Midpoint,
    Gauss2,
}

impl From<RuleName> for Rule {
    fn from(r: RuleName) -> Self {
        match r {
            RuleName::Midpoint => Rule::Midpoint,
            RuleName::Gauss2 => Rule::Gauss2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegratorName {
    Euler,
    Heun,
}

impl From<IntegratorName> for Integrator {
    fn from(i: IntegratorName) -> Self {
        match i {
            IntegratorName::Euler => Integrator::Euler,
            IntegratorName::Heun => Integrator::Heun,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// Cells per parameter direction.
    pub resolution: usize,
    /// Boundary quadrature points per edge; `4 * resolution` if absent.
    pub m_edge: Option<usize>,
    pub rule: RuleName,
    /// Random points for the pointwise checks.
    pub points: usize,
    /// Replaces every check's own tolerance.
    pub tolerance: Option<f64>,
    /// Time at which the moving geometries are checked.
    pub time: f64,
    /// Check groups to run; all if empty.
    pub checks: Vec<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            resolution: 64,
            m_edge: None,
            rule: RuleName::Gauss2,
            points: 500,
            tolerance: None,
            time: 0.3,
            checks: Vec::new(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.resolution < 4 {
            return Err(invalid("verify.resolution", "must be at least 4"));
        }
        if self.m_edge == Some(0) {
            return Err(invalid("verify.m_edge", "must be positive"));
        }
        if self.points == 0 {
            return Err(invalid("verify.points", "must be positive"));
        }
        if let Some(t) = self.tolerance {
            if t.is_nan() || t < 0.0 {
                return Err(invalid("verify.tolerance", "must be non-negative"));
            }
        }
        check_finite("verify.time", self.time)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Plane,
    Disc,
    Cap,
    Hemisphere,
    Cylinder,
    Graph,
}

/// Single-patch geometry. Affine coefficients give `c0 + c1 t`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub kind: GeometryKind,
    /// Radius, or the scale of a plane.
    pub radius0: f64,
    pub radius1: f64,
    /// Axial offset of a disc, or the center of a cap.
    pub center0: f64,
    pub center1: f64,
    /// Cap extent in `(0, 2)`; 1 is a hemisphere.
    pub extent: f64,
    /// Cylinder length.
    pub length: f64,
    pub amp0: f64,
    pub amp1: f64,
    /// Graph height `q0 + q1 x + q2 y + q3 x^2 + q4 x y + q5 y^2 + A sin(k1 x + k2 y + phase)`.
    pub quad: [f64; 6],
    /// `[A, k1, k2, phase]`.
    pub wave: [f64; 4],
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            kind: GeometryKind::Disc,
            radius0: 1.0,
            radius1: 0.0,
            center0: 0.0,
            center1: 0.0,
            extent: 0.7,
            length: 2.0,
            amp0: 1.0,
            amp1: 0.0,
            quad: [0.1, 0.2, -0.3, 0.4, 0.5, -0.6],
            wave: [0.3, 2.0, 1.0, 0.4],
        }
    }
}

impl GeometryConfig {
    pub fn validate(&self, section: &str) -> Result<(), ConfigError> {
        let f = |k: &str| format!("{section}.geometry.{k}");
        for (k, v) in [
            ("radius0", self.radius0),
            ("radius1", self.radius1),
            ("center0", self.center0),
            ("center1", self.center1),
            ("amp0", self.amp0),
            ("amp1", self.amp1),
        ] {
            check_finite(&f(k), v)?;
        }
        let uses_radius = !matches!(self.kind, GeometryKind::Graph);
        if uses_radius && self.radius0 <= 0.0 {
            return Err(invalid(&f("radius0"), "must be positive"));
        }
        if self.kind == GeometryKind::Cap && !(self.extent > 0.0 && self.extent < 2.0) {
            return Err(invalid(&f("extent"), "must lie in (0, 2)"));
        }
        if self.kind == GeometryKind::Cylinder && !(self.length > 0.0 && self.length.is_finite()) {
            return Err(invalid(&f("length"), "must be positive"));
        }
        Ok(())
    }

    /// Latest time at which the radius is still positive.
    pub fn check_until(&self, section: &str, t_end: f64) -> Result<(), ConfigError> {
        if !matches!(self.kind, GeometryKind::Graph) && self.radius0 + self.radius1 * t_end <= 0.0 {
            return Err(invalid(
                &format!("{section}.geometry.radius1"),
                format!("radius reaches zero before t = {t_end}"),
            ));
        }
        Ok(())
    }

    pub fn chart(&self) -> Box<dyn Chart> {
        let radius = Affine::new(self.radius0, self.radius1);
        let center = Affine::new(self.center0, self.center1);
        match self.kind {
            GeometryKind::Plane => Box::new(Plane::scaling(radius)),
            GeometryKind::Disc => Box::new(FlatDisc::new(center, radius)),
            GeometryKind::Cap => Box::new(SphereCap::cap(radius, center, self.extent, 1.0)),
            GeometryKind::Hemisphere => Box::new(SphereCap::hemisphere(radius, 1.0)),
            GeometryKind::Cylinder => Box::new(Cylinder::new(radius, self.length)),
            GeometryKind::Graph => {
                Box::new(Graph { amp: Affine::new(self.amp0, self.amp1), ..Graph::new(self.quad, self.wave) })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Diffusion,
    Heat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyKindName {
    Linear,
    Power,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BcKind {
    Neumann,
    Dirichlet,
}

/// Time controls shared by `run` and `bubble`.
fn step_options(
    section: &str,
    integrator: IntegratorName,
    cfl_safety: f64,
    dt: Option<f64>,
    dt_max: Option<f64>,
    t_end: f64,
) -> Result<StepOptions, ConfigError> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(invalid(&format!("{section}.t_end"), "must be positive"));
    }
    if !(cfl_safety > 0.0 && cfl_safety <= 1.0) {
        return Err(invalid(&format!("{section}.cfl_safety"), "must lie in (0, 1]"));
    }
    if let Some(dt) = dt {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(invalid(&format!("{section}.dt"), "must be positive"));
        }
    }
    let dt_max = dt_max.unwrap_or(f64::INFINITY);
    if dt_max.is_nan() || dt_max <= 0.0 {
        return Err(invalid(&format!("{section}.dt_max"), "must be positive"));
    }
    Ok(StepOptions { integrator: integrator.into(), cfl_safety, dt_max, allow_unstable: false })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub system: SystemKind,
    pub geometry: GeometryConfig,
    pub energy: EnergyKindName,
    /// Exponent of the power energy, `e'(r) = r^p`.
    pub power: f64,
    pub kappa: f64,
    pub bc: BcKind,
    pub bc_value: f64,
    /// `bessel`, `constant(c)`, `gaussian(x1, x2, x3, width)` or `coordinate(k)`.
    pub initial: String,
    /// Initial density of the heat system, same presets.
    pub density: String,
    #[serde(rename = "N_r")]
    pub n_r: usize,
    #[serde(rename = "N_s")]
    pub n_s: usize,
    pub t_end: f64,
    pub dt: Option<f64>,
    pub cfl_safety: f64,
    pub dt_max: Option<f64>,
    pub integrator: IntegratorName,
    pub report_every: usize,
    /// Snapshot every this many steps; 0 writes only the first and last.
    pub snapshot_every: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            system: SystemKind::Diffusion,
            geometry: GeometryConfig::default(),
            energy: EnergyKindName::Linear,
            power: 1.0,
            kappa: 1.0,
            bc: BcKind::Dirichlet,
            bc_value: 0.0,
            initial: "bessel".into(),
            density: "constant(1)".into(),
            n_r: 32,
            n_s: 16,
            t_end: 0.1,
            dt: None,
            cfl_safety: 0.4,
            dt_max: None,
            integrator: IntegratorName::Euler,
            report_every: 10,
            snapshot_every: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<StepOptions, ConfigError> {
        self.geometry.validate("run")?;
        self.geometry.check_until("run", self.t_end)?;
        if self.n_r < 2 || self.n_s < 2 {
            return Err(invalid("run.N_r", "grid needs at least 2 x 2 cells"));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(invalid("run.kappa", "must be positive"));
        }
        if self.energy == EnergyKindName::Power && !(self.power >= 0.0 && self.power.is_finite()) {
            return Err(invalid("run.power", "must be non-negative"));
        }
        check_finite("run.bc_value", self.bc_value)?;
        PatchInit::parse("run.initial", &self.initial)?;
        if self.system == SystemKind::Heat {
            PatchInit::parse("run.density", &self.density)?;
        }
        if self.report_every == 0 {
            return Err(invalid("run.report_every", "must be positive"));
        }
        step_options("run", self.integrator, self.cfl_safety, self.dt, self.dt_max, self.t_end)
    }

    pub fn energy(&self) -> EnergyDensity {
        let e = match self.energy {
            EnergyKindName::Linear => EnergyDensity::linear(),
            EnergyKindName::Power => EnergyDensity::power(self.power),
            EnergyKindName::Log => EnergyDensity::log(),
        };
        e.scaled(self.kappa)
    }
}

/// Initial data preset of a single patch, evaluated at the point `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PatchInit {
    Constant(f64),
    Gaussian {
        center: [f64; 3],
        width: f64,
    },
    Coordinate(usize),
    /// First Dirichlet eigenmode of a disc of the given radius about the x1 axis.
    Bessel,
}

impl PatchInit {
    pub fn parse(field: &str, s: &str) -> Result<Self, ConfigError> {
        let (name, args) = split_call(field, s)?;
        let want = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(invalid(field, format!("`{name}` takes {n} arguments, got {}", args.len())))
            }
        };
        match name.as_str() {
            "constant" => {
                want(1)?;
                Ok(PatchInit::Constant(args[0]))
            }
            "gaussian" => {
                want(4)?;
                if args[3].is_nan() || args[3] <= 0.0 {
                    return Err(invalid(field, "gaussian width must be positive"));
                }
                Ok(PatchInit::Gaussian { center: [args[0], args[1], args[2]], width: args[3] })
            }
            "coordinate" => {
                want(1)?;
                let k = args[0];
                if ![1.0, 2.0, 3.0].contains(&k) {
                    return Err(invalid(field, "coordinate index must be 1, 2 or 3"));
                }
                Ok(PatchInit::Coordinate(k as usize - 1))
            }
            "bessel" => {
                want(0)?;
                Ok(PatchInit::Bessel)
            }
            other => Err(invalid(field, format!("unknown preset `{other}`"))),
        }
    }

    pub fn value(&self, x: Vec3, disc_radius: f64) -> f64 {
        match *self {
            PatchInit::Constant(c) => c,
            PatchInit::Gaussian { center, width } => {
                let d2 = (x - Vec3::from(center)).norm_squared();
                (-d2 / (2.0 * width * width)).exp()
            }
            PatchInit::Coordinate(k) => x[k],
            PatchInit::Bessel => bessel_j0(J01 * x.yz().norm() / disc_radius),
        }
    }
}

/// First zero of `J0`.
pub const J01: f64 = 2.404_825_557_695_773;

/// `J0` by its power series; accurate well past the first zero.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..80 {
        term *= q / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

/// `name(a, b, ...)` or a bare `name`.
fn split_call(field: &str, s: &str) -> Result<(String, Vec<f64>), ConfigError> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s.to_string(), Vec::new()));
    };
    if !s.ends_with(')') {
        return Err(invalid(field, format!("missing `)` in `{s}`")));
    }
    let name = s[..open].trim().to_string();
    let inner = s[open + 1..s.len() - 1].trim();
    if inner.is_empty() {
        return Ok((name, Vec::new()));
    }
    let args = inner
        .split(',')
        .map(|a| {
            a.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| invalid(field, format!("`{}` is not a number", a.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((name, args))
}

/// Parses a bubble preset: `constant(c)`, `gaussian(theta0, width)` or `indicator`.
pub fn bubble_init(field: &str, s: &str) -> Result<InitialCondition, ConfigError> {
    let (name, args) = split_call(field, s)?;
    match (name.as_str(), args.as_slice()) {
        ("constant", [c]) => Ok(InitialCondition::Constant(*c)),
        ("gaussian", [theta0, width]) if *width > 0.0 => {
            Ok(InitialCondition::Gaussian { theta0: *theta0, width: *width })
        }
        ("gaussian", [_, _]) => Err(invalid(field, "gaussian width must be positive")),
        ("indicator" | "indicator_patch", []) => Ok(InitialCondition::Indicator),
        ("constant" | "gaussian" | "indicator" | "indicator_patch", _) => {
            Err(invalid(field, format!("wrong number of arguments in `{s}`")))
        }
        (other, _) => Err(invalid(field, format!("unknown preset `{other}`"))),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BubbleConfig {
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
    pub m0: f64,
    pub m1: f64,
    #[serde(rename = "kappa_A")]
    pub kappa_a: f64,
    #[serde(rename = "kappa_B")]
    pub kappa_b: f64,
    #[serde(rename = "kappa_S")]
    pub kappa_s: f64,
    #[serde(rename = "N_r")]
    pub n_r: usize,
    #[serde(rename = "N_theta")]
    pub n_theta: usize,
    pub t_end: f64,
    pub dt: Option<f64>,
    pub cfl_safety: f64,
    pub dt_max: Option<f64>,
    pub integrator: IntegratorName,
    #[serde(rename = "init_A")]
    pub init_a: String,
    #[serde(rename = "init_B")]
    pub init_b: String,
    #[serde(rename = "init_S")]
    pub init_s: String,
    pub report_every: usize,
    pub snapshot_every: usize,
}

impl Default for BubbleConfig {
    fn default() -> Self {
        Self {
            a0: 1.0,
            a1: 0.0,
            b0: 1.2,
            b1: 0.0,
            m0: 0.8,
            m1: 0.05,
            kappa_a: 1.0,
            kappa_b: 0.5,
            kappa_s: 2.0,
            n_r: 16,
            n_theta: 16,
            t_end: 0.05,
            dt: None,
            cfl_safety: 0.4,
            dt_max: None,
            integrator: IntegratorName::Euler,
            init_a: "gaussian(1.0, 0.7)".into(),
            init_b: "constant(0)".into(),
            init_s: "indicator".into(),
            report_every: 10,
            snapshot_every: 0,
        }
    }
}

/// Validated bubble scenario.
#[derive(Debug)]
pub struct BubbleSetup {
    pub geom: surfdiff::bubble::BubbleGeometry,
    pub kappa: [f64; 3],
    pub init: [InitialCondition; 3],
    pub opts: StepOptions,
}

impl BubbleConfig {
    pub fn validate(&self) -> Result<BubbleSetup, ConfigError> {
        for (k, v) in
            [("a0", self.a0), ("a1", self.a1), ("b0", self.b0), ("b1", self.b1), ("m0", self.m0), ("m1", self.m1)]
        {
            check_finite(&format!("bubble.{k}"), v)?;
        }
        let kappa = [self.kappa_a, self.kappa_b, self.kappa_s];
        for (k, v) in ["kappa_A", "kappa_B", "kappa_S"].iter().zip(kappa) {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(&format!("bubble.{k}"), "must be positive"));
            }
        }
        if self.n_r < 2 || self.n_theta < 2 {
            return Err(invalid("bubble.N_r", "grid needs at least 2 x 2 cells"));
        }
        if self.report_every == 0 {
            return Err(invalid("bubble.report_every", "must be positive"));
        }
        let opts = step_options("bubble", self.integrator, self.cfl_safety, self.dt, self.dt_max, self.t_end)?;
        let geom = surfdiff::bubble::BubbleGeometry::new(
            Affine::new(self.a0, self.a1),
            Affine::new(self.b0, self.b1),
            Affine::new(self.m0, self.m1),
        );
        geom.validate(0.0, self.t_end, 1000).map_err(|e| invalid("bubble.a0, b0, m0", e.to_string()))?;
        let init = [
            bubble_init("bubble.init_A", &self.init_a)?,
            bubble_init("bubble.init_B", &self.init_b)?,
            bubble_init("bubble.init_S", &self.init_s)?,
        ];
        Ok(BubbleSetup { geom, kappa, init, opts })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergeCheck {
    Divergence,
    Union,
    BubbleDivergence,
    Transport,
    EnergyLaw,
}

impl ConvergeCheck {
    pub const ALL: [(ConvergeCheck, &'static str, &'static str); 5] = [
        (ConvergeCheck::Divergence, "divergence", "divergence theorem on one chart, refined in space"),
        (ConvergeCheck::Union, "union", "divergence theorem on the sphere from two hemispheres, refined in space"),
        (
            ConvergeCheck::BubbleDivergence,
            "bubble_divergence",
            "divergence theorem on the bubble surfaces, refined in space",
        ),
        (ConvergeCheck::Transport, "transport", "transport theorem on one chart, refined in dt"),
        (ConvergeCheck::EnergyLaw, "energy_law", "energy-law residual of a diffusion run, refined in dt"),
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldName {
    Zero,
    Position,
    Affine,
    Quadratic,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergeConfig {
    pub check: ConvergeCheck,
    pub geometry: GeometryConfig,
    pub field: FieldName,
    pub rule: RuleName,
    /// Coarsest cells per direction; level `k` uses `n0 2^k`.
    pub n0: usize,
    pub levels: usize,
    /// Coarsest time step for the time refinements.
    pub dt0: f64,
    pub time: f64,
    /// End time of the energy-law runs, in units of `dt0`.
    pub steps: usize,
    pub integrator: IntegratorName,
    pub min_order: f64,
    /// Values at or below this are treated as exact and left out of the fit.
    pub floor: f64,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self {
            check: ConvergeCheck::Divergence,
            geometry: GeometryConfig {
                kind: GeometryKind::Cap,
                center0: 0.2,
                extent: 0.6,
                ..GeometryConfig::default()
            },
            field: FieldName::Quadratic,
            rule: RuleName::Midpoint,
            n0: 16,
            levels: 3,
            dt0: 1e-2,
            time: 0.3,
            steps: 16,
            integrator: IntegratorName::Heun,
            min_order: 1.9,
            floor: 1e-13,
        }
    }
}

impl ConvergeConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.geometry.validate("converge")?;
        if self.n0 < 2 {
            return Err(invalid("converge.n0", "must be at least 2"));
        }
        if !(2..=8).contains(&self.levels) {
            return Err(invalid("converge.levels", "must lie in 2..=8"));
        }
        if !(self.dt0 > 0.0 && self.dt0.is_finite()) {
            return Err(invalid("converge.dt0", "must be positive"));
        }
        if self.steps == 0 {
            return Err(invalid("converge.steps", "must be positive"));
        }
        check_finite("converge.time", self.time)?;
        check_finite("converge.min_order", self.min_order)?;
        if self.floor.is_nan() || self.floor < 0.0 {
            return Err(invalid("converge.floor", "must be non-negative"));
        }
        if self.check == ConvergeCheck::Transport {
            self.geometry.check_until("converge", self.time + self.dt0)?;
        }
        if self.check == ConvergeCheck::EnergyLaw {
            self.geometry.check_until("converge", self.dt0 * self.steps as f64)?;
        }
        Ok(())
    }
}

fn check_finite(field: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, "must be finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let c = Config::parse("").unwrap();
        assert_eq!(c.seed, 1);
        assert_eq!(c.verify.resolution, 64);
        c.verify.validate().unwrap();
        c.run.validate().unwrap();
        c.bubble.validate().unwrap();
        c.converge.validate().unwrap();
    }

    #[test]
    fn unknown_key_names_its_line() {
        let err = Config::parse("seed = 3\n[bubble]\na0 = 1.0\nkapa_A = 2.0\n").unwrap_err().to_string();
        assert!(err.contains("kapa_A"), "{err}");
        assert!(err.contains("line 4"), "{err}");
    }

    #[test]
    fn bubble_keys_parse() {
        let c = Config::parse(
            "[bubble]\nkappa_A = 2.0\nN_r = 8\nN_theta = 12\ninit_A = \"indicator_patch\"\ninit_B = \"gaussian(0.5, 0.2)\"\n",
        )
        .unwrap();
        let s = c.bubble.validate().unwrap();
        assert_eq!(s.kappa[0], 2.0);
        assert_eq!(s.init[0], InitialCondition::Indicator);
        assert_eq!(s.init[1], InitialCondition::Gaussian { theta0: 0.5, width: 0.2 });
        assert_eq!(c.bubble.n_theta, 12);
    }

    #[test]
    fn invalid_values_name_the_field() {
        let c = Config::parse("[bubble]\nm0 = 0.3\n").unwrap();
        assert!(c.bubble.validate().unwrap_err().to_string().starts_with("bubble.a0"));
        let c = Config::parse("[run]\ninitial = \"gaussian(1, 2)\"\n").unwrap();
        assert!(c.run.validate().unwrap_err().to_string().starts_with("run.initial"));
        let c = Config::parse("[run]\ncfl_safety = 1.5\n").unwrap();
        assert!(c.run.validate().unwrap_err().to_string().starts_with("run.cfl_safety"));
    }

    #[test]
    fn presets() {
        assert_eq!(PatchInit::parse("f", "constant(2.5)").unwrap(), PatchInit::Constant(2.5));
        assert_eq!(PatchInit::parse("f", " bessel ").unwrap(), PatchInit::Bessel);
        assert_eq!(PatchInit::parse("f", "coordinate(3)").unwrap(), PatchInit::Coordinate(2));
        assert!(PatchInit::parse("f", "coordinate(4)").is_err());
        assert!(PatchInit::parse("f", "constant(x)").is_err());
        assert!(bubble_init("f", "constant").is_err());
        assert!(bubble_init("f", "indicator(1)").is_err());
    }

    #[test]
    fn bessel_zero() {
        assert!(bessel_j0(J01).abs() < 1e-14);
        assert_eq!(bessel_j0(0.0), 1.0);
    }
}
