//! The integral theorems of the surface calculus as numerical residuals.
//!
//! Each residual is assembled from the geometry operations along independent
//! paths where possible, so a small value is a genuine check.

use nalgebra::Matrix3;

use crate::geometry::{
    boundary_integral_with, conormal, frame, mean_curvature, velocity_divergence, BoundarySegment, Chart, Edge, Field,
    Param, ParamGrid, Rule,
};
use crate::solver::EnergyDensity;
use crate::{Error, Result, Vec3};

/// Grid size, boundary quadrature points and time step of a check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    pub nr: usize,
    pub ns: usize,
    pub m_edge: usize,
    pub dt: Option<f64>,
    /// Rule used per cell and per edge interval by the divergence checks.
    pub rule: Rule,
}

impl Resolution {
    pub fn new(nr: usize, ns: usize, m_edge: usize) -> Self {
        Self { nr, ns, m_edge, dt: None, rule: Rule::Midpoint }
    }

    pub fn square(n: usize) -> Self {
        Self::new(n, n, 4 * n)
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }
}

impl std::fmt::Display for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}/M{}", self.nr, self.ns, self.m_edge)?;
        if let Some(dt) = self.dt {
            write!(f, "/dt{dt:e}")?;
        }
        if self.rule == Rule::Gauss2 {
            write!(f, "/gauss2")?;
        }
        Ok(())
    }
}

/// Outcome of one residual check.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub resolution: Resolution,
    pub pass: bool,
    /// Named partial quantities that make up `value`, for diagnostics.
    pub terms: Vec<(String, f64)>,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

impl ResidualReport {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64, resolution: Resolution) -> Self {
        Self { name: name.into(), value, tolerance, resolution, pass: value.abs() <= tolerance, terms: Vec::new() }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.value.abs() <= tolerance;
        self
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    fn with_terms(mut self, terms: &[(&str, f64)]) -> Self {
        self.terms = terms.iter().map(|(n, v)| (n.to_string(), *v)).collect();
        self
    }
}

/// A vector field on R^3 (optionally time-dependent) with its Jacobian.
pub trait VectorField: Send + Sync {
    fn value(&self, x: Vec3, t: f64) -> Vec3;

    /// `J[i][j] = d phi_i / d x_j`; central differences unless overridden.
    fn jacobian(&self, x: Vec3, t: f64) -> Matrix3<f64> {
        let h = 1e-5 * (1.0 + x.norm());
        let mut j = Matrix3::zeros();
        for c in 0..3 {
            let mut e = Vec3::zeros();
            e[c] = h;
            let d = (self.value(x + e, t) - self.value(x - e, t)) / (2.0 * h);
            j.set_column(c, &d);
        }
        j
    }
}

/// Vector field from a closure, differentiated numerically.
pub struct FnField<F>(pub F);

impl<F: Fn(Vec3) -> Vec3 + Send + Sync> VectorField for FnField<F> {
    fn value(&self, x: Vec3, _t: f64) -> Vec3 {
        (self.0)(x)
    }
}

/// `phi_i(x) = b_i + (A x)_i + x^T C_i x`, with an exact Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    pub b: Vec3,
    pub a: Matrix3<f64>,
    pub c: [Matrix3<f64>; 3],
}

impl Quadratic {
    pub fn linear(a: Matrix3<f64>) -> Self {
        Self { b: Vec3::zeros(), a, c: [Matrix3::zeros(); 3] }
    }

    pub fn identity() -> Self {
        Self::linear(Matrix3::identity())
    }
}

impl VectorField for Quadratic {
    fn value(&self, x: Vec3, _t: f64) -> Vec3 {
        let q = Vec3::new(x.dot(&(self.c[0] * x)), x.dot(&(self.c[1] * x)), x.dot(&(self.c[2] * x)));
        self.b + self.a * x + q
    }

    fn jacobian(&self, x: Vec3, _t: f64) -> Matrix3<f64> {
        let mut j = self.a;
        for i in 0..3 {
            let row = (self.c[i] + self.c[i].transpose()) * x;
            for k in 0..3 {
                j[(i, k)] += row[k];
            }
        }
        j
    }
}

/// Surface divergence of `phi` at a parameter point, by the chain rule
/// `d phi / dX_a = J g_a`.
pub fn divergence_at(chart: &dyn Chart, phi: &dyn VectorField, x: Param, t: f64) -> Result<f64> {
    let f = frame(chart, x, t)?;
    let j = phi.jacobian(chart.position(x, t), t);
    Ok(f.divergence([j * f.g1, j * f.g2]))
}

/// Volume part `(int div phi, int H n.phi)` of the divergence theorem.
fn volume_terms(chart: &dyn Chart, phi: &dyn VectorField, t: f64, res: &Resolution) -> Result<(f64, f64)> {
    let grid = ParamGrid::for_chart(chart, res.nr, res.ns)?;
    let nodes = res.rule.nodes();
    let (mut div, mut curv) = (0.0, 0.0);
    for i in 0..grid.nr {
        for j in 0..grid.ns {
            let c = grid.center(i, j);
            for &(or, wr) in nodes {
                for &(os, ws) in nodes {
                    let x = [c[0] + or * grid.dr, c[1] + os * grid.ds];
                    let f = frame(chart, x, t)?;
                    let p = chart.position(x, t);
                    let jac = phi.jacobian(p, t);
                    let w = wr * ws * f.sqrt_g;
                    div += w * f.divergence([jac * f.g1, jac * f.g2]);
                    curv += w * mean_curvature(chart, x, t)? * f.n.dot(&phi.value(p, t));
                }
            }
        }
    }
    let w = grid.cell_area();
    Ok((div * w, curv * w))
}

/// `int nu . phi` over one boundary segment, midpoint rule on `m` points.
pub fn flux_through(chart: &dyn Chart, seg: &BoundarySegment, phi: &dyn VectorField, t: f64, m: usize) -> Result<f64> {
    flux_through_with(chart, seg, phi, t, m, Rule::Midpoint)
}

fn flux_through_with(
    chart: &dyn Chart,
    seg: &BoundarySegment,
    phi: &dyn VectorField,
    t: f64,
    m: usize,
    rule: Rule,
) -> Result<f64> {
    boundary_integral_with(chart, seg, t, m, rule, |l| {
        let nu = conormal(chart, seg, l, t)?;
        Ok(nu.dot(&phi.value(chart.position(seg.point(l), t), t)))
    })
}

/// `int div phi + int H (n . phi) - int_boundary nu . phi` on one chart.
pub fn divergence_theorem_residual(
    chart: &dyn Chart,
    phi: &dyn VectorField,
    t: f64,
    res: Resolution,
) -> Result<ResidualReport> {
    let (div, curv) = volume_terms(chart, phi, t, &res)?;
    let mut bnd = 0.0;
    for seg in chart.boundary_segments() {
        bnd += flux_through_with(chart, &seg, phi, t, res.m_edge, res.rule)?;
    }
    Ok(ResidualReport::new("divergence_theorem", div + curv - bnd, DEFAULT_TOLERANCE, res).with_terms(&[
        ("div", div),
        ("curvature", curv),
        ("boundary", bnd),
    ]))
}

/// Identification of an edge of chart `a` with an edge of chart `b`.
/// With `reversed`, the low end of one edge meets the high end of the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePairing {
    pub a: (usize, Edge),
    pub b: (usize, Edge),
    pub reversed: bool,
}

impl EdgePairing {
    pub fn new(a: (usize, Edge), b: (usize, Edge), reversed: bool) -> Self {
        Self { a, b, reversed }
    }

    /// Edge parameter on `b` matching `l` on `a`.
    pub fn map(&self, sa: &BoundarySegment, sb: &BoundarySegment, l: f64) -> f64 {
        let frac = (l - sa.l_lo) / sa.length();
        if self.reversed {
            sb.l_hi - frac * sb.length()
        } else {
            sb.l_lo + frac * sb.length()
        }
    }
}

/// Result of the divergence theorem on a union of charts.
#[derive(Debug, Clone, PartialEq)]
pub struct UnionReport {
    pub divergence: ResidualReport,
    /// `max |nu_a + nu_b|` over all pairings.
    pub antisymmetry: ResidualReport,
    /// Largest Hausdorff distance between paired edges.
    pub hausdorff: f64,
}

pub const PAIRING_TOLERANCE: f64 = 1e-8;

fn edge_points(chart: &dyn Chart, seg: &BoundarySegment, t: f64, m: usize) -> Vec<Vec3> {
    (0..m).map(|k| chart.position(seg.point(seg.l_lo + (k as f64 + 0.5) / m as f64 * seg.length()), t)).collect()
}

/// Symmetric Hausdorff distance between two point samples.
pub fn hausdorff(a: &[Vec3], b: &[Vec3]) -> f64 {
    let one_way = |p: &[Vec3], q: &[Vec3]| {
        p.iter().map(|x| q.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Divergence theorem on the union of `charts` glued along `pairings`:
/// boundary integrals are taken over unpaired edges only, and the co-normals
/// of paired edges are checked to be opposite.
pub fn union_divergence_residual(
    charts: &[&dyn Chart],
    pairings: &[EdgePairing],
    phi: &dyn VectorField,
    t: f64,
    res: Resolution,
) -> Result<UnionReport> {
    let mut worst_h = 0.0_f64;
    let mut anti = 0.0_f64;
    for p in pairings {
        let (ca, cb) = (charts[p.a.0], charts[p.b.0]);
        let (sa, sb) = (ca.segment(p.a.1), cb.segment(p.b.1));
        // Hausdorff on a coarse sample plus the exact point map.
        let m = res.m_edge.clamp(16, 256);
        let mut h = hausdorff(&edge_points(ca, &sa, t, m), &edge_points(cb, &sb, t, m));
        for k in 0..res.m_edge {
            let l = sa.l_lo + (k as f64 + 0.5) / res.m_edge as f64 * sa.length();
            let lb = p.map(&sa, &sb, l);
            h = h.max((ca.position(sa.point(l), t) - cb.position(sb.point(lb), t)).norm());
        }
        if h > PAIRING_TOLERANCE {
            return Err(Error::PairingMismatch { distance: h });
        }
        worst_h = worst_h.max(h);
        for k in 0..res.m_edge {
            let l = sa.l_lo + (k as f64 + 0.5) / res.m_edge as f64 * sa.length();
            let nu_a = conormal(ca, &sa, l, t)?;
            let nu_b = conormal(cb, &sb, p.map(&sa, &sb, l), t)?;
            anti = anti.max((nu_a + nu_b).norm());
        }
    }
    let paired = |c: usize, e: Edge| pairings.iter().any(|p| p.a == (c, e) || p.b == (c, e));
    let (mut div, mut curv, mut bnd) = (0.0, 0.0, 0.0);
    for (ci, chart) in charts.iter().enumerate() {
        let (d, c) = volume_terms(*chart, phi, t, &res)?;
        div += d;
        curv += c;
        for seg in chart.boundary_segments() {
            if !paired(ci, seg.edge) {
                bnd += flux_through_with(*chart, &seg, phi, t, res.m_edge, res.rule)?;
            }
        }
    }
    let divergence = ResidualReport::new("union_divergence_theorem", div + curv - bnd, DEFAULT_TOLERANCE, res)
        .with_terms(&[("div", div), ("curvature", curv), ("boundary", bnd)]);
    let antisymmetry = ResidualReport::new("conormal_antisymmetry", anti, 1e-10, res);
    Ok(UnionReport { divergence, antisymmetry, hausdorff: worst_h })
}

/// `int_{Gamma(t)} f`, by the midpoint rule on the given grid size.
fn integral_at(charts: &[&dyn Chart], f: &dyn Fn(Vec3, f64) -> f64, tau: f64, res: &Resolution) -> Result<f64> {
    let mut sum = 0.0;
    for chart in charts {
        let grid = ParamGrid::for_chart(*chart, res.nr, res.ns)?;
        let mut s = 0.0;
        for i in 0..grid.nr {
            for j in 0..grid.ns {
                let x = grid.center(i, j);
                s += f(chart.position(x, tau), tau) * frame(*chart, x, tau)?.sqrt_g;
            }
        }
        sum += s * grid.cell_area();
    }
    Ok(sum)
}

/// Transport theorem on the union of `charts`: the centered time difference
/// of `int f` against `int (D_t f + (div w) f)`. Terms `lhs` and `rhs`.
pub fn transport_theorem_residual(
    charts: &[&dyn Chart],
    f: &dyn Fn(Vec3, f64) -> f64,
    t: f64,
    dt: f64,
    res: Resolution,
) -> Result<ResidualReport> {
    let lhs = (integral_at(charts, f, t + dt, &res)? - integral_at(charts, f, t - dt, &res)?) / (2.0 * dt);
    let mut rhs = 0.0;
    for chart in charts {
        let grid = ParamGrid::for_chart(*chart, res.nr, res.ns)?;
        let mut s = 0.0;
        for i in 0..grid.nr {
            for j in 0..grid.ns {
                let x = grid.center(i, j);
                let fr = frame(*chart, x, t)?;
                let material =
                    (f(chart.position(x, t + dt), t + dt) - f(chart.position(x, t - dt), t - dt)) / (2.0 * dt);
                let dil = velocity_divergence(*chart, x, t)? * f(chart.position(x, t), t);
                s += (material + dil) * fr.sqrt_g;
            }
        }
        rhs += s * grid.cell_area();
    }
    let res = res.with_dt(dt);
    Ok(ResidualReport::new("transport_theorem", lhs - rhs, DEFAULT_TOLERANCE, res)
        .with_terms(&[("lhs", lhs), ("rhs", rhs)]))
}

/// Pointwise `d sqrt(G)/dt - (div w) sqrt(G)` with a centered time difference.
pub fn sqrt_g_evolution_residual(chart: &dyn Chart, x: Param, t: f64, dt: f64) -> Result<f64> {
    let sg = |tau: f64| frame(chart, x, tau).map(|f| f.sqrt_g);
    let lhs = (sg(t + dt)? - sg(t - dt)?) / (2.0 * dt);
    Ok(lhs - velocity_divergence(chart, x, t)? * sg(t)?)
}

/// Discrete surface gradient pieces shared by the variation check: the
/// parameter derivatives of a cell field, with pole crossing and one-sided
/// differences at boundary edges.
struct DiscreteCalculus<'a> {
    grid: &'a ParamGrid,
    sqrt_g: Vec<f64>,
    ginv: Vec<[[f64; 2]; 2]>,
}

impl<'a> DiscreteCalculus<'a> {
    fn new(chart: &dyn Chart, grid: &'a ParamGrid, t: f64) -> Result<Self> {
        let mut sqrt_g = Vec::with_capacity(grid.len());
        let mut ginv = Vec::with_capacity(grid.len());
        for i in 0..grid.nr {
            for j in 0..grid.ns {
                let f = frame(chart, grid.center(i, j), t)?;
                sqrt_g.push(f.sqrt_g);
                ginv.push(f.ginv_ab);
            }
        }
        Ok(Self { grid, sqrt_g, ginv })
    }

    fn grad_sq(&self, dr: &[f64], ds: &[f64], k: usize) -> f64 {
        let m = &self.ginv[k];
        m[0][0] * dr[k] * dr[k] + 2.0 * m[0][1] * dr[k] * ds[k] + m[1][1] * ds[k] * ds[k]
    }

    /// Dissipation energy `-1/2 int e(|grad g|^2)`.
    fn energy(&self, g: &Field, e: &EnergyDensity) -> f64 {
        let (dr, ds) = self.grid.derivatives(g, &|_, _, _| None);
        let sum: f64 = (0..self.grid.len()).map(|k| e.e(self.grad_sq(&dr, &ds, k)) * self.sqrt_g[k]).sum();
        -0.5 * sum * self.grid.cell_area()
    }

    /// `int div{e'(|grad f|^2) grad f} psi`, with the divergence in
    /// conservative form `(1/sqrt G) d_a (sqrt G e' g^ab d_b f)`.
    fn flux_divergence_against(&self, f: &Field, psi: &Field, e: &EnergyDensity) -> Result<f64> {
        let grid = self.grid;
        let (dr, ds) = grid.derivatives(f, &|_, _, _| None);
        let mut fr = Field::zeros(grid);
        let mut fs = Field::zeros(grid);
        for k in 0..grid.len() {
            let kappa = e.diffusivity(self.grad_sq(&dr, &ds, k))?;
            let m = &self.ginv[k];
            fr.data[k] = self.sqrt_g[k] * kappa * (m[0][0] * dr[k] + m[0][1] * ds[k]);
            fs.data[k] = self.sqrt_g[k] * kappa * (m[1][0] * dr[k] + m[1][1] * ds[k]);
        }
        let (dfr, _) = grid.derivatives_signed(&fr, &|_, _, _| None, -1.0);
        let (_, dfs) = grid.derivatives(&fs, &|_, _, _| None);
        let sum: f64 = (0..grid.len()).map(|k| psi.data[k] * (dfr[k] + dfs[k])).sum();
        Ok(sum * grid.cell_area())
    }
}

/// Largest `|psi|` on the two cell layers next to each boundary edge.
fn boundary_layer_max(grid: &ParamGrid, psi: &Field) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..grid.nr {
        for j in 0..grid.ns {
            let near = |e: Edge| {
                let k = match e {
                    Edge::RLo => i,
                    Edge::RHi => grid.nr - 1 - i,
                    Edge::SLo => j,
                    Edge::SHi => grid.ns - 1 - j,
                };
                grid.role(e).carries_boundary() && k < 2
            };
            if Edge::ALL.iter().any(|&e| near(e)) {
                worst = worst.max(psi.get(i, j).abs());
            }
        }
    }
    worst
}

/// Gradient check of the dissipation energy `E[g] = -1/2 int e(|grad g|^2)`:
/// `(E[f + eps psi] - E[f - eps psi]) / (2 eps) - int div{e' grad f} psi`.
///
/// Both terms use the same cell-centered differences, which sum by parts
/// exactly when `psi` vanishes on the two layers of cells along boundary
/// edges; this is checked.
pub fn dissipation_variation_residual(
    chart: &dyn Chart,
    f: &dyn Fn(Vec3) -> f64,
    psi: &dyn Fn(Vec3) -> f64,
    energy: &EnergyDensity,
    t: f64,
    res: Resolution,
    eps: f64,
) -> Result<ResidualReport> {
    let grid = ParamGrid::for_chart(chart, res.nr, res.ns)?;
    let fv = grid.sample(|x| f(chart.position(x, t)));
    let pv = grid.sample(|x| psi(chart.position(x, t)));
    let edge_max = boundary_layer_max(&grid, &pv);
    if edge_max > 0.0 {
        return Err(Error::SupportTouchesBoundary { max: edge_max });
    }
    let dc = DiscreteCalculus::new(chart, &grid, t)?;
    let shifted = |s: f64| Field { data: fv.data.iter().zip(&pv.data).map(|(a, b)| a + s * b).collect(), ..fv.clone() };
    let variation = (dc.energy(&shifted(eps), energy) - dc.energy(&shifted(-eps), energy)) / (2.0 * eps);
    let divergence = dc.flux_divergence_against(&fv, &pv, energy)?;
    Ok(ResidualReport::new("dissipation_variation", variation - divergence, DEFAULT_TOLERANCE, res)
        .with_terms(&[("variation", variation), ("divergence", divergence)]))
}

/// Least-squares slope of `log(value)` against `log(1/h)`, i.e. the observed
/// order of convergence. `None` if fewer than two levels are above `floor`.
pub fn fitted_order(h: &[f64], values: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        h.iter().zip(values).filter(|(_, v)| v.abs() > floor).map(|(h, v)| (-h.ln(), v.abs().ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Affine, FlatDisc, Plane, SphereCap};
    use std::f64::consts::PI;

    const R2: f64 = 0.56109375;

    #[test]
    fn disc_field_balances_boundary() {
        let disc = FlatDisc::new(Affine::constant(-0.1375), Affine::constant(R2.sqrt()));
        let phi = FnField(|x: Vec3| Vec3::new(0.0, x.y, x.z));
        let r = divergence_theorem_residual(&disc, &phi, 0.0, Resolution::new(16, 16, 64)).unwrap();
        assert!((r.term("div").unwrap() - 2.0 * PI * R2).abs() < 1e-8);
        assert!((r.term("boundary").unwrap() - 2.0 * PI * R2).abs() < 1e-12);
        assert_eq!(r.term("curvature").unwrap(), 0.0);
        assert!(r.pass);
    }

    #[test]
    fn zero_field_gives_zero() {
        let p = Plane::unit_square();
        let zero = Quadratic::linear(Matrix3::zeros());
        let r = divergence_theorem_residual(&p, &zero, 0.0, Resolution::square(4)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn closed_sphere_position_field() {
        let n = SphereCap::hemisphere(Affine::constant(1.0), 1.0);
        let s = SphereCap::hemisphere(Affine::constant(1.0), -1.0);
        let pair = EdgePairing::new((0, Edge::RHi), (1, Edge::RHi), true);
        let u =
            union_divergence_residual(&[&n, &s], &[pair], &Quadratic::identity(), 0.0, Resolution::square(32)).unwrap();
        assert!((u.divergence.term("div").unwrap() - 8.0 * PI).abs() < 1e-10);
        assert!((u.divergence.term("curvature").unwrap() + 8.0 * PI).abs() < 1e-10);
        assert_eq!(u.divergence.term("boundary").unwrap(), 0.0);
        assert!(u.antisymmetry.value < 1e-12);
    }

    #[test]
    fn mismatched_pairing_is_rejected() {
        let n = SphereCap::hemisphere(Affine::constant(1.0), 1.0);
        let s = SphereCap::hemisphere(Affine::constant(1.1), -1.0);
        let pair = EdgePairing::new((0, Edge::RHi), (1, Edge::RHi), true);
        let r = union_divergence_residual(&[&n, &s], &[pair], &Quadratic::identity(), 0.0, Resolution::square(8));
        assert!(matches!(r, Err(Error::PairingMismatch { .. })));
    }

    #[test]
    fn growing_sphere_area_rate() {
        let a = Affine::new(1.0, 0.1);
        let caps = [SphereCap::hemisphere(a, 1.0), SphereCap::hemisphere(a, -1.0)];
        let r =
            transport_theorem_residual(&[&caps[0], &caps[1]], &|_, _| 1.0, 0.0, 1e-4, Resolution::square(16)).unwrap();
        assert!((r.term("lhs").unwrap() - 0.8 * PI).abs() < 1e-9);
        assert!(r.value.abs() < 1e-8);
    }

    #[test]
    fn scaling_plane_sqrt_g_rate() {
        let p = Plane::scaling(Affine::new(1.0, 1.0));
        assert!(sqrt_g_evolution_residual(&p, [0.2, 0.3], 0.4, 1e-3).unwrap().abs() < 1e-9);
        let st = Plane::unit_square();
        assert_eq!(sqrt_g_evolution_residual(&st, [0.2, 0.3], 0.4, 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn harmonic_variation_vanishes() {
        let p = Plane::unit_square();
        let bump = |x: Vec3| {
            let d2 = (x.x - 0.5).powi(2) + (x.y - 0.5).powi(2);
            if d2 < 0.09 {
                (1.0 - d2 / 0.09).powi(4)
            } else {
                0.0
            }
        };
        let r = dissipation_variation_residual(
            &p,
            &|x| 2.0 * x.x - x.y,
            &bump,
            &EnergyDensity::linear(),
            0.0,
            Resolution::square(32),
            1e-4,
        )
        .unwrap();
        assert!(r.value.abs() < 1e-10);
        assert!(r.term("divergence").unwrap().abs() < 1e-10);
    }

    #[test]
    fn variation_rejects_boundary_support() {
        let p = Plane::unit_square();
        let r = dissipation_variation_residual(
            &p,
            &|x| x.x,
            &|_| 1.0,
            &EnergyDensity::linear(),
            0.0,
            Resolution::square(8),
            1e-4,
        );
        assert!(matches!(r, Err(Error::SupportTouchesBoundary { .. })));
    }

    #[test]
    fn order_fit() {
        let h = [0.1, 0.05, 0.025];
        let v: Vec<f64> = h.iter().map(|x| 3.0 * x * x).collect();
        assert!((fitted_order(&h, &v, 1e-14).unwrap() - 2.0).abs() < 1e-12);
        assert!(fitted_order(&h, &[0.0; 3], 1e-14).is_none());
    }
}
