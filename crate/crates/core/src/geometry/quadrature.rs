use super::chart::{BoundarySegment, Chart};
use super::frame::{frame, line_element};
use super::grid::{Field, ParamGrid};
use crate::{Error, Result, Vec3};

/// `sqrt(G)` at every cell center.
pub fn sqrt_g_field(chart: &dyn Chart, grid: &ParamGrid, t: f64) -> Result<Field> {
    let mut out = Field::zeros(grid);
    for i in 0..grid.nr {
        for j in 0..grid.ns {
            out.data[grid.idx(i, j)] = frame(chart, grid.center(i, j), t)?.sqrt_g;
        }
    }
    Ok(out)
}

/// Midpoint rule `sum f sqrt(G) dr ds` for cell samples `f`.
pub fn surface_integral(chart: &dyn Chart, grid: &ParamGrid, f: &Field, t: f64) -> Result<f64> {
    f.check_grid(grid)?;
    let w = sqrt_g_field(chart, grid, t)?;
    Ok(f.data.iter().zip(&w.data).map(|(a, b)| a * b).sum::<f64>() * grid.cell_area())
}

/// Midpoint rule for an integrand given as a function of the surface point.
pub fn surface_integral_fn(chart: &dyn Chart, grid: &ParamGrid, t: f64, mut f: impl FnMut(Vec3) -> f64) -> Result<f64> {
    let mut sum = 0.0;
    for i in 0..grid.nr {
        for j in 0..grid.ns {
            let x = grid.center(i, j);
            sum += f(chart.position(x, t)) * frame(chart, x, t)?.sqrt_g;
        }
    }
    Ok(sum * grid.cell_area())
}

/// Quadrature rule applied on each cell or edge interval.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Rule {
    #[default]
    Midpoint,
    /// Two-point Gauss-Legendre per direction.
    Gauss2,
}

impl Rule {
    /// Nodes as offsets from the interval center in units of its length, with weights summing to 1.
    pub fn nodes(self) -> &'static [(f64, f64)] {
        const G: f64 = 0.288_675_134_594_812_9; // 1 / (2 sqrt 3)
        match self {
            Rule::Midpoint => &[(0.0, 1.0)],
            Rule::Gauss2 => &[(-G, 0.5), (G, 0.5)],
        }
    }
}

/// Midpoint rule over `m` points of the edge for `f(l) |n1 g2 - n2 g1|`.
pub fn boundary_integral(
    chart: &dyn Chart,
    seg: &BoundarySegment,
    t: f64,
    m: usize,
    f: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    boundary_integral_with(chart, seg, t, m, Rule::Midpoint, f)
}

/// As [`boundary_integral`] with the given rule on each of the `m` intervals.
pub fn boundary_integral_with(
    chart: &dyn Chart,
    seg: &BoundarySegment,
    t: f64,
    m: usize,
    rule: Rule,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    if !seg.role.carries_boundary() {
        return Err(Error::UnsupportedEdge { edge: seg.edge, role: seg.role.describe() });
    }
    let h = seg.length() / m as f64;
    let mut sum = 0.0;
    for k in 0..m {
        for &(off, w) in rule.nodes() {
            let l = seg.l_lo + (k as f64 + 0.5 + off) * h;
            let ds = line_element(chart, seg, l, t);
            if ds * ds <= super::frame::EPS_G {
                let p = seg.point(l);
                return Err(Error::DegenerateMetric { r: p[0], s: p[1], t, g: ds * ds });
            }
            sum += w * f(l)? * ds;
        }
    }
    Ok(sum * h)
}

/// Per-cell surface gradient `g^a du/dX_a` of cell samples, using central
/// differences (one-sided at non-periodic boundaries).
pub fn surface_gradient(chart: &dyn Chart, grid: &ParamGrid, u: &Field, t: f64) -> Result<Vec<Vec3>> {
    u.check_grid(grid)?;
    let (dr, ds) = grid.derivatives(u, &|_, _, _| None);
    let mut out = Vec::with_capacity(grid.len());
    for i in 0..grid.nr {
        for j in 0..grid.ns {
            let k = grid.idx(i, j);
            out.push(frame(chart, grid.center(i, j), t)?.gradient([dr[k], ds[k]]));
        }
    }
    Ok(out)
}

/// Per-cell surface divergence `g^a . dphi/dX_a` of sampled vectors.
pub fn surface_divergence(chart: &dyn Chart, grid: &ParamGrid, phi: &[Vec3], t: f64) -> Result<Field> {
    if phi.len() != grid.len() {
        return Err(Error::FieldSize { expected: grid.len(), got: phi.len() });
    }
    let mut d = [(Vec::new(), Vec::new()), (Vec::new(), Vec::new()), (Vec::new(), Vec::new())];
    for (c, slot) in d.iter_mut().enumerate() {
        let comp = Field::from_vec(grid, phi.iter().map(|v| v[c]).collect())?;
        *slot = grid.derivatives(&comp, &|_, _, _| None);
    }
    let mut out = Field::zeros(grid);
    for i in 0..grid.nr {
        for j in 0..grid.ns {
            let k = grid.idx(i, j);
            let dphi_r = Vec3::new(d[0].0[k], d[1].0[k], d[2].0[k]);
            let dphi_s = Vec3::new(d[0].1[k], d[1].1[k], d[2].1[k]);
            out.data[k] = frame(chart, grid.center(i, j), t)?.divergence([dphi_r, dphi_s]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::chart::{Affine, Chart, Edge};
    use crate::geometry::charts::{FlatDisc, Plane, SphereCap};
    use std::f64::consts::PI;

    #[test]
    fn disc_area_and_circumference() {
        let r2: f64 = 0.56109375;
        let disc = FlatDisc::new(Affine::constant(-0.1375), Affine::constant(r2.sqrt()));
        let grid = ParamGrid::for_chart(&disc, 16, 16).unwrap();
        let a = surface_integral(&disc, &grid, &Field::constant(&grid, 1.0), 0.0).unwrap();
        assert!((a - PI * r2).abs() < 1e-13);
        let c = boundary_integral(&disc, &disc.segment(Edge::RHi), 0.0, 64, |_| Ok(1.0)).unwrap();
        assert!((c - 2.0 * PI * r2.sqrt()).abs() < 1e-13);
        let z = surface_integral(&disc, &grid, &Field::zeros(&grid), 0.0).unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn sphere_area_from_two_caps() {
        let caps =
            [SphereCap::hemisphere(Affine::constant(1.0), 1.0), SphereCap::hemisphere(Affine::constant(1.0), -1.0)];
        let mut area = 0.0;
        for c in &caps {
            let grid = ParamGrid::for_chart(c, 8, 8).unwrap();
            area += surface_integral(c, &grid, &Field::constant(&grid, 1.0), 0.0).unwrap();
            let eq = boundary_integral(c, &c.segment(Edge::RHi), 0.0, 32, |_| Ok(1.0)).unwrap();
            assert!((eq - 2.0 * PI).abs() < 1e-13);
        }
        assert!((area - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn pole_edge_has_no_boundary_integral() {
        let disc = FlatDisc::new(Affine::constant(0.0), Affine::constant(1.0));
        assert!(boundary_integral(&disc, &disc.segment(Edge::RLo), 0.0, 8, |_| Ok(1.0)).is_err());
    }

    #[test]
    fn plane_gradient_and_divergence() {
        let p = Plane::unit_square();
        let grid = ParamGrid::for_chart(&p, 6, 6).unwrap();
        let u = grid.sample(|x| x[0]);
        for v in surface_gradient(&p, &grid, &u, 0.0).unwrap() {
            assert!((v - Vec3::x()).norm() < 1e-13);
        }
        let one = Field::constant(&grid, 1.0);
        assert!(surface_gradient(&p, &grid, &one, 0.0).unwrap().iter().all(|v| v.norm() == 0.0));
        let pos: Vec<Vec3> = (0..grid.len()).map(|k| p.position(grid.center(k / 6, k % 6), 0.0)).collect();
        let d = surface_divergence(&p, &grid, &pos, 0.0).unwrap();
        assert!(d.data.iter().all(|v| (v - 2.0).abs() < 1e-12));
    }
}
