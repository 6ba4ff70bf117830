//! Finite-volume flux assembly for `d(u sqrt G)/dt = d_a(sqrt G e' g^ab d_b u)`.

use super::energy::EnergyDensity;
use super::geometry::GridGeometry;
use crate::geometry::{Edge, Field, ParamGrid};
use crate::Result;

/// Boundary condition on one edge of a patch.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCondition {
    /// Zero normal flux.
    Neumann,
    Dirichlet(f64),
    /// Dirichlet value per boundary face, in increasing edge parameter.
    DirichletFaces(Vec<f64>),
}

impl BoundaryCondition {
    pub fn value(&self, k: usize) -> Option<f64> {
        match self {
            BoundaryCondition::Neumann => None,
            BoundaryCondition::Dirichlet(g) => Some(*g),
            BoundaryCondition::DirichletFaces(v) => Some(v[k]),
        }
    }
}

/// Boundary conditions of the four edges; ignored on periodic and pole edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Boundaries(pub [BoundaryCondition; 4]);

impl Boundaries {
    pub fn neumann() -> Self {
        Self(std::array::from_fn(|_| BoundaryCondition::Neumann))
    }

    pub fn dirichlet(g: f64) -> Self {
        Self(std::array::from_fn(|_| BoundaryCondition::Dirichlet(g)))
    }

    pub fn get(&self, edge: Edge) -> &BoundaryCondition {
        &self.0[edge.index()]
    }

    pub fn set(&mut self, edge: Edge, bc: BoundaryCondition) {
        self.0[edge.index()] = bc;
    }

    pub fn with(mut self, edge: Edge, bc: BoundaryCondition) -> Self {
        self.set(edge, bc);
        self
    }

    /// True if every boundary-carrying edge of `grid` is Neumann.
    pub fn all_neumann(&self, grid: &ParamGrid) -> bool {
        Edge::ALL.iter().all(|&e| !grid.role(e).carries_boundary() || *self.get(e) == BoundaryCondition::Neumann)
    }
}

/// Conductance data of one boundary face. The flux into the adjacent cell is
/// `cond (g - u_cell) + sign * cross` for a Dirichlet value `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFace {
    pub cond: f64,
    pub cross: f64,
    pub sign: f64,
    /// Bound on the cross-term coefficients, for the stability estimate.
    pub cross_cond: f64,
}

impl BoundaryFace {
    pub fn inflow(&self, g: f64, u: f64) -> f64 {
        self.cond * (g - u) + self.sign * self.cross
    }
}

/// Time derivative of the conserved field plus the discrete dissipation
/// `sum_faces flux * jump` and boundary work `sum g * inflow`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    pub rhs: Vec<f64>,
    pub dissipation: f64,
    pub boundary_work: f64,
}

/// Cell-centered parameter derivatives and `|grad u|^2`.
struct CellDiffs {
    pub dr: Vec<f64>,
    pub ds: Vec<f64>,
    pub grad_sq: Vec<f64>,
}

fn face_index(edge: Edge, i: usize, j: usize) -> usize {
    if edge.is_r_edge() {
        j
    } else {
        i
    }
}

fn cell_diffs(grid: &ParamGrid, geo: &GridGeometry, u: &Field, bcs: &Boundaries) -> CellDiffs {
    let ghost = |e: Edge, i: usize, j: usize| -> Option<f64> {
        if !grid.role(e).carries_boundary() {
            return None;
        }
        let uc = u.get(i, j);
        Some(match bcs.get(e).value(face_index(e, i, j)) {
            Some(g) => 2.0 * g - uc,
            None => uc,
        })
    };
    let (dr, ds) = grid.derivatives(u, &ghost);
    let grad_sq = (0..grid.len()).map(|k| geo.grad_sq(k, dr[k], ds[k])).collect();
    CellDiffs { dr, ds, grad_sq }
}

/// Cell adjacent to boundary face `k` of `edge`.
fn boundary_cell(grid: &ParamGrid, edge: Edge, k: usize) -> (usize, usize) {
    match edge {
        Edge::RLo => (0, k),
        Edge::RHi => (grid.nr - 1, k),
        Edge::SLo => (k, 0),
        Edge::SHi => (k, grid.ns - 1),
    }
}

fn edge_face_count(grid: &ParamGrid, edge: Edge) -> usize {
    if edge.is_r_edge() {
        grid.ns
    } else {
        grid.nr
    }
}

fn boundary_face(
    grid: &ParamGrid,
    geo: &GridGeometry,
    d: &CellDiffs,
    energy: &EnergyDensity,
    edge: Edge,
    k: usize,
) -> Result<BoundaryFace> {
    let (i, j) = boundary_cell(grid, edge, k);
    let c = grid.idx(i, j);
    let kappa = energy.diffusivity(d.grad_sq[c])?;
    let sign = if matches!(edge, Edge::RHi | Edge::SHi) { 1.0 } else { -1.0 };
    Ok(match edge {
        Edge::RLo | Edge::RHi => {
            let fi = if edge == Edge::RLo { 0 } else { grid.nr };
            let [sg, g11, g12] = geo.r_face(grid, fi, j);
            BoundaryFace {
                cond: sg * kappa * g11 * grid.ds / (0.5 * grid.dr),
                cross: sg * kappa * g12 * d.ds[c] * grid.ds,
                sign,
                cross_cond: 0.5 * sg * kappa * g12.abs(),
            }
        }
        Edge::SLo | Edge::SHi => {
            let fj = if edge == Edge::SLo { 0 } else { grid.ns };
            let [sg, g22, g12] = geo.s_face(grid, i, fj);
            BoundaryFace {
                cond: sg * kappa * g22 * grid.dr / (0.5 * grid.ds),
                cross: sg * kappa * g12 * d.dr[c] * grid.dr,
                sign,
                cross_cond: 0.5 * sg * kappa * g12.abs(),
            }
        }
    })
}

/// Conductances of every face on `edge`, evaluated for the state `u`.
pub fn boundary_faces(
    grid: &ParamGrid,
    geo: &GridGeometry,
    u: &Field,
    energy: &EnergyDensity,
    bcs: &Boundaries,
    edge: Edge,
) -> Result<Vec<BoundaryFace>> {
    let d = cell_diffs(grid, geo, u, bcs);
    (0..edge_face_count(grid, edge)).map(|k| boundary_face(grid, geo, &d, energy, edge, k)).collect()
}

/// Flux divergence of the conserved variable for primitive values `u`.
pub fn assemble(
    grid: &ParamGrid,
    geo: &GridGeometry,
    u: &Field,
    energy: &EnergyDensity,
    bcs: &Boundaries,
) -> Result<Assembly> {
    let (nr, ns) = (grid.nr, grid.ns);
    let d = cell_diffs(grid, geo, u, bcs);
    let mut rhs = vec![0.0; grid.len()];
    let mut dissipation = 0.0;
    let mut work = 0.0;

    // r faces between (i-1, j) and (i, j)
    let r_interior: Vec<usize> = if grid.r_periodic() { (0..nr).collect() } else { (1..nr).collect() };
    for &i in &r_interior {
        let il = if i == 0 { nr - 1 } else { i - 1 };
        for j in 0..ns {
            let (l, r) = (grid.idx(il, j), grid.idx(i, j));
            let [sg, g11, g12] = geo.r_face(grid, i, j);
            let kappa = energy.diffusivity(0.5 * (d.grad_sq[l] + d.grad_sq[r]))?;
            let du_r = (u.data[r] - u.data[l]) / grid.dr;
            let du_s = 0.5 * (d.ds[l] + d.ds[r]);
            let phi = sg * kappa * (g11 * du_r + g12 * du_s) * grid.ds;
            rhs[l] += phi;
            rhs[r] -= phi;
            dissipation += phi * (u.data[r] - u.data[l]);
        }
    }
    // s faces between (i, j-1) and (i, j)
    let s_interior: Vec<usize> = if grid.s_periodic() { (0..ns).collect() } else { (1..ns).collect() };
    for i in 0..nr {
        for &j in &s_interior {
            let jl = if j == 0 { ns - 1 } else { j - 1 };
            let (l, r) = (grid.idx(i, jl), grid.idx(i, j));
            let [sg, g22, g12] = geo.s_face(grid, i, j);
            let kappa = energy.diffusivity(0.5 * (d.grad_sq[l] + d.grad_sq[r]))?;
            let du_s = (u.data[r] - u.data[l]) / grid.ds;
            let du_r = 0.5 * (d.dr[l] + d.dr[r]);
            let phi = sg * kappa * (g22 * du_s + g12 * du_r) * grid.dr;
            rhs[l] += phi;
            rhs[r] -= phi;
            dissipation += phi * (u.data[r] - u.data[l]);
        }
    }
    for edge in Edge::ALL {
        if !grid.role(edge).carries_boundary() {
            continue;
        }
        let bc = bcs.get(edge);
        if *bc == BoundaryCondition::Neumann {
            continue;
        }
        for k in 0..edge_face_count(grid, edge) {
            let g = bc.value(k).unwrap_or(0.0);
            let (i, j) = boundary_cell(grid, edge, k);
            let c = grid.idx(i, j);
            let inflow = boundary_face(grid, geo, &d, energy, edge, k)?.inflow(g, u.data[c]);
            rhs[c] += inflow;
            dissipation += (g - u.data[c]) * inflow;
            work += g * inflow;
        }
    }
    let area = grid.cell_area();
    for v in rhs.iter_mut() {
        *v /= area;
    }
    Ok(Assembly { rhs, dissipation, boundary_work: work })
}

/// Stable explicit step: `safety * min_cells (w dA) / sum(face conductances)`,
/// where `w` is the cell weight (`sqrt G` unless given).
/// Returns infinity if every conductance vanishes.
pub fn stable_dt(
    grid: &ParamGrid,
    geo: &GridGeometry,
    u: &Field,
    energy: &EnergyDensity,
    bcs: &Boundaries,
    weight: Option<&[f64]>,
    safety: f64,
) -> Result<f64> {
    let weight = weight.unwrap_or(&geo.cell_sqrt_g);
    let (nr, ns) = (grid.nr, grid.ns);
    let d = cell_diffs(grid, geo, u, bcs);
    let mut total = vec![0.0; grid.len()];
    let r_interior: Vec<usize> = if grid.r_periodic() { (0..nr).collect() } else { (1..nr).collect() };
    for &i in &r_interior {
        let il = if i == 0 { nr - 1 } else { i - 1 };
        for j in 0..ns {
            let (l, r) = (grid.idx(il, j), grid.idx(i, j));
            let [sg, g11, g12] = geo.r_face(grid, i, j);
            let kappa = energy.diffusivity(0.5 * (d.grad_sq[l] + d.grad_sq[r]))?;
            let c = sg * kappa * (g11 * grid.ds / grid.dr + 0.5 * g12.abs());
            total[l] += c;
            total[r] += c;
        }
    }
    let s_interior: Vec<usize> = if grid.s_periodic() { (0..ns).collect() } else { (1..ns).collect() };
    for i in 0..nr {
        for &j in &s_interior {
            let jl = if j == 0 { ns - 1 } else { j - 1 };
            let (l, r) = (grid.idx(i, jl), grid.idx(i, j));
            let [sg, g22, g12] = geo.s_face(grid, i, j);
            let kappa = energy.diffusivity(0.5 * (d.grad_sq[l] + d.grad_sq[r]))?;
            let c = sg * kappa * (g22 * grid.dr / grid.ds + 0.5 * g12.abs());
            total[l] += c;
            total[r] += c;
        }
    }
    for edge in Edge::ALL {
        if !grid.role(edge).carries_boundary() || *bcs.get(edge) == BoundaryCondition::Neumann {
            continue;
        }
        for k in 0..edge_face_count(grid, edge) {
            let f = boundary_face(grid, geo, &d, energy, edge, k)?;
            let (i, j) = boundary_cell(grid, edge, k);
            total[grid.idx(i, j)] += f.cond + f.cross_cond;
        }
    }
    let area = grid.cell_area();
    let mut dt = f64::INFINITY;
    for (k, &c) in total.iter().enumerate() {
        if c > 0.0 {
            dt = dt.min(weight[k] * area / c);
        }
    }
    Ok(safety * dt)
}
