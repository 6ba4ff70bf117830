use crate::geometry::{frame, velocity_divergence, Chart, Edge, EdgeRole, ParamGrid};
use crate::{Result, Vec3};

/// Metric data of a grid at one time: at cell centers and at face centers.
#[derive(Debug, Clone)]
pub struct GridGeometry {
    pub t: f64,
    pub cell_sqrt_g: Vec<f64>,
    pub cell_ginv: Vec<[[f64; 2]; 2]>,
    pub cell_position: Vec<Vec3>,
    /// `d sqrt(G)/dt = (div w) sqrt(G)` at cell centers.
    pub cell_sqrt_g_rate: Vec<f64>,
    /// Per r face `(i, j)`, `i in 0..=nr`: `(sqrt G, g^11, g^12)`.
    pub r_faces: Vec<[f64; 3]>,
    /// Per s face `(i, j)`, `j in 0..=ns`: `(sqrt G, g^22, g^12)`.
    pub s_faces: Vec<[f64; 3]>,
}

impl GridGeometry {
    pub fn new(chart: &dyn Chart, grid: &ParamGrid, t: f64) -> Result<Self> {
        let (nr, ns) = (grid.nr, grid.ns);
        let mut g = Self {
            t,
            cell_sqrt_g: Vec::with_capacity(grid.len()),
            cell_ginv: Vec::with_capacity(grid.len()),
            cell_position: Vec::with_capacity(grid.len()),
            cell_sqrt_g_rate: Vec::with_capacity(grid.len()),
            r_faces: vec![[0.0; 3]; (nr + 1) * ns],
            s_faces: vec![[0.0; 3]; nr * (ns + 1)],
        };
        let moving = !chart.is_static();
        for i in 0..nr {
            for j in 0..ns {
                let x = grid.center(i, j);
                let f = frame(chart, x, t)?;
                g.cell_sqrt_g.push(f.sqrt_g);
                g.cell_ginv.push(f.ginv_ab);
                g.cell_position.push(chart.position(x, t));
                let rate = if moving { velocity_divergence(chart, x, t)? * f.sqrt_g } else { 0.0 };
                g.cell_sqrt_g_rate.push(rate);
            }
        }
        for i in 0..=nr {
            let pole = (i == 0 && grid.role(Edge::RLo) == EdgeRole::Pole)
                || (i == nr && grid.role(Edge::RHi) == EdgeRole::Pole);
            if pole {
                continue;
            }
            for j in 0..ns {
                let f = frame(chart, grid.r_face(i, j), t)?;
                g.r_faces[i * ns + j] = [f.sqrt_g, f.ginv_ab[0][0], f.ginv_ab[0][1]];
            }
        }
        for i in 0..nr {
            for j in 0..=ns {
                let f = frame(chart, grid.s_face(i, j), t)?;
                g.s_faces[i * (ns + 1) + j] = [f.sqrt_g, f.ginv_ab[1][1], f.ginv_ab[0][1]];
            }
        }
        Ok(g)
    }

    pub fn r_face(&self, grid: &ParamGrid, i: usize, j: usize) -> [f64; 3] {
        self.r_faces[i * grid.ns + j]
    }

    pub fn s_face(&self, grid: &ParamGrid, i: usize, j: usize) -> [f64; 3] {
        self.s_faces[i * (grid.ns + 1) + j]
    }

    /// `g^ab du_a du_b` at cell `k`.
    pub fn grad_sq(&self, k: usize, du_r: f64, du_s: f64) -> f64 {
        let m = &self.cell_ginv[k];
        m[0][0] * du_r * du_r + 2.0 * m[0][1] * du_r * du_s + m[1][1] * du_s * du_s
    }
}
