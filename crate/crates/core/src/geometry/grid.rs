use super::chart::{Chart, Edge, EdgeRole, EdgeRoles, Param, ParamRect};
use crate::{Error, Result};

/// Cell-centered structured grid over a parameter rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    pub domain: ParamRect,
    pub roles: EdgeRoles,
    pub nr: usize,
    pub ns: usize,
    pub dr: f64,
    pub ds: f64,
}

impl ParamGrid {
    pub fn new(domain: ParamRect, roles: EdgeRoles, nr: usize, ns: usize) -> Result<Self> {
        if nr < 2 || ns < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2x2 cells, got {nr}x{ns}")));
        }
        for (a, b) in [(Edge::RLo, Edge::RHi), (Edge::SLo, Edge::SHi)] {
            let pa = roles.get(a) == EdgeRole::Periodic;
            let pb = roles.get(b) == EdgeRole::Periodic;
            if pa != pb {
                return Err(Error::InvalidGrid(format!("periodic edge {a:?} is not paired with {b:?}")));
            }
        }
        for e in [Edge::SLo, Edge::SHi] {
            if roles.get(e) == EdgeRole::Pole {
                return Err(Error::InvalidGrid("poles are supported on r edges only".into()));
            }
        }
        for e in [Edge::RLo, Edge::RHi] {
            if roles.get(e) == EdgeRole::Pole && roles.get(Edge::SLo) != EdgeRole::Periodic {
                return Err(Error::InvalidGrid("a pole needs a periodic s direction".into()));
            }
        }
        Ok(Self { domain, roles, nr, ns, dr: domain.width() / nr as f64, ds: domain.height() / ns as f64 })
    }

    pub fn for_chart(chart: &dyn Chart, nr: usize, ns: usize) -> Result<Self> {
        Self::new(chart.domain(), chart.roles(), nr, ns)
    }

    pub fn len(&self) -> usize {
        self.nr * self.ns
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.ns + j
    }

    pub fn center(&self, i: usize, j: usize) -> Param {
        [self.domain.r_lo + (i as f64 + 0.5) * self.dr, self.domain.s_lo + (j as f64 + 0.5) * self.ds]
    }

    /// Center of the face between cells `i-1` and `i` at row `j`; `i` runs `0..=nr`.
    pub fn r_face(&self, i: usize, j: usize) -> Param {
        [self.domain.r_lo + i as f64 * self.dr, self.domain.s_lo + (j as f64 + 0.5) * self.ds]
    }

    /// Center of the face between cells `j-1` and `j` in column `i`; `j` runs `0..=ns`.
    pub fn s_face(&self, i: usize, j: usize) -> Param {
        [self.domain.r_lo + (i as f64 + 0.5) * self.dr, self.domain.s_lo + j as f64 * self.ds]
    }

    pub fn cell_area(&self) -> f64 {
        self.dr * self.ds
    }

    pub fn role(&self, edge: Edge) -> EdgeRole {
        self.roles.get(edge)
    }

    pub fn r_periodic(&self) -> bool {
        self.role(Edge::RLo) == EdgeRole::Periodic
    }

    pub fn s_periodic(&self) -> bool {
        self.role(Edge::SLo) == EdgeRole::Periodic
    }

    /// Cell diametrically across a pole from `(i, j)`, if the column is
    /// adjacent to a pole edge and the s grid has an even cell count.
    pub fn across_pole(&self, edge: Edge, j: usize) -> Option<usize> {
        (self.role(edge) == EdgeRole::Pole && self.ns.is_multiple_of(2)).then(|| (j + self.ns / 2) % self.ns)
    }

    /// Number of s faces; periodic grids have no duplicate seam face.
    pub fn s_face_count(&self) -> usize {
        if self.s_periodic() {
            self.ns
        } else {
            self.ns + 1
        }
    }

    pub fn r_face_count(&self) -> usize {
        if self.r_periodic() {
            self.nr
        } else {
            self.nr + 1
        }
    }

    /// Samples `f` at every cell center.
    pub fn sample(&self, mut f: impl FnMut(Param) -> f64) -> Field {
        let mut out = Field::zeros(self);
        for i in 0..self.nr {
            for j in 0..self.ns {
                out.data[self.idx(i, j)] = f(self.center(i, j));
            }
        }
        out
    }

    /// Cell-centered central differences `(du/dr, du/ds)` of `u`.
    ///
    /// Periodic directions wrap, a pole is crossed to the opposite cell, and
    /// other edges use the ghost values from `ghost`, or one-sided differences
    /// if `ghost` gives `None`.
    pub fn derivatives(&self, u: &Field, ghost: &dyn Fn(Edge, usize, usize) -> Option<f64>) -> (Vec<f64>, Vec<f64>) {
        self.derivatives_signed(u, ghost, 1.0)
    }

    /// As [`ParamGrid::derivatives`], but the value across a pole is
    /// multiplied by `pole_sign`; use `-1` for the `r` component of a
    /// parameter vector field, which changes sign through the pole.
    pub fn derivatives_signed(
        &self,
        u: &Field,
        ghost: &dyn Fn(Edge, usize, usize) -> Option<f64>,
        pole_sign: f64,
    ) -> (Vec<f64>, Vec<f64>) {
        let mut dr = vec![0.0; self.len()];
        let mut ds = vec![0.0; self.len()];
        let at = |i: usize, j: usize| u.data[self.idx(i, j)];
        for i in 0..self.nr {
            for j in 0..self.ns {
                let c = at(i, j);
                dr[self.idx(i, j)] = self.diff(
                    c,
                    i,
                    self.nr,
                    self.dr,
                    self.r_periodic(),
                    |k| at(k, j),
                    |e| self.across_pole(e, j).map(|jj| pole_sign * at(i, jj)).or_else(|| ghost(e, i, j)),
                    [Edge::RLo, Edge::RHi],
                );
                ds[self.idx(i, j)] = self.diff(
                    c,
                    j,
                    self.ns,
                    self.ds,
                    self.s_periodic(),
                    |k| at(i, k),
                    |e| ghost(e, i, j),
                    [Edge::SLo, Edge::SHi],
                );
            }
        }
        (dr, ds)
    }

    #[allow(clippy::too_many_arguments)]
    fn diff(
        &self,
        c: f64,
        k: usize,
        n: usize,
        h: f64,
        periodic: bool,
        at: impl Fn(usize) -> f64,
        outside: impl Fn(Edge) -> Option<f64>,
        edges: [Edge; 2],
    ) -> f64 {
        let lo = if k > 0 {
            Some(at(k - 1))
        } else if periodic {
            Some(at(n - 1))
        } else {
            outside(edges[0])
        };
        let hi = if k + 1 < n {
            Some(at(k + 1))
        } else if periodic {
            Some(at(0))
        } else {
            outside(edges[1])
        };
        match (lo, hi) {
            (Some(a), Some(b)) => (b - a) / (2.0 * h),
            (None, Some(b)) => (b - c) / h,
            (Some(a), None) => (c - a) / h,
            (None, None) => 0.0,
        }
    }
}

/// Scalar samples at the cell centers of a grid, stored row-major in `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub nr: usize,
    pub ns: usize,
    pub data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: &ParamGrid) -> Self {
        Self { nr: grid.nr, ns: grid.ns, data: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: &ParamGrid, c: f64) -> Self {
        Self { nr: grid.nr, ns: grid.ns, data: vec![c; grid.len()] }
    }

    pub fn from_vec(grid: &ParamGrid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::FieldSize { expected: grid.len(), got: data.len() });
        }
        Ok(Self { nr: grid.nr, ns: grid.ns, data })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.ns + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.ns + j] = v;
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn check_grid(&self, grid: &ParamGrid) -> Result<()> {
        if self.nr != grid.nr || self.ns != grid.ns {
            return Err(Error::FieldSize { expected: grid.len(), got: self.data.len() });
        }
        Ok(())
    }
}
