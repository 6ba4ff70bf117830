use super::chart::{BoundarySegment, Chart, Param, SecondDerivativeMode, SecondDerivatives};
use crate::{Error, Result, Vec3};

/// Threshold on `G` below which a non-pole point is rejected.
pub const EPS_G: f64 = 1e-14;

/// First fundamental form and the derived frame at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameData {
    pub g1: Vec3,
    pub g2: Vec3,
    /// Metric `g_ab = g_a . g_b`.
    pub g_ab: [[f64; 2]; 2],
    /// Inverse metric `g^ab`.
    pub ginv_ab: [[f64; 2]; 2],
    pub big_g: f64,
    pub sqrt_g: f64,
    /// Dual tangents `g^a = g^ab g_b`.
    pub gup1: Vec3,
    pub gup2: Vec3,
    pub n: Vec3,
}

impl FrameData {
    /// Frame built from two tangent vectors. Returns `None` if they are
    /// (numerically) parallel.
    pub fn from_tangents(g1: Vec3, g2: Vec3) -> Option<Self> {
        let g11 = g1.dot(&g1);
        let g12 = g1.dot(&g2);
        let g22 = g2.dot(&g2);
        let c = g1.cross(&g2);
        // sum of the three squared minors
        let big_g = c.x * c.x + c.y * c.y + c.z * c.z;
        if big_g <= EPS_G {
            return None;
        }
        let ginv = [[g22 / big_g, -g12 / big_g], [-g12 / big_g, g11 / big_g]];
        let sqrt_g = big_g.sqrt();
        Some(Self {
            g1,
            g2,
            g_ab: [[g11, g12], [g12, g22]],
            ginv_ab: ginv,
            big_g,
            sqrt_g,
            gup1: g1 * ginv[0][0] + g2 * ginv[0][1],
            gup2: g1 * ginv[1][0] + g2 * ginv[1][1],
            n: c / sqrt_g,
        })
    }

    pub fn g(&self, alpha: usize) -> Vec3 {
        if alpha == 0 {
            self.g1
        } else {
            self.g2
        }
    }

    pub fn gup(&self, alpha: usize) -> Vec3 {
        if alpha == 0 {
            self.gup1
        } else {
            self.gup2
        }
    }

    /// Surface gradient `g^a du/dX_a` from parameter derivatives.
    pub fn gradient(&self, du: [f64; 2]) -> Vec3 {
        self.gup1 * du[0] + self.gup2 * du[1]
    }

    /// Surface divergence `g^a . dphi/dX_a` from parameter derivatives.
    pub fn divergence(&self, dphi: [Vec3; 2]) -> f64 {
        self.gup1.dot(&dphi[0]) + self.gup2.dot(&dphi[1])
    }

    /// `g^ab du_a dv_b`.
    pub fn inner(&self, du: [f64; 2], dv: [f64; 2]) -> f64 {
        let m = &self.ginv_ab;
        du[0] * (m[0][0] * dv[0] + m[0][1] * dv[1]) + du[1] * (m[1][0] * dv[0] + m[1][1] * dv[1])
    }

    /// Largest deviation from `g^a . g_b = delta`, `|n| = 1`, `n . g_a = 0`,
    /// `g^ab g_bc = delta` and the minor expansion of `G`.
    pub fn identity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..2 {
            for b in 0..2 {
                let delta = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((self.gup(a).dot(&self.g(b)) - delta).abs());
                let prod = self.ginv_ab[a][0] * self.g_ab[0][b] + self.ginv_ab[a][1] * self.g_ab[1][b];
                worst = worst.max((prod - delta).abs());
            }
            worst = worst.max(self.n.dot(&self.g(a)).abs() / self.g(a).norm().max(1.0));
        }
        worst = worst.max((self.n.norm() - 1.0).abs());
        let det = self.g_ab[0][0] * self.g_ab[1][1] - self.g_ab[0][1] * self.g_ab[1][0];
        worst.max((det - self.big_g).abs() / self.big_g.max(1.0))
    }

    /// Defect of `g^1 sqrt(G) = g2 x n` and `g^2 sqrt(G) = -g1 x n`.
    pub fn dual_cross_defect(&self) -> f64 {
        let a = self.gup1 * self.sqrt_g - self.g2.cross(&self.n);
        let b = self.gup2 * self.sqrt_g + self.g1.cross(&self.n);
        let scale = self.g1.norm().max(self.g2.norm()).max(1.0);
        a.norm().max(b.norm()) / scale
    }
}

/// Frame of `chart` at `x`. On a pole edge the metric degenerates; the
/// returned frame then has `G = 0`, zero dual vectors, and the normal taken
/// as the limit from the interior.
pub fn frame(chart: &dyn Chart, x: Param, t: f64) -> Result<FrameData> {
    let [g1, g2] = chart.tangents(x, t);
    if let Some(f) = FrameData::from_tangents(g1, g2) {
        return Ok(f);
    }
    let g = g1.cross(&g2).norm_squared();
    if !chart.on_pole(x) {
        return Err(Error::DegenerateMetric { r: x[0], s: x[1], t, g });
    }
    let n = pole_normal(chart, x, t).ok_or(Error::DegenerateMetric { r: x[0], s: x[1], t, g })?;
    Ok(FrameData {
        g1,
        g2,
        g_ab: [[g1.dot(&g1), g1.dot(&g2)], [g1.dot(&g2), g2.dot(&g2)]],
        ginv_ab: [[0.0; 2]; 2],
        big_g: 0.0,
        sqrt_g: 0.0,
        gup1: Vec3::zeros(),
        gup2: Vec3::zeros(),
        n,
    })
}

fn pole_normal(chart: &dyn Chart, x: Param, t: f64) -> Option<Vec3> {
    let d = chart.domain();
    let c = d.lerp(0.5, 0.5);
    let mut step = 1e-6;
    while step < 0.5 {
        let y = [x[0] + step * (c[0] - x[0]), x[1] + step * (c[1] - x[1])];
        let [g1, g2] = chart.tangents(y, t);
        if let Some(f) = FrameData::from_tangents(g1, g2) {
            return Some(f.n);
        }
        step *= 10.0;
    }
    None
}

/// Second derivatives of the chart map, analytic when available and
/// otherwise by central differences of the tangents.
pub fn hessian(chart: &dyn Chart, x: Param, t: f64) -> SecondDerivatives {
    match chart.second_derivative_mode() {
        SecondDerivativeMode::Analytic => {
            if let Some(h) = chart.second_derivatives(x, t) {
                return h;
            }
            fd_hessian(chart, x, t, 1e-5 * chart.domain().extent())
        }
        SecondDerivativeMode::FiniteDifference { h } => fd_hessian(chart, x, t, h),
    }
}

fn fd_hessian(chart: &dyn Chart, x: Param, t: f64, h: f64) -> SecondDerivatives {
    let [r_p, _] = chart.tangents([x[0] + h, x[1]], t);
    let [r_m, _] = chart.tangents([x[0] - h, x[1]], t);
    let [s1_p, s_p] = chart.tangents([x[0], x[1] + h], t);
    let [s1_m, s_m] = chart.tangents([x[0], x[1] - h], t);
    let [_, r2_p] = chart.tangents([x[0] + h, x[1]], t);
    let [_, r2_m] = chart.tangents([x[0] - h, x[1]], t);
    let inv = 0.5 / h;
    SecondDerivatives {
        rr: (r_p - r_m) * inv,
        // symmetrize d g1/ds and d g2/dr
        rs: ((s1_p - s1_m) + (r2_p - r2_m)) * (0.5 * inv),
        ss: (s_p - s_m) * inv,
    }
}

/// Parameter derivatives of the unit normal, `dn/dX_a`.
///
/// With analytic second derivatives this differentiates the normalized
/// cross product exactly; otherwise the normal itself is differenced.
pub fn normal_derivatives(chart: &dyn Chart, x: Param, t: f64) -> Result<[Vec3; 2]> {
    match chart.second_derivative_mode() {
        SecondDerivativeMode::Analytic if chart.second_derivatives(x, t).is_some() => {
            let f = frame(chart, x, t)?;
            let h = hessian(chart, x, t);
            let mut out = [Vec3::zeros(); 2];
            for (a, o) in out.iter_mut().enumerate() {
                let dc = h.d(0, a).cross(&f.g2) + f.g1.cross(&h.d(1, a));
                *o = (dc - f.n * f.n.dot(&dc)) / f.sqrt_g;
            }
            Ok(out)
        }
        SecondDerivativeMode::Analytic => fd_normal_derivatives(chart, x, t, 1e-5 * chart.domain().extent()),
        SecondDerivativeMode::FiniteDifference { h } => fd_normal_derivatives(chart, x, t, h),
    }
}

fn fd_normal_derivatives(chart: &dyn Chart, x: Param, t: f64, h: f64) -> Result<[Vec3; 2]> {
    let n_at = |y: Param| frame(chart, y, t).map(|f| f.n);
    let dr = (n_at([x[0] + h, x[1]])? - n_at([x[0] - h, x[1]])?) / (2.0 * h);
    let ds = (n_at([x[0], x[1] + h])? - n_at([x[0], x[1] - h])?) / (2.0 * h);
    Ok([dr, ds])
}

/// Coefficients `(c1, c2, c3, c4)` of the Weingarten formulas
/// `dn/dr = c1 g1 + c2 g2` and `dn/ds = c3 g1 + c4 g2`.
pub fn weingarten_coeffs(chart: &dyn Chart, x: Param, t: f64) -> Result<[f64; 4]> {
    let f = frame(chart, x, t)?;
    if f.big_g == 0.0 {
        return Err(Error::DegenerateMetric { r: x[0], s: x[1], t, g: 0.0 });
    }
    let h = hessian(chart, x, t);
    let l11 = h.rr.dot(&f.n);
    let l12 = h.rs.dot(&f.n);
    let l22 = h.ss.dot(&f.n);
    let [[g11, g12], [_, g22]] = f.g_ab;
    let g = f.big_g;
    Ok([
        (g12 * l12 - g22 * l11) / g,
        (g12 * l11 - g11 * l12) / g,
        (g12 * l22 - g22 * l12) / g,
        (g12 * l12 - g11 * l22) / g,
    ])
}

/// `max_a |dn/dX_a - (c g1 + c g2)|`, the Weingarten reconstruction error.
pub fn weingarten_residual(chart: &dyn Chart, x: Param, t: f64) -> Result<f64> {
    let f = frame(chart, x, t)?;
    let c = weingarten_coeffs(chart, x, t)?;
    let dn = normal_derivatives(chart, x, t)?;
    let e1 = dn[0] - (f.g1 * c[0] + f.g2 * c[1]);
    let e2 = dn[1] - (f.g1 * c[2] + f.g2 * c[3]);
    Ok(e1.norm().max(e2.norm()))
}

/// Mean curvature `H = -div n = -g^a . dn/dX_a`.
pub fn mean_curvature(chart: &dyn Chart, x: Param, t: f64) -> Result<f64> {
    let f = frame(chart, x, t)?;
    let dn = normal_derivatives(chart, x, t)?;
    Ok(-f.divergence(dn))
}

/// Unit outer co-normal at edge parameter `l`, built from the parameter
/// normal of the edge and the surface normal.
pub fn conormal(chart: &dyn Chart, seg: &BoundarySegment, l: f64, t: f64) -> Result<Vec3> {
    if !seg.role.carries_boundary() {
        return Err(Error::UnsupportedEdge { edge: seg.edge, role: seg.role.describe() });
    }
    let x = seg.point(l);
    let f = frame(chart, x, t)?;
    if f.big_g == 0.0 {
        return Err(Error::DegenerateMetric { r: x[0], s: x[1], t, g: 0.0 });
    }
    let [n1, n2] = seg.normal();
    let v = f.g2 * n1 - f.g1 * n2;
    Ok((v / v.norm()).cross(&f.n))
}

/// Line element `|n1 g2 - n2 g1|` of the edge at `l`.
pub fn line_element(chart: &dyn Chart, seg: &BoundarySegment, l: f64, t: f64) -> f64 {
    let [g1, g2] = chart.tangents(seg.point(l), t);
    let [n1, n2] = seg.normal();
    (g2 * n1 - g1 * n2).norm()
}

/// Parameter derivatives of the velocity, `dw/dX_a`, by central differences.
pub fn velocity_derivatives(chart: &dyn Chart, x: Param, t: f64) -> [Vec3; 2] {
    let h = 1e-5 * chart.domain().extent();
    let w = |y: Param| chart.velocity(y, t);
    [(w([x[0] + h, x[1]]) - w([x[0] - h, x[1]])) / (2.0 * h), (w([x[0], x[1] + h]) - w([x[0], x[1] - h])) / (2.0 * h)]
}

/// Surface divergence of the motion velocity, `g^a . dw/dX_a`.
pub fn velocity_divergence(chart: &dyn Chart, x: Param, t: f64) -> Result<f64> {
    if chart.is_static() {
        return Ok(0.0);
    }
    let f = frame(chart, x, t)?;
    Ok(f.divergence(velocity_derivatives(chart, x, t)))
}
