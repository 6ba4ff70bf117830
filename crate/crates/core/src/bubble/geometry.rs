use crate::geometry::{
    charts::{disc_jet, projected_cap_jet},
    Affine, Chart, EdgeRole, EdgeRoles, Profile, ProfileJet, Revolution,
};
use crate::{Error, Result, Vec3};

/// Interface tags of the three circles where patches meet.
pub const JUNCTION: u32 = 0;
pub const SEAM_A: u32 = 1;
pub const SEAM_B: u32 = 2;

/// Double bubble: spheres of radius `a` about `-m e1` and `b` about `m e1`,
/// joined by the flat disc `x1 = n` of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleGeometry {
    pub a: Affine,
    pub b: Affine,
    pub m: Affine,
}

/// Scalar parameters and their rates at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleParams {
    pub a: f64,
    pub b: f64,
    pub m: f64,
    pub n: f64,
    pub radius: f64,
    pub da: f64,
    pub db: f64,
    pub dm: f64,
    pub dn: f64,
    pub dradius: f64,
}

impl BubbleGeometry {
    pub fn new(a: Affine, b: Affine, m: Affine) -> Self {
        Self { a, b, m }
    }

    /// `a = 1`, `b = 1.2`, `m = 0.8`.
    pub fn reference() -> Self {
        Self::new(Affine::constant(1.0), Affine::constant(1.2), Affine::constant(0.8))
    }

    pub fn is_static(&self) -> bool {
        self.a.is_constant() && self.b.is_constant() && self.m.is_constant()
    }

    pub fn n(&self, t: f64) -> f64 {
        let (a, b, m) = (self.a.at(t), self.b.at(t), self.m.at(t));
        (a * a - b * b) / (4.0 * m)
    }

    pub fn params(&self, t: f64) -> BubbleParams {
        let (a, b, m) = (self.a.at(t), self.b.at(t), self.m.at(t));
        let (da, db, dm) = (self.a.rate(), self.b.rate(), self.m.rate());
        let n = (a * a - b * b) / (4.0 * m);
        let dn = (2.0 * a * da - 2.0 * b * db) / (4.0 * m) - n * dm / m;
        let radius = (a * a - (m + n) * (m + n)).sqrt();
        let dradius = (a * da - (m + n) * (dm + dn)) / radius;
        BubbleParams { a, b, m, n, radius, da, db, dm, dn, dradius }
    }

    /// Checks `0 < m < a < b < 2m` at `t`.
    pub fn check_at(&self, t: f64) -> Result<()> {
        let (a, b, m) = (self.a.at(t), self.b.at(t), self.m.at(t));
        let ok = 0.0 < m && m < a && a < b && b < 2.0 * m;
        if !ok || ![a, b, m].iter().all(|v| v.is_finite()) {
            return Err(Error::GeometryInvalid {
                t,
                reason: format!("need 0 < m < a < b < 2m, got a={a}, b={b}, m={m}"),
            });
        }
        Ok(())
    }

    /// Checks the ordering at `samples + 1` evenly spaced times in `[t0, t1]`.
    pub fn validate(&self, t0: f64, t1: f64, samples: usize) -> Result<()> {
        let k = samples.max(1);
        (0..=k).try_for_each(|i| self.check_at(t0 + (t1 - t0) * i as f64 / k as f64))
    }

    /// `|(a^2 - (m+n)^2) - (b^2 - (m-n)^2)|`.
    pub fn radius_identity_defect(&self, t: f64) -> f64 {
        let p = self.params(t);
        ((p.a * p.a - (p.m + p.n).powi(2)) - (p.b * p.b - (p.m - p.n).powi(2))).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Piece {
    A1,
    A2,
    B1,
    B2,
    S,
}

impl Piece {
    pub const ALL: [Piece; 5] = [Piece::A1, Piece::A2, Piece::B1, Piece::B2, Piece::S];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Piece::A1 => "A1",
            Piece::A2 => "A2",
            Piece::B1 => "B1",
            Piece::B2 => "B2",
            Piece::S => "S",
        }
    }

    pub fn surface(self) -> Surface {
        match self {
            Piece::A1 | Piece::A2 => Surface::A,
            Piece::B1 | Piece::B2 => Surface::B,
            Piece::S => Surface::S,
        }
    }

    pub fn roles(self) -> EdgeRoles {
        use EdgeRole::*;
        match self {
            Piece::A1 => EdgeRoles::polar(Pole, Interface(SEAM_A)),
            Piece::A2 => EdgeRoles::polar(Interface(SEAM_A), Interface(JUNCTION)),
            Piece::B1 => EdgeRoles::polar(Interface(SEAM_B), Interface(JUNCTION)),
            Piece::B2 => EdgeRoles::polar(Pole, Interface(SEAM_B)),
            Piece::S => EdgeRoles::polar(Pole, Interface(JUNCTION)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Surface {
    A,
    B,
    S,
}

impl Surface {
    pub const ALL: [Surface; 3] = [Surface::A, Surface::B, Surface::S];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Surface::A => "A",
            Surface::B => "B",
            Surface::S => "S",
        }
    }

    pub fn pieces(self) -> &'static [Piece] {
        match self {
            Surface::A => &[Piece::A1, Piece::A2],
            Surface::B => &[Piece::B1, Piece::B2],
            Surface::S => &[Piece::S],
        }
    }
}

/// Meridian of one bubble piece.
///
/// The A pieces are oriented toward the center of sphere A, the B pieces away
/// from the center of sphere B, and the disc along `+e1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleProfile {
    pub geom: BubbleGeometry,
    pub piece: Piece,
}

impl Profile for BubbleProfile {
    fn jet(&self, r: f64, t: f64) -> ProfileJet {
        let p = self.geom.params(t);
        match self.piece {
            Piece::A1 => projected_cap_jet(p.a, p.da, -p.m, -p.dm, -1.0, r),
            Piece::B2 => projected_cap_jet(p.b, p.db, p.m, p.dm, 1.0, r),
            Piece::S => disc_jet(p.n, p.dn, p.radius, p.dradius, r),
            Piece::A2 => {
                let k = p.m + p.n + 0.5 * p.a;
                let s = k * r - 0.5 * p.a;
                let s_t = (p.dm + p.dn + 0.5 * p.da) * r - 0.5 * p.da;
                let rho = (p.a * p.a - s * s).sqrt();
                let rho_r = -s * k / rho;
                ProfileJet {
                    x: s - p.m,
                    x_r: k,
                    x_rr: 0.0,
                    x_t: s_t - p.dm,
                    rho,
                    rho_r,
                    rho_rr: (-k * k - rho_r * rho_r) / rho,
                    rho_t: (p.a * p.da - s * s_t) / rho,
                }
            }
            Piece::B1 => {
                let k = p.m - p.n + 0.5 * p.b;
                let q = 0.5 * p.b - k * r;
                let q_t = 0.5 * p.db - (p.dm - p.dn + 0.5 * p.db) * r;
                let rho = (p.b * p.b - q * q).sqrt();
                let rho_r = q * k / rho;
                ProfileJet {
                    x: p.m + q,
                    x_r: -k,
                    x_rr: 0.0,
                    x_t: p.dm + q_t,
                    rho,
                    rho_r,
                    rho_rr: (-k * k - rho_r * rho_r) / rho,
                    rho_t: (p.b * p.db - q * q_t) / rho,
                }
            }
        }
    }

    fn is_static(&self) -> bool {
        self.geom.is_static()
    }
}

pub type BubbleChart = Revolution<BubbleProfile>;

pub fn piece_chart(geom: BubbleGeometry, piece: Piece) -> BubbleChart {
    Revolution::of(BubbleProfile { geom, piece }, piece.roles())
}

/// The five charts in the order of [`Piece::ALL`], after checking the
/// geometry at `t`.
pub fn charts_for(geom: &BubbleGeometry, t: f64) -> Result<[BubbleChart; 5]> {
    geom.check_at(t)?;
    Ok(Piece::ALL.map(|p| piece_chart(*geom, p)))
}

/// Co-normals on the junction circle at angle `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conormals {
    pub a: Vec3,
    pub b: Vec3,
    pub s: Vec3,
    /// Variant of the B co-normal with `m + n` in place of `m - n`. Not tangent to B.
    pub b_alt: Vec3,
}

pub fn analytic_conormals(geom: &BubbleGeometry, theta: f64, t: f64) -> Result<Conormals> {
    geom.check_at(t)?;
    let p = geom.params(t);
    let (s, c) = theta.sin_cos();
    let mn = p.m + p.n;
    Ok(Conormals {
        a: Vec3::new(p.radius / p.a, -mn * c / p.a, -mn * s / p.a),
        b: Vec3::new(-p.radius / p.b, (p.n - p.m) * c / p.b, (p.n - p.m) * s / p.b),
        s: Vec3::new(0.0, c, s),
        b_alt: Vec3::new(-(p.b * p.b - mn * mn).sqrt() / p.b, mn * c / p.b, mn * s / p.b),
    })
}

/// Outward normal of sphere B at the junction point at angle `theta`.
pub fn junction_normal_b(geom: &BubbleGeometry, theta: f64, t: f64) -> Vec3 {
    let p = geom.params(t);
    let (s, c) = theta.sin_cos();
    Vec3::new((p.n - p.m) / p.b, p.radius * c / p.b, p.radius * s / p.b)
}

/// Largest pairwise distance between the junction images of A2, B1 and S
/// at `samples` angles.
pub fn junction_mismatch(geom: &BubbleGeometry, t: f64, samples: usize) -> Result<f64> {
    let ch = charts_for(geom, t)?;
    let mut worst = 0.0_f64;
    for k in 0..samples {
        let th = std::f64::consts::TAU * k as f64 / samples as f64;
        let pa = ch[Piece::A2.index()].position([1.0, th], t);
        let pb = ch[Piece::B1.index()].position([1.0, th], t);
        let ps = ch[Piece::S.index()].position([1.0, th], t);
        worst = worst.max((pa - pb).norm()).max((pa - ps).norm()).max((pb - ps).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{conormal, frame, mean_curvature, Edge};

    #[test]
    fn reference_parameters() {
        let g = BubbleGeometry::reference();
        let p = g.params(0.0);
        assert!((p.n + 0.1375).abs() < 1e-15);
        assert!((p.radius * p.radius - 0.56109375).abs() < 1e-14);
        assert!(g.radius_identity_defect(0.0) < 1e-12);
    }

    #[test]
    fn ordering_violation_is_rejected() {
        let g = BubbleGeometry::new(Affine::constant(1.0), Affine::constant(1.2), Affine::new(0.8, 0.1));
        assert!(g.validate(0.0, 1.0, 100).is_ok());
        assert!(matches!(g.validate(0.0, 3.0, 300), Err(Error::GeometryInvalid { .. })));
    }

    #[test]
    fn rates_match_differences() {
        let g = BubbleGeometry::new(Affine::new(1.0, 0.02), Affine::new(1.2, -0.03), Affine::new(0.8, 0.05));
        let h = 1e-6;
        let p = g.params(0.3);
        let (pl, ph) = (g.params(0.3 - h), g.params(0.3 + h));
        assert!((p.dn - (ph.n - pl.n) / (2.0 * h)).abs() < 1e-8);
        assert!((p.dradius - (ph.radius - pl.radius) / (2.0 * h)).abs() < 1e-8);
    }

    #[test]
    fn pieces_lie_on_their_spheres() {
        let g = BubbleGeometry::new(Affine::new(1.0, 0.02), Affine::new(1.2, -0.03), Affine::new(0.8, 0.05));
        let t = 0.5;
        let p = g.params(t);
        let ch = charts_for(&g, t).unwrap();
        for k in 0..20 {
            let x = [0.05 * k as f64, 0.7 * k as f64];
            let on = |piece: Piece, c: f64, rad: f64| {
                ((ch[piece.index()].position(x, t) - Vec3::new(c, 0.0, 0.0)).norm() - rad).abs()
            };
            assert!(on(Piece::A1, -p.m, p.a) < 1e-13);
            assert!(on(Piece::A2, -p.m, p.a) < 1e-13);
            assert!(on(Piece::B1, p.m, p.b) < 1e-13);
            assert!(on(Piece::B2, p.m, p.b) < 1e-13);
        }
        assert!(junction_mismatch(&g, t, 64).unwrap() < 1e-12);
    }

    #[test]
    fn curvature_signs() {
        let g = BubbleGeometry::reference();
        let ch = charts_for(&g, 0.0).unwrap();
        let x = [0.4, 1.0];
        assert!((mean_curvature(&ch[0], x, 0.0).unwrap() - 2.0).abs() < 1e-9);
        assert!((mean_curvature(&ch[1], x, 0.0).unwrap() - 2.0).abs() < 1e-9);
        assert!((mean_curvature(&ch[2], x, 0.0).unwrap() + 2.0 / 1.2).abs() < 1e-9);
        assert!((mean_curvature(&ch[3], x, 0.0).unwrap() + 2.0 / 1.2).abs() < 1e-9);
        assert!(mean_curvature(&ch[4], x, 0.0).unwrap().abs() < 1e-12);
        assert!((frame(&ch[4], x, 0.0).unwrap().n - Vec3::x()).norm() < 1e-15);
    }

    #[test]
    fn conormals_match_chart_formula() {
        let g = BubbleGeometry::reference();
        let ch = charts_for(&g, 0.0).unwrap();
        for k in 0..16 {
            let th = 0.4 * k as f64;
            let an = analytic_conormals(&g, th, 0.0).unwrap();
            for (piece, v) in [(Piece::A2, an.a), (Piece::B1, an.b), (Piece::S, an.s)] {
                let c = &ch[piece.index()];
                let nu = conormal(c, &c.segment(Edge::RHi), th, 0.0).unwrap();
                assert!((nu - v).norm() < 1e-12, "{piece:?}");
            }
            assert!(an.b_alt.dot(&junction_normal_b(&g, th, 0.0)).abs() > 0.1);
        }
        let an = analytic_conormals(&g, 0.0, 0.0).unwrap();
        assert!((an.a - Vec3::new(0.56109375_f64.sqrt(), -0.6625, 0.0)).norm() < 1e-14);
    }
}
