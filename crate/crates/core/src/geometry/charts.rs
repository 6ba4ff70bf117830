//! Concrete charts: planes, graphs and surfaces of revolution about the x1 axis.

use super::chart::{Affine, Chart, EdgeRole, EdgeRoles, Param, ParamRect, SecondDerivatives};
use crate::Vec3;

/// Flat patch `origin + scale(t) (X1 e1 + X2 e2)`.
#[derive(Debug, Clone, Copy)]
pub struct Plane {
    pub origin: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
    pub scale: Affine,
    pub domain: ParamRect,
    pub roles: EdgeRoles,
}

impl Plane {
    pub fn unit_square() -> Self {
        Self {
            origin: Vec3::zeros(),
            e1: Vec3::x(),
            e2: Vec3::y(),
            scale: Affine::constant(1.0),
            domain: ParamRect::unit(),
            roles: EdgeRoles::square(),
        }
    }

    /// Unit square scaled uniformly by `scale(t)`.
    pub fn scaling(scale: Affine) -> Self {
        Self { scale, ..Self::unit_square() }
    }
}

impl Chart for Plane {
    fn domain(&self) -> ParamRect {
        self.domain
    }
    fn roles(&self) -> EdgeRoles {
        self.roles
    }
    fn position(&self, x: Param, t: f64) -> Vec3 {
        self.origin + (self.e1 * x[0] + self.e2 * x[1]) * self.scale.at(t)
    }
    fn tangents(&self, _x: Param, t: f64) -> [Vec3; 2] {
        let s = self.scale.at(t);
        [self.e1 * s, self.e2 * s]
    }
    fn velocity(&self, x: Param, _t: f64) -> Vec3 {
        (self.e1 * x[0] + self.e2 * x[1]) * self.scale.rate()
    }
    fn second_derivatives(&self, _x: Param, _t: f64) -> Option<SecondDerivatives> {
        Some(SecondDerivatives { rr: Vec3::zeros(), rs: Vec3::zeros(), ss: Vec3::zeros() })
    }
    fn is_static(&self) -> bool {
        self.scale.is_constant()
    }
}

/// Graph `(X1, X2, amp(t) h(X1, X2))` with
/// `h = q0 + q1 X1 + q2 X2 + q3 X1^2 + q4 X1 X2 + q5 X2^2 + A sin(k1 X1 + k2 X2 + phase)`.
#[derive(Debug, Clone, Copy)]
pub struct Graph {
    pub quad: [f64; 6],
    pub wave: [f64; 4],
    pub amp: Affine,
    pub domain: ParamRect,
    pub roles: EdgeRoles,
}

impl Graph {
    pub fn new(quad: [f64; 6], wave: [f64; 4]) -> Self {
        Self {
            quad,
            wave,
            amp: Affine::constant(1.0),
            domain: ParamRect::new(-0.5, 0.5, -0.5, 0.5),
            roles: EdgeRoles::square(),
        }
    }

    pub fn flat() -> Self {
        Self::new([0.0; 6], [0.0; 4])
    }

    /// Height function and its derivatives `[h, h_x, h_y, h_xx, h_xy, h_yy]`.
    fn jet(&self, x: Param) -> [f64; 6] {
        let [q0, q1, q2, q3, q4, q5] = self.quad;
        let [a, k1, k2, ph] = self.wave;
        let (u, v) = (x[0], x[1]);
        let arg = k1 * u + k2 * v + ph;
        let (s, c) = arg.sin_cos();
        [
            q0 + q1 * u + q2 * v + q3 * u * u + q4 * u * v + q5 * v * v + a * s,
            q1 + 2.0 * q3 * u + q4 * v + a * k1 * c,
            q2 + q4 * u + 2.0 * q5 * v + a * k2 * c,
            2.0 * q3 - a * k1 * k1 * s,
            q4 - a * k1 * k2 * s,
            2.0 * q5 - a * k2 * k2 * s,
        ]
    }
}

impl Chart for Graph {
    fn domain(&self) -> ParamRect {
        self.domain
    }
    fn roles(&self) -> EdgeRoles {
        self.roles
    }
    fn position(&self, x: Param, t: f64) -> Vec3 {
        Vec3::new(x[0], x[1], self.amp.at(t) * self.jet(x)[0])
    }
    fn tangents(&self, x: Param, t: f64) -> [Vec3; 2] {
        let j = self.jet(x);
        let a = self.amp.at(t);
        [Vec3::new(1.0, 0.0, a * j[1]), Vec3::new(0.0, 1.0, a * j[2])]
    }
    fn velocity(&self, x: Param, _t: f64) -> Vec3 {
        Vec3::new(0.0, 0.0, self.amp.rate() * self.jet(x)[0])
    }
    fn second_derivatives(&self, x: Param, t: f64) -> Option<SecondDerivatives> {
        let j = self.jet(x);
        let a = self.amp.at(t);
        Some(SecondDerivatives {
            rr: Vec3::new(0.0, 0.0, a * j[3]),
            rs: Vec3::new(0.0, 0.0, a * j[4]),
            ss: Vec3::new(0.0, 0.0, a * j[5]),
        })
    }
    fn is_static(&self) -> bool {
        self.amp.is_constant()
    }
}

/// Axial coordinate `x1`, radius `rho`, their `r` derivatives up to second
/// order and their time derivatives, at one `(r, t)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ProfileJet {
    pub x: f64,
    pub x_r: f64,
    pub x_rr: f64,
    pub x_t: f64,
    pub rho: f64,
    pub rho_r: f64,
    pub rho_rr: f64,
    pub rho_t: f64,
}

/// Meridian curve of a surface of revolution about the x1 axis.
pub trait Profile: Send + Sync {
    fn jet(&self, r: f64, t: f64) -> ProfileJet;

    fn is_static(&self) -> bool;
}

/// Surface `(x1(r,t), rho(r,t) cos s, sign rho(r,t) sin s)`; `sign = -1`
/// mirrors the chart and flips its orientation.
#[derive(Debug, Clone, Copy)]
pub struct Revolution<P> {
    pub profile: P,
    pub mirrored: bool,
    pub domain: ParamRect,
    pub roles: EdgeRoles,
}

impl<P: Profile> Revolution<P> {
    pub fn of(profile: P, roles: EdgeRoles) -> Self {
        Self { profile, mirrored: false, domain: ParamRect::polar(), roles }
    }

    pub fn mirrored(mut self, yes: bool) -> Self {
        self.mirrored = yes;
        self
    }

    pub fn with_domain(mut self, domain: ParamRect) -> Self {
        self.domain = domain;
        self
    }

    fn sign(&self) -> f64 {
        if self.mirrored {
            -1.0
        } else {
            1.0
        }
    }
}

impl<P: Profile> Chart for Revolution<P> {
    fn domain(&self) -> ParamRect {
        self.domain
    }
    fn roles(&self) -> EdgeRoles {
        self.roles
    }
    fn position(&self, x: Param, t: f64) -> Vec3 {
        let j = self.profile.jet(x[0], t);
        let (s, c) = x[1].sin_cos();
        Vec3::new(j.x, j.rho * c, self.sign() * j.rho * s)
    }
    fn tangents(&self, x: Param, t: f64) -> [Vec3; 2] {
        let j = self.profile.jet(x[0], t);
        let (s, c) = x[1].sin_cos();
        let m = self.sign();
        [Vec3::new(j.x_r, j.rho_r * c, m * j.rho_r * s), Vec3::new(0.0, -j.rho * s, m * j.rho * c)]
    }
    fn velocity(&self, x: Param, t: f64) -> Vec3 {
        let j = self.profile.jet(x[0], t);
        let (s, c) = x[1].sin_cos();
        Vec3::new(j.x_t, j.rho_t * c, self.sign() * j.rho_t * s)
    }
    fn second_derivatives(&self, x: Param, t: f64) -> Option<SecondDerivatives> {
        let j = self.profile.jet(x[0], t);
        let (s, c) = x[1].sin_cos();
        let m = self.sign();
        Some(SecondDerivatives {
            rr: Vec3::new(j.x_rr, j.rho_rr * c, m * j.rho_rr * s),
            rs: Vec3::new(0.0, -j.rho_r * s, m * j.rho_r * c),
            ss: Vec3::new(0.0, -j.rho * c, -m * j.rho * s),
        })
    }
    fn is_static(&self) -> bool {
        self.profile.is_static()
    }
}

/// Cap of the sphere `|x - c e1| = a` seen along `dir e1`, in the projected
/// parametrization `x1 = c + dir a sqrt(1 - 3r^2/4)`, `rho = (sqrt 3 / 2) a r`.
/// Reaches the circle `x1 = c + dir a/2` at `r = 1`.
#[derive(Debug, Clone, Copy)]
pub struct ProjectedCapProfile {
    pub radius: Affine,
    pub center: Affine,
    pub dir: f64,
}

/// Jet of the projected cap profile for given radius and center values.
pub fn projected_cap_jet(a: f64, da: f64, c: f64, dc: f64, dir: f64, r: f64) -> ProfileJet {
    let k = 3.0_f64.sqrt() / 2.0;
    let q = (1.0 - 0.75 * r * r).sqrt();
    let q_r = -0.75 * r / q;
    let q_rr = -0.75 / q - 0.5625 * r * r / (q * q * q);
    ProfileJet {
        x: c + dir * a * q,
        x_r: dir * a * q_r,
        x_rr: dir * a * q_rr,
        x_t: dc + dir * da * q,
        rho: k * a * r,
        rho_r: k * a,
        rho_rr: 0.0,
        rho_t: k * da * r,
    }
}

impl Profile for ProjectedCapProfile {
    fn jet(&self, r: f64, t: f64) -> ProfileJet {
        projected_cap_jet(self.radius.at(t), self.radius.rate(), self.center.at(t), self.center.rate(), self.dir, r)
    }
    fn is_static(&self) -> bool {
        self.radius.is_constant() && self.center.is_constant()
    }
}

pub type ProjectedCap = Revolution<ProjectedCapProfile>;

impl ProjectedCap {
    pub fn projected(radius: Affine, center: Affine, dir: f64) -> Self {
        Revolution::of(
            ProjectedCapProfile { radius, center, dir },
            EdgeRoles::polar(EdgeRole::Pole, EdgeRole::Physical),
        )
    }

    /// Lower cap of the unit sphere about the origin.
    pub fn unit_sphere() -> Self {
        Self::projected(Affine::constant(1.0), Affine::constant(0.0), -1.0)
    }
}

/// Equal-area polar cap of the sphere `|x - c e1| = a` around the pole
/// `c + dir a e1`: `cos(phi) = 1 - k r^2`, so `sqrt(G) = 2 k a^2 r` is linear
/// in `r`. `k = 1` gives a hemisphere. Always outward oriented.
#[derive(Debug, Clone, Copy)]
pub struct SphereCapProfile {
    pub radius: Affine,
    pub center: Affine,
    pub k: f64,
    pub dir: f64,
}

impl Profile for SphereCapProfile {
    fn jet(&self, r: f64, t: f64) -> ProfileJet {
        let (a, da) = (self.radius.at(t), self.radius.rate());
        let k = self.k;
        let v = (2.0 * k - k * k * r * r).sqrt();
        let v_r = -k * k * r / v;
        let v_rr = -k * k / v - k.powi(4) * r * r / (v * v * v);
        let z = 1.0 - k * r * r;
        ProfileJet {
            x: self.center.at(t) + self.dir * a * z,
            x_r: -2.0 * self.dir * a * k * r,
            x_rr: -2.0 * self.dir * a * k,
            x_t: self.center.rate() + self.dir * da * z,
            rho: a * r * v,
            rho_r: a * (v + r * v_r),
            rho_rr: a * (2.0 * v_r + r * v_rr),
            rho_t: da * r * v,
        }
    }
    fn is_static(&self) -> bool {
        self.radius.is_constant() && self.center.is_constant()
    }
}

pub type SphereCap = Revolution<SphereCapProfile>;

impl SphereCap {
    pub fn cap(radius: Affine, center: Affine, k: f64, dir: f64) -> Self {
        Revolution::of(
            SphereCapProfile { radius, center, k, dir },
            EdgeRoles::polar(EdgeRole::Pole, EdgeRole::Physical),
        )
        .mirrored(dir < 0.0)
    }

    /// Hemisphere `dir x1 >= 0` of the sphere of radius `radius(t)` about the origin.
    pub fn hemisphere(radius: Affine, dir: f64) -> Self {
        Self::cap(radius, Affine::constant(0.0), 1.0, dir)
    }
}

/// Flat disc `(offset(t), R(t) r cos s, R(t) r sin s)` with normal `+e1`.
#[derive(Debug, Clone, Copy)]
pub struct DiscProfile {
    pub offset: Affine,
    pub radius: Affine,
}

impl Profile for DiscProfile {
    fn jet(&self, r: f64, t: f64) -> ProfileJet {
        disc_jet(self.offset.at(t), self.offset.rate(), self.radius.at(t), self.radius.rate(), r)
    }
    fn is_static(&self) -> bool {
        self.offset.is_constant() && self.radius.is_constant()
    }
}

pub fn disc_jet(x: f64, dx: f64, radius: f64, dradius: f64, r: f64) -> ProfileJet {
    ProfileJet { x, x_r: 0.0, x_rr: 0.0, x_t: dx, rho: radius * r, rho_r: radius, rho_rr: 0.0, rho_t: dradius * r }
}

pub type FlatDisc = Revolution<DiscProfile>;

impl FlatDisc {
    pub fn new(offset: Affine, radius: Affine) -> Self {
        Revolution::of(DiscProfile { offset, radius }, EdgeRoles::polar(EdgeRole::Pole, EdgeRole::Physical))
    }
}

/// Cylinder of radius `radius` around the x1 axis, `x1 = r` in `[0, length]`.
#[derive(Debug, Clone, Copy)]
pub struct CylinderProfile {
    pub radius: Affine,
}

impl Profile for CylinderProfile {
    fn jet(&self, r: f64, t: f64) -> ProfileJet {
        ProfileJet {
            x: r,
            x_r: 1.0,
            x_rr: 0.0,
            x_t: 0.0,
            rho: self.radius.at(t),
            rho_r: 0.0,
            rho_rr: 0.0,
            rho_t: self.radius.rate(),
        }
    }
    fn is_static(&self) -> bool {
        self.radius.is_constant()
    }
}

pub type Cylinder = Revolution<CylinderProfile>;

impl Cylinder {
    pub fn new(radius: Affine, length: f64) -> Self {
        Revolution::of(CylinderProfile { radius }, EdgeRoles::polar(EdgeRole::Physical, EdgeRole::Physical))
            .with_domain(ParamRect::new(0.0, length, 0.0, std::f64::consts::TAU))
            .mirrored(true)
    }

    pub fn unit() -> Self {
        Self::new(Affine::constant(1.0), 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::frame::frame;

    /// Max deviation of analytic tangents, velocity and second derivatives
    /// from central differences of the map.
    fn derivative_defect(chart: &dyn Chart, x: Param, t: f64) -> f64 {
        let h = 1e-6;
        let p = |y: Param, s: f64| chart.position(y, s);
        let g = chart.tangents(x, t);
        let fd1 = (p([x[0] + h, x[1]], t) - p([x[0] - h, x[1]], t)) / (2.0 * h);
        let fd2 = (p([x[0], x[1] + h], t) - p([x[0], x[1] - h], t)) / (2.0 * h);
        let fdt = (p(x, t + h) - p(x, t - h)) / (2.0 * h);
        let mut worst = (g[0] - fd1).norm().max((g[1] - fd2).norm()).max((chart.velocity(x, t) - fdt).norm());
        if let Some(sd) = chart.second_derivatives(x, t) {
            let tg = |y: Param| chart.tangents(y, t);
            let rr = (tg([x[0] + h, x[1]])[0] - tg([x[0] - h, x[1]])[0]) / (2.0 * h);
            let rs = (tg([x[0], x[1] + h])[0] - tg([x[0], x[1] - h])[0]) / (2.0 * h);
            let ss = (tg([x[0], x[1] + h])[1] - tg([x[0], x[1] - h])[1]) / (2.0 * h);
            worst = worst.max((sd.rr - rr).norm()).max((sd.rs - rs).norm()).max((sd.ss - ss).norm());
        }
        worst
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let charts: Vec<Box<dyn Chart>> = vec![
            Box::new(Plane::scaling(Affine::new(1.0, 0.3))),
            Box::new(Graph {
                amp: Affine::new(1.0, 0.2),
                ..Graph::new([0.1, 0.2, -0.3, 0.4, 0.5, -0.6], [0.3, 2.0, 1.0, 0.4])
            }),
            Box::new(ProjectedCap::projected(Affine::new(1.0, 0.1), Affine::new(0.2, -0.3), -1.0)),
            Box::new(SphereCap::cap(Affine::new(1.0, 0.1), Affine::new(0.0, 0.2), 0.7, -1.0)),
            Box::new(FlatDisc::new(Affine::new(0.1, 0.2), Affine::new(0.8, 0.05))),
            Box::new(Cylinder::new(Affine::new(1.0, 0.1), 2.0)),
        ];
        for c in &charts {
            let d = c.domain();
            for &(u, v) in &[(0.3, 0.2), (0.7, 0.9), (0.5, 0.5)] {
                assert!(derivative_defect(c.as_ref(), d.lerp(u, v), 0.4) < 1e-8);
            }
        }
    }

    #[test]
    fn caps_are_outward_and_equal_area() {
        for dir in [1.0, -1.0] {
            let cap = SphereCap::hemisphere(Affine::constant(2.0), dir);
            let x = [0.4, 1.3];
            let f = frame(&cap, x, 0.0).unwrap();
            assert!(f.n.dot(&cap.position(x, 0.0)) > 0.0);
            // sqrt(G) = 2 k a^2 r
            assert!((f.sqrt_g - 2.0 * 4.0 * 0.4).abs() < 1e-13);
        }
    }

    #[test]
    fn hemispheres_share_the_equator() {
        let n = SphereCap::hemisphere(Affine::constant(1.0), 1.0);
        let s = SphereCap::hemisphere(Affine::constant(1.0), -1.0);
        let th = 0.8;
        let pn = n.position([1.0, th], 0.0);
        let ps = s.position([1.0, std::f64::consts::TAU - th], 0.0);
        assert!((pn - ps).norm() < 1e-15);
        assert!(pn.x.abs() < 1e-15);
    }
}
