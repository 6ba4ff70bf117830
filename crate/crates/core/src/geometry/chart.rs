use crate::Vec3;

/// A point `(r, s)` in parameter space.
pub type Param = [f64; 2];

/// Affine function of time, `c0 + c1 t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub c0: f64,
    pub c1: f64,
}

impl Affine {
    pub const fn new(c0: f64, c1: f64) -> Self {
        Self { c0, c1 }
    }

    pub const fn constant(c0: f64) -> Self {
        Self { c0, c1: 0.0 }
    }

    pub fn at(&self, t: f64) -> f64 {
        self.c0 + self.c1 * t
    }

    pub fn rate(&self) -> f64 {
        self.c1
    }

    pub fn is_constant(&self) -> bool {
        self.c1 == 0.0
    }
}

/// Parameter rectangle `[r_lo, r_hi] x [s_lo, s_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRect {
    pub r_lo: f64,
    pub r_hi: f64,
    pub s_lo: f64,
    pub s_hi: f64,
}

impl ParamRect {
    pub const fn new(r_lo: f64, r_hi: f64, s_lo: f64, s_hi: f64) -> Self {
        Self { r_lo, r_hi, s_lo, s_hi }
    }

    pub const fn unit() -> Self {
        Self::new(0.0, 1.0, 0.0, 1.0)
    }

    /// `[0, 1] x [0, 2 pi]`, the polar rectangle used by every revolution chart.
    pub const fn polar() -> Self {
        Self::new(0.0, 1.0, 0.0, std::f64::consts::TAU)
    }

    pub fn width(&self) -> f64 {
        self.r_hi - self.r_lo
    }

    pub fn height(&self) -> f64 {
        self.s_hi - self.s_lo
    }

    /// Larger of the two side lengths; scales finite-difference steps.
    pub fn extent(&self) -> f64 {
        self.width().max(self.height())
    }

    pub fn contains(&self, x: Param) -> bool {
        x[0] >= self.r_lo && x[0] <= self.r_hi && x[1] >= self.s_lo && x[1] <= self.s_hi
    }

    /// Point at fractional coordinates `(u, v)` in `[0, 1]^2`.
    pub fn lerp(&self, u: f64, v: f64) -> Param {
        [self.r_lo + u * self.width(), self.s_lo + v * self.height()]
    }
}

/// The four sides of a parameter rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    RLo,
    RHi,
    SLo,
    SHi,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::RLo, Edge::RHi, Edge::SLo, Edge::SHi];

    pub fn index(self) -> usize {
        match self {
            Edge::RLo => 0,
            Edge::RHi => 1,
            Edge::SLo => 2,
            Edge::SHi => 3,
        }
    }

    pub fn opposite(self) -> Edge {
        match self {
            Edge::RLo => Edge::RHi,
            Edge::RHi => Edge::RLo,
            Edge::SLo => Edge::SHi,
            Edge::SHi => Edge::SLo,
        }
    }

    /// Outward unit normal of the edge in parameter space.
    pub fn param_normal(self) -> [f64; 2] {
        match self {
            Edge::RLo => [-1.0, 0.0],
            Edge::RHi => [1.0, 0.0],
            Edge::SLo => [0.0, -1.0],
            Edge::SHi => [0.0, 1.0],
        }
    }

    /// True for the two edges `r = const`.
    pub fn is_r_edge(self) -> bool {
        matches!(self, Edge::RLo | Edge::RHi)
    }
}

/// What an edge of the parameter rectangle represents on the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeRole {
    /// Part of the surface boundary.
    Physical,
    /// Identified with the opposite edge.
    Periodic,
    /// Collapses to a single point (polar coordinates).
    Pole,
    /// Shared with another patch; the tag names the curve.
    Interface(u32),
}

impl EdgeRole {
    /// Edges that carry a boundary integral.
    pub fn carries_boundary(self) -> bool {
        matches!(self, EdgeRole::Physical | EdgeRole::Interface(_))
    }

    pub fn describe(self) -> String {
        match self {
            EdgeRole::Physical => "physical".into(),
            EdgeRole::Periodic => "periodic".into(),
            EdgeRole::Pole => "pole".into(),
            EdgeRole::Interface(tag) => format!("interface({tag})"),
        }
    }
}

/// Roles of the four edges, indexed by [`Edge::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRoles(pub [EdgeRole; 4]);

impl EdgeRoles {
    pub const fn new(r_lo: EdgeRole, r_hi: EdgeRole, s_lo: EdgeRole, s_hi: EdgeRole) -> Self {
        Self([r_lo, r_hi, s_lo, s_hi])
    }

    /// All four edges physical.
    pub const fn square() -> Self {
        Self::new(EdgeRole::Physical, EdgeRole::Physical, EdgeRole::Physical, EdgeRole::Physical)
    }

    /// Polar rectangle with `s` periodic and the given `r` edges.
    pub const fn polar(r_lo: EdgeRole, r_hi: EdgeRole) -> Self {
        Self::new(r_lo, r_hi, EdgeRole::Periodic, EdgeRole::Periodic)
    }

    pub fn get(&self, edge: Edge) -> EdgeRole {
        self.0[edge.index()]
    }

    pub fn set(&mut self, edge: Edge, role: EdgeRole) {
        self.0[edge.index()] = role;
    }
}

/// One straight side of the parameter rectangle, parametrized by the free
/// coordinate `l` running from the low to the high corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySegment {
    pub edge: Edge,
    pub role: EdgeRole,
    /// Value of the fixed coordinate on this edge.
    pub fixed: f64,
    pub l_lo: f64,
    pub l_hi: f64,
}

impl BoundarySegment {
    pub fn of(domain: &ParamRect, roles: &EdgeRoles, edge: Edge) -> Self {
        let (fixed, l_lo, l_hi) = match edge {
            Edge::RLo => (domain.r_lo, domain.s_lo, domain.s_hi),
            Edge::RHi => (domain.r_hi, domain.s_lo, domain.s_hi),
            Edge::SLo => (domain.s_lo, domain.r_lo, domain.r_hi),
            Edge::SHi => (domain.s_hi, domain.r_lo, domain.r_hi),
        };
        Self { edge, role: roles.get(edge), fixed, l_lo, l_hi }
    }

    pub fn point(&self, l: f64) -> Param {
        if self.edge.is_r_edge() {
            [self.fixed, l]
        } else {
            [l, self.fixed]
        }
    }

    /// Outward parameter normal `n^U`.
    pub fn normal(&self) -> [f64; 2] {
        self.edge.param_normal()
    }

    pub fn length(&self) -> f64 {
        self.l_hi - self.l_lo
    }
}

/// Second partial derivatives of a chart map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondDerivatives {
    pub rr: Vec3,
    pub rs: Vec3,
    pub ss: Vec3,
}

impl SecondDerivatives {
    /// `d g_alpha / d X_beta`.
    pub fn d(&self, alpha: usize, beta: usize) -> Vec3 {
        match (alpha, beta) {
            (0, 0) => self.rr,
            (1, 1) => self.ss,
            _ => self.rs,
        }
    }
}

/// How second derivatives are obtained for curvature computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SecondDerivativeMode {
    Analytic,
    FiniteDifference { h: f64 },
}

/// A time-dependent chart `x(X, t)` from a parameter rectangle into R^3.
pub trait Chart: Send + Sync {
    fn domain(&self) -> ParamRect;

    fn roles(&self) -> EdgeRoles;

    fn position(&self, x: Param, t: f64) -> Vec3;

    /// `(g1, g2)`, the partial derivatives in `r` and `s`.
    fn tangents(&self, x: Param, t: f64) -> [Vec3; 2];

    /// Motion velocity `w = dx/dt` at fixed parameter point.
    fn velocity(&self, x: Param, t: f64) -> Vec3;

    /// Analytic second derivatives, if the chart provides them.
    fn second_derivatives(&self, _x: Param, _t: f64) -> Option<SecondDerivatives> {
        None
    }

    /// True if the map does not depend on time.
    fn is_static(&self) -> bool {
        false
    }

    fn second_derivative_mode(&self) -> SecondDerivativeMode {
        if self.second_derivatives(self.domain().lerp(0.5, 0.5), 0.0).is_some() {
            SecondDerivativeMode::Analytic
        } else {
            SecondDerivativeMode::FiniteDifference { h: 1e-5 * self.domain().extent() }
        }
    }

    fn segment(&self, edge: Edge) -> BoundarySegment {
        BoundarySegment::of(&self.domain(), &self.roles(), edge)
    }

    /// Segments that carry boundary integrals (physical and interface edges).
    fn boundary_segments(&self) -> Vec<BoundarySegment> {
        Edge::ALL.iter().map(|&e| self.segment(e)).filter(|s| s.role.carries_boundary()).collect()
    }

    /// True if `x` lies on an edge tagged as a pole.
    fn on_pole(&self, x: Param) -> bool {
        let d = self.domain();
        let tol = 1e-12 * d.extent();
        Edge::ALL.iter().any(|&e| {
            self.roles().get(e) == EdgeRole::Pole && {
                let seg = self.segment(e);
                let c = if e.is_r_edge() { x[0] } else { x[1] };
                (c - seg.fixed).abs() <= tol
            }
        })
    }
}

impl<C: Chart + ?Sized> Chart for &C {
    fn domain(&self) -> ParamRect {
        (**self).domain()
    }
    fn roles(&self) -> EdgeRoles {
        (**self).roles()
    }
    fn position(&self, x: Param, t: f64) -> Vec3 {
        (**self).position(x, t)
    }
    fn tangents(&self, x: Param, t: f64) -> [Vec3; 2] {
        (**self).tangents(x, t)
    }
    fn velocity(&self, x: Param, t: f64) -> Vec3 {
        (**self).velocity(x, t)
    }
    fn second_derivatives(&self, x: Param, t: f64) -> Option<SecondDerivatives> {
        (**self).second_derivatives(x, t)
    }
    fn is_static(&self) -> bool {
        (**self).is_static()
    }
    fn second_derivative_mode(&self) -> SecondDerivativeMode {
        (**self).second_derivative_mode()
    }
}

impl<C: Chart + ?Sized> Chart for Box<C> {
    fn domain(&self) -> ParamRect {
        (**self).domain()
    }
    fn roles(&self) -> EdgeRoles {
        (**self).roles()
    }
    fn position(&self, x: Param, t: f64) -> Vec3 {
        (**self).position(x, t)
    }
    fn tangents(&self, x: Param, t: f64) -> [Vec3; 2] {
        (**self).tangents(x, t)
    }
    fn velocity(&self, x: Param, t: f64) -> Vec3 {
        (**self).velocity(x, t)
    }
    fn second_derivatives(&self, x: Param, t: f64) -> Option<SecondDerivatives> {
        (**self).second_derivatives(x, t)
    }
    fn is_static(&self) -> bool {
        (**self).is_static()
    }
    fn second_derivative_mode(&self) -> SecondDerivativeMode {
        (**self).second_derivative_mode()
    }
}

/// Wraps a chart and hides its analytic second derivatives, so curvature is
/// computed by central differences with step `h`.
#[derive(Debug, Clone, Copy)]
pub struct FiniteDifferenced<C> {
    pub inner: C,
    pub h: f64,
}

impl<C: Chart> FiniteDifferenced<C> {
    pub fn new(inner: C, h: f64) -> Self {
        Self { inner, h }
    }
}

impl<C: Chart> Chart for FiniteDifferenced<C> {
    fn domain(&self) -> ParamRect {
        self.inner.domain()
    }
    fn roles(&self) -> EdgeRoles {
        self.inner.roles()
    }
    fn position(&self, x: Param, t: f64) -> Vec3 {
        self.inner.position(x, t)
    }
    fn tangents(&self, x: Param, t: f64) -> [Vec3; 2] {
        self.inner.tangents(x, t)
    }
    fn velocity(&self, x: Param, t: f64) -> Vec3 {
        self.inner.velocity(x, t)
    }
    fn is_static(&self) -> bool {
        self.inner.is_static()
    }
    fn second_derivative_mode(&self) -> SecondDerivativeMode {
        SecondDerivativeMode::FiniteDifference { h: self.h }
    }
}

/// Checks that periodic edge pairs map to the same points with the same
/// tangents. Returns the largest mismatch found over `samples` points.
pub fn periodic_mismatch(chart: &dyn Chart, t: f64, samples: usize) -> f64 {
    let d = chart.domain();
    let roles = chart.roles();
    let mut worst = 0.0_f64;
    for (lo, hi) in [(Edge::RLo, Edge::RHi), (Edge::SLo, Edge::SHi)] {
        if roles.get(lo) != EdgeRole::Periodic {
            continue;
        }
        let a = BoundarySegment::of(&d, &roles, lo);
        let b = BoundarySegment::of(&d, &roles, hi);
        for k in 0..samples {
            let l = a.l_lo + (k as f64 + 0.5) / samples as f64 * a.length();
            let (pa, pb) = (a.point(l), b.point(l));
            let dx = (chart.position(pa, t) - chart.position(pb, t)).norm();
            let ga = chart.tangents(pa, t);
            let gb = chart.tangents(pb, t);
            let dg = (ga[0] - gb[0]).norm().max((ga[1] - gb[1]).norm());
            worst = worst.max(dx).max(dg);
        }
    }
    worst
}
