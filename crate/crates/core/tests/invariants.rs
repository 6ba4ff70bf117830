use std::f64::consts::TAU;
use std::sync::Arc;

use proptest::prelude::*;
use surfdiff::bubble::{
    analytic_conormals, charts_for, junction_mismatch, BubbleGeometry, BubbleState, InitialCondition, Piece,
};
use surfdiff::calculus::{divergence_theorem_residual, fitted_order, FnField, ResidualReport, Resolution};
use surfdiff::geometry::{conormal, frame, Affine, Chart, Edge, Graph, Param, ParamGrid, Plane, SphereCap};
use surfdiff::solver::{Boundaries, EnergyDensity, Integrator, SolverState, StepOptions};
use surfdiff::Vec3;

fn cap() -> impl Strategy<Value = SphereCap> {
    (0.5..2.0f64, -0.5..0.5f64, -0.5..0.5f64, -0.5..0.5f64, 0.1..1.9f64, prop::bool::ANY).prop_map(
        |(a0, a1, c0, c1, k, north)| {
            SphereCap::cap(Affine::new(a0, a1), Affine::new(c0, c1), k, if north { 1.0 } else { -1.0 })
        },
    )
}

fn graph() -> impl Strategy<Value = Graph> {
    (prop::array::uniform6(-0.5..0.5f64), prop::array::uniform4(-1.0..1.0f64), -0.5..0.5f64)
        .prop_map(|(quad, wave, a1)| Graph { amp: Affine::new(1.0, a1), ..Graph::new(quad, wave) })
}

#[derive(Debug, Clone)]
enum AnyChart {
    Cap(SphereCap),
    Graph(Graph),
}

impl AnyChart {
    fn as_ref(&self) -> &dyn Chart {
        match self {
            AnyChart::Cap(c) => c,
            AnyChart::Graph(g) => g,
        }
    }
}

fn chart() -> impl Strategy<Value = AnyChart> {
    prop_oneof![cap().prop_map(AnyChart::Cap), graph().prop_map(AnyChart::Graph)]
}

/// `0 < m < a < b < 2m`, with an affine motion that stays admissible on `[0, 0.2]`.
fn bubble() -> impl Strategy<Value = BubbleGeometry> {
    (0.5..1.0f64, 0.05..0.95f64, 0.05..0.95f64, -0.2..0.2f64).prop_filter_map("inadmissible", |(m, sa, sb, dm)| {
        let a = m + sa * m * 0.5;
        let b = a + sb * (2.0 * m - a);
        let g = BubbleGeometry::new(Affine::constant(a), Affine::constant(b), Affine::new(m, dm));
        g.validate(0.0, 0.2, 50).ok().map(|_| g)
    })
}

fn point(chart: &dyn Chart, u: f64, v: f64) -> Param {
    chart.domain().lerp(0.02 + 0.96 * u, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn frame_identities_hold(c in chart(), u in 0.0..1.0f64, v in 0.0..1.0f64, t in 0.0..0.5f64) {
        let f = frame(c.as_ref(), point(c.as_ref(), u, v), t).unwrap();
        prop_assert!(f.identity_defect() < 1e-10);
        prop_assert!(f.dual_cross_defect() < 1e-10);
        prop_assert!((f.n.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn conormals_are_outward_unit_tangents(c in chart(), l in 0.0..1.0f64, t in 0.0..0.5f64) {
        for edge in Edge::ALL {
            let seg = c.as_ref().segment(edge);
            if !seg.role.carries_boundary() {
                continue;
            }
            let at = seg.l_lo + l * seg.length();
            let nu = conormal(c.as_ref(), &seg, at, t).unwrap();
            let f = frame(c.as_ref(), seg.point(at), t).unwrap();
            prop_assert!((nu.norm() - 1.0).abs() < 1e-12);
            prop_assert!(nu.dot(&f.n).abs() < 1e-12);
            let along = if edge.is_r_edge() { f.g2 } else { f.g1 };
            prop_assert!(nu.dot(&along).abs() < 1e-10 * along.norm());
            let pulled = [nu.dot(&f.gup1), nu.dot(&f.gup2)];
            let pn = seg.normal();
            prop_assert!(pulled[0] * pn[0] + pulled[1] * pn[1] > 0.0);
        }
    }

    #[test]
    fn zero_field_has_zero_residual(c in chart()) {
        let zero = FnField(|_: Vec3| Vec3::zeros());
        let r = divergence_theorem_residual(c.as_ref(), &zero, 0.1, Resolution::square(6)).unwrap();
        prop_assert_eq!(r.value, 0.0);
    }

    #[test]
    fn residual_pass_matches_tolerance(value in -1.0..1.0f64, tol in 0.0..1.0f64) {
        let r = ResidualReport::new("x", value, tol, Resolution::square(4));
        prop_assert_eq!(r.pass, value.abs() <= tol);
        prop_assert_eq!(r.with_tolerance(0.0).pass, value == 0.0);
    }

    #[test]
    fn order_fit_recovers_power(c in 0.1..10.0f64, p in 0.5..4.0f64) {
        let h = [0.1, 0.05, 0.025, 0.0125];
        let v: Vec<f64> = h.iter().map(|h: &f64| c * h.powf(p)).collect();
        prop_assert!((fitted_order(&h, &v, 0.0).unwrap() - p).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bubble_conormals_and_junction(g in bubble(), th in 0.0..TAU, t in 0.0..0.2f64) {
        let ch = charts_for(&g, t).unwrap();
        let an = analytic_conormals(&g, th, t).unwrap();
        for (piece, v) in [(Piece::A2, an.a), (Piece::B1, an.b), (Piece::S, an.s)] {
            let c = &ch[piece.index()];
            let nu = conormal(c, &c.segment(Edge::RHi), th, t).unwrap();
            prop_assert!((nu - v).norm() < 1e-8, "{:?}", piece);
            prop_assert!(v.dot(&frame(c, [1.0, th], t).unwrap().n).abs() < 1e-12);
        }
        prop_assert!(junction_mismatch(&g, t, 16).unwrap() < 1e-12);
        prop_assert!(g.radius_identity_defect(t) < 1e-12);
    }

    #[test]
    fn neumann_mass_is_conserved_on_moving_caps(
        c in cap(),
        coef in prop::array::uniform4(-1.0..1.0f64),
        heun in prop::bool::ANY,
    ) {
        let chart: Arc<dyn Chart> = Arc::new(c);
        let grid = ParamGrid::for_chart(chart.as_ref(), 8, 8).unwrap();
        let mut s = SolverState::diffusion(chart, grid, EnergyDensity::log(), Boundaries::neumann(), 0.0, |_, x| {
            2.0 + coef[0] * x.x + coef[1] * (2.0 * x.y).sin() + coef[2] * x.z * x.z + coef[3] * x.x * x.y
        })
        .unwrap();
        let integ = if heun { Integrator::Heun } else { Integrator::Euler };
        let m0 = s.mass();
        for _ in 0..20 {
            let dt = s.cfl_dt(0.4).unwrap().min(1e-2);
            s = s.step(dt, integ).unwrap();
        }
        prop_assert!(((s.mass() - m0) / m0).abs() < 1e-12);
    }

    #[test]
    fn static_energy_decays_and_extremes_stay(data in prop::collection::vec(-1.0..1.0f64, 100)) {
        let chart: Arc<dyn Chart> = Arc::new(Plane::unit_square());
        let grid = ParamGrid::for_chart(chart.as_ref(), 10, 10).unwrap();
        let mut s = SolverState::diffusion(chart, grid.clone(), EnergyDensity::linear(), Boundaries::neumann(), 0.0, |x, _| {
            let i = ((x[0] * 10.0) as usize).min(9);
            let j = ((x[1] * 10.0) as usize).min(9);
            data[grid.idx(i, j)]
        })
        .unwrap();
        let (lo, hi) = (s.primitive().min(), s.primitive().max());
        let mut e = s.energy_value();
        for _ in 0..20 {
            s = s.step(s.cfl_dt(0.4).unwrap(), Integrator::Euler).unwrap();
            let u = s.primitive();
            prop_assert!(u.min() >= lo - 1e-14 && u.max() <= hi + 1e-14);
            prop_assert!(s.energy_value() <= e + 1e-15);
            e = s.energy_value();
        }
    }

    #[test]
    fn bubble_total_mass_is_conserved(
        g in bubble(),
        kappa in prop::array::uniform3(0.2..3.0f64),
        theta0 in 0.0..TAU,
    ) {
        let init = [
            InitialCondition::Gaussian { theta0, width: 0.5 },
            InitialCondition::Indicator,
            InitialCondition::Constant(0.0),
        ];
        let opts = StepOptions::default();
        let fixed = BubbleGeometry::new(g.a, g.b, Affine::constant(g.m.c0));
        for (geom, moving) in [(g, true), (fixed, false)] {
            let mut s = BubbleState::new(geom, kappa, 4, 6, 0.0, init).unwrap();
            let m0 = s.mass();
            for _ in 0..10 {
                let dt = s.auto_dt(&opts).unwrap().min(0.02);
                s = s.coupled_step(dt, &opts).unwrap();
            }
            prop_assert!(((s.mass() - m0) / m0).abs() < 1e-12);
            if !moving {
                for v in s.nodes.junction.iter().chain(&s.nodes.seam_a).chain(&s.nodes.seam_b) {
                    prop_assert!((-1e-12..=1.0 + 1e-12).contains(v));
                }
            }
        }
    }
}
