//! Closed-form values the library must reproduce.

mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use approx::assert_abs_diff_eq;
use common::{bessel_j0, J01};
use surfdiff::bubble::{analytic_conormals, charts_for, junction_normal_b, BubbleGeometry, Piece};
use surfdiff::calculus::{
    divergence_theorem_residual, transport_theorem_residual, union_divergence_residual, EdgePairing, FnField,
    Quadratic, Resolution,
};
use surfdiff::geometry::{
    conormal, frame, mean_curvature, Affine, Chart, Edge, FlatDisc, ParamGrid, Plane, Rule, SphereCap,
};
use surfdiff::solver::{simulate, Boundaries, EnergyDensity, SolverState, StepOptions};
use surfdiff::Vec3;

const R2: f64 = 0.56109375;

#[test]
fn reference_bubble_parameters() {
    let p = BubbleGeometry::reference().params(0.0);
    assert_abs_diff_eq!(p.n, -0.1375, epsilon = 1e-15);
    assert_abs_diff_eq!(p.radius * p.radius, R2, epsilon = 1e-15);
}

#[test]
fn reference_bubble_curvatures() {
    let g = BubbleGeometry::reference();
    let ch = charts_for(&g, 0.0).unwrap();
    for (piece, h) in
        [(Piece::A1, 2.0), (Piece::A2, 2.0), (Piece::B1, -2.0 / 1.2), (Piece::B2, -2.0 / 1.2), (Piece::S, 0.0)]
    {
        let c = &ch[piece.index()];
        for x in [[0.3, 0.2], [0.8, 4.0]] {
            assert_abs_diff_eq!(mean_curvature(c, x, 0.0).unwrap(), h, epsilon = 1e-10);
        }
    }
}

#[test]
fn reference_junction_conormals() {
    let g = BubbleGeometry::reference();
    let ch = charts_for(&g, 0.0).unwrap();
    let r = R2.sqrt();
    let expected = [
        (Piece::A2, Vec3::new(r, -0.6625, 0.0)),
        (Piece::B1, Vec3::new(-r / 1.2, -0.78125, 0.0)),
        (Piece::S, Vec3::new(0.0, 1.0, 0.0)),
    ];
    let an = analytic_conormals(&g, 0.0, 0.0).unwrap();
    for ((piece, v), a) in expected.into_iter().zip([an.a, an.b, an.s]) {
        let c = &ch[piece.index()];
        let nu = conormal(c, &c.segment(Edge::RHi), 0.0, 0.0).unwrap();
        assert!((nu - v).norm() < 1e-12, "{piece:?}: {nu:?}");
        assert!((a - v).norm() < 1e-12);
    }
}

#[test]
fn alternative_b_conormal_is_not_tangent() {
    let g = common::moving_bubble();
    let t = 0.4;
    let an = analytic_conormals(&g, 0.7, t).unwrap();
    let defect = an.b_alt.dot(&junction_normal_b(&g, 0.7, t)).abs();
    assert_abs_diff_eq!(defect, 0.99907, epsilon = 5e-6);
    assert!(an.b.dot(&junction_normal_b(&g, 0.7, t)).abs() < 1e-14);
}

#[test]
fn separator_disc_divergence_terms() {
    let disc = FlatDisc::new(Affine::constant(-0.1375), Affine::constant(R2.sqrt()));
    let phi = FnField(|x: Vec3| Vec3::new(0.0, x.y, x.z));
    let r = divergence_theorem_residual(&disc, &phi, 0.0, Resolution::square(32)).unwrap();
    assert_abs_diff_eq!(r.term("div").unwrap(), 2.0 * PI * R2, epsilon = 1e-10);
    assert_abs_diff_eq!(r.term("boundary").unwrap(), 2.0 * PI * R2, epsilon = 1e-12);
    assert_eq!(r.term("curvature").unwrap(), 0.0);
}

#[test]
fn closed_sphere_position_field() {
    let n = SphereCap::hemisphere(Affine::constant(1.0), 1.0);
    let s = SphereCap::hemisphere(Affine::constant(1.0), -1.0);
    let pair = EdgePairing::new((0, Edge::RHi), (1, Edge::RHi), true);
    let res = Resolution::square(64).with_rule(Rule::Gauss2);
    let u = union_divergence_residual(&[&n, &s], &[pair], &Quadratic::identity(), 0.0, res).unwrap();
    let d = &u.divergence;
    assert_abs_diff_eq!(d.term("div").unwrap(), 8.0 * PI, epsilon = 1e-8);
    assert_abs_diff_eq!(d.term("curvature").unwrap(), -8.0 * PI, epsilon = 1e-8);
    assert_abs_diff_eq!(d.term("boundary").unwrap(), 0.0, epsilon = 1e-12);
}

#[test]
fn growing_sphere_area_rate() {
    let radius = Affine::new(1.0, 0.5);
    let n = SphereCap::hemisphere(radius, 1.0);
    let s = SphereCap::hemisphere(radius, -1.0);
    let r = transport_theorem_residual(&[&n, &s], &|_, _| 1.0, 0.2, 1e-4, Resolution::square(64)).unwrap();
    assert_abs_diff_eq!(r.term("lhs").unwrap(), 8.0 * PI * 1.1 * 0.5, epsilon = 1e-8);
    assert_abs_diff_eq!(r.term("rhs").unwrap(), 8.0 * PI * 1.1 * 0.5, epsilon = 1e-7);
}

#[test]
fn plane_stability_bound() {
    let chart: Arc<dyn Chart> = Arc::new(Plane::unit_square());
    let grid = ParamGrid::for_chart(chart.as_ref(), 20, 20).unwrap();
    let s =
        SolverState::diffusion(chart, grid, EnergyDensity::linear(), Boundaries::neumann(), 0.0, |x, _| x[0]).unwrap();
    assert_abs_diff_eq!(s.cfl_dt(0.4).unwrap(), 0.4 / (4.0 * 400.0), epsilon = 1e-15);
}

#[test]
fn coarse_disc_decay_rate() {
    let chart: Arc<dyn Chart> = Arc::new(FlatDisc::new(Affine::constant(0.0), Affine::constant(1.0)));
    let grid = ParamGrid::for_chart(chart.as_ref(), 48, 4).unwrap();
    let s = SolverState::diffusion(chart, grid, EnergyDensity::linear(), Boundaries::dirichlet(0.0), 0.0, |_, x| {
        bessel_j0(J01 * x.yz().norm())
    })
    .unwrap();
    let opts = StepOptions::default();
    let a = simulate(s, 0.05, None, &opts, usize::MAX, |_| Ok(())).unwrap().state;
    let m1 = a.mass();
    let b = simulate(a, 0.15, None, &opts, usize::MAX, |_| Ok(())).unwrap().state;
    let rate = (m1 / b.mass()).ln() / 0.1;
    assert!((rate / (J01 * J01) - 1.0).abs() < 0.01, "rate {rate}");
}

#[test]
fn unit_sphere_frame() {
    let cap = SphereCap::hemisphere(Affine::constant(1.0), 1.0);
    let x = [0.5, 1.0];
    let f = frame(&cap, x, 0.0).unwrap();
    let p = cap.position(x, 0.0);
    assert_abs_diff_eq!(p.norm(), 1.0, epsilon = 1e-15);
    assert!((f.n - p).norm() < 1e-14);
    assert_abs_diff_eq!(mean_curvature(&cap, x, 0.0).unwrap(), -2.0, epsilon = 1e-12);
}
