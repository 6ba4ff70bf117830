#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use surfdiff::bubble::{piece_chart, BubbleGeometry, Piece};
use surfdiff::calculus::Quadratic;
use surfdiff::geometry::{Affine, Chart, Cylinder, Graph, Param, Plane, ProjectedCap, SphereCap};
use surfdiff::Vec3;

use nalgebra::Matrix3;

pub fn moving_bubble() -> BubbleGeometry {
    BubbleGeometry::new(Affine::constant(1.0), Affine::constant(1.2), Affine::new(0.8, 0.05))
}

pub fn wavy_graph() -> Graph {
    Graph { amp: Affine::new(1.0, 0.2), ..Graph::new([0.1, 0.2, -0.3, 0.4, 0.5, -0.6], [0.3, 2.0, 1.0, 0.4]) }
}

/// Charts of every family, several of them moving.
pub fn corpus() -> Vec<(String, Box<dyn Chart>)> {
    let mut v: Vec<(String, Box<dyn Chart>)> = vec![
        ("plane".into(), Box::new(Plane::scaling(Affine::new(1.0, 0.3)))),
        ("graph".into(), Box::new(wavy_graph())),
        ("cylinder".into(), Box::new(Cylinder::new(Affine::new(1.0, 0.1), 2.0))),
        ("cap_north".into(), Box::new(SphereCap::cap(Affine::new(1.0, 0.1), Affine::new(0.0, 0.2), 0.7, 1.0))),
        ("cap_south".into(), Box::new(SphereCap::cap(Affine::new(1.5, -0.1), Affine::constant(0.3), 0.4, -1.0))),
        ("unit_sphere_cap".into(), Box::new(ProjectedCap::unit_sphere())),
    ];
    for p in Piece::ALL {
        v.push((format!("bubble_{}", p.name()), Box::new(piece_chart(moving_bubble(), p))));
    }
    v
}

/// Uniform point of the chart domain, kept away from a pole edge.
pub fn random_point(chart: &dyn Chart, rng: &mut ChaCha8Rng) -> Param {
    let x = chart.domain().lerp(rng.random_range(0.01..1.0), rng.random::<f64>());
    if chart.on_pole(x) {
        chart.domain().lerp(0.5, 0.5)
    } else {
        x
    }
}

/// Three smooth vector fields of increasing complexity.
pub fn test_fields() -> Vec<(&'static str, Quadratic)> {
    let a = Matrix3::new(0.3, -1.0, 0.5, 0.2, 0.7, -0.4, 1.1, 0.0, 0.6);
    let mut c0 = Matrix3::zeros();
    c0[(0, 1)] = 1.0;
    c0[(2, 2)] = -0.5;
    let mut c1 = Matrix3::zeros();
    c1[(0, 0)] = 0.4;
    c1[(1, 2)] = 0.8;
    let mut c2 = Matrix3::zeros();
    c2[(1, 1)] = -0.3;
    c2[(0, 2)] = 0.9;
    vec![
        ("position", Quadratic::identity()),
        ("affine", Quadratic { b: Vec3::new(0.5, -0.2, 1.0), ..Quadratic::linear(a) }),
        ("quadratic", Quadratic { b: Vec3::new(0.1, 0.3, -0.7), a, c: [c0, c1, c2] }),
    ]
}

/// Bessel function of the first kind of order zero, by its power series.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..60 {
        term *= q / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// First zero of `J0`.
pub const J01: f64 = 2.404825557695773;
