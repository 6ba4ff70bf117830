//! The residual battery behind `cli verify`.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use surfdiff::bubble::{
    analytic_conormals, bubble_divergence_check, bubble_transport_check, charts_for, junction_mismatch, piece_chart,
    BubbleGeometry, Piece, Surface,
};
use surfdiff::calculus::{
    dissipation_variation_residual, divergence_theorem_residual, sqrt_g_evolution_residual, transport_theorem_residual,
    union_divergence_residual, EdgePairing, Quadratic, ResidualReport, Resolution,
};
use surfdiff::geometry::{
    conormal, frame, mean_curvature, weingarten_residual, Affine, Chart, Cylinder, Edge, FiniteDifferenced, FlatDisc,
    Graph, Param, ParamGrid, Plane, ProjectedCap, SphereCap,
};
use surfdiff::solver::EnergyDensity;
use surfdiff::{Result, Vec3};

/// Inputs shared by every check.
pub struct Ctx {
    pub res: Resolution,
    pub points: usize,
    pub seed: u64,
    pub time: f64,
    pub bubble: BubbleGeometry,
}

type CheckFn = fn(&Ctx) -> Result<Vec<ResidualReport>>;

pub struct Check {
    pub name: &'static str,
    pub about: &'static str,
    run: CheckFn,
}

pub const CHECKS: [Check; 11] = [
    Check { name: "frame", about: "dual-frame identities at random points", run: frame_check },
    Check { name: "weingarten", about: "Weingarten reconstruction, analytic and finite-difference", run: weingarten },
    Check { name: "sqrt_g_rate", about: "d sqrt(G)/dt = (div w) sqrt(G) at random points", run: sqrt_g_rate },
    Check { name: "divergence", about: "divergence theorem on a disc, a cap and a graph", run: divergence },
    Check { name: "union", about: "divergence theorem on the sphere from two hemispheres", run: union },
    Check { name: "bubble_divergence", about: "divergence theorem on the three bubble surfaces", run: bubble_div },
    Check { name: "conormals", about: "analytic junction co-normals against the numeric ones", run: conormals },
    Check { name: "curvature", about: "|H| of the bubble spheres and the flat separator", run: curvature },
    Check { name: "junction", about: "agreement of the three junction curves", run: junction },
    Check { name: "transport", about: "transport theorem on a growing sphere and the bubble", run: transport },
    Check { name: "variation", about: "first variation of the dissipation energy", run: variation },
];

/// Runs the selected checks, in parallel over checks, keeping their order.
/// A check that errors becomes one failing row.
pub fn run(ctx: &Ctx, selected: &[&Check], tolerance: Option<f64>) -> Vec<ResidualReport> {
    let groups: Vec<Vec<ResidualReport>> = selected
        .par_iter()
        .map(|c| match (c.run)(ctx) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("{}: {e}", c.name);
                vec![ResidualReport::new(c.name, f64::NAN, 0.0, ctx.res)]
            }
        })
        .collect();
    let mut out: Vec<ResidualReport> = groups.into_iter().flatten().collect();
    if let Some(tol) = tolerance {
        out = out.into_iter().map(|r| r.with_tolerance(tol)).collect();
    }
    out
}

fn report(name: impl Into<String>, value: f64, tol: f64, ctx: &Ctx) -> ResidualReport {
    ResidualReport::new(name, value, tol, ctx.res)
}

/// Charts of every family, several of them moving.
fn corpus(bubble: &BubbleGeometry) -> Vec<Box<dyn Chart>> {
    let mut v: Vec<Box<dyn Chart>> = vec![
        Box::new(Plane::scaling(Affine::new(1.0, 0.3))),
        Box::new(wavy_graph()),
        Box::new(Cylinder::new(Affine::new(1.0, 0.1), 2.0)),
        Box::new(SphereCap::cap(Affine::new(1.0, 0.1), Affine::new(0.0, 0.2), 0.7, 1.0)),
        Box::new(SphereCap::cap(Affine::new(1.5, -0.1), Affine::constant(0.3), 0.4, -1.0)),
        Box::new(ProjectedCap::unit_sphere()),
    ];
    for p in Piece::ALL {
        v.push(Box::new(piece_chart(*bubble, p)));
    }
    v
}

fn wavy_graph() -> Graph {
    Graph { amp: Affine::new(1.0, 0.2), ..Graph::new([0.1, 0.2, -0.3, 0.4, 0.5, -0.6], [0.3, 2.0, 1.0, 0.4]) }
}

fn random_point(chart: &dyn Chart, rng: &mut ChaCha8Rng) -> Param {
    let x = chart.domain().lerp(rng.random_range(0.01..1.0), rng.random::<f64>());
    if chart.on_pole(x) {
        chart.domain().lerp(0.5, 0.5)
    } else {
        x
    }
}

/// Worst of `f` over `ctx.points` random points spread over the corpus.
fn pointwise(ctx: &Ctx, stream: u64, f: impl Fn(&dyn Chart, Param) -> Result<f64>) -> Result<f64> {
    let charts = corpus(&ctx.bubble);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    rng.set_stream(stream);
    let mut worst = 0.0_f64;
    for k in 0..ctx.points {
        let c = charts[k % charts.len()].as_ref();
        let x = random_point(c, &mut rng);
        worst = worst.max(f(c, x)?);
    }
    Ok(worst)
}

fn frame_check(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let worst = pointwise(ctx, 1, |c, x| {
        let f = frame(c, x, ctx.time)?;
        Ok(f.identity_defect().max(f.dual_cross_defect()))
    })?;
    Ok(vec![report("frame_identities", worst, 1e-10, ctx)])
}

fn weingarten(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let analytic = pointwise(ctx, 2, |c, x| weingarten_residual(c, x, ctx.time))?;
    let fd = pointwise(ctx, 2, |c, x| {
        weingarten_residual(&FiniteDifferenced::new(c, 1e-5 * c.domain().extent()), x, ctx.time)
    })?;
    Ok(vec![report("weingarten_analytic", analytic, 1e-8, ctx), report("weingarten_fd", fd, 1e-6, ctx)])
}

fn sqrt_g_rate(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let worst = pointwise(ctx, 3, |c, x| Ok(sqrt_g_evolution_residual(c, x, ctx.time, 1e-4)?.abs()))?;
    Ok(vec![report("sqrt_g_rate", worst, 1e-6, ctx)])
}

/// Position, affine and quadratic fields.
pub fn test_fields() -> [(&'static str, Quadratic); 3] {
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
    [
        ("position", Quadratic::identity()),
        ("affine", Quadratic { b: Vec3::new(0.5, -0.2, 1.0), ..Quadratic::linear(a) }),
        ("quadratic", Quadratic { b: Vec3::new(0.1, 0.3, -0.7), a, c: [c0, c1, c2] }),
    ]
}

fn divergence(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let disc = FlatDisc::new(Affine::constant(-0.1375), Affine::constant(0.75));
    let cap = SphereCap::cap(Affine::constant(1.0), Affine::constant(0.2), 0.6, 1.0);
    let graph = wavy_graph();
    let charts: [(&str, &dyn Chart); 3] = [("disc", &disc), ("cap", &cap), ("graph", &graph)];
    let mut out = Vec::new();
    for (cn, c) in charts {
        for (fname, phi) in test_fields() {
            let r = divergence_theorem_residual(c, &phi, 0.0, ctx.res)?;
            out.push(r.named(format!("divergence_{cn}_{fname}")));
        }
    }
    Ok(out)
}

/// The two hemispheres of the sphere of radius `radius`, glued at the equator.
fn sphere(radius: Affine) -> ([SphereCap; 2], EdgePairing) {
    let n = SphereCap::hemisphere(radius, 1.0);
    let s = SphereCap::hemisphere(radius, -1.0);
    ([n, s], EdgePairing::new((0, Edge::RHi), (1, Edge::RHi), true))
}

fn union(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let ([n, s], pair) = sphere(Affine::constant(1.0));
    let mut out = Vec::new();
    let mut anti = 0.0_f64;
    for (fname, phi) in test_fields() {
        let u = union_divergence_residual(&[&n, &s], &[pair], &phi, 0.0, ctx.res)?;
        anti = anti.max(u.antisymmetry.value);
        out.push(u.divergence.named(format!("union_sphere_{fname}")));
    }
    out.push(report("union_antisymmetry", anti, 1e-10, ctx));
    Ok(out)
}

fn bubble_div(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let mut out = Vec::new();
    for (fname, phi) in test_fields() {
        for (surface, rep) in Surface::ALL.iter().zip(bubble_divergence_check(&ctx.bubble, &phi, ctx.time, ctx.res)?) {
            out.push(rep.divergence.named(format!("bubble_divergence_{}_{fname}", surface.name())));
            if *surface != Surface::S && fname == "position" {
                out.push(rep.antisymmetry.named(format!("bubble_seam_antisymmetry_{}", surface.name())));
            }
        }
    }
    Ok(out)
}

fn conormals(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let t = ctx.time;
    let ch = charts_for(&ctx.bubble, t)?;
    let mut err = [0.0_f64; 3];
    let mut ortho = 0.0_f64;
    let m = ctx.res.m_edge;
    for k in 0..m {
        let th = TAU * (k as f64 + 0.5) / m as f64;
        let an = analytic_conormals(&ctx.bubble, th, t)?;
        for (slot, (p, v)) in [(Piece::A2, an.a), (Piece::B1, an.b), (Piece::S, an.s)].into_iter().enumerate() {
            let c = &ch[p.index()];
            let nu = conormal(c, &c.segment(Edge::RHi), th, t)?;
            err[slot] = err[slot].max((nu - v).norm());
            ortho = ortho.max(v.dot(&frame(c, [1.0, th], t)?.n).abs()).max((v.norm() - 1.0).abs());
        }
    }
    Ok(vec![
        report("conormal_A", err[0], 1e-8, ctx),
        report("conormal_B", err[1], 1e-8, ctx),
        report("conormal_S", err[2], 1e-8, ctx),
        report("conormal_unit_tangent", ortho, 1e-12, ctx),
    ])
}

fn curvature(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let t = ctx.time;
    let p = ctx.bubble.params(t);
    let ch = charts_for(&ctx.bubble, t)?;
    let mut out = Vec::new();
    for (surface, expect) in [(Surface::A, 2.0 / p.a), (Surface::B, 2.0 / p.b), (Surface::S, 0.0)] {
        let mut worst = 0.0_f64;
        for piece in surface.pieces() {
            let c = &ch[piece.index()];
            let grid = ParamGrid::for_chart(c, ctx.res.nr, ctx.res.ns)?;
            for i in 0..grid.nr {
                for j in 0..grid.ns {
                    let h = mean_curvature(c, grid.center(i, j), t)?;
                    worst = worst.max((h.abs() - expect).abs());
                }
            }
        }
        out.push(report(format!("curvature_{}", surface.name()), worst, 1e-8, ctx));
    }
    Ok(out)
}

fn junction(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let mismatch = junction_mismatch(&ctx.bubble, ctx.time, ctx.res.m_edge)?;
    Ok(vec![
        report("junction_agreement", mismatch, 1e-12, ctx),
        report("junction_radius_identity", ctx.bubble.radius_identity_defect(ctx.time), 1e-12, ctx),
    ])
}

fn transport(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let dt = 1e-4;
    let radius = Affine::new(1.0, 0.5);
    let ([n, s], _) = sphere(radius);
    let r = transport_theorem_residual(&[&n, &s], &|_, _| 1.0, ctx.time, dt, ctx.res)?;
    let a = radius.at(ctx.time);
    let exact = 8.0 * PI * a * radius.rate();
    let lhs = r.term("lhs").unwrap_or(f64::NAN);
    let mut out =
        vec![report("transport_sphere_area_rate", (lhs - exact) / exact, 1e-6, ctx), r.named("transport_sphere")];
    let f = |x: Vec3, t: f64| (1.0 + t) * x.x * x.y + (2.0 * x.z).cos();
    let names = Surface::ALL.map(|s| format!("bubble_transport_{}", s.name()));
    for (name, r) in names.into_iter().zip(bubble_transport_check(&ctx.bubble, &f, ctx.time, dt, ctx.res)?) {
        out.push(r.named(name));
    }
    Ok(out)
}

fn variation(ctx: &Ctx) -> Result<Vec<ResidualReport>> {
    let cap = SphereCap::cap(Affine::constant(1.0), Affine::constant(0.0), 0.8, 1.0);
    let graph = wavy_graph();
    let f = |x: Vec3| (1.3 * x.x).sin() + x.y * x.z + 0.5 * x.y * x.y;
    let bump = |c: Vec3, w: f64| {
        move |x: Vec3| {
            let d2 = (x - c).norm_squared() / (w * w);
            if d2 < 1.0 {
                (1.0 - d2).powi(4)
            } else {
                0.0
            }
        }
    };
    let centre = graph.position([0.1, -0.05], 0.0);
    let mut out = Vec::new();
    for (ename, e) in
        [("linear", EnergyDensity::linear()), ("power", EnergyDensity::power(1.0)), ("log", EnergyDensity::log())]
    {
        let r = dissipation_variation_residual(&cap, &f, &bump(Vec3::x(), 0.6), &e, 0.0, ctx.res, 1e-4)?;
        out.push(r.named(format!("variation_cap_{ename}")));
        let r = dissipation_variation_residual(&graph, &f, &bump(centre, 0.3), &e, 0.0, ctx.res, 1e-4)?;
        out.push(r.named(format!("variation_graph_{ename}")));
    }
    Ok(out)
}
