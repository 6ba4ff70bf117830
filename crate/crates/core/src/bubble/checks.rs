use super::geometry::{charts_for, BubbleGeometry, Piece, Surface};
use crate::calculus::{
    divergence_theorem_residual, transport_theorem_residual, union_divergence_residual, EdgePairing, ResidualReport,
    Resolution, UnionReport, VectorField,
};
use crate::geometry::{Chart, Edge};
use crate::{Result, Vec3};

/// Seam pairing of a two-piece surface, as indices into its piece list.
fn seam(surface: Surface) -> Option<EdgePairing> {
    match surface {
        Surface::A => Some(EdgePairing::new((0, Edge::RHi), (1, Edge::RLo), false)),
        Surface::B => Some(EdgePairing::new((0, Edge::RLo), (1, Edge::RHi), false)),
        Surface::S => None,
    }
}

/// Divergence theorem on each of the three surfaces, whose only boundary is
/// the junction circle.
pub fn bubble_divergence_check(
    geom: &BubbleGeometry,
    phi: &dyn VectorField,
    t: f64,
    res: Resolution,
) -> Result<[UnionReport; 3]> {
    let ch = charts_for(geom, t)?;
    let mut out = Vec::with_capacity(3);
    for surface in Surface::ALL {
        let charts: Vec<&dyn Chart> = surface.pieces().iter().map(|p| &ch[p.index()] as &dyn Chart).collect();
        let rep = match seam(surface) {
            Some(p) => union_divergence_residual(&charts, &[p], phi, t, res)?,
            None => {
                let d = divergence_theorem_residual(charts[0], phi, t, res)?;
                let anti = ResidualReport::new("conormal_antisymmetry", 0.0, 1e-10, res);
                UnionReport { divergence: d, antisymmetry: anti, hausdorff: 0.0 }
            }
        };
        let name = format!("bubble_divergence_{}", surface.name());
        out.push(UnionReport { divergence: rep.divergence.named(name), ..rep });
    }
    Ok(out.try_into().unwrap_or_else(|_| unreachable!()))
}

/// Transport theorem on each of the three surfaces.
pub fn bubble_transport_check(
    geom: &BubbleGeometry,
    f: &dyn Fn(Vec3, f64) -> f64,
    t: f64,
    dt: f64,
    res: Resolution,
) -> Result<[ResidualReport; 3]> {
    geom.validate(t - dt, t + dt, 4)?;
    let ch = charts_for(geom, t)?;
    let mut out = Vec::with_capacity(3);
    for surface in Surface::ALL {
        let charts: Vec<&dyn Chart> = surface.pieces().iter().map(|p: &Piece| &ch[p.index()] as &dyn Chart).collect();
        let r = transport_theorem_residual(&charts, f, t, dt, res)?;
        out.push(r.named(format!("bubble_transport_{}", surface.name())));
    }
    Ok(out.try_into().unwrap_or_else(|_| unreachable!()))
}
