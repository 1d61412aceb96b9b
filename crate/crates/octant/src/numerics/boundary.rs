use crate::maps::{ChartEdge, EdgeCondition, ExtComplex, SampledMap};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResidual {
    /// max |Im K| on [0,1], |Re K| on [0,i], ||K|−1| on the arc.
    pub real_edge: f64,
    pub imaginary_edge: f64,
    pub arc: f64,
    pub samples: usize,
}

impl BoundaryResidual {
    pub fn max(&self) -> f64 {
        self.real_edge.max(self.imaginary_edge).max(self.arc)
    }
}

/// Edge-condition residual; for |K| > 1 the axis conditions are measured on
/// 1/K, which satisfies the same condition.
pub fn condition_residual(k: ExtComplex, cond: EdgeCondition) -> f64 {
    match (cond, k) {
        (EdgeCondition::UnitCircle, ExtComplex::Infinity) => f64::INFINITY,
        (EdgeCondition::UnitCircle, ExtComplex::Finite(z)) => (z.norm() - 1.0).abs(),
        (_, ExtComplex::Infinity) => 0.0,
        (c, k) => {
            let z = if k.norm() > 1.0 { k.recip() } else { k };
            let z = z.finite().expect("finite after reciprocal");
            match c {
                EdgeCondition::Real => z.im.abs(),
                _ => z.re.abs(),
            }
        }
    }
}

/// Parameters along an edge: uniform, plus geometric towards the vertex.
fn edge_parameters(n: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
    t.extend((0..n).map(|i| 10f64.powf(-14.0 * (i as f64 + 0.5) / n as f64)));
    t.push(0.0);
    t
}

pub fn boundary_residual(map: &dyn SampledMap, samples_per_edge: usize) -> BoundaryResidual {
    let mut out = BoundaryResidual { real_edge: 0.0, imaginary_edge: 0.0, arc: 0.0, samples: 0 };
    for piece in map.pieces() {
        for &(edge, cond) in &piece.edges {
            let ts = match edge {
                ChartEdge::Arc => (0..=samples_per_edge).map(|i| i as f64 / samples_per_edge as f64).collect(),
                _ => edge_parameters(samples_per_edge),
            };
            for t in ts {
                let k = map.eval_piece(&piece, piece.edge_point(edge, t));
                let r = condition_residual(k, cond);
                out.samples += 1;
                let slot = match cond {
                    EdgeCondition::Real => &mut out.real_edge,
                    EdgeCondition::Imaginary => &mut out.imaginary_edge,
                    EdgeCondition::UnitCircle => &mut out.arc,
                };
                *slot = slot.max(r);
            }
        }
    }
    out
}

/// Largest chordal distance between one-sided values at the seams.
pub fn seam_residual(map: &dyn SampledMap, per_seam: usize) -> f64 {
    map.seam_samples(per_seam)
        .into_iter()
        .map(|(a, b)| a.chordal_distance(b))
        .fold(0.0, f64::max)
}
