//! Quadrature and topology measurements for sampled maps.
//!
//! Every map is presented as a list of weighted pieces (chart regions); all
//! integrals and degree counts are the weighted sums over pieces, so vertex
//! charts are resolved in their own coordinates.

mod boundary;
mod degree;
mod energy;
mod grid;

pub use boundary::{boundary_residual, condition_residual, seam_residual, BoundaryResidual};
pub use degree::{
    degree_count, degree_count_meshes, image_mesh, lemma1_lower_bound, meshes, spherical_triangle_area,
    trapped_area, trapped_area_meshes, DegreeReport, ImageMesh, SectorDegree, TrappedArea, CONFIDENCE_TOL,
    MAX_CHORD,
};
pub use energy::{density, dirichlet_energy, piece_energy, EnergyReport, PieceEnergy};
pub use grid::{compensated_sum, segment_nodes, Cell, QuadratureGrid};

use crate::error::Result;
use crate::maps::SampledMap;
use serde::{Deserialize, Serialize};

/// Energy, degrees, trapped area and residuals of one map at one grid level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub energy: EnergyReport,
    pub degrees: DegreeReport,
    pub trapped_area: TrappedArea,
    pub boundary: BoundaryResidual,
    pub seam_residual: f64,
    pub lemma1_bound: f64,
}

pub fn measure(map: &dyn SampledMap, grid: &QuadratureGrid) -> Result<Measurement> {
    let energy = dirichlet_energy(map, grid)?;
    let m = meshes(map, grid);
    let degrees = degree_count_meshes(&m);
    let area = trapped_area_meshes(&m);
    let lemma1_bound = lemma1_lower_bound(&degrees)?;
    Ok(Measurement {
        energy,
        degrees,
        trapped_area: area,
        boundary: boundary_residual(map, 200),
        seam_residual: seam_residual(map, 250),
        lemma1_bound,
    })
}
