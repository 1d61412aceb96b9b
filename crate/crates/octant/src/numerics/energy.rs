use super::grid::{compensated_sum, Cell, QuadratureGrid};
use crate::error::{Error, Result};
use crate::maps::{ExtComplex, Piece, SampledMap};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceEnergy {
    pub label: String,
    pub weight: i32,
    pub energy: f64,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub energy: f64,
    pub energy_over_pi: f64,
    pub grid_level: u32,
    pub pieces: Vec<PieceEnergy>,
}

/// 4(|K_u|² + |K_v|²)/(1+|K|²)², equal to 8(|∂K|² + |∂̄K|²)/(1+|K|²)², by
/// central differences of step h. Evaluated on 1/K when |K(u)| > 1.
/// None when a stencil value is infinite.
pub fn density(f: &dyn Fn(Complex64) -> ExtComplex, u: Complex64, h: f64) -> Option<f64> {
    let centre = f(u);
    let flip = centre.norm() > 1.0;
    let val = |z: Complex64| -> Option<Complex64> {
        let v = f(z);
        let v = if flip { v.recip() } else { v };
        v.finite()
    };
    let k = val(u)?;
    let du = (val(u + h)? - val(u - h)?) / (2.0 * h);
    let dv = (val(u + Complex64::new(0.0, h))? - val(u - Complex64::new(0.0, h))?) / (2.0 * h);
    let d = 1.0 + k.norm_sqr();
    let rho = 4.0 * (du.norm_sqr() + dv.norm_sqr()) / (d * d);
    rho.is_finite().then_some(rho)
}

/// Cells are split while the midpoint value and the sum over the four
/// children disagree, which resolves small bubbles of high density.
const MAX_SPLIT_DEPTH: u32 = 9;
const REL_TOL: f64 = 1e-3;
const ABS_TOL: f64 = 1e-10;

fn midpoint_value(f: &dyn Fn(Complex64) -> ExtComplex, cell: &Cell) -> Option<f64> {
    let h = 1e-4 * cell.size();
    density(f, cell.midpoint(), h).map(|rho| rho * cell.area())
}

fn cell_energy(f: &dyn Fn(Complex64) -> ExtComplex, cell: &Cell, coarse: Option<f64>, depth: u32) -> Result<f64> {
    let parts = cell.split();
    let fine: Vec<Option<f64>> = parts.iter().map(|c| midpoint_value(f, c)).collect();
    let settled = match (coarse, fine.iter().copied().collect::<Option<Vec<f64>>>()) {
        (Some(c), Some(v)) => {
            let sum: f64 = v.iter().sum();
            ((sum - c).abs() <= REL_TOL * sum.abs() + ABS_TOL).then_some(sum)
        }
        _ => None,
    };
    if let Some(sum) = settled {
        return Ok(sum);
    }
    if depth >= MAX_SPLIT_DEPTH {
        return match fine.iter().copied().collect::<Option<Vec<f64>>>() {
            Some(v) => Ok(v.iter().sum()),
            None => Err(Error::Integration(format!(
                "non-finite energy density persists near u = {}",
                cell.midpoint()
            ))),
        };
    }
    let mut total = 0.0;
    for (c, v) in parts.iter().zip(fine) {
        total += cell_energy(f, c, v, depth + 1)?;
    }
    Ok(total)
}

pub fn piece_energy(map: &dyn SampledMap, piece: &Piece, grid: &QuadratureGrid) -> Result<PieceEnergy> {
    let cells = grid.cells(piece);
    let f = |u: Complex64| map.eval_piece(piece, u);
    let values: Vec<f64> = cells
        .par_iter()
        .map(|c| cell_energy(&f, c, midpoint_value(&f, c), 0))
        .collect::<Result<Vec<f64>>>()?;
    Ok(PieceEnergy {
        label: piece.label.clone(),
        weight: piece.weight,
        energy: compensated_sum(values),
        cells: cells.len(),
    })
}

/// E(K) = ∫_Q 4(|K_u|²+|K_v|²)/(1+|K|²)² du dv as the weighted sum over pieces.
pub fn dirichlet_energy(map: &dyn SampledMap, grid: &QuadratureGrid) -> Result<EnergyReport> {
    let pieces = map
        .pieces()
        .iter()
        .map(|p| piece_energy(map, p, grid))
        .collect::<Result<Vec<_>>>()?;
    let energy = compensated_sum(pieces.iter().map(|p| p.weight as f64 * p.energy));
    Ok(EnergyReport {
        energy,
        energy_over_pi: energy / std::f64::consts::PI,
        grid_level: grid.level,
        pieces,
    })
}
