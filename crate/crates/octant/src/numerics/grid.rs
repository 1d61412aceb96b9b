use crate::error::{Error, Result};
use crate::maps::Piece;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

/// Polar tiling of each piece, with seam radii as cell boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub level: u32,
}

/// One polar cell [r0, r1] × [phi0, phi1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub r0: f64,
    pub r1: f64,
    pub phi0: f64,
    pub phi1: f64,
}

impl Cell {
    pub fn midpoint(&self) -> Complex64 {
        Complex64::from_polar(0.5 * (self.r0 + self.r1), 0.5 * (self.phi0 + self.phi1))
    }

    pub fn area(&self) -> f64 {
        0.5 * (self.r1 * self.r1 - self.r0 * self.r0) * (self.phi1 - self.phi0)
    }

    /// Smaller of the radial and mid-arc widths.
    pub fn size(&self) -> f64 {
        let rm = 0.5 * (self.r0 + self.r1);
        (self.r1 - self.r0).min(rm * (self.phi1 - self.phi0))
    }

    pub fn split(&self) -> [Cell; 4] {
        let rm = 0.5 * (self.r0 + self.r1);
        let pm = 0.5 * (self.phi0 + self.phi1);
        [
            Cell { r0: self.r0, r1: rm, phi0: self.phi0, phi1: pm },
            Cell { r0: rm, r1: self.r1, phi0: self.phi0, phi1: pm },
            Cell { r0: self.r0, r1: rm, phi0: pm, phi1: self.phi1 },
            Cell { r0: rm, r1: self.r1, phi0: pm, phi1: self.phi1 },
        ]
    }
}

/// Radial node positions of one segment [a, b]: uniform when a = 0,
/// geometric otherwise.
pub fn segment_nodes(a: f64, b: f64, cells: usize) -> Vec<f64> {
    let n = cells.max(1);
    (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            if i == n {
                b
            } else if a == 0.0 {
                b * t
            } else {
                a * (b / a).powf(t)
            }
        })
        .collect()
}

impl QuadratureGrid {
    pub fn new(level: u32) -> Result<Self> {
        if !(1..=5).contains(&level) {
            return Err(Error::OutOfRange(format!("grid level {level} not in [1, 5]")));
        }
        Ok(QuadratureGrid { level })
    }

    fn base(&self) -> f64 {
        (1u32 << self.level) as f64
    }

    pub fn angular_cells(&self, piece: &Piece) -> usize {
        let quarter = (8.0 * self.base() * piece.resolution).round() as usize;
        if piece.full_turn() {
            4 * quarter
        } else {
            quarter
        }
    }

    pub fn span(piece: &Piece) -> f64 {
        if piece.full_turn() {
            TAU
        } else {
            FRAC_PI_2
        }
    }

    /// Segment breakpoints 0 < seams < radius.
    pub fn breakpoints(piece: &Piece) -> Vec<f64> {
        let mut b = vec![0.0];
        let mut seams: Vec<f64> = piece.seams.iter().copied().filter(|&r| r > 0.0 && r < piece.radius).collect();
        seams.sort_by(|a, b| a.total_cmp(b));
        seams.dedup();
        b.extend(seams);
        b.push(piece.radius);
        b
    }

    /// Cells per segment: 4·2^level·res for the inner disc, the same per
    /// decade on annuli.
    pub fn segment_cells(&self, piece: &Piece) -> Vec<usize> {
        let per = 4.0 * self.base() * piece.resolution;
        Self::breakpoints(piece)
            .windows(2)
            .map(|w| {
                if w[0] == 0.0 {
                    per.round() as usize
                } else {
                    ((per * (w[1] / w[0]).log10()).ceil() as usize).max(4)
                }
            })
            .collect()
    }

    pub fn radial_nodes(&self, piece: &Piece, cells: &[usize]) -> Vec<f64> {
        let b = Self::breakpoints(piece);
        let mut out = vec![0.0];
        for (w, &n) in b.windows(2).zip(cells) {
            out.extend(segment_nodes(w[0], w[1], n).into_iter().skip(1));
        }
        out
    }

    pub fn cells(&self, piece: &Piece) -> Vec<Cell> {
        let radii = self.radial_nodes(piece, &self.segment_cells(piece));
        let nphi = self.angular_cells(piece);
        let dphi = Self::span(piece) / nphi as f64;
        let mut out = Vec::with_capacity((radii.len() - 1) * nphi);
        for w in radii.windows(2) {
            for j in 0..nphi {
                out.push(Cell { r0: w[0], r1: w[1], phi0: j as f64 * dphi, phi1: (j + 1) as f64 * dphi });
            }
        }
        out
    }
}

/// Neumaier-compensated sum in slice order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}
