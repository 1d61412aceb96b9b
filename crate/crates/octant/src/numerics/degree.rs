use super::grid::{compensated_sum, QuadratureGrid};
use crate::error::{Error, Result};
use crate::homotopy::{invariants_from_wrapping, OctantTopology, Sector, WrappingNumbers};
use crate::maps::{Piece, SampledMap};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Image chords longer than this (on the unit sphere) trigger refinement.
pub const MAX_CHORD: f64 = 0.35;
/// Targets closer than this to an image-edge great circle are low confidence.
pub const CONFIDENCE_TOL: f64 = 1e-10;
const MAX_REFINE: usize = 24;
const MAX_NODES: usize = 4_000_000;
const RETRIES: usize = 5;
const CHUNK: usize = 4096;

type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dist(a: Vec3, b: Vec3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn normalize(a: Vec3) -> Vec3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// The triangulated image of one piece: a conforming triangulation of the
/// piece's domain with each node's image on the unit sphere.
pub struct ImageMesh {
    pub weight: i32,
    points: Vec<Complex64>,
    nodes: Vec<Vec3>,
    /// Counterclockwise in the domain coordinate.
    triangles: Vec<[usize; 3]>,
}

impl ImageMesh {
    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn triangle(&self, t: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }
}

/// Polar base triangulation on the quadrature grid's rings and angles.
fn base_mesh(map: &dyn SampledMap, piece: &Piece, grid: &QuadratureGrid) -> ImageMesh {
    let radii = grid.radial_nodes(piece, &grid.segment_cells(piece));
    let nphi = grid.angular_cells(piece);
    let full_turn = piece.full_turn();
    let span = QuadratureGrid::span(piece);
    let cols = if full_turn { nphi } else { nphi + 1 };
    let mut points = vec![Complex64::new(0.0, 0.0)];
    for &r in &radii[1..] {
        points.extend((0..cols).map(|j| Complex64::from_polar(r, span * j as f64 / nphi as f64)));
    }
    let index = |i: usize, j: usize| if i == 0 { 0 } else { 1 + (i - 1) * cols + j % cols };
    let mut triangles = Vec::new();
    for i in 0..radii.len() - 1 {
        for j in 0..nphi {
            triangles.push([index(i, j), index(i + 1, j), index(i + 1, j + 1)]);
            if i > 0 {
                triangles.push([index(i, j), index(i + 1, j + 1), index(i, j + 1)]);
            }
        }
    }
    let nodes = points.par_iter().map(|&u| map.eval_piece(piece, u).to_sphere()).collect();
    ImageMesh { weight: piece.weight, points, nodes, triangles }
}

/// Domain midpoint of an edge; edges on the outer circle stay on it.
fn edge_midpoint(a: Complex64, b: Complex64, outer: f64) -> Complex64 {
    let on = |z: Complex64| (z.norm() - outer).abs() <= 1e-12 * outer;
    if on(a) && on(b) {
        let mut d = b.arg() - a.arg();
        if d > PI {
            d -= 2.0 * PI;
        } else if d < -PI {
            d += 2.0 * PI;
        }
        Complex64::from_polar(outer, a.arg() + 0.5 * d)
    } else {
        0.5 * (a + b)
    }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Mesh of a piece, splitting every edge whose image chord exceeds
/// MAX_CHORD (red/green patterns keep the triangulation conforming) until
/// none remain or the size cap is hit.
pub fn image_mesh(map: &dyn SampledMap, piece: &Piece, grid: &QuadratureGrid) -> ImageMesh {
    let mut mesh = base_mesh(map, piece, grid);
    for _ in 0..MAX_REFINE {
        let mut marked: Vec<(usize, usize)> = Vec::new();
        for t in &mesh.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if dist(mesh.nodes[a], mesh.nodes[b]) > MAX_CHORD {
                    marked.push(edge_key(a, b));
                }
            }
        }
        if marked.is_empty() {
            break;
        }
        marked.sort_unstable();
        marked.dedup();
        if mesh.nodes.len() + marked.len() > MAX_NODES {
            break;
        }
        let first = mesh.points.len();
        let new_points: Vec<Complex64> = marked
            .iter()
            .map(|&(a, b)| edge_midpoint(mesh.points[a], mesh.points[b], piece.radius))
            .collect();
        let new_nodes: Vec<Vec3> = new_points.par_iter().map(|&u| map.eval_piece(piece, u).to_sphere()).collect();
        mesh.points.extend(new_points);
        mesh.nodes.extend(new_nodes);
        let mid = |a: usize, b: usize| marked.binary_search(&edge_key(a, b)).ok().map(|i| first + i);
        let mut next = Vec::with_capacity(mesh.triangles.len() + 3 * marked.len());
        for &[a, b, c] in &mesh.triangles {
            let m = [mid(a, b), mid(b, c), mid(c, a)];
            match m {
                [None, None, None] => next.push([a, b, c]),
                [Some(x), Some(y), Some(z)] => {
                    next.extend([[a, x, z], [x, b, y], [z, y, c], [x, y, z]]);
                }
                _ => {
                    // Rotate so the marked edges come first: (p,q) then (q,r).
                    let v = [a, b, c];
                    let k = (0..3)
                        .find(|&k| m[k].is_some() && (m[(k + 1) % 3].is_some() || m[(k + 2) % 3].is_none()))
                        .expect("one marked edge");
                    let (p, q, r) = (v[k], v[(k + 1) % 3], v[(k + 2) % 3]);
                    let x = m[k].expect("marked");
                    match m[(k + 1) % 3] {
                        Some(y) => next.extend([[p, x, r], [x, q, y], [x, y, r]]),
                        None => next.extend([[p, x, r], [x, q, r]]),
                    }
                }
            }
        }
        mesh.triangles = next;
    }
    mesh
}

/// Per-sector degree counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorDegree {
    pub sector: Sector,
    /// Signed degree d.
    pub d: i64,
    /// Unsigned preimage count D.
    #[serde(rename = "D")]
    pub count: i64,
    pub sample: [f64; 3],
    /// Smallest great-circle distance from the sample to a nearby image edge,
    /// π when no edge is near.
    pub margin: f64,
    pub confident: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub sectors: Vec<SectorDegree>,
}

impl DegreeReport {
    pub fn get(&self, s: Sector) -> &SectorDegree {
        &self.sectors[s.index()]
    }

    /// w_σ = −d at the sector samples.
    pub fn wrapping(&self) -> WrappingNumbers {
        WrappingNumbers::from_fn(|s| -self.get(s).d)
    }

    pub fn topology(&self) -> Result<OctantTopology> {
        invariants_from_wrapping(&self.wrapping())
    }

    pub fn all_confident(&self) -> bool {
        self.sectors.iter().all(|s| s.confident)
    }

    pub fn total_count(&self) -> i64 {
        self.sectors.iter().map(|s| s.count).sum()
    }
}

#[derive(Debug, Clone, Copy)]
struct Tally {
    d: i64,
    count: i64,
    margin: f64,
}

fn tally(meshes: &[ImageMesh], xi: Vec3) -> Tally {
    let near = 1e-6;
    let per: Vec<Tally> = meshes
        .iter()
        .flat_map(|m| (0..m.triangles.len()).step_by(CHUNK).map(move |i| (m, i)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(m, i)| {
            let mut t = Tally { d: 0, count: 0, margin: f64::INFINITY };
            for [a, b, c] in (i..(i + CHUNK).min(m.triangles.len())).map(|t| m.triangle(t)) {
                if dot(xi, a) + dot(xi, b) + dot(xi, c) <= 0.0 {
                    continue;
                }
                let normals = [cross(b, c), cross(c, a), cross(a, b)];
                let mut s = [0.0; 3];
                let mut degenerate = false;
                for k in 0..3 {
                    let n = dot(normals[k], normals[k]).sqrt();
                    if n == 0.0 {
                        degenerate = true;
                        break;
                    }
                    s[k] = dot(xi, normals[k]) / n;
                }
                if degenerate {
                    continue;
                }
                let pos = s.iter().all(|&v| v > 0.0);
                let neg = s.iter().all(|&v| v < 0.0);
                if pos || neg {
                    let sign = if pos { 1 } else { -1 };
                    t.d += m.weight as i64 * sign;
                    t.count += m.weight as i64;
                }
                if s.iter().all(|&v| v > -near) || s.iter().all(|&v| v < near) {
                    let mm = s.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
                    t.margin = t.margin.min(mm);
                }
            }
            t
        })
        .collect();
    per.into_iter().fold(Tally { d: 0, count: 0, margin: f64::INFINITY }, |a, b| Tally {
        d: a.d + b.d,
        count: a.count + b.count,
        margin: a.margin.min(b.margin),
    })
}

pub fn meshes(map: &dyn SampledMap, grid: &QuadratureGrid) -> Vec<ImageMesh> {
    map.pieces().iter().map(|p| image_mesh(map, p, grid)).collect()
}

/// Fixed perturbation directions for retries.
fn perturbation(attempt: usize) -> Vec3 {
    let dirs = [[0.31, -0.62, 0.72], [-0.55, 0.21, 0.81], [0.67, 0.58, -0.46], [-0.12, -0.84, 0.53], [0.77, -0.2, -0.6]];
    dirs[attempt % dirs.len()]
}

/// Degree counts at the sector centroids, perturbing a sample and retrying
/// when it lies too close to an image edge.
pub fn degree_count_meshes(meshes: &[ImageMesh]) -> DegreeReport {
    let sectors = Sector::ALL
        .iter()
        .map(|&s| {
            let centroid = s.centroid();
            let mut xi = centroid;
            let mut t = tally(meshes, xi);
            let mut attempt = 0;
            while t.margin <= CONFIDENCE_TOL && attempt < RETRIES {
                let p = perturbation(attempt);
                let delta = 1e-3 * (attempt + 1) as f64;
                xi = normalize([centroid[0] + delta * p[0], centroid[1] + delta * p[1], centroid[2] + delta * p[2]]);
                t = tally(meshes, xi);
                attempt += 1;
            }
            SectorDegree {
                sector: s,
                d: t.d,
                count: t.count,
                sample: xi,
                margin: t.margin.min(std::f64::consts::PI),
                confident: t.margin > CONFIDENCE_TOL,
            }
        })
        .collect();
    DegreeReport { sectors }
}

pub fn degree_count(map: &dyn SampledMap, grid: &QuadratureGrid) -> DegreeReport {
    degree_count_meshes(&meshes(map, grid))
}

/// Signed spherical area of (a, b, c): 2 atan2(a·(b×c), 1 + a·b + b·c + c·a).
pub fn spherical_triangle_area(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let num = dot(a, cross(b, c));
    let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * num.atan2(den)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrappedArea {
    /// Ω in radians.
    pub omega: f64,
    /// Nearest integer multiple of π/2.
    pub omega_units: i64,
    pub residual: f64,
}

pub fn trapped_area_meshes(meshes: &[ImageMesh]) -> TrappedArea {
    let parts: Vec<f64> = meshes
        .iter()
        .flat_map(|m| (0..m.triangles.len()).step_by(CHUNK).map(move |i| (m, i)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(m, i)| {
            let chunk = (i..(i + CHUNK).min(m.triangles.len())).map(|t| {
                let [a, b, c] = m.triangle(t);
                spherical_triangle_area(a, b, c)
            });
            m.weight as f64 * compensated_sum(chunk)
        })
        .collect();
    let omega = -compensated_sum(parts);
    let units = (omega / (PI / 2.0)).round() as i64;
    TrappedArea { omega, omega_units: units, residual: omega - units as f64 * PI / 2.0 }
}

/// Ω = −(signed area of the image of Q).
pub fn trapped_area(map: &dyn SampledMap, grid: &QuadratureGrid) -> TrappedArea {
    trapped_area_meshes(&meshes(map, grid))
}

/// π Σ_σ D_σ; requires consistent counts.
pub fn lemma1_lower_bound(report: &DegreeReport) -> Result<f64> {
    for s in &report.sectors {
        if s.d.abs() > s.count || (s.count - s.d).rem_euclid(2) != 0 {
            return Err(Error::Consistency(format!(
                "sector {}: d = {} and D = {} violate |d| ≤ D, d ≡ D mod 2",
                s.sector, s.d, s.count
            )));
        }
    }
    Ok(PI * report.total_count() as f64)
}
