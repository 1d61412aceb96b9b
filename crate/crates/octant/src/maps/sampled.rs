use super::complex::{mobius_relocate, Axis, ExtComplex};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Subdomain label of a point of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Subdomain {
    Bulk,
    Annulus { axis: Axis, layer: u32 },
    Interp { axis: Axis, layer: u32 },
    Switch { axis: Axis },
    Bubble,
}

impl fmt::Display for Subdomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subdomain::Bulk => write!(f, "bulk"),
            Subdomain::Annulus { axis, layer } => write!(f, "annulus({},{layer})", axis.name()),
            Subdomain::Interp { axis, layer } => write!(f, "interp({},{layer})", axis.name()),
            Subdomain::Switch { axis } => write!(f, "switch({})", axis.name()),
            Subdomain::Bubble => write!(f, "bubble"),
        }
    }
}

/// Coordinate chart of a piece: a vertex chart w = γ_j(u) over the quarter
/// disc |u| ≤ radius, or a full disc w = center + u.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Frame {
    Vertex(Axis),
    Disc { center: Complex64 },
}

/// Which edge condition a chart edge must satisfy in the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeCondition {
    Real,
    Imaginary,
    UnitCircle,
}

/// Chart edge: u real, u imaginary, or |u| = radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartEdge {
    RealAxis,
    ImaginaryAxis,
    Arc,
}

/// A chart region with a signed weight; a map's integrals are the weighted
/// sums over its pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub id: usize,
    pub frame: Frame,
    pub radius: f64,
    pub weight: i32,
    /// Interior radii where the map formula changes.
    pub seams: Vec<f64>,
    /// Edges lying on ∂Q, with the condition they map to.
    pub edges: Vec<(ChartEdge, EdgeCondition)>,
    /// Angular resolution multiplier.
    pub resolution: f64,
    pub label: String,
}

impl Piece {
    /// The whole of Q in its own coordinate.
    pub fn whole() -> Self {
        Piece {
            id: 0,
            frame: Frame::Vertex(Axis::Z),
            radius: 1.0,
            weight: 1,
            seams: vec![],
            edges: vec![
                (ChartEdge::RealAxis, EdgeCondition::Real),
                (ChartEdge::ImaginaryAxis, EdgeCondition::Imaginary),
                (ChartEdge::Arc, EdgeCondition::UnitCircle),
            ],
            resolution: 2.0,
            label: "bulk".into(),
        }
    }

    /// Quarter disc |u| ≤ radius at the vertex of `axis`.
    pub fn vertex(id: usize, axis: Axis, radius: f64, weight: i32, seams: Vec<f64>, label: &str) -> Self {
        let edges = match axis {
            Axis::Z => vec![
                (ChartEdge::RealAxis, EdgeCondition::Real),
                (ChartEdge::ImaginaryAxis, EdgeCondition::Imaginary),
            ],
            Axis::X => vec![
                (ChartEdge::RealAxis, EdgeCondition::UnitCircle),
                (ChartEdge::ImaginaryAxis, EdgeCondition::Real),
            ],
            Axis::Y => vec![
                (ChartEdge::RealAxis, EdgeCondition::Imaginary),
                (ChartEdge::ImaginaryAxis, EdgeCondition::UnitCircle),
            ],
        };
        Piece {
            id,
            frame: Frame::Vertex(axis),
            radius,
            weight,
            seams,
            edges,
            resolution: 1.0,
            label: label.into(),
        }
    }

    pub fn disc(id: usize, center: Complex64, radius: f64, weight: i32, seams: Vec<f64>, label: &str) -> Self {
        Piece {
            id,
            frame: Frame::Disc { center },
            radius,
            weight,
            seams,
            edges: vec![],
            resolution: 1.0,
            label: label.into(),
        }
    }

    pub fn full_turn(&self) -> bool {
        matches!(self.frame, Frame::Disc { .. })
    }

    /// The point of Q with chart coordinate u.
    pub fn point(&self, u: Complex64) -> ExtComplex {
        match self.frame {
            Frame::Vertex(axis) => mobius_relocate(axis, ExtComplex::from(u)),
            Frame::Disc { center } => ExtComplex::from(center + u),
        }
    }

    /// Chart coordinate of a sample along an edge, `t` ∈ [0, 1].
    pub fn edge_point(&self, edge: ChartEdge, t: f64) -> Complex64 {
        match edge {
            ChartEdge::RealAxis => Complex64::new(t * self.radius, 0.0),
            ChartEdge::ImaginaryAxis => Complex64::new(0.0, t * self.radius),
            ChartEdge::Arc => Complex64::from_polar(self.radius, t * std::f64::consts::FRAC_PI_2),
        }
    }
}

/// A map Q → ℂ* that numerics can sample.
pub trait SampledMap: Sync {
    fn eval(&self, w: ExtComplex) -> ExtComplex;

    fn tag(&self, _w: ExtComplex) -> Subdomain {
        Subdomain::Bulk
    }

    fn pieces(&self) -> Vec<Piece> {
        vec![Piece::whole()]
    }

    /// Value at chart coordinate `u` of `piece`.
    fn eval_piece(&self, piece: &Piece, u: Complex64) -> ExtComplex {
        self.eval(piece.point(u))
    }

    /// Pairs of one-sided values at seam points; continuity means they agree.
    fn seam_samples(&self, _per_seam: usize) -> Vec<(ExtComplex, ExtComplex)> {
        vec![]
    }
}

/// A closure as a single-piece map.
pub struct FnMap<F> {
    f: F,
}

impl<F: Fn(ExtComplex) -> ExtComplex + Sync> FnMap<F> {
    pub fn new(f: F) -> Self {
        FnMap { f }
    }
}

impl<F: Fn(ExtComplex) -> ExtComplex + Sync> SampledMap for FnMap<F> {
    fn eval(&self, w: ExtComplex) -> ExtComplex {
        (self.f)(w)
    }
}

impl SampledMap for super::rational::RationalMapSpec {
    fn eval(&self, w: ExtComplex) -> ExtComplex {
        super::rational::RationalMapSpec::eval(self, w)
    }
}

/// One stack on its own: Γ on |u| ≤ radius in the z-frame chart, or
/// relocated to another vertex chart (values rotated into the target frame).
pub struct StackMap {
    pub stack: super::stack::QuarterSphereStack,
    pub axis: Axis,
    pub radius: f64,
}

impl SampledMap for StackMap {
    fn eval(&self, w: ExtComplex) -> ExtComplex {
        let u = super::complex::mobius_relocate_inv(self.axis, w);
        match u.finite() {
            Some(u) => mobius_relocate(self.axis, self.stack.eval(u)),
            None => ExtComplex::Infinity,
        }
    }

    fn pieces(&self) -> Vec<Piece> {
        let mut p = Piece::vertex(0, self.axis, self.radius, 1, self.stack.seams(), "stack");
        p.seams.retain(|&r| r < self.radius);
        vec![p]
    }

    fn eval_piece(&self, _piece: &Piece, u: Complex64) -> ExtComplex {
        mobius_relocate(self.axis, self.stack.eval(u))
    }
}
