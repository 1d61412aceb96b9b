//! Explicit representatives in the stereographic model.
//!
//! A tangent field ν on the octant is represented by K = P ∘ ν ∘ P⁻¹ on the
//! closed quarter disc Q = {|w| ≤ 1, 0 ≤ arg w ≤ π/2}. Tangency becomes: K real
//! on [0,1], imaginary on [0,i], unimodular on the arc.

pub mod complex;
pub mod condition;
pub mod patchwork;
pub mod rational;
pub mod sampled;
pub mod stack;

pub use complex::{
    gamma, gamma_inv, mobius_relocate, mobius_relocate_inv, stereographic, stereographic_inverse, Axis,
    ExtComplex,
};
pub use patchwork::{
    assemble_patchwork, normalize, reflect_class, reflect_value, select_case, verify_spec, CaseId, Patchwork,
    PatchworkSpec, SpecCheck,
};
pub use rational::{realize_class, reflect_y, Orientation, RationalMapSpec};
pub use sampled::{ChartEdge, EdgeCondition, FnMap, Frame, Piece, SampledMap, StackMap, Subdomain};
pub use stack::{blend, stack_degree_table, LayerKind, QuarterSphereStack, StackRegion, StackVariant};

use crate::error::Result;
use crate::homotopy::{classify, Kind, OctantTopology};

/// A constructed representative of a class.
pub enum Representative {
    Rational(RationalMapSpec),
    Patchwork(Patchwork),
}

/// Rational map for (anti)conformal classes, patchwork otherwise.
pub fn construct(t: &OctantTopology, epsilon: f64) -> Result<Representative> {
    let w = t.wrapping()?;
    if classify(&w, t).kind == Kind::Nonconformal {
        let spec = select_case(t, epsilon)?;
        return Ok(Representative::Patchwork(assemble_patchwork(&spec)?));
    }
    Ok(Representative::Rational(realize_class(t)?))
}

impl Representative {
    pub fn as_sampled(&self) -> &dyn SampledMap {
        match self {
            Representative::Rational(spec) => spec,
            Representative::Patchwork(p) => p,
        }
    }
}
