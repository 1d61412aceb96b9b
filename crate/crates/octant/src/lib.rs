//! Tangent unit-vector fields on the spherical octant.
//!
//! The crate covers four layers:
//!
//! * [`free_group`]: words, free reduction, the spelling length λ with
//!   optimal pairings, and bounded minimisation over conjugacy-class products.
//! * [`homotopy`]: the invariant algebra of homotopy classes (edge signs,
//!   kink numbers, trapped area, wrapping numbers), classification, Δ(H) and
//!   the infimum energy.
//! * [`maps`]: explicit representatives in the stereographic model: rational
//!   maps, quarter-sphere stacks, Möbius relocation and the patchwork.
//! * [`numerics`]: Dirichlet energy quadrature, degree counting by image
//!   triangulation, trapped area and boundary residuals.

pub mod error;
pub mod free_group;
pub mod homotopy;
pub mod maps;
pub mod numerics;
pub mod cli;
pub mod report;

pub use error::{Error, Result};
