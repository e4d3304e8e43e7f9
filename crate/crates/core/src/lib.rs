//! Numerical laboratory for compact projective planes built over R, C, H and O.
//!
//! The crate provides the coordinate algebras and their (anti)automorphisms,
//! a catalog of ternary fields, planes with incidence/join/meet, polarities
//! with their unitals, collineation families, and sampling-based axiom and
//! configuration checks.

pub mod algebra;
pub mod collineation;
pub mod error;
pub mod export;
pub mod facts;
pub mod morphism;
pub mod numeric;
pub mod plane;
pub mod polarity;
pub mod radial;
pub mod render;
pub mod sampling;
pub mod structures;
pub mod verify;

pub use algebra::{Algebra, AlgebraElement};
pub use collineation::Collineation;
pub use error::{Error, Result};
pub use morphism::{Morphism, Variance};
pub use structures::CoordinateStructure;
pub use plane::{PlaneModel, ProjectiveLine, ProjectivePoint};
pub use polarity::Polarity;
