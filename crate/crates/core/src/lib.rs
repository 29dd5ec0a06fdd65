//! Finite-scale selection theory for spaces with a binary normal subbase.
//!
//! The codomain `X` is a finite discrete space `{0..n-1}` carrying a
//! combinatorial subbase; domains are arbitrary finite topological spaces.
//! Modules:
//!
//! - [`setfam`]: subset masks, set families and the subbase axioms
//! - [`convexity`]: the hull operator, convex sets and the nearest-point map
//! - [`finitespace`]: finite spaces and (set-valued) continuity predicates
//! - [`superext`]: maximal linked systems and the superextension
//! - [`selection`]: the selection algorithm with soft and invertible map checks
//! - [`corpus`]: fixture subbases and finite-domain generators

pub mod convexity;
pub mod corpus;
pub mod error;
pub mod finitespace;
pub mod selection;
pub mod setfam;
pub mod superext;

pub use error::{Error, Result};
pub use finitespace::{Codomain, FiniteSpace, PointMap, SetValuedMap};
pub use setfam::{GroundSet, SetFamily, Strictness, Subbase, SubsetMask, Verdict, Witness};
pub use superext::{Mls, Superextension};
