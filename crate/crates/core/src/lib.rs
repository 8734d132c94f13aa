//! Exact computations in the Hecke algebra of a Coxeter system and its
//! spherical module `M(J)`, together with the coset-stroll combinatorics and
//! spherical light-leaf constructions built on top of them.

mod combination;
pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod lightleaf;
pub mod spherical;
pub mod strolls;
pub mod verify;

pub use coxeter::{
    BraidApp, CoxeterMatrix, CoxeterSystem, Element, Expression, GenSet, Normalized, ParabolicData,
    RexMove,
};
pub use error::{Error, Result};
pub use hecke::{Hecke, HeckeElt};
pub use laurent::LaurentPoly;
pub use spherical::{SphericalElt, SphericalModule};
