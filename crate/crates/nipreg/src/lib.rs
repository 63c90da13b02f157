//! Exact combinatorics of subsets of finite groups: VC-dimension and
//! stability of translate set systems, Bohr neighborhoods and approximate
//! homomorphisms, and structure-and-regularity decompositions, all in
//! arbitrary-precision rational arithmetic.

// Error carries exact rationals for diagnostics; callers are not on hot
// paths, so the large Err variant is deliberate.
#![allow(clippy::result_large_err)]

pub mod abelian;
pub mod bohr;
pub mod cayley;
pub mod error;
pub mod generate;
pub mod group;
pub mod mask;
pub mod rat;
pub mod regularity;
pub mod report;
pub mod subgroup;
pub mod torus;
pub mod vc;

pub use error::{Error, Result};
pub use group::FiniteGroup;
pub use mask::Mask;
pub use rat::Rat;
