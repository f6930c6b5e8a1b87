//! Exact computations on the canonical blow-up of a Grassmannian along its
//! boundary strata: Plücker combinatorics, the divisor lattice, restricted
//! classes and their linear identities, cone certificates and chart atlases.

pub mod atlas;
pub mod cone;
pub mod error;
pub mod fixtures;
pub mod grassmann;
pub mod identities;
pub mod lattice;
pub mod matrix;
pub mod rational;
pub mod restriction;
pub mod simplex;

pub use error::{Error, Result};
pub use grassmann::{IndexTuple, Params, SignConvention};
pub use matrix::ExactMatrix;
pub use rational::Q;
pub use restriction::{RestrictedClass, Side};
