//! Exact computation with n-ary Hom-algebras: total Hom-associativity,
//! twists by weak morphisms, arity change, the n-commutator bracket and the
//! Hom-Nambu identity.

pub mod error;
pub mod exactlin;
pub mod homalg;
pub mod arity;
pub mod examples;
pub mod nambu;
pub mod symbolic;

pub use error::{Error, Result};
pub use exactlin::{FieldSpec, LinMap, MultiMap, Scalar, Vector};
