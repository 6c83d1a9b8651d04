//! Exact scalars, sparse vectors, dense linear maps and sparse multilinear maps.

mod linmap;
mod multimap;
mod scalar;
mod vector;

pub use linmap::LinMap;
pub use multimap::MultiMap;
#[cfg(test)]
pub(crate) use multimap::advance;
pub(crate) use multimap::is_permutation;
pub use scalar::{is_prime, primitive_root_of_unity, FieldSpec, Scalar};
pub use vector::Vector;
