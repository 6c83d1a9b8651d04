//! Concrete families: braid composition algebras, truncated polynomial
//! algebras and root-of-unity eigenspaces.

mod braid;
mod eigen;
mod poly;

pub use braid::{braid_algebra, braid_hom_algebra, braid_twist, braid_twisted_product_only, BraidSpec};
pub use eigen::{eigenspace, eigenspace_algebra, Eigenspace};
pub use poly::{Monomial, PolySpec, PolyVariant, TruncPolyAlgebra};

use crate::error::Result;
use crate::exactlin::FieldSpec;
use crate::homalg::HomAlgebra;

/// Two strands `V_1 = Q`, `V_2 = Q^2` with seeded invertible `γ`s; the
/// ternary algebra has dimension 4.
pub fn bundled_braid_ternary() -> Result<BraidSpec> {
    BraidSpec::new(FieldSpec::Rationals, vec![1, 2])?.with_random_gammas(1)
}

/// Three strands `(1, 2, 1)` over `Q` with seeded `γ`s; quaternary, dimension 5.
pub fn bundled_braid_quaternary() -> Result<BraidSpec> {
    BraidSpec::new(FieldSpec::Rationals, vec![1, 2, 1])?.with_random_gammas(2)
}

/// Small multiplicative totally Hom-associative algebras with equal twists,
/// by name.
pub fn bundled() -> Result<Vec<(&'static str, HomAlgebra)>> {
    let poly = PolySpec::new(FieldSpec::Rationals, 2, 5, vec![3, 1], true)?;
    Ok(vec![
        ("braid-ternary", braid_hom_algebra(&bundled_braid_ternary()?)?),
        ("braid-quaternary", braid_hom_algebra(&bundled_braid_quaternary()?)?),
        ("eigenspace-7-3-13-4", eigenspace_algebra(7, 3, 13, 4)?),
        ("eigenspace-7-3-13-1", eigenspace_algebra(7, 3, 13, 1)?),
        ("polytrunc-2-2-5", TruncPolyAlgebra::new(poly, PolyVariant::Twisted).to_finite(64)?),
    ])
}
