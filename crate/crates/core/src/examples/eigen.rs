use crate::error::{Error, Result};
use crate::exactlin::{primitive_root_of_unity, FieldSpec, LinMap, MultiMap, Vector};
use crate::homalg::{twist_algebra, HomAlgebra};

/// The `ζ`-eigenspace of `f(X) = ζX` on `X·F_p[X]` truncated above degree
/// `D`, with its `(n+1)`-ary product and the twist `α(X^k) = X^{mk}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenspace {
    /// Exponents `k` of the basis `X^k`, increasing.
    pub exponents: Vec<usize>,
    pub zeta: crate::Scalar,
    /// `(A(f,ζ), μ, Id)`.
    pub associative: HomAlgebra,
    /// `α` restricted to the eigenspace.
    pub alpha: LinMap,
}

/// Builds the eigenspace and its associative structure. The basis is found
/// by testing `f(X^k) = ζ^k X^k` against `ζ X^k` for every `1 <= k <= D`,
/// and `f α = α f` is confirmed on the whole truncated algebra.
pub fn eigenspace(p: u64, n: usize, degree_cap: usize, m: u64) -> Result<Eigenspace> {
    let field = FieldSpec::prime(p)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
    }
    if m == 0 || m % n as u64 != 1 {
        return Err(Error::BadExponent(m));
    }
    let zeta = primitive_root_of_unity(p, n as u64)?;
    let f_eigen = |k: usize| zeta.pow(k as u64);
    // f α (X^k) = ζ^{mk} X^{mk}, α f (X^k) = ζ^k X^{mk}
    for k in 1..=degree_cap {
        let mk = m as usize * k;
        if mk <= degree_cap && f_eigen(mk) != f_eigen(k) {
            return Err(Error::InvalidArgument(format!("alpha does not commute with f at X^{k}")));
        }
    }
    let exponents: Vec<usize> = (1..=degree_cap).filter(|&k| f_eigen(k) == zeta).collect();
    let index = |k: usize| exponents.binary_search(&k).ok();
    let dim = exponents.len();
    let arity = n + 1;
    let product = MultiMap::from_fn(field, arity, dim, |ins| {
        let total: usize = ins.iter().map(|&i| exponents[i]).sum();
        match (total <= degree_cap).then(|| index(total)).flatten() {
            Some(j) => Vector::basis(field, j),
            None => Vector::zero(field),
        }
    });
    let columns: Vec<Vector> = exponents
        .iter()
        .map(|&k| {
            let mk = m as usize * k;
            match (mk <= degree_cap).then(|| index(mk)).flatten() {
                Some(j) => Vector::basis(field, j),
                None => Vector::zero(field),
            }
        })
        .collect();
    let alpha = LinMap::from_columns(field, dim, &columns)?;
    let labels = exponents.iter().map(|k| if *k == 1 { "X".to_string() } else { format!("X^{k}") }).collect();
    let id = LinMap::identity(field, dim);
    let associative = HomAlgebra::with_labels(product, vec![id; n], labels)?;
    Ok(Eigenspace { exponents, zeta, associative, alpha })
}

/// `A(f,ζ)_α = (A(f,ζ), αμ, α)` over `F_p`, `(n+1)`-ary. With `m = 1` this
/// is the totally associative eigenspace algebra itself.
pub fn eigenspace_algebra(p: u64, n: usize, degree_cap: usize, m: u64) -> Result<HomAlgebra> {
    let e = eigenspace(p, n, degree_cap, m)?;
    twist_algebra(&e.associative, &e.alpha)
}
