use crate::error::{Error, Result};
use crate::exactlin::{LinMap, Vector};

use super::{
    check_multiplicative, check_weak_morphism, hom_associator, scan, CheckMode, CheckReport, HomAlgebra, Mismatch,
};
use super::assoc::block_term;

fn check_square(alg: &HomAlgebra, beta: &LinMap) -> Result<()> {
    if beta.field() != alg.field() {
        return Err(Error::FieldMismatch { expected: alg.field(), found: beta.field() });
    }
    if beta.rows() != alg.dim() || beta.cols() != alg.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), found: beta.rows().max(beta.cols()) });
    }
    Ok(())
}

/// `A_β = (A, βμ, (βα_1, .., βα_{n-1}))` after verifying exhaustively that
/// `β` is a weak morphism of `A`.
pub fn twist_algebra(alg: &HomAlgebra, beta: &LinMap) -> Result<HomAlgebra> {
    check_square(alg, beta)?;
    let report = check_weak_morphism(beta, alg, alg, CheckMode::Exhaustive)?;
    if !report.passed() {
        return Err(Error::CheckFailed(Box::new(report)));
    }
    twist_algebra_unchecked(alg, beta)
}

/// [`twist_algebra`] without the weak-morphism check.
pub fn twist_algebra_unchecked(alg: &HomAlgebra, beta: &LinMap) -> Result<HomAlgebra> {
    check_square(alg, beta)?;
    let product = alg.product().postcompose(beta)?;
    let twists = alg.twists().iter().map(|a| beta.compose(a)).collect::<Result<Vec<_>>>()?;
    HomAlgebra::with_labels(product, twists, alg.labels().to_vec())
}

/// `A_k = (A, α^{2^k - 1} μ, α^{2^k})` for a multiplicative `A`.
pub fn derived_twist_sequence(alg: &HomAlgebra, k: u32) -> Result<HomAlgebra> {
    let report = check_multiplicative(alg, CheckMode::Exhaustive)?;
    if !report.passed() {
        return Err(Error::NotMultiplicative(Box::new(report)));
    }
    if k == 0 {
        return Ok(alg.clone());
    }
    let e = 1u64
        .checked_shl(k)
        .filter(|_| k < 64)
        .ok_or_else(|| Error::InvalidArgument(format!("2^{k} overflows")))?;
    let alpha = &alg.twists()[0];
    let product = alg.product().postcompose(&alpha.pow(e - 1)?)?;
    let twist = alpha.pow(e)?;
    HomAlgebra::with_labels(product, vec![twist; alg.arity() - 1], alg.labels().to_vec())
}

/// `(β²(as^i_A(args)), as^i_{A_β}(args))`. The two agree whenever `β` is a
/// weak morphism of `A`; that is not checked here.
pub fn twist_residual_pair(alg: &HomAlgebra, beta: &LinMap, i: usize, args: &[&Vector]) -> Result<(Vector, Vector)> {
    let twisted = twist_algebra_unchecked(alg, beta)?;
    let lhs = beta.pow(2)?.apply_unchecked(&hom_associator(alg, i, args)?);
    let rhs = hom_associator(&twisted, i, args)?;
    Ok((lhs, rhs))
}

/// Scans basis tuples for `β² as^i_A = as^i_{A_β}`, every `i`.
pub fn check_twist_residuals(alg: &HomAlgebra, beta: &LinMap, mode: CheckMode) -> Result<CheckReport> {
    let twisted = twist_algebra_unchecked(alg, beta)?;
    let beta2 = beta.pow(2)?;
    let n = alg.arity();
    let field = alg.field();
    scan(alg, 2 * n - 1, "twisted associator", mode, |tuple| {
        let basis: Vec<Vector> = tuple.iter().map(|&k| Vector::basis(field, k)).collect();
        let args: Vec<&Vector> = basis.iter().collect();
        let plain: Vec<Vector> = (1..=n).map(|s| block_term(alg, s, &args)).collect();
        let tw: Vec<Vector> = (1..=n).map(|s| block_term(&twisted, s, &args)).collect();
        (1..n).find_map(|i| {
            let lhs = beta2.apply_unchecked(&plain[i - 1].sub(&plain[i]));
            let rhs = tw[i - 1].sub(&tw[i]);
            Mismatch::compare("beta^2 as^i = as^i twisted", Some(i), lhs, rhs)
        })
    })
}
