use crate::error::{Error, Result};
use crate::exactlin::{LinMap, Vector};

use super::{scan, CheckMode, CheckReport, Counterexample, HomAlgebra, Mismatch, NaryHomAlgebra};

/// The `(2n-1)`-ary term with the inner product block starting at position
/// `s` (1-based, `1..=n`):
/// `(α_1(a_1), .., α_{s-1}(a_{s-1}), (a_s..a_{s+n-1}), α_s(a_{s+n}), .., α_{n-1}(a_{2n-1}))`.
///
/// `as^i = block_term(i) - block_term(i + 1)`.
pub fn block_term<A: NaryHomAlgebra + ?Sized>(alg: &A, s: usize, args: &[&Vector<A::Key>]) -> Vector<A::Key> {
    let n = alg.arity();
    debug_assert!((1..=n).contains(&s) && args.len() == 2 * n - 1);
    let inner = alg.mul(&args[s - 1..s - 1 + n]);
    if inner.is_zero() {
        return inner;
    }
    let mut outer: Vec<Vector<A::Key>> = Vec::with_capacity(n);
    for t in 1..s {
        outer.push(alg.twist(t, args[t - 1]));
    }
    outer.push(inner);
    for t in s + n..2 * n {
        outer.push(alg.twist(t - n, args[t - 1]));
    }
    let refs: Vec<&Vector<A::Key>> = outer.iter().collect();
    alg.mul(&refs)
}

/// The `i`-th Hom-associator `as^i_A(a_1, .., a_{2n-1})`, `i` in `1..=n-1`.
pub fn hom_associator<A: NaryHomAlgebra + ?Sized>(alg: &A, i: usize, args: &[&Vector<A::Key>]) -> Result<Vector<A::Key>> {
    let n = alg.arity();
    if !(1..n).contains(&i) {
        return Err(Error::IndexOutOfRange { index: i, max: n - 1 });
    }
    if args.len() != 2 * n - 1 {
        return Err(Error::ArityMismatch { expected: 2 * n - 1, found: args.len() });
    }
    for a in args {
        alg.check_element(a)?;
    }
    Ok(block_term(alg, i, args).sub(&block_term(alg, i + 1, args)))
}

pub(crate) const TOTAL_HOM_ASSOC: &str = "total Hom-associativity";

/// Verifies `as^i_A = 0` for every `i` on basis `(2n-1)`-tuples.
pub fn check_total_hom_associativity<A: NaryHomAlgebra + ?Sized>(
    alg: &A,
    mode: CheckMode,
) -> Result<CheckReport<A::Key>> {
    let n = alg.arity();
    let field = alg.field();
    scan(alg, 2 * n - 1, TOTAL_HOM_ASSOC, mode, |tuple| {
        let basis: Vec<Vector<A::Key>> = tuple.iter().map(|k| Vector::basis(field, k.clone())).collect();
        let args: Vec<&Vector<A::Key>> = basis.iter().collect();
        let mut prev = block_term(alg, 1, &args);
        for i in 1..n {
            let next = block_term(alg, i + 1, &args);
            if prev != next {
                return Some(Mismatch { identity: "as^i".into(), index: Some(i), lhs: prev, rhs: next });
            }
            prev = next;
        }
        None
    })
}

pub(crate) const MULTIPLICATIVE: &str = "multiplicativity";

/// Equal twists, then `α(μ(e_{i_1}, ..)) = μ(α e_{i_1}, ..)` on basis tuples.
/// Unequal twists fail without a scan; the counterexample is the first basis
/// element on which some `α_i` differs from `α_1`.
pub fn check_multiplicative<A: NaryHomAlgebra + ?Sized>(alg: &A, mode: CheckMode) -> Result<CheckReport<A::Key>> {
    let field = alg.field();
    if let Some((i, key)) = alg.twist_mismatch() {
        let e = Vector::basis(field, key.clone());
        let c = Counterexample {
            identity: "equal twists".into(),
            index: Some(i),
            tuple: vec![key],
            lhs: alg.twist(1, &e),
            rhs: alg.twist(i, &e),
        };
        return Ok(CheckReport::fail(MULTIPLICATIVE, mode, 0, c));
    }
    let n = alg.arity();
    scan(alg, n, MULTIPLICATIVE, mode, |tuple| {
        let basis: Vec<Vector<A::Key>> = tuple.iter().map(|k| Vector::basis(field, k.clone())).collect();
        let refs: Vec<&Vector<A::Key>> = basis.iter().collect();
        let lhs = alg.twist(1, &alg.mul(&refs));
        let twisted: Vec<Vector<A::Key>> = basis.iter().map(|e| alg.twist(1, e)).collect();
        let trefs: Vec<&Vector<A::Key>> = twisted.iter().collect();
        Mismatch::compare("alpha mu = mu alpha", None, lhs, alg.mul(&trefs))
    })
}

fn check_map_shape(f: &LinMap, a: &HomAlgebra, b: &HomAlgebra) -> Result<()> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch { expected: a.arity(), found: b.arity() });
    }
    for field in [a.field(), b.field()] {
        if f.field() != field {
            return Err(Error::FieldMismatch { expected: field, found: f.field() });
        }
    }
    if f.cols() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: f.cols() });
    }
    if f.rows() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: f.rows() });
    }
    Ok(())
}

pub(crate) const WEAK_MORPHISM: &str = "weak morphism";

/// `f ∘ μ_A = μ_B ∘ f^{⊗n}` on basis tuples of `A`.
pub fn check_weak_morphism(f: &LinMap, a: &HomAlgebra, b: &HomAlgebra, mode: CheckMode) -> Result<CheckReport> {
    check_map_shape(f, a, b)?;
    let field = a.field();
    scan(a, a.arity(), WEAK_MORPHISM, mode, |tuple| {
        let basis: Vec<Vector> = tuple.iter().map(|&k| Vector::basis(field, k)).collect();
        let refs: Vec<&Vector> = basis.iter().collect();
        let lhs = f.apply_unchecked(&a.mul(&refs));
        let images: Vec<Vector> = basis.iter().map(|e| f.apply_unchecked(e)).collect();
        let irefs: Vec<&Vector> = images.iter().collect();
        Mismatch::compare("f mu = mu f", None, lhs, b.mul(&irefs))
    })
}

/// Weak morphism plus `f ∘ α_i^A = α_i^B ∘ f` for every `i`.
pub fn check_morphism(f: &LinMap, a: &HomAlgebra, b: &HomAlgebra, mode: CheckMode) -> Result<CheckReport> {
    let weak = check_weak_morphism(f, a, b, mode)?;
    let mut report = weak.then(|| {
        for i in 1..a.arity() {
            for j in 0..a.dim() {
                let e = a.basis(j);
                let lhs = f.apply_unchecked(&a.twist(i, &e));
                let rhs = b.twist(i, &f.apply_unchecked(&e));
                if lhs != rhs {
                    let c = Counterexample { identity: "f alpha_i = alpha_i f".into(), index: Some(i), tuple: vec![j], lhs, rhs };
                    return Ok(CheckReport::fail("morphism", mode, 0, c));
                }
            }
        }
        Ok(CheckReport::pass("morphism", mode, 0))
    })?;
    report.identity = "morphism".into();
    Ok(report)
}
