//! Arity change: derived `(2n-1)`-ary and `(2^k(n-1)+1)`-ary algebras, and
//! reduction to lower arity through distinguished elements.

use crate::error::{Error, Result};
use crate::exactlin::{LinMap, MultiMap, Vector};
use crate::homalg::{check_multiplicative, scan, CheckMode, CheckReport, Counterexample, HomAlgebra, Mismatch};

fn require_multiplicative(alg: &HomAlgebra) -> Result<()> {
    let report = check_multiplicative(alg, CheckMode::Exhaustive)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Error::NotMultiplicative(Box::new(report)))
    }
}

/// `(x_1..x_N, y_1..y_{N-1}) -> inner(outer(x), β y_1, .., β y_{N-1})` where
/// `N` is the arity of `mu`.
fn expand_step(mu: &MultiMap, beta: &LinMap) -> Result<MultiMap> {
    let mut outer = mu.clone();
    for slot in 1..mu.arity() {
        outer = outer.precompose_slot(slot, beta)?;
    }
    outer.compose_into_slot(0, mu)
}

/// `A^1 = (A, μ^{(1)}, α²)` with
/// `μ^{(1)}(a_1..a_{2n-1}) = μ(μ(a_1..a_n), α(a_{n+1}), .., α(a_{2n-1}))`.
/// Requires `A` multiplicative (checked exhaustively).
pub fn expand_arity(alg: &HomAlgebra) -> Result<HomAlgebra> {
    require_multiplicative(alg)?;
    expand_arity_unchecked(alg)
}

/// [`expand_arity`] without the multiplicativity check; the twists must
/// still be equal.
pub fn expand_arity_unchecked(alg: &HomAlgebra) -> Result<HomAlgebra> {
    let alpha = alg.common_twist().ok_or(Error::UnequalTwists)?;
    let product = expand_step(alg.product(), alpha)?;
    let alpha2 = alpha.pow(2)?;
    HomAlgebra::with_labels(product.clone(), vec![alpha2; product.arity() - 1], alg.labels().to_vec())
}

/// `A^k = (A, μ^{(k)}, α^{2^k})`, arity `2^k(n-1)+1`, built from the
/// recursion `μ^{(k)}(a) = μ^{(k-1)}(μ^{(k-1)}(a_head), α^{2^{k-1}}(a_tail))`
/// with powers of the original `α`.
pub fn expand_arity_k(alg: &HomAlgebra, k: u32) -> Result<HomAlgebra> {
    require_multiplicative(alg)?;
    if k == 0 {
        return Ok(alg.clone());
    }
    if k >= 32 {
        return Err(Error::InvalidArgument(format!("k = {k} is out of range")));
    }
    let alpha = &alg.twists()[0];
    let mut mu = alg.product().clone();
    for j in 1..=k {
        mu = expand_step(&mu, &alpha.pow(1u64 << (j - 1))?)?;
    }
    let twist = alpha.pow(1u64 << k)?;
    HomAlgebra::with_labels(mu.clone(), vec![twist; mu.arity() - 1], alg.labels().to_vec())
}

/// Distinguished elements used for a reduction, in stage order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionWitness {
    pub elements: Vec<Vector>,
    /// Whether the stage conditions were verified.
    pub checked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub algebra: HomAlgebra,
    pub witness: ReductionWitness,
    /// Re-verified multiplicativity of the output, when the input was
    /// multiplicative; `None` otherwise or when unchecked.
    pub multiplicative: Option<bool>,
}

const REDUCTION: &str = "reduction conditions";

/// Conditions on `a` for removing the last slot of `(μ, α_1..α_{N-1})`:
/// `α_{N-1}(a) = a`, and `μ(x_1..x_{N-1}, a) = μ(x_1..x_{N-2}, a, x_{N-1})`
/// on basis tuples.
fn stage_conditions(alg: &HomAlgebra, mu: &MultiMap, twist: &LinMap, a: &Vector) -> Result<CheckReport> {
    let m = mu.arity();
    let mode = CheckMode::Exhaustive;
    let fixed = twist.apply_unchecked(a);
    if &fixed != a {
        let c = Counterexample { identity: "alpha_{n-1}(a) = a".into(), index: None, tuple: vec![], lhs: fixed, rhs: a.clone() };
        return Ok(CheckReport { verdict: crate::homalg::Verdict::Fail, mode, identity: REDUCTION.into(), tuples_checked: 0, counterexample: Some(c) });
    }
    let last = mu.plug(m - 1, a)?;
    let second_last = mu.plug(m - 2, a)?;
    let field = alg.field();
    scan(alg, m - 1, REDUCTION, mode, |tuple| {
        let lhs = last.get(tuple).cloned().unwrap_or_else(|| Vector::zero(field));
        let rhs = second_last.get(tuple).cloned().unwrap_or_else(|| Vector::zero(field));
        Mismatch::compare("(x, a) = (x', a, x_last)", None, lhs, rhs)
    })
}

fn validate_witness(alg: &HomAlgebra, a: &Vector) -> Result<()> {
    if a.field() != alg.field() {
        return Err(Error::FieldMismatch { expected: alg.field(), found: a.field() });
    }
    if let Some(&k) = a.max_key() {
        if k >= alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), found: k + 1 });
        }
    }
    Ok(())
}

/// Both conditions for reducing `A` by `a`: `α_{n-1}(a) = a` exactly, and
/// `(x_1..x_{n-1}, a) = (x_1..x_{n-2}, a, x_{n-1})` on all basis tuples.
pub fn check_reduction_conditions(alg: &HomAlgebra, a: &Vector) -> Result<CheckReport> {
    let n = alg.arity();
    if n < 3 {
        return Err(Error::ArityTooSmall { found: n, min: 3 });
    }
    validate_witness(alg, a)?;
    stage_conditions(alg, alg.product(), alg.twist_map(n - 1), a)
}

/// `(x_1..x_{n-1})' = (x_1..x_{n-1}, a)` with twists `α_1..α_{n-2}`.
pub fn reduce_arity(alg: &HomAlgebra, a: &Vector) -> Result<Reduction> {
    reduce_arity_seq(alg, std::slice::from_ref(a))
}

/// `(x_1..x_{n-k})^k = (x_1..x_{n-k}, a_k, .., a_1)` with twists
/// `α_1..α_{n-1-k}`. Stage `i` requires `α_{n-i}(a_i) = a_i` and
/// `(x_{1,n-i}, a_i, a_{i-1}, .., a_1) = (x_{1,n-i-1}, a_i, x_{n-i}, a_{i-1}, .., a_1)`.
pub fn reduce_arity_seq(alg: &HomAlgebra, witnesses: &[Vector]) -> Result<Reduction> {
    reduce(alg, witnesses, true)
}

/// [`reduce_arity_seq`] without the stage conditions.
pub fn reduce_arity_unchecked(alg: &HomAlgebra, witnesses: &[Vector]) -> Result<Reduction> {
    reduce(alg, witnesses, false)
}

fn reduce(alg: &HomAlgebra, witnesses: &[Vector], checked: bool) -> Result<Reduction> {
    let n = alg.arity();
    let k = witnesses.len();
    if k > 0 && n < 3 {
        return Err(Error::ArityTooSmall { found: n, min: 3 });
    }
    if k + 2 > n && k > 0 {
        return Err(Error::InvalidArgument(format!("{k} witnesses need arity at least {}, got {n}", k + 2)));
    }
    let was_multiplicative = checked && k > 0 && check_multiplicative(alg, CheckMode::Exhaustive)?.passed();
    let mut mu = alg.product().clone();
    for (i, a) in witnesses.iter().enumerate() {
        let stage = i + 1;
        validate_witness(alg, a)?;
        if checked {
            let report = stage_conditions(alg, &mu, alg.twist_map(n - stage), a)?;
            if !report.passed() {
                return Err(Error::ConditionsFailed { stage, report: Box::new(report) });
            }
        }
        mu = mu.plug(mu.arity() - 1, a)?;
    }
    let twists = alg.twists()[..n - 1 - k].to_vec();
    let algebra = HomAlgebra::with_labels(mu, twists, alg.labels().to_vec())?;
    let multiplicative = if was_multiplicative {
        Some(check_multiplicative(&algebra, CheckMode::Exhaustive)?.passed())
    } else {
        None
    };
    Ok(Reduction { algebra, witness: ReductionWitness { elements: witnesses.to_vec(), checked }, multiplicative })
}
