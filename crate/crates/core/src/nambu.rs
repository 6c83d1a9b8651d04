//! n-commutator words, the n-commutator bracket, the Hom-Jacobian and the
//! Hom-Nambu identity.

use std::fmt;
use std::ops::{Mul, Neg};

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, MultiMap, Vector};
use crate::homalg::{
    check_total_hom_associativity, scan, CheckMode, CheckReport, HomAlgebra, Mismatch, NaryHomAlgebra,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs { Sign::Plus } else { Sign::Minus }
    }
}

/// `±X_{i_1}..X_{i_n}`, indices 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CommutatorWord {
    pub sign: Sign,
    pub perm: Vec<usize>,
}

impl fmt::Display for CommutatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.perm.iter().map(usize::to_string).collect();
        write!(f, "{}({})", self.sign.symbol(), body.join(","))
    }
}

impl CommutatorWord {
    /// `z X_n` and `-X_n z`.
    fn children(&self) -> [CommutatorWord; 2] {
        let n = self.perm.len() + 1;
        let mut append = self.perm.clone();
        append.push(n);
        let mut prepend = Vec::with_capacity(n);
        prepend.push(n);
        prepend.extend_from_slice(&self.perm);
        [
            CommutatorWord { sign: self.sign, perm: append },
            CommutatorWord { sign: -self.sign, perm: prepend },
        ]
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }
}

/// `W_n` in recursion order: for each `z` in `W_{n-1}`, `z X_n` then `-X_n z`.
/// Word `2j` of `W_n` appends to word `j` of `W_{n-1}`; word `2j + 1` prepends.
pub fn commutator_words(n: usize) -> Result<Vec<CommutatorWord>> {
    if n < 2 {
        return Err(Error::ArityTooSmall { found: n, min: 2 });
    }
    if n > 30 {
        return Err(Error::InvalidArgument(format!("W_{n} has 2^{} words", n - 1)));
    }
    let mut words = vec![CommutatorWord { sign: Sign::Plus, perm: vec![1] }];
    for _ in 2..=n {
        words = words.iter().flat_map(CommutatorWord::children).collect();
    }
    Ok(words)
}

fn check_args<A: NaryHomAlgebra + ?Sized>(alg: &A, args: &[&Vector<A::Key>]) -> Result<()> {
    if args.len() != alg.arity() {
        return Err(Error::ArityMismatch { expected: alg.arity(), found: args.len() });
    }
    args.iter().try_for_each(|a| alg.check_element(a))
}

/// `± μ(v_{i_1}, .., v_{i_n})`.
pub fn word_apply<A: NaryHomAlgebra + ?Sized>(w: &CommutatorWord, args: &[&Vector<A::Key>], alg: &A) -> Result<Vector<A::Key>> {
    check_args(alg, args)?;
    if w.perm.len() != args.len() || !crate::exactlin::is_permutation(&w.perm.iter().map(|i| i.wrapping_sub(1)).collect::<Vec<_>>()) {
        return Err(Error::InvalidArgument(format!("{w} is not a word on {} letters", args.len())));
    }
    Ok(word_apply_unchecked(w, args, alg))
}

fn word_apply_unchecked<A: NaryHomAlgebra + ?Sized>(w: &CommutatorWord, args: &[&Vector<A::Key>], alg: &A) -> Vector<A::Key> {
    let permuted: Vec<&Vector<A::Key>> = w.perm.iter().map(|&i| args[i - 1]).collect();
    let v = alg.mul(&permuted);
    match w.sign {
        Sign::Plus => v,
        Sign::Minus => v.neg(),
    }
}

/// `[a_1, .., a_n] = Σ_{w ∈ W_n} w(a_1, .., a_n)`.
pub fn n_commutator<A: NaryHomAlgebra + ?Sized>(alg: &A, args: &[&Vector<A::Key>]) -> Result<Vector<A::Key>> {
    check_args(alg, args)?;
    let words = commutator_words(alg.arity())?;
    Ok(bracket_with(&words, alg, args))
}

fn bracket_with<A: NaryHomAlgebra + ?Sized>(words: &[CommutatorWord], alg: &A, args: &[&Vector<A::Key>]) -> Vector<A::Key> {
    let mut out = Vector::zero(alg.field());
    for w in words {
        out.add_scaled(&word_apply_unchecked(w, args, alg), &alg.field().one());
    }
    out
}

/// The n-commutator of any algebra, evaluated word by word on demand. Twists
/// are those of the underlying algebra.
pub struct CommutatorBracket<'a, A: NaryHomAlgebra + ?Sized> {
    inner: &'a A,
    words: Vec<CommutatorWord>,
}

impl<'a, A: NaryHomAlgebra + ?Sized> CommutatorBracket<'a, A> {
    pub fn new(inner: &'a A) -> Result<Self> {
        Ok(CommutatorBracket { inner, words: commutator_words(inner.arity())? })
    }
}

impl<A: NaryHomAlgebra + ?Sized> NaryHomAlgebra for CommutatorBracket<'_, A> {
    type Key = A::Key;

    fn field(&self) -> FieldSpec {
        self.inner.field()
    }

    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn finite_dim(&self) -> Option<usize> {
        self.inner.finite_dim()
    }

    fn basis_key(&self, index: usize) -> A::Key {
        self.inner.basis_key(index)
    }

    fn random_key(&self, rng: &mut dyn rand::RngCore) -> A::Key {
        self.inner.random_key(rng)
    }

    fn mul(&self, args: &[&Vector<A::Key>]) -> Vector<A::Key> {
        bracket_with(&self.words, self.inner, args)
    }

    fn twist(&self, i: usize, v: &Vector<A::Key>) -> Vector<A::Key> {
        self.inner.twist(i, v)
    }

    fn twist_mismatch(&self) -> Option<(usize, A::Key)> {
        self.inner.twist_mismatch()
    }

    fn check_element(&self, v: &Vector<A::Key>) -> Result<()> {
        self.inner.check_element(v)
    }
}

/// Structure constants of the n-commutator of `mu`.
pub fn commutator_product(mu: &MultiMap) -> Result<MultiMap> {
    let words = commutator_words(mu.arity())?;
    let mut out = MultiMap::zero(mu.field(), mu.arity(), mu.dim());
    for w in &words {
        let order: Vec<usize> = w.perm.iter().map(|i| i - 1).collect();
        out.add_scaled(&mu.permute_inputs(&order)?, &mu.field().from_i64(w.sign.as_i64()))?;
    }
    Ok(out)
}

/// An n-ary Hom-algebra with equal twists whose product is read as a bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NambuAlgebra {
    algebra: HomAlgebra,
}

impl NambuAlgebra {
    pub fn new(algebra: HomAlgebra) -> Result<Self> {
        if !algebra.equal_twists() {
            return Err(Error::UnequalTwists);
        }
        Ok(NambuAlgebra { algebra })
    }

    pub fn algebra(&self) -> &HomAlgebra {
        &self.algebra
    }

    pub fn into_inner(self) -> HomAlgebra {
        self.algebra
    }
}

impl NaryHomAlgebra for NambuAlgebra {
    type Key = usize;

    fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    fn arity(&self) -> usize {
        self.algebra.arity()
    }

    fn finite_dim(&self) -> Option<usize> {
        Some(self.algebra.dim())
    }

    fn basis_key(&self, index: usize) -> usize {
        index
    }

    fn random_key(&self, rng: &mut dyn rand::RngCore) -> usize {
        self.algebra.random_key(rng)
    }

    fn mul(&self, args: &[&Vector]) -> Vector {
        self.algebra.mul(args)
    }

    fn twist(&self, i: usize, v: &Vector) -> Vector {
        self.algebra.twist(i, v)
    }

    fn twist_mismatch(&self) -> Option<(usize, usize)> {
        None
    }

    fn check_element(&self, v: &Vector) -> Result<()> {
        self.algebra.check_element(v)
    }
}

/// `N(A) = (A, [·, .., ·], α)`. Requires equal twists and total
/// Hom-associativity (checked exhaustively). A totally associative algebra
/// is the case of identity twists; the bracket then satisfies the untwisted
/// Nambu identity.
pub fn commutator_algebra(alg: &HomAlgebra) -> Result<NambuAlgebra> {
    if !alg.equal_twists() {
        return Err(Error::UnequalTwists);
    }
    let report = check_total_hom_associativity(alg, CheckMode::Exhaustive)?;
    if !report.passed() {
        return Err(Error::CheckFailed(Box::new(report)));
    }
    commutator_algebra_unchecked(alg)
}

/// [`commutator_algebra`] without the associativity check.
pub fn commutator_algebra_unchecked(alg: &HomAlgebra) -> Result<NambuAlgebra> {
    let bracket = commutator_product(alg.product())?;
    NambuAlgebra::new(alg.with_product(bracket)?)
}

/// The two sides of `J^n = 0`: `[α(x_1..x_{n-1}), [y_1..y_n]]` and
/// `Σ_i [α(y_1..y_{i-1}), [x_1..x_{n-1}, y_i], α(y_{i+1}..y_n)]`, with
/// `α_j` applied in slot `j`.
fn jacobian_sides<A: NaryHomAlgebra + ?Sized>(v: &A, xs: &[&Vector<A::Key>], ys: &[&Vector<A::Key>]) -> (Vector<A::Key>, Vector<A::Key>) {
    let n = v.arity();
    let inner_y = v.mul(ys);
    let mut outer: Vec<Vector<A::Key>> = xs.iter().enumerate().map(|(j, x)| v.twist(j + 1, x)).collect();
    outer.push(inner_y);
    let refs: Vec<&Vector<A::Key>> = outer.iter().collect();
    let lhs = v.mul(&refs);

    let mut rhs = Vector::zero(v.field());
    let mut inner_args: Vec<&Vector<A::Key>> = xs.to_vec();
    inner_args.push(ys[0]);
    for i in 0..n {
        inner_args[n - 1] = ys[i];
        let inner = v.mul(&inner_args);
        if inner.is_zero() {
            continue;
        }
        let mut slots: Vec<Vector<A::Key>> = Vec::with_capacity(n);
        for (j, y) in ys.iter().enumerate() {
            match j.cmp(&i) {
                std::cmp::Ordering::Less => slots.push(v.twist(j + 1, y)),
                std::cmp::Ordering::Equal => slots.push(inner.clone()),
                std::cmp::Ordering::Greater => slots.push(v.twist(j, y)),
            }
        }
        let refs: Vec<&Vector<A::Key>> = slots.iter().collect();
        rhs.add_scaled(&v.mul(&refs), &v.field().one());
    }
    (lhs, rhs)
}

/// `J^n_V(x_1..x_{n-1}; y_1..y_n)` with `V`'s product as the bracket.
pub fn hom_jacobian<A: NaryHomAlgebra + ?Sized>(v: &A, xs: &[&Vector<A::Key>], ys: &[&Vector<A::Key>]) -> Result<Vector<A::Key>> {
    let n = v.arity();
    if xs.len() != n - 1 {
        return Err(Error::ArityMismatch { expected: n - 1, found: xs.len() });
    }
    if ys.len() != n {
        return Err(Error::ArityMismatch { expected: n, found: ys.len() });
    }
    for a in xs.iter().chain(ys) {
        v.check_element(a)?;
    }
    let (lhs, rhs) = jacobian_sides(v, xs, ys);
    Ok(lhs.sub(&rhs))
}

/// `J^n_V = 0` on basis `(2n-1)`-tuples `(x_1..x_{n-1}, y_1..y_n)`.
pub fn check_hom_nambu<A: NaryHomAlgebra + ?Sized>(v: &A, mode: CheckMode) -> Result<CheckReport<A::Key>> {
    let n = v.arity();
    let field = v.field();
    scan(v, 2 * n - 1, "Hom-Nambu identity", mode, |tuple| {
        let basis: Vec<Vector<A::Key>> = tuple.iter().map(|k| Vector::basis(field, k.clone())).collect();
        let refs: Vec<&Vector<A::Key>> = basis.iter().collect();
        let (lhs, rhs) = jacobian_sides(v, &refs[..n - 1], &refs[n - 1..]);
        Mismatch::compare("J^n", None, lhs, rhs)
    })
}
