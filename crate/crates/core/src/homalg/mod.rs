//! n-ary Hom-algebras, Hom-associators, identity checkers and twists by weak morphisms.

mod assoc;
mod check;
mod twist;

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, LinMap, MultiMap, Vector};

pub use assoc::{
    block_term, check_morphism, check_multiplicative, check_total_hom_associativity, check_weak_morphism,
    hom_associator,
};
pub use check::{tuple_count, CheckMode, CheckReport, Counterexample, Verdict};
pub(crate) use check::{random_index, scan, Mismatch};
pub use twist::{check_twist_residuals, derived_twist_sequence, twist_residual_pair, twist_algebra, twist_algebra_unchecked};

/// What the checkers need from an n-ary Hom-algebra: a product, `n - 1`
/// twisting maps, and a way to enumerate or sample basis keys.
///
/// `mul` and `twist` assume their inputs are valid elements
/// (see [`NaryHomAlgebra::check_element`]); public entry points validate.
pub trait NaryHomAlgebra: Sync {
    type Key: Ord + Clone + Debug + Send + Sync;

    fn field(&self) -> FieldSpec;

    fn arity(&self) -> usize;

    /// Dimension when the basis is enumerable, `None` for lazy carriers.
    fn finite_dim(&self) -> Option<usize>;

    /// The `index`-th basis key (0-based). Only called when `finite_dim` is `Some`.
    fn basis_key(&self, index: usize) -> Self::Key;

    /// A basis key drawn from `rng`.
    fn random_key(&self, rng: &mut dyn rand::RngCore) -> Self::Key;

    fn mul(&self, args: &[&Vector<Self::Key>]) -> Vector<Self::Key>;

    /// `α_i(v)` for `i` in `1..=arity-1`.
    fn twist(&self, i: usize, v: &Vector<Self::Key>) -> Vector<Self::Key>;

    /// First `(i, key)` with `α_1(key) != α_i(key)`, if the twists differ.
    fn twist_mismatch(&self) -> Option<(usize, Self::Key)>;

    fn equal_twists(&self) -> bool {
        self.twist_mismatch().is_none()
    }

    /// Field and key-range validation for a caller-supplied element.
    fn check_element(&self, v: &Vector<Self::Key>) -> Result<()>;
}

/// A finite-dimensional n-ary Hom-algebra `(A, μ, (α_1, .., α_{n-1}))` with
/// sparse structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomAlgebra {
    labels: Vec<String>,
    product: MultiMap,
    twists: Vec<LinMap>,
}

impl HomAlgebra {
    pub fn new(product: MultiMap, twists: Vec<LinMap>) -> Result<Self> {
        let labels = (1..=product.dim()).map(|i| format!("e{i}")).collect();
        Self::with_labels(product, twists, labels)
    }

    pub fn with_labels(product: MultiMap, twists: Vec<LinMap>, labels: Vec<String>) -> Result<Self> {
        let n = product.arity();
        if n < 2 {
            return Err(Error::ArityMismatch { expected: 2, found: n });
        }
        if twists.len() != n - 1 {
            return Err(Error::InvalidArgument(format!("arity {n} needs {} twisting maps, got {}", n - 1, twists.len())));
        }
        for t in &twists {
            if t.field() != product.field() {
                return Err(Error::FieldMismatch { expected: product.field(), found: t.field() });
            }
            if t.rows() != product.dim() || t.cols() != product.dim() {
                return Err(Error::DimensionMismatch { expected: product.dim(), found: t.rows().max(t.cols()) });
            }
        }
        if labels.len() != product.dim() {
            return Err(Error::DimensionMismatch { expected: product.dim(), found: labels.len() });
        }
        Ok(HomAlgebra { labels, product, twists })
    }

    /// `(A, μ, Id, .., Id)`: an ordinary n-ary algebra.
    pub fn with_identity_twists(product: MultiMap) -> Self {
        let id = LinMap::identity(product.field(), product.dim());
        let twists = vec![id; product.arity() - 1];
        Self::new(product, twists).expect("identity twists always fit")
    }

    /// `(A, μ, α, .., α)`.
    pub fn with_equal_twists(product: MultiMap, alpha: LinMap) -> Result<Self> {
        let twists = vec![alpha; product.arity().saturating_sub(1)];
        Self::new(product, twists)
    }

    /// Same product and labels, new twists.
    pub fn retwisted(&self, twists: Vec<LinMap>) -> Result<Self> {
        Self::with_labels(self.product.clone(), twists, self.labels.clone())
    }

    /// Same twists and labels, new product.
    pub fn with_product(&self, product: MultiMap) -> Result<Self> {
        Self::with_labels(product, self.twists.clone(), self.labels.clone())
    }

    pub fn field(&self) -> FieldSpec {
        self.product.field()
    }

    pub fn arity(&self) -> usize {
        self.product.arity()
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn product(&self) -> &MultiMap {
        &self.product
    }

    pub fn twists(&self) -> &[LinMap] {
        &self.twists
    }

    /// `α_i`, 1-based.
    pub fn twist_map(&self, i: usize) -> &LinMap {
        &self.twists[i - 1]
    }

    pub fn equal_twists(&self) -> bool {
        self.twists.windows(2).all(|w| w[0] == w[1])
    }

    /// The common twisting map when all twists agree.
    pub fn common_twist(&self) -> Option<&LinMap> {
        self.equal_twists().then(|| &self.twists[0])
    }

    /// Validated product evaluation.
    pub fn apply(&self, args: &[&Vector]) -> Result<Vector> {
        self.product.apply(args)
    }

    pub fn basis(&self, i: usize) -> Vector {
        Vector::basis(self.field(), i)
    }
}

impl NaryHomAlgebra for HomAlgebra {
    type Key = usize;

    fn field(&self) -> FieldSpec {
        self.product.field()
    }

    fn arity(&self) -> usize {
        self.product.arity()
    }

    fn finite_dim(&self) -> Option<usize> {
        Some(self.product.dim())
    }

    fn basis_key(&self, index: usize) -> usize {
        index
    }

    fn random_key(&self, rng: &mut dyn rand::RngCore) -> usize {
        random_index(rng, self.dim())
    }

    fn mul(&self, args: &[&Vector]) -> Vector {
        self.product.apply_unchecked(args)
    }

    fn twist(&self, i: usize, v: &Vector) -> Vector {
        self.twists[i - 1].apply_unchecked(v)
    }

    fn twist_mismatch(&self) -> Option<(usize, usize)> {
        let first = &self.twists[0];
        self.twists.iter().enumerate().skip(1).find_map(|(i, t)| {
            (0..self.dim()).find(|&j| t.column(j) != first.column(j)).map(|j| (i + 1, j))
        })
    }

    fn equal_twists(&self) -> bool {
        HomAlgebra::equal_twists(self)
    }

    fn check_element(&self, v: &Vector) -> Result<()> {
        if v.field() != self.field() {
            return Err(Error::FieldMismatch { expected: self.field(), found: v.field() });
        }
        match v.max_key() {
            Some(&k) if k >= self.dim() => Err(Error::DimensionMismatch { expected: self.dim(), found: k + 1 }),
            _ => Ok(()),
        }
    }
}
