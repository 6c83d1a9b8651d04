use std::collections::BTreeMap;
use std::fmt;

use super::{FieldSpec, Scalar};

/// A sparse vector in canonical form: no stored coefficient is zero.
///
/// Keys are basis indices (`usize`) for finite carriers, or monomials and
/// other basis labels for lazily enumerated carriers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector<K: Ord = usize> {
    field: FieldSpec,
    coeffs: BTreeMap<K, Scalar>,
}

impl<K: Ord + Clone> Vector<K> {
    pub fn zero(field: FieldSpec) -> Self {
        Vector { field, coeffs: BTreeMap::new() }
    }

    /// The basis vector `e_key`.
    pub fn basis(field: FieldSpec, key: K) -> Self {
        Self::term(key, field.one())
    }

    /// `c * e_key`.
    pub fn term(key: K, c: Scalar) -> Self {
        let mut v = Vector::zero(c.field());
        v.add_term(key, c);
        v
    }

    /// Builds a vector from (key, coefficient) pairs, summing repeats.
    pub fn from_terms(field: FieldSpec, terms: impl IntoIterator<Item = (K, Scalar)>) -> Self {
        let mut v = Vector::zero(field);
        for (k, c) in terms {
            v.add_term(k, c);
        }
        v
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of nonzero coefficients.
    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn get(&self, key: &K) -> Option<&Scalar> {
        self.coeffs.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.coeffs.keys()
    }

    /// Largest key in the support.
    pub fn max_key(&self) -> Option<&K> {
        self.coeffs.keys().next_back()
    }

    /// Adds `c * e_key` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: K, c: Scalar) {
        debug_assert_eq!(c.field(), self.field);
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&key) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.coeffs.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(key, c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Vector<K>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.coeffs {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector<K> {
        if c.is_zero() {
            return Vector::zero(self.field);
        }
        Vector {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Vector<K>) -> Vector<K> {
        let mut out = self.clone();
        out.add_scaled(other, &self.field.one());
        out
    }

    pub fn sub(&self, other: &Vector<K>) -> Vector<K> {
        let mut out = self.clone();
        out.add_scaled(other, &-self.field.one());
        out
    }

    pub fn neg(&self) -> Vector<K> {
        self.scaled(&-self.field.one())
    }

    /// Applies a key map term by term (used to relabel or push through
    /// monomial substitutions); keys mapped to `None` are dropped.
    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Option<L>) -> Vector<L> {
        Vector::from_terms(
            self.field,
            self.coeffs.iter().filter_map(|(k, c)| f(k).map(|l| (l, c.clone()))),
        )
    }
}

impl<K: Ord + fmt::Display> fmt::Display for Vector<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{k}")?;
        }
        Ok(())
    }
}
