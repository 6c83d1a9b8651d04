use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

use super::{FieldSpec, LinMap, Scalar, Vector};

/// An `arity`-linear map on `F^dim`, stored as sparse structure constants:
/// `inputs -> image of (e_{i1}, ..., e_{in})`. Zero images are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiMap {
    field: FieldSpec,
    arity: usize,
    dim: usize,
    table: BTreeMap<Vec<usize>, Vector>,
}

impl MultiMap {
    pub fn zero(field: FieldSpec, arity: usize, dim: usize) -> Self {
        MultiMap { field, arity, dim, table: BTreeMap::new() }
    }

    /// Builds a map from `(inputs, output, coeff)` triples (0-based indices).
    /// Duplicate `(inputs, output)` keys and zero coefficients are rejected.
    pub fn from_entries(
        field: FieldSpec,
        arity: usize,
        dim: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, usize, Scalar)>,
    ) -> Result<Self> {
        let mut m = MultiMap::zero(field, arity, dim);
        let mut seen = std::collections::HashSet::new();
        for (inputs, out, c) in entries {
            if inputs.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: inputs.len() });
            }
            if let Some(&bad) = inputs.iter().chain(std::iter::once(&out)).find(|&&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index: bad + 1, max: dim });
            }
            if c.field() != field {
                return Err(Error::FieldMismatch { expected: field, found: c.field() });
            }
            if c.is_zero() {
                return Err(Error::InvalidArgument(format!("zero structure constant at {inputs:?} -> {out}")));
            }
            if !seen.insert((inputs.clone(), out)) {
                return Err(Error::InvalidArgument(format!("duplicate structure constant at {inputs:?} -> {out}")));
            }
            m.accumulate(inputs, &Vector::term(out, c), &field.one());
        }
        Ok(m)
    }

    /// Builds a map by evaluating `f` on every basis tuple. Only for small
    /// `dim^arity`; constructions on existing maps use the sparse helpers.
    pub fn from_fn(field: FieldSpec, arity: usize, dim: usize, mut f: impl FnMut(&[usize]) -> Vector) -> Self {
        let mut m = MultiMap::zero(field, arity, dim);
        if dim == 0 {
            return m;
        }
        let mut idx = vec![0usize; arity];
        loop {
            let v = f(&idx);
            if !v.is_zero() {
                m.table.insert(idx.clone(), v);
            }
            if !advance(&mut idx, dim) {
                break;
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// Number of nonzero `(inputs, output)` structure constants.
    pub fn nnz(&self) -> usize {
        self.table.values().map(Vector::nnz).sum()
    }

    /// Image of a basis tuple, `None` when zero.
    pub fn get(&self, inputs: &[usize]) -> Option<&Vector> {
        self.table.get(inputs)
    }

    /// Structure constants in lexicographic `(inputs, output)` order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], usize, &Scalar)> {
        self.table
            .iter()
            .flat_map(|(ins, v)| v.iter().map(move |(&out, c)| (ins.as_slice(), out, c)))
    }

    /// Basis tuples with nonzero image, with their images.
    pub fn rows(&self) -> impl Iterator<Item = (&[usize], &Vector)> {
        self.table.iter().map(|(k, v)| (k.as_slice(), v))
    }

    fn accumulate(&mut self, inputs: Vec<usize>, v: &Vector, c: &Scalar) {
        if v.is_zero() || c.is_zero() {
            return;
        }
        match self.table.entry(inputs) {
            Entry::Occupied(mut o) => {
                o.get_mut().add_scaled(v, c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(slot) => {
                let w = v.scaled(c);
                if !w.is_zero() {
                    slot.insert(w);
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &MultiMap, c: &Scalar) -> Result<()> {
        self.check_compatible(other)?;
        for (ins, v) in &other.table {
            self.accumulate(ins.clone(), v, c);
        }
        Ok(())
    }

    fn check_compatible(&self, other: &MultiMap) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { expected: self.field, found: other.field });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    /// Multilinear evaluation on arbitrary vectors.
    pub fn apply(&self, args: &[&Vector]) -> Result<Vector> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        for a in args {
            if a.field() != self.field {
                return Err(Error::FieldMismatch { expected: self.field, found: a.field() });
            }
            if let Some(&k) = a.max_key() {
                if k >= self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, found: k + 1 });
                }
            }
        }
        Ok(self.apply_unchecked(args))
    }

    /// Evaluation without shape checks. Walks whichever is smaller: the
    /// product of argument supports or the stored structure constants.
    pub(crate) fn apply_unchecked(&self, args: &[&Vector]) -> Vector {
        let mut out = Vector::zero(self.field);
        if args.iter().any(|a| a.is_zero()) || self.table.is_empty() {
            return out;
        }
        let support: u128 = args.iter().map(|a| a.nnz() as u128).product();
        if support <= self.table.len() as u128 {
            let supports: Vec<Vec<(&usize, &Scalar)>> = args.iter().map(|a| a.iter().collect()).collect();
            let mut pos = vec![0usize; args.len()];
            let mut key = vec![0usize; args.len()];
            loop {
                let mut coeff = self.field.one();
                for (slot, &p) in pos.iter().enumerate() {
                    let (&k, c) = supports[slot][p];
                    key[slot] = k;
                    coeff = &coeff * c;
                }
                if let Some(img) = self.table.get(key.as_slice()) {
                    out.add_scaled(img, &coeff);
                }
                // advance mixed-radix counter over supports
                let mut s = args.len();
                loop {
                    if s == 0 {
                        return out;
                    }
                    s -= 1;
                    pos[s] += 1;
                    if pos[s] < supports[s].len() {
                        break;
                    }
                    pos[s] = 0;
                }
            }
        } else {
            'rows: for (ins, img) in &self.table {
                let mut coeff = self.field.one();
                for (a, i) in args.iter().zip(ins) {
                    match a.get(i) {
                        Some(c) => coeff = &coeff * c,
                        None => continue 'rows,
                    }
                }
                out.add_scaled(img, &coeff);
            }
            out
        }
    }

    /// `L ∘ self`.
    pub fn postcompose(&self, l: &LinMap) -> Result<MultiMap> {
        if l.rows() != self.dim || l.cols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: l.rows().max(l.cols()) });
        }
        let mut out = MultiMap::zero(self.field, self.arity, self.dim);
        for (ins, v) in &self.table {
            out.accumulate(ins.clone(), &l.apply_unchecked(v), &self.field.one());
        }
        Ok(out)
    }

    /// `(x_1..x_n) -> self(x_1, .., L x_slot, .., x_n)` (0-based slot).
    pub fn precompose_slot(&self, slot: usize, l: &LinMap) -> Result<MultiMap> {
        if slot >= self.arity {
            return Err(Error::IndexOutOfRange { index: slot + 1, max: self.arity });
        }
        if l.rows() != self.dim || l.cols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: l.rows().max(l.cols()) });
        }
        let mut out = MultiMap::zero(self.field, self.arity, self.dim);
        for (ins, v) in &self.table {
            let k = ins[slot];
            for (j, a) in l.row(k).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut new_ins = ins.clone();
                new_ins[slot] = j;
                out.accumulate(new_ins, v, a);
            }
        }
        Ok(out)
    }

    /// Substitutes `inner` into `slot` (0-based): the result has arity
    /// `self.arity + inner.arity - 1` and evaluates
    /// `self(x_1, .., inner(y_1..y_m), .., x_n)`.
    pub fn compose_into_slot(&self, slot: usize, inner: &MultiMap) -> Result<MultiMap> {
        if slot >= self.arity {
            return Err(Error::IndexOutOfRange { index: slot + 1, max: self.arity });
        }
        if self.field != inner.field {
            return Err(Error::FieldMismatch { expected: self.field, found: inner.field });
        }
        if self.dim != inner.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: inner.dim });
        }
        let mut by_output: HashMap<usize, Vec<(&Vec<usize>, &Scalar)>> = HashMap::new();
        for (ins, v) in &inner.table {
            for (&k, c) in v.iter() {
                by_output.entry(k).or_default().push((ins, c));
            }
        }
        let mut out = MultiMap::zero(self.field, self.arity + inner.arity - 1, self.dim);
        for (ins, v) in &self.table {
            let Some(sources) = by_output.get(&ins[slot]) else { continue };
            for (inner_ins, c) in sources {
                let mut new_ins = Vec::with_capacity(out.arity);
                new_ins.extend_from_slice(&ins[..slot]);
                new_ins.extend_from_slice(inner_ins);
                new_ins.extend_from_slice(&ins[slot + 1..]);
                out.accumulate(new_ins, v, c);
            }
        }
        Ok(out)
    }

    /// Fixes `slot` (0-based) to the vector `a`, lowering the arity by one.
    pub fn plug(&self, slot: usize, a: &Vector) -> Result<MultiMap> {
        if self.arity < 2 {
            return Err(Error::ArityMismatch { expected: 2, found: self.arity });
        }
        if slot >= self.arity {
            return Err(Error::IndexOutOfRange { index: slot + 1, max: self.arity });
        }
        if a.field() != self.field {
            return Err(Error::FieldMismatch { expected: self.field, found: a.field() });
        }
        let mut out = MultiMap::zero(self.field, self.arity - 1, self.dim);
        for (ins, v) in &self.table {
            let Some(c) = a.get(&ins[slot]) else { continue };
            let mut new_ins = ins.clone();
            new_ins.remove(slot);
            out.accumulate(new_ins, v, c);
        }
        Ok(out)
    }

    /// `(x_1..x_n) -> self(x_{order[0]}, .., x_{order[n-1]})` with 0-based
    /// `order`, a permutation of `0..n`.
    pub fn permute_inputs(&self, order: &[usize]) -> Result<MultiMap> {
        if order.len() != self.arity || !is_permutation(order) {
            return Err(Error::InvalidArgument(format!("{order:?} is not a permutation of 0..{}", self.arity)));
        }
        let mut out = MultiMap::zero(self.field, self.arity, self.dim);
        for (ins, v) in &self.table {
            // self(e_{k_1}..e_{k_n}) is reached when x_{order[t]} = e_{k_t}.
            let mut new_ins = vec![0; self.arity];
            for (t, &k) in ins.iter().enumerate() {
                new_ins[order[t]] = k;
            }
            out.accumulate(new_ins, v, &self.field.one());
        }
        Ok(out)
    }
}

pub(crate) fn is_permutation(order: &[usize]) -> bool {
    let mut seen = vec![false; order.len()];
    order.iter().all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
}

/// Lexicographic successor of a tuple over `0..radix`; false on wraparound.
pub(crate) fn advance(idx: &mut [usize], radix: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < radix {
            return true;
        }
        idx[i] = 0;
    }
    false
}
