use crate::error::{Error, Result};

use super::{FieldSpec, Scalar, Vector};

/// A dense linear map `F^cols -> F^rows`, stored row-major.
///
/// Twisting maps are square; weak morphisms between algebras of different
/// dimension are rectangular.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinMap {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl LinMap {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        LinMap { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, dim: usize) -> Self {
        let mut m = LinMap::zero(field, dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::FieldMismatch { expected: field, found: s.field() });
                }
                entries.push(s);
            }
        }
        Ok(LinMap { field, rows: r, cols: c, entries })
    }

    /// Integer entries, mostly for tests and small hand-built maps.
    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(field, rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect())
    }

    /// Diagonal map with the given entries.
    pub fn diagonal(field: FieldSpec, diag: Vec<Scalar>) -> Self {
        let d = diag.len();
        let mut m = LinMap::zero(field, d, d);
        for (i, s) in diag.into_iter().enumerate() {
            m.entries[i * d + i] = s;
        }
        m
    }

    /// The map sending `e_j` to `columns[j]`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = LinMap::zero(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (&i, c) in col.iter() {
                if i >= rows {
                    return Err(Error::IndexOutOfRange { index: i + 1, max: rows });
                }
                m.entries[i * m.cols + j] = c.clone();
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_identity(&self) -> bool {
        *self == LinMap::identity(self.field, self.rows)
    }

    /// Image of the basis vector `e_j`.
    pub fn column(&self, j: usize) -> Vector {
        Vector::from_terms(self.field, (0..self.rows).map(|i| (i, self.get(i, j).clone())))
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.field() != self.field {
            return Err(Error::FieldMismatch { expected: self.field, found: v.field() });
        }
        if let Some(&k) = v.max_key() {
            if k >= self.cols {
                return Err(Error::DimensionMismatch { expected: self.cols, found: k + 1 });
            }
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero(self.field);
        for (&j, c) in v.iter() {
            for i in 0..self.rows {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out.add_term(i, a * c);
                }
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinMap) -> Result<LinMap> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { expected: self.field, found: other.field });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = LinMap::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self^k` by repeated squaring; `k = 0` gives the identity.
    pub fn pow(&self, mut k: u64) -> Result<LinMap> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let mut acc = LinMap::identity(self.field, self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut m: Vec<Vec<Scalar>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Ok(self.field.zero());
            };
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            det = &det * &m[col][col];
            let inv = m[col][col].inv().expect("nonzero pivot");
            let pivot = m[col].clone();
            for row in m.iter_mut().skip(col + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] * &inv;
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        Ok(det)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<LinMap> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let one = self.field.one();
        let mut m: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { one.clone() } else { self.field.zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
            m.swap(piv, col);
            let inv = m[col][col].inv().expect("nonzero pivot");
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        LinMap::from_rows(self.field, m.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Rows as nested vectors, for serialization.
    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}
