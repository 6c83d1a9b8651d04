//! JSON files for algebras, matrices and vectors. Indices are 1-based and
//! scalars are strings (`"-3/4"` over Q, a residue over F_p). Unknown fields
//! are rejected; [`write_algebra`] output is canonical.

use std::fmt::Write as _;

use homnambu::homalg::HomAlgebra;
use homnambu::{Error, FieldSpec, LinMap, MultiMap, Result, Scalar, Vector};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum FieldJson {
    Q {},
    Fp { p: u64 },
}

impl FieldJson {
    pub fn to_field(&self) -> Result<FieldSpec> {
        match self {
            FieldJson::Q {} => Ok(FieldSpec::Rationals),
            FieldJson::Fp { p } => FieldSpec::prime(*p),
        }
    }

    pub fn from_field(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Rationals => FieldJson::Q {},
            FieldSpec::Prime(p) => FieldJson::Fp { p },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    #[serde(rename = "in")]
    pub ins: Vec<usize>,
    pub out: usize,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: FieldJson,
    pub arity: usize,
    pub dim: usize,
    pub basis: Vec<String>,
    pub twists: Vec<Vec<Vec<String>>>,
    pub product: Vec<ProductEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub field: FieldJson,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFile {
    pub field: FieldJson,
    pub dim: usize,
    pub coords: Vec<String>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn matrix_from_rows(field: FieldSpec, rows: &[Vec<String>], r: usize, c: usize, what: &str) -> Result<LinMap> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse(format!("{what} must be {r}x{c}")));
    }
    let parsed = rows
        .iter()
        .map(|row| row.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<Scalar>>>())
        .collect::<Result<Vec<_>>>()?;
    LinMap::from_rows(field, parsed)
}

fn matrix_rows(m: &LinMap) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|row| row.iter().map(Scalar::to_string).collect()).collect()
}

pub fn parse_algebra(text: &str) -> Result<HomAlgebra> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(parse_err)?;
    algebra_from_file(&file)
}

pub fn algebra_from_file(file: &AlgebraFile) -> Result<HomAlgebra> {
    let field = file.field.to_field()?;
    let (n, dim) = (file.arity, file.dim);
    if n < 2 {
        return Err(Error::Parse(format!("arity {n} is below 2")));
    }
    if file.basis.len() != dim {
        return Err(Error::Parse(format!("{} basis labels for dimension {dim}", file.basis.len())));
    }
    if file.twists.len() != n - 1 {
        return Err(Error::Parse(format!("arity {n} needs {} twists, found {}", n - 1, file.twists.len())));
    }
    let twists = file
        .twists
        .iter()
        .enumerate()
        .map(|(i, t)| matrix_from_rows(field, t, dim, dim, &format!("twist {}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let in_range = |i: usize| (1..=dim).contains(&i);
    let mut entries = Vec::with_capacity(file.product.len());
    for e in &file.product {
        if e.ins.len() != n || !e.ins.iter().copied().all(in_range) || !in_range(e.out) {
            return Err(Error::Parse(format!("product entry {:?} -> {} is out of range", e.ins, e.out)));
        }
        let ins = e.ins.iter().map(|i| i - 1).collect();
        entries.push((ins, e.out - 1, field.parse_scalar(&e.c)?));
    }
    let product = MultiMap::from_entries(field, n, dim, entries)?;
    HomAlgebra::with_labels(product, twists, file.basis.clone())
}

pub fn algebra_to_file(alg: &HomAlgebra) -> AlgebraFile {
    let product = alg
        .product()
        .entries()
        .map(|(ins, out, c)| ProductEntry { ins: ins.iter().map(|i| i + 1).collect(), out: out + 1, c: c.to_string() })
        .collect();
    AlgebraFile {
        field: FieldJson::from_field(alg.field()),
        arity: alg.arity(),
        dim: alg.dim(),
        basis: alg.labels().to_vec(),
        twists: alg.twists().iter().map(matrix_rows).collect(),
        product,
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// Canonical text: one top-level key per line, one twist row list and one
/// product entry per line, product entries in lexicographic order.
pub fn write_algebra(alg: &HomAlgebra) -> String {
    let f = algebra_to_file(alg);
    let mut s = String::new();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"field\": {},", json(&f.field));
    let _ = writeln!(s, "  \"arity\": {},", f.arity);
    let _ = writeln!(s, "  \"dim\": {},", f.dim);
    let _ = writeln!(s, "  \"basis\": {},", json(&f.basis));
    list(&mut s, "twists", f.twists.iter().map(json), true);
    list(&mut s, "product", f.product.iter().map(json), false);
    s.push_str("}\n");
    s
}

fn list(s: &mut String, key: &str, items: impl Iterator<Item = String>, comma: bool) {
    let items: Vec<String> = items.collect();
    let tail = if comma { "," } else { "" };
    if items.is_empty() {
        let _ = writeln!(s, "  \"{key}\": []{tail}");
        return;
    }
    let _ = writeln!(s, "  \"{key}\": [");
    for (k, item) in items.iter().enumerate() {
        let sep = if k + 1 < items.len() { "," } else { "" };
        let _ = writeln!(s, "    {item}{sep}");
    }
    let _ = writeln!(s, "  ]{tail}");
}

pub fn parse_matrix(text: &str) -> Result<LinMap> {
    let file: MatrixFile = serde_json::from_str(text).map_err(parse_err)?;
    let field = file.field.to_field()?;
    matrix_from_rows(field, &file.entries, file.rows, file.cols, "matrix")
}

pub fn write_matrix(m: &LinMap) -> String {
    let file = MatrixFile {
        field: FieldJson::from_field(m.field()),
        rows: m.rows(),
        cols: m.cols(),
        entries: matrix_rows(m),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes") + "\n"
}

pub fn parse_vector(text: &str) -> Result<Vector> {
    let file: VectorFile = serde_json::from_str(text).map_err(parse_err)?;
    let field = file.field.to_field()?;
    if file.coords.len() != file.dim {
        return Err(Error::Parse(format!("{} coordinates for dimension {}", file.coords.len(), file.dim)));
    }
    let terms = file.coords.iter().enumerate().map(|(k, s)| Ok((k, field.parse_scalar(s)?))).collect::<Result<Vec<_>>>()?;
    Ok(Vector::from_terms(field, terms))
}

pub fn write_vector(v: &Vector, dim: usize) -> String {
    let coords = (0..dim).map(|k| v.get(&k).map_or_else(|| "0".to_string(), Scalar::to_string)).collect();
    let file = VectorFile { field: FieldJson::from_field(v.field()), dim, coords };
    json(&file) + "\n"
}
