use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, LinMap, MultiMap, Vector};
use crate::homalg::{twist_algebra, HomAlgebra};

/// Strands `V_1..V_n` of dimensions `dims`, with optional automorphisms
/// `γ_i` of each `V_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidSpec {
    pub field: FieldSpec,
    pub dims: Vec<usize>,
    pub gammas: Option<Vec<LinMap>>,
}

impl BraidSpec {
    pub fn new(field: FieldSpec, dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 strands, got {}", dims.len())));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidArgument("strand dimensions must be positive".into()));
        }
        Ok(BraidSpec { field, dims, gammas: None })
    }

    pub fn with_gammas(mut self, gammas: Vec<LinMap>) -> Result<Self> {
        if gammas.len() != self.dims.len() {
            return Err(Error::InvalidArgument(format!("need {} gammas, got {}", self.dims.len(), gammas.len())));
        }
        for (g, &d) in gammas.iter().zip(&self.dims) {
            if g.rows() != d || g.cols() != d {
                return Err(Error::DimensionMismatch { expected: d, found: g.rows().max(g.cols()) });
            }
            if g.field() != self.field {
                return Err(Error::FieldMismatch { expected: self.field, found: g.field() });
            }
            if g.determinant()?.is_zero() {
                return Err(Error::SingularMatrix);
            }
        }
        self.gammas = Some(gammas);
        Ok(self)
    }

    /// Seeded random invertible `γ_i`. Entries are uniform residues over
    /// `F_p` and integers in `-3..=3` over `Q`; singular draws are redrawn.
    pub fn with_random_gammas(self, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = self.field;
        let gammas = self
            .dims
            .iter()
            .map(|&d| loop {
                let rows = (0..d)
                    .map(|_| {
                        (0..d)
                            .map(|_| match field {
                                FieldSpec::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
                                FieldSpec::Rationals => field.from_i64(rng.gen_range(-3..=3)),
                            })
                            .collect()
                    })
                    .collect();
                let g = LinMap::from_rows(field, rows).expect("square");
                if !g.determinant().expect("square").is_zero() {
                    break g;
                }
            })
            .collect();
        self.with_gammas(gammas)
    }

    /// Number of strands; the algebra has arity `n + 1`.
    pub fn strands(&self) -> usize {
        self.dims.len()
    }

    fn d(&self, i: usize) -> usize {
        self.dims[i % self.dims.len()]
    }

    /// Offset of block `i` (0-based), which holds `Hom(V_i, V_{i+1})` as a
    /// `d_{i+1} x d_i` matrix, row-major.
    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.strands() + 1);
        let mut acc = 0;
        for i in 0..self.strands() {
            off.push(acc);
            acc += self.d(i + 1) * self.d(i);
        }
        off.push(acc);
        off
    }

    pub fn dim(&self) -> usize {
        *self.offsets().last().unwrap()
    }

    /// `(block, row, col)` of a basis index, all 0-based.
    pub fn locate(&self, index: usize) -> (usize, usize, usize) {
        let off = self.offsets();
        let b = (0..self.strands()).rev().find(|&b| off[b] <= index).expect("index in range");
        let local = index - off[b];
        (b, local / self.d(b), local % self.d(b))
    }

    pub fn index(&self, block: usize, row: usize, col: usize) -> usize {
        self.offsets()[block] + row * self.d(block) + col
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim())
            .map(|k| {
                let (b, r, c) = self.locate(k);
                format!("f{}[{},{}]", b + 1, r + 1, c + 1)
            })
            .collect()
    }
}

/// The `(n+1)`-ary composition algebra on `⊕ Hom(V_i, V_{i+1})` with
/// identity twists: argument `t` contributes its block `i + t - 1 (mod n)`
/// component to `F_i`, composed right to left starting from argument 1.
pub fn braid_algebra(spec: &BraidSpec) -> HomAlgebra {
    let n = spec.strands();
    let field = spec.field;
    let dim = spec.dim();
    let locs: Vec<(usize, usize, usize)> = (0..dim).map(|k| spec.locate(k)).collect();
    let mut entries = Vec::new();
    // On basis matrices E_{r,c} the chain is nonzero iff blocks follow the
    // braid and each column index matches the previous row index.
    let mut stack: Vec<usize> = Vec::with_capacity(n + 1);
    fn extend(
        stack: &mut Vec<usize>,
        n: usize,
        dim: usize,
        locs: &[(usize, usize, usize)],
        spec: &BraidSpec,
        entries: &mut Vec<(Vec<usize>, usize, crate::exactlin::Scalar)>,
    ) {
        if stack.len() == n + 1 {
            let (b0, _, c0) = locs[stack[0]];
            let (_, r_last, _) = locs[*stack.last().unwrap()];
            entries.push((stack.clone(), spec.index(b0, r_last, c0), spec.field.one()));
            return;
        }
        for k in 0..dim {
            let (b, _, c) = locs[k];
            if let Some(&prev) = stack.last() {
                let (pb, pr, _) = locs[prev];
                if b != (pb + 1) % n || c != pr {
                    continue;
                }
            }
            stack.push(k);
            extend(stack, n, dim, locs, spec, entries);
            stack.pop();
        }
    }
    extend(&mut stack, n, dim, &locs, spec, &mut entries);
    let product = MultiMap::from_entries(field, n + 1, dim, entries).expect("braid structure constants are distinct");
    let id = LinMap::identity(field, dim);
    HomAlgebra::with_labels(product, vec![id; n], spec.labels()).expect("shapes agree")
}

/// `α(⊕ f_i) = ⊕ γ_{i+1}^{-1} f_i γ_i`.
pub fn braid_twist(spec: &BraidSpec) -> Result<LinMap> {
    let gammas = spec.gammas.as_ref().ok_or_else(|| Error::InvalidArgument("braid spec has no gammas".into()))?;
    let n = spec.strands();
    let inverses = gammas.iter().map(LinMap::inverse).collect::<Result<Vec<_>>>()?;
    let columns: Vec<Vector> = (0..spec.dim())
        .map(|k| {
            let (b, r, c) = spec.locate(k);
            let g_in = &gammas[b];
            let g_out_inv = &inverses[(b + 1) % n];
            let mut v = Vector::zero(spec.field);
            for r2 in 0..spec.d(b + 1) {
                let left = g_out_inv.get(r2, r);
                if left.is_zero() {
                    continue;
                }
                for c2 in 0..spec.d(b) {
                    let right = g_in.get(c, c2);
                    if !right.is_zero() {
                        v.add_term(spec.index(b, r2, c2), left * right);
                    }
                }
            }
            v
        })
        .collect();
    LinMap::from_columns(spec.field, spec.dim(), &columns)
}

/// `A_α = (A, αμ, α)`: the braid algebra twisted by its conjugation
/// automorphism (identity when no gammas are given).
pub fn braid_hom_algebra(spec: &BraidSpec) -> Result<HomAlgebra> {
    let plain = braid_algebra(spec);
    match spec.gammas {
        None => Ok(plain),
        Some(_) => twist_algebra(&plain, &braid_twist(spec)?),
    }
}

/// `(A, αμ, Id)`: the twisted product with the twists dropped.
pub fn braid_twisted_product_only(spec: &BraidSpec) -> Result<HomAlgebra> {
    let twisted = braid_hom_algebra(spec)?;
    HomAlgebra::with_labels(twisted.product().clone(), braid_algebra(spec).twists().to_vec(), spec.labels())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::{check_morphism, check_total_hom_associativity, CheckMode};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn one_dimensional_strands_multiply_scalars() {
        let spec = BraidSpec::new(q(), vec![1, 1]).unwrap();
        let a = braid_algebra(&spec);
        assert_eq!(a.dim(), 2);
        assert_eq!(a.arity(), 3);
        let el = |x: i64, y: i64| Vector::from_terms(q(), [(0, q().from_i64(x)), (1, q().from_i64(y))]);
        let (u, v, w) = (el(2, 3), el(5, 7), el(11, 13));
        // (w1 v2 u1, w2 v1 u2)
        assert_eq!(a.apply(&[&u, &v, &w]).unwrap(), el(11 * 7 * 2, 13 * 5 * 3));
        let z = Vector::zero(q());
        assert!(a.apply(&[&z, &z, &z]).unwrap().is_zero());
    }

    #[test]
    fn carrier_dimension() {
        let spec = BraidSpec::new(q(), vec![1, 2, 1]).unwrap();
        assert_eq!(spec.dim(), 5);
        let spec = BraidSpec::new(q(), vec![2, 3]).unwrap();
        assert_eq!(spec.dim(), 12);
        for k in 0..12 {
            let (b, r, c) = spec.locate(k);
            assert_eq!(spec.index(b, r, c), k);
        }
    }

    #[test]
    fn matches_dense_composition() {
        // Oracle: multiply explicit block matrices for random elements.
        let f = FieldSpec::Prime(11);
        let spec = BraidSpec::new(f, vec![2, 1, 2]).unwrap();
        let a = braid_algebra(&spec);
        let n = spec.strands();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let args: Vec<Vector> = (0..n + 1)
            .map(|_| Vector::from_terms(f, (0..spec.dim()).map(|k| (k, f.from_i64(rng.gen_range(0..11))))))
            .collect();
        let block = |v: &Vector, b: usize| {
            let mut m = LinMap::zero(f, spec.d(b + 1), spec.d(b));
            for (&k, c) in v.iter() {
                let (bb, r, cc) = spec.locate(k);
                if bb == b {
                    m.set(r, cc, c.clone());
                }
            }
            m
        };
        let refs: Vec<&Vector> = args.iter().collect();
        let got = a.apply(&refs).unwrap();
        for i in 0..n {
            let mut acc = LinMap::identity(f, spec.d(i));
            for (t, arg) in args.iter().enumerate() {
                acc = block(arg, (i + t) % n).compose(&acc).unwrap();
            }
            assert_eq!(block(&got, i), acc, "block {i}");
        }
    }

    #[test]
    fn scalar_conjugation_twist() {
        let spec = BraidSpec::new(q(), vec![1, 1])
            .unwrap()
            .with_gammas(vec![LinMap::from_i64_rows(q(), &[&[2]]).unwrap(), LinMap::from_i64_rows(q(), &[&[3]]).unwrap()])
            .unwrap();
        let alpha = braid_twist(&spec).unwrap();
        let expected = LinMap::diagonal(q(), vec![q().ratio(2, 3).unwrap(), q().ratio(3, 2).unwrap()]);
        assert_eq!(alpha, expected);
        let a = braid_algebra(&spec);
        assert!(check_morphism(&alpha, &a, &a, CheckMode::Exhaustive).unwrap().passed());
    }

    #[test]
    fn identity_gammas() {
        let spec = BraidSpec::new(q(), vec![2, 1]).unwrap();
        let ids = vec![LinMap::identity(q(), 2), LinMap::identity(q(), 1)];
        let spec = spec.with_gammas(ids).unwrap();
        assert!(braid_twist(&spec).unwrap().is_identity());
        assert_eq!(braid_hom_algebra(&spec).unwrap(), braid_algebra(&spec));
    }

    #[test]
    fn singular_gamma_rejected() {
        let spec = BraidSpec::new(q(), vec![1, 1]).unwrap();
        let z = LinMap::zero(q(), 1, 1);
        assert!(matches!(spec.with_gammas(vec![z.clone(), z]), Err(Error::SingularMatrix)));
    }

    #[test]
    fn small_braid_is_totally_associative() {
        let spec = BraidSpec::new(q(), vec![1, 2, 1]).unwrap();
        let r = check_total_hom_associativity(&braid_algebra(&spec), CheckMode::Exhaustive).unwrap();
        assert!(r.passed());
        assert_eq!(r.tuples_checked, 5u64.pow(7));
    }
}
