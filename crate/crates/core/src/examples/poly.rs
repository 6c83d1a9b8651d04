use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, LinMap, MultiMap, Vector};
use crate::homalg::{HomAlgebra, NaryHomAlgebra};

/// A monomial in `X_1..X_r`, stored as its word of 0-based variable
/// indices. Commutative monomials keep the word sorted. Ordered by degree,
/// then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn word(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `X_{var+1}^power`.
    pub fn power(var: u16, power: usize) -> Self {
        Monomial(vec![var; power])
    }

    pub fn from_word(word: Vec<u16>, commutative: bool) -> Self {
        let mut w = word;
        if commutative {
            w.sort_unstable();
        }
        Monomial(w)
    }

    /// Exponent of each variable, for the first `r` variables.
    pub fn exponents(&self, r: usize) -> Vec<usize> {
        let mut e = vec![0; r];
        for &v in &self.0 {
            e[v as usize] += 1;
        }
        e
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let v = self.0[i];
            let run = self.0[i..].iter().take_while(|&&w| w == v).count();
            if run == 1 {
                write!(f, "X{}", v + 1)?;
            } else {
                write!(f, "X{}^{}", v + 1, run)?;
            }
            i += run;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpec {
    pub field: FieldSpec,
    /// Number of variables.
    pub r: usize,
    /// The product has arity `n + 1`; basis monomials have degree `1 (mod n)`.
    pub n: usize,
    /// Degree cap; everything above it is zero.
    pub degree_cap: usize,
    /// `α(X_i) = X_i^{m_i}`, each `m_i ≡ 1 (mod n)`.
    pub m: Vec<u64>,
    pub commutative: bool,
}

impl PolySpec {
    pub fn new(field: FieldSpec, n: usize, degree_cap: usize, m: Vec<u64>, commutative: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
        }
        if m.is_empty() || m.len() > u16::MAX as usize {
            return Err(Error::InvalidArgument(format!("{} variables", m.len())));
        }
        if degree_cap < 1 {
            return Err(Error::InvalidArgument("degree cap must be at least 1".into()));
        }
        if let Some(&bad) = m.iter().find(|&&mi| mi == 0 || mi % n as u64 != 1 % n as u64) {
            return Err(Error::BadExponent(bad));
        }
        Ok(PolySpec { field, r: m.len(), n, degree_cap, m, commutative })
    }

    fn allowed_degree(&self, d: usize) -> bool {
        d >= 1 && d <= self.degree_cap && d % self.n == 1 % self.n
    }

    /// Basis monomials in `(degree, lex)` order.
    pub fn basis(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in (1..=self.degree_cap).filter(|&d| self.allowed_degree(d)) {
            let mut word = Vec::with_capacity(d);
            self.words(d, &mut word, &mut out);
        }
        out
    }

    fn words(&self, d: usize, word: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if word.len() == d {
            out.push(Monomial(word.clone()));
            return;
        }
        let start = if self.commutative { word.last().copied().unwrap_or(0) } else { 0 };
        for v in start..self.r as u16 {
            word.push(v);
            self.words(d, word, out);
            word.pop();
        }
    }

    /// Truncated product of monomials.
    pub fn mul_monomials(&self, factors: &[&Monomial]) -> Option<Monomial> {
        let d: usize = factors.iter().map(|m| m.degree()).sum();
        if d > self.degree_cap {
            return None;
        }
        let word: Vec<u16> = factors.iter().flat_map(|m| m.0.iter().copied()).collect();
        Some(Monomial::from_word(word, self.commutative))
    }

    /// `α` on a monomial: `X_i -> X_i^{m_i}`, truncated.
    pub fn alpha_monomial(&self, x: &Monomial) -> Option<Monomial> {
        let d: u64 = x.0.iter().map(|&v| self.m[v as usize]).sum();
        if d > self.degree_cap as u64 {
            return None;
        }
        let word = x.0.iter().flat_map(|&v| std::iter::repeat_n(v, self.m[v as usize] as usize)).collect();
        Some(Monomial(word))
    }
}

/// Which product and twists a truncated polynomial algebra carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyVariant {
    /// `(A_n, μ, Id)`: the totally associative algebra.
    Plain,
    /// `(A_n, αμ, α)`: the twist by `α`.
    Twisted,
    /// `(A_n, αμ, Id)`: twisted product, identity twists. On
    /// `(X_1, X_1, X_1, X_2, X_2)` with `n = 2` the outer parenthesizations
    /// give `X_1^{3 m_1^2} X_2^{2 m_2}` and `X_1^{m_1(m_1+2)} X_2^{2 m_2^2}`.
    /// They differ as soon as the cap reaches the smaller of the two degrees,
    /// and both are nonzero from the larger one on (17 and 29 for `m = (3, 1)`).
    TwistedProductOnly,
}

/// Lazy `(n+1)`-ary algebra of polynomials of degree `1 (mod n)` truncated
/// above the degree cap. Truncation is the quotient by an ideal, so every
/// identity of the untruncated algebra survives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPolyAlgebra {
    spec: PolySpec,
    variant: PolyVariant,
    degrees: Vec<usize>,
}

impl TruncPolyAlgebra {
    pub fn new(spec: PolySpec, variant: PolyVariant) -> Self {
        let degrees = (1..=spec.degree_cap).filter(|&d| spec.allowed_degree(d)).collect();
        TruncPolyAlgebra { spec, variant, degrees }
    }

    pub fn spec(&self) -> &PolySpec {
        &self.spec
    }

    pub fn variant(&self) -> PolyVariant {
        self.variant
    }

    pub fn monomial(&self, m: Monomial) -> Vector<Monomial> {
        Vector::basis(self.spec.field, m)
    }

    /// `X_{var+1}^power` as an element (not checked for membership).
    pub fn x_pow(&self, var: u16, power: usize) -> Vector<Monomial> {
        self.monomial(Monomial::power(var, power))
    }

    /// `α` applied to any element, regardless of the variant's twists.
    pub fn alpha(&self, v: &Vector<Monomial>) -> Vector<Monomial> {
        v.map_keys(|k| self.spec.alpha_monomial(k))
    }

    fn plain_mul(&self, args: &[&Vector<Monomial>]) -> Vector<Monomial> {
        let field = self.spec.field;
        let mut out = Vector::zero(field);
        let mut picks: Vec<(&Monomial, crate::Scalar)> = Vec::with_capacity(args.len());
        self.expand(args, 0, &mut picks, &mut out);
        out
    }

    fn expand<'a>(
        &self,
        args: &[&'a Vector<Monomial>],
        depth: usize,
        picks: &mut Vec<(&'a Monomial, crate::Scalar)>,
        out: &mut Vector<Monomial>,
    ) {
        if depth == args.len() {
            let factors: Vec<&Monomial> = picks.iter().map(|(m, _)| *m).collect();
            if let Some(m) = self.spec.mul_monomials(&factors) {
                let c = picks.iter().fold(self.spec.field.one(), |acc, (_, c)| &acc * c);
                out.add_term(m, c);
            }
            return;
        }
        let used: usize = picks.iter().map(|(m, _)| m.degree()).sum();
        let rest_min = args.len() - depth - 1;
        for (m, c) in args[depth].iter() {
            // every remaining factor has degree at least 1
            if used + m.degree() + rest_min > self.spec.degree_cap {
                continue;
            }
            picks.push((m, c.clone()));
            self.expand(args, depth + 1, picks, out);
            picks.pop();
        }
    }

    /// Materializes the algebra on its monomial basis in `(degree, lex)` order.
    /// Refuses bases larger than `max_dim`.
    pub fn to_finite(&self, max_dim: usize) -> Result<HomAlgebra> {
        let basis = self.spec.basis();
        if basis.len() > max_dim {
            return Err(Error::InvalidArgument(format!("basis has {} monomials, limit {max_dim}", basis.len())));
        }
        let index = |m: &Monomial| basis.binary_search(m).expect("truncated products stay in the basis");
        let arity = self.arity();
        let field = self.spec.field;
        let mut entries = Vec::new();
        let mut stack: Vec<usize> = Vec::with_capacity(arity);
        self.enumerate_nonzero(&basis, &mut stack, 0, &mut |ins| {
            let args: Vec<Vector<Monomial>> = ins.iter().map(|&i| self.monomial(basis[i].clone())).collect();
            let refs: Vec<&Vector<Monomial>> = args.iter().collect();
            for (m, c) in self.mul(&refs).iter() {
                entries.push((ins.to_vec(), index(m), c.clone()));
            }
        });
        let product = MultiMap::from_entries(field, arity, basis.len(), entries)?;
        let twist_matrix = |twisted: bool| {
            let cols: Vec<Vector> = basis
                .iter()
                .map(|m| {
                    let img = if twisted { self.alpha(&self.monomial(m.clone())) } else { self.monomial(m.clone()) };
                    img.map_keys(|k| Some(index(k)))
                })
                .collect();
            LinMap::from_columns(field, basis.len(), &cols).expect("indices in range")
        };
        let twist = twist_matrix(self.variant == PolyVariant::Twisted);
        let labels = basis.iter().map(|m| m.to_string()).collect();
        HomAlgebra::with_labels(product, vec![twist; arity - 1], labels)
    }

    fn enumerate_nonzero(&self, basis: &[Monomial], stack: &mut Vec<usize>, deg: usize, f: &mut dyn FnMut(&[usize])) {
        let arity = self.arity();
        if stack.len() == arity {
            f(stack);
            return;
        }
        let rest_min = arity - stack.len() - 1;
        for (i, m) in basis.iter().enumerate() {
            // basis is degree-sorted
            if deg + m.degree() + rest_min > self.spec.degree_cap {
                break;
            }
            stack.push(i);
            self.enumerate_nonzero(basis, stack, deg + m.degree(), f);
            stack.pop();
        }
    }
}

impl NaryHomAlgebra for TruncPolyAlgebra {
    type Key = Monomial;

    fn field(&self) -> FieldSpec {
        self.spec.field
    }

    fn arity(&self) -> usize {
        self.spec.n + 1
    }

    fn finite_dim(&self) -> Option<usize> {
        None
    }

    fn basis_key(&self, _index: usize) -> Monomial {
        unreachable!("lazy carrier has no indexed basis")
    }

    /// Degree uniform over the allowed degrees, then letters uniform.
    fn random_key(&self, rng: &mut dyn rand::RngCore) -> Monomial {
        let d = self.degrees[rng.gen_range(0..self.degrees.len())];
        let word = (0..d).map(|_| rng.gen_range(0..self.spec.r as u16)).collect();
        Monomial::from_word(word, self.spec.commutative)
    }

    fn mul(&self, args: &[&Vector<Monomial>]) -> Vector<Monomial> {
        let p = self.plain_mul(args);
        match self.variant {
            PolyVariant::Plain => p,
            PolyVariant::Twisted | PolyVariant::TwistedProductOnly => self.alpha(&p),
        }
    }

    fn twist(&self, _i: usize, v: &Vector<Monomial>) -> Vector<Monomial> {
        match self.variant {
            PolyVariant::Twisted => self.alpha(v),
            PolyVariant::Plain | PolyVariant::TwistedProductOnly => v.clone(),
        }
    }

    fn twist_mismatch(&self) -> Option<(usize, Monomial)> {
        None
    }

    fn check_element(&self, v: &Vector<Monomial>) -> Result<()> {
        if v.field() != self.spec.field {
            return Err(Error::FieldMismatch { expected: self.spec.field, found: v.field() });
        }
        for m in v.keys() {
            let sorted_ok = !self.spec.commutative || m.0.windows(2).all(|w| w[0] <= w[1]);
            if !self.spec.allowed_degree(m.degree()) || m.0.iter().any(|&x| x as usize >= self.spec.r) || !sorted_ok {
                return Err(Error::InvalidArgument(format!("{m} is not a basis monomial")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::{block_term, check_total_hom_associativity, hom_associator, CheckMode};

    fn witness_spec(commutative: bool) -> PolySpec {
        PolySpec::new(FieldSpec::Rationals, 2, 30, vec![3, 1], commutative).unwrap()
    }

    #[test]
    fn bad_exponent_rejected() {
        assert!(matches!(PolySpec::new(FieldSpec::Rationals, 2, 10, vec![2], true), Err(Error::BadExponent(2))));
        assert!(matches!(PolySpec::new(FieldSpec::Rationals, 3, 10, vec![1, 5], true), Err(Error::BadExponent(5))));
    }

    #[test]
    fn power_of_x_truncates() {
        for n in 2..5 {
            for cap in [n, n + 1, 3 * n + 1] {
                let spec = PolySpec::new(FieldSpec::Rationals, n, cap, vec![1], true).unwrap();
                let a = TruncPolyAlgebra::new(spec, PolyVariant::Plain);
                let x = a.x_pow(0, 1);
                let args = vec![&x; n + 1];
                let got = a.mul(&args);
                if n < cap {
                    assert_eq!(got, a.x_pow(0, n + 1));
                } else {
                    assert!(got.is_zero());
                }
            }
        }
    }

    #[test]
    fn parenthesization_witness_exponents() {
        for commutative in [true, false] {
            let a = TruncPolyAlgebra::new(witness_spec(commutative), PolyVariant::TwistedProductOnly);
            let (x1, x2) = (a.x_pow(0, 1), a.x_pow(1, 1));
            let args = [&x1, &x1, &x1, &x2, &x2];
            let left = block_term(&a, 1, &args);
            let middle = block_term(&a, 2, &args);
            let right = block_term(&a, 3, &args);
            let mono = |e1: usize, e2: usize| {
                a.monomial(Monomial::from_word([vec![0; e1], vec![1; e2]].concat(), commutative))
            };
            assert_eq!(left, mono(27, 2));
            assert_eq!(right, mono(15, 2));
            assert_eq!(middle, mono(21, 2));
            assert_eq!(hom_associator(&a, 1, &args).unwrap(), mono(27, 2).sub(&mono(21, 2)));
            // the two associators telescope to the outer difference
            let sum = hom_associator(&a, 1, &args).unwrap().add(&hom_associator(&a, 2, &args).unwrap());
            assert_eq!(sum, mono(27, 2).sub(&mono(15, 2)));

            let t = TruncPolyAlgebra::new(witness_spec(commutative), PolyVariant::Twisted);
            assert!(hom_associator(&t, 1, &args).unwrap().is_zero());
            assert!(hom_associator(&t, 2, &args).unwrap().is_zero());
        }
    }

    #[test]
    fn witness_degree_bounds() {
        for cap in [15, 16, 17, 28, 29] {
            let spec = PolySpec::new(FieldSpec::Rationals, 2, cap, vec![3, 1], true).unwrap();
            let a = TruncPolyAlgebra::new(spec, PolyVariant::TwistedProductOnly);
            let (x1, x2) = (a.x_pow(0, 1), a.x_pow(1, 1));
            let args = [&x1, &x1, &x1, &x2, &x2];
            let (left, right) = (block_term(&a, 1, &args), block_term(&a, 3, &args));
            assert_eq!(left != right, cap >= 17, "cap {cap}");
            assert_eq!(!left.is_zero() && !right.is_zero(), cap >= 29, "cap {cap}");
        }
    }

    #[test]
    fn unit_exponents_give_identity_twist() {
        let spec = PolySpec::new(FieldSpec::Rationals, 2, 5, vec![1, 1], true).unwrap();
        let a = TruncPolyAlgebra::new(spec, PolyVariant::Twisted);
        let fin = a.to_finite(1000).unwrap();
        assert!(fin.twists().iter().all(LinMap::is_identity));
        assert!(check_total_hom_associativity(&fin, CheckMode::Exhaustive).unwrap().passed());
    }

    #[test]
    fn sampled_checks_on_lazy_carrier() {
        for commutative in [true, false] {
            let t = TruncPolyAlgebra::new(witness_spec(commutative), PolyVariant::Twisted);
            let mode = CheckMode::Sampled { trials: 2000, seed: 3 };
            assert!(check_total_hom_associativity(&t, mode).unwrap().passed());
            assert!(matches!(check_total_hom_associativity(&t, CheckMode::Exhaustive), Err(Error::UnsupportedMode)));
        }
    }

    #[test]
    fn finite_matches_lazy() {
        let spec = PolySpec::new(FieldSpec::Prime(5), 2, 7, vec![3, 1], true).unwrap();
        let lazy = TruncPolyAlgebra::new(spec.clone(), PolyVariant::Twisted);
        let fin = lazy.to_finite(100).unwrap();
        let basis = spec.basis();
        assert_eq!(fin.dim(), basis.len());
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                for k in 0..basis.len() {
                    let lz = lazy.mul(&[&lazy.monomial(basis[i].clone()), &lazy.monomial(basis[j].clone()), &lazy.monomial(basis[k].clone())]);
                    let fv = fin.apply(&[&fin.basis(i), &fin.basis(j), &fin.basis(k)]).unwrap();
                    assert_eq!(fv.map_keys(|&x| Some(basis[x].clone())), lz);
                }
            }
        }
    }

    #[test]
    fn monomial_order_and_display() {
        let a = Monomial::from_word(vec![1, 0, 0], true);
        assert_eq!(a.to_string(), "X1^2X2");
        assert!(Monomial::power(1, 1) < Monomial::power(0, 3));
        assert!(Monomial::power(0, 3) < a);
    }
}
