//! Exact scalars over the rationals and prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The coefficient field of every vector, map and algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    /// Arbitrary-precision rationals.
    Rationals,
    /// The prime field `F_p`.
    Prime(u64),
}

impl FieldSpec {
    /// Builds `F_p`, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Residue { value: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => {
                let r = (v as i128).rem_euclid(p as i128) as u64;
                Scalar::Residue { value: r, p }
            }
        }
    }

    /// `num / den` as a field element; `den` must be invertible.
    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or(Error::DivisionByZero)?;
        Ok(&self.from_i64(num) * &inv)
    }

    /// Parses the canonical text form: `num/den` (or `num`) over Q, a decimal
    /// residue over `F_p`. Negative and unreduced inputs are normalized.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid scalar '{s}' for field {self}"));
        match self {
            FieldSpec::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let num: BigInt = num.parse().map_err(|_| bad())?;
                let den: BigInt = den.parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            FieldSpec::Prime(p) => {
                let v: i128 = s.parse().map_err(|_| bad())?;
                Ok(Scalar::Residue { value: v.rem_euclid(p as i128) as u64, p })
            }
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact field element. Residues carry their modulus so that arithmetic
/// needs no external context; mixing fields is a logic error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, p } => Scalar::Residue { value: pow_mod(*value, p - 2, *p), p: *p },
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The residue of an `F_p` element.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, p: q }) if p == q => {
                Scalar::Residue { value: ((*a as u128 + *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, p: q }) if p == q => {
                Scalar::Residue { value: ((*a as u128 + (*p - *b) as u128) % *p as u128) as u64, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, p: q }) if p == q => {
                Scalar::Residue { value: ((*a as u128 * *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, p } => Scalar::Residue { value: (p - value) % p, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc: u128 = 1 % m;
    let mut base = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The smallest residue of multiplicative order exactly `n` in `F_p`.
pub fn primitive_root_of_unity(p: u64, n: u64) -> Result<Scalar> {
    let field = FieldSpec::prime(p)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("root of unity order must be >= 2, got {n}")));
    }
    if !(p - 1).is_multiple_of(n) {
        return Err(Error::NoRootExists { p, n });
    }
    let factors = prime_factors(n);
    for z in 2..p {
        if pow_mod(z, n, p) != 1 {
            continue;
        }
        if factors.iter().all(|q| pow_mod(z, n / q, p) != 1) {
            return Ok(field.from_i64(z as i64));
        }
    }
    // F_p^* is cyclic, so a root exists whenever n | p - 1.
    unreachable!("no element of order {n} in F_{p}")
}
