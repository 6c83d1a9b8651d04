use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::Vector;

use super::NaryHomAlgebra;

/// How an identity is verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckMode {
    /// Every basis tuple. Complete for multilinear identities.
    Exhaustive,
    /// `trials` basis tuples drawn from a ChaCha8 stream seeded with `seed`.
    Sampled { trials: u64, seed: u64 },
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckMode::Exhaustive => write!(f, "exhaustive"),
            CheckMode::Sampled { trials, seed } => write!(f, "sampled ({trials} trials, seed {seed})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
}

/// A basis tuple on which the two sides of an identity differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample<K: Ord = usize> {
    pub identity: String,
    /// Which member of an indexed family failed (the `i` of `as^i`, the
    /// twist index, ...), 1-based.
    pub index: Option<usize>,
    pub tuple: Vec<K>,
    pub lhs: Vector<K>,
    pub rhs: Vector<K>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport<K: Ord = usize> {
    pub verdict: Verdict,
    pub mode: CheckMode,
    pub identity: String,
    /// Tuples evaluated. On failure this is the position of the counterexample
    /// in scan order (1-based), so it is schedule-independent.
    pub tuples_checked: u64,
    pub counterexample: Option<Counterexample<K>>,
}

impl<K: Ord> CheckReport<K> {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn summary(&self) -> String {
        match (&self.verdict, &self.counterexample) {
            (Verdict::Pass, _) => format!("{}: pass ({}, {} tuples)", self.identity, self.mode, self.tuples_checked),
            (Verdict::Fail, Some(c)) => {
                let which = c.index.map(|i| format!(" [{i}]")).unwrap_or_default();
                format!("{}: FAIL at {}{} ({}, tuple #{})", self.identity, c.identity, which, self.mode, self.tuples_checked)
            }
            (Verdict::Fail, None) => format!("{}: FAIL ({})", self.identity, self.mode),
        }
    }

    pub(crate) fn pass(identity: &str, mode: CheckMode, tuples_checked: u64) -> Self {
        CheckReport { verdict: Verdict::Pass, mode, identity: identity.to_string(), tuples_checked, counterexample: None }
    }

    pub(crate) fn fail(identity: &str, mode: CheckMode, tuples_checked: u64, c: Counterexample<K>) -> Self {
        CheckReport {
            verdict: Verdict::Fail,
            mode,
            identity: identity.to_string(),
            tuples_checked,
            counterexample: Some(c),
        }
    }

    /// Folds a follow-up check into this one: the first failure wins and
    /// tuple counts add up.
    pub(crate) fn then(self, next: impl FnOnce() -> Result<CheckReport<K>>) -> Result<CheckReport<K>> {
        if !self.passed() {
            return Ok(self);
        }
        let mut r = next()?;
        r.tuples_checked += self.tuples_checked;
        r.identity = self.identity;
        Ok(r)
    }
}

/// Two sides of one identity on one tuple.
pub(crate) struct Mismatch<K: Ord> {
    pub identity: String,
    pub index: Option<usize>,
    pub lhs: Vector<K>,
    pub rhs: Vector<K>,
}

impl<K: Ord + Clone> Mismatch<K> {
    /// `Some` iff the sides differ.
    pub fn compare(identity: &str, index: Option<usize>, lhs: Vector<K>, rhs: Vector<K>) -> Option<Self> {
        (lhs != rhs).then(|| Mismatch { identity: identity.to_string(), index, lhs, rhs })
    }
}

/// `dim^m`, or `None` when it does not fit in a `u64`.
pub fn tuple_count(dim: usize, m: usize) -> Option<u64> {
    (dim as u64).checked_pow(u32::try_from(m).ok()?)
}

/// Runs `eval` over `m`-tuples of basis keys of `alg`. Exhaustive scans go in
/// lexicographic order and report the lexicographically first failure no
/// matter how rayon splits the range; sampled scans draw every tuple up front
/// and report the earliest failing draw.
pub(crate) fn scan<A, F>(alg: &A, m: usize, identity: &str, mode: CheckMode, eval: F) -> Result<CheckReport<A::Key>>
where
    A: NaryHomAlgebra + ?Sized,
    F: Fn(&[A::Key]) -> Option<Mismatch<A::Key>> + Sync,
{
    let found = match mode {
        CheckMode::Exhaustive => {
            let dim = alg.finite_dim().ok_or(Error::UnsupportedMode)?;
            let total = tuple_count(dim, m)
                .ok_or_else(|| Error::InvalidArgument(format!("{dim}^{m} tuples do not fit in 64 bits")))?;
            let hit = (0..total).into_par_iter().find_map_first(|idx| {
                let tuple = decode(idx, dim, m, alg);
                eval(&tuple).map(|mm| (idx, tuple, mm))
            });
            match hit {
                None => return Ok(CheckReport::pass(identity, mode, total)),
                Some((idx, tuple, mm)) => (idx, tuple, mm),
            }
        }
        CheckMode::Sampled { trials, seed } => {
            if alg.finite_dim() == Some(0) && m > 0 {
                return Ok(CheckReport::pass(identity, mode, 0));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tuples: Vec<Vec<A::Key>> =
                (0..trials).map(|_| (0..m).map(|_| alg.random_key(&mut rng)).collect()).collect();
            let hit = tuples
                .par_iter()
                .enumerate()
                .find_map_first(|(t, tuple)| eval(tuple).map(|mm| (t as u64, tuple.clone(), mm)));
            match hit {
                None => return Ok(CheckReport::pass(identity, mode, trials)),
                Some((t, tuple, mm)) => {
                    // Replay before reporting: a sampled failure must be real.
                    let again = eval(&tuple).expect("sampled counterexample does not replay");
                    assert!(again.lhs == mm.lhs && again.rhs == mm.rhs, "sampled counterexample is not deterministic");
                    (t, tuple, mm)
                }
            }
        }
    };
    let (pos, tuple, mm) = found;
    let c = Counterexample { identity: mm.identity, index: mm.index, tuple, lhs: mm.lhs, rhs: mm.rhs };
    Ok(CheckReport::fail(identity, mode, pos + 1, c))
}

fn decode<A: NaryHomAlgebra + ?Sized>(mut idx: u64, dim: usize, m: usize, alg: &A) -> Vec<A::Key> {
    let mut digits = vec![0usize; m];
    for d in digits.iter_mut().rev() {
        *d = (idx % dim as u64) as usize;
        idx /= dim as u64;
    }
    digits.into_iter().map(|d| alg.basis_key(d)).collect()
}

/// Uniform basis index, shared by finite carriers.
pub(crate) fn random_index(rng: &mut dyn rand::RngCore, dim: usize) -> usize {
    rng.gen_range(0..dim)
}
