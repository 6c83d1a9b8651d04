//! Formal expansion of the Hom-Jacobian of the n-commutator over free
//! generators, and its cancellation modulo total Hom-associativity.
//!
//! Every term of the expansion is an outer product with exactly one inner
//! product block; with equal twists, sliding the block across a slot is an
//! instance of `as^i = 0` and leaves the flattened generator sequence alone.
//! Two terms with the same flattened sequence therefore evaluate equally in
//! every totally Hom-associative algebra with equal twists.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::nambu::{commutator_words, CommutatorWord, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorKind {
    X,
    Y,
}

/// `x_i` (`1 <= i <= n-1`) or `y_i` (`1 <= i <= n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub index: usize,
}

impl Generator {
    pub fn x(index: usize) -> Self {
        Generator { kind: GeneratorKind::X, index }
    }

    pub fn y(index: usize) -> Self {
        Generator { kind: GeneratorKind::Y, index }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GeneratorKind::X => write!(f, "x{}", self.index),
            GeneratorKind::Y => write!(f, "y{}", self.index),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    /// `α(g)`
    Twisted(Generator),
    /// `(g_1, .., g_n)`, undecorated.
    Block(Vec<Generator>),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Twisted(g) => write!(f, "α({g})"),
            Slot::Block(gs) => {
                let body: Vec<String> = gs.iter().map(Generator::to_string).collect();
                write!(f, "({})", body.join(","))
            }
        }
    }
}

/// Which summand of the Jacobian a term comes from: the leading double
/// bracket or the `i`-th subtracted one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    A,
    B(usize),
}

/// Where a term sits in the expansion. `kind` is 1..=4 in the `A_k`, `B_{ik}`
/// labelling; `outer_word` and `inner_word` index `W_{n-1}` for the outer and
/// inner brackets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermOrigin {
    pub part: Part,
    pub kind: u8,
    pub outer_word: usize,
    pub inner_word: usize,
}

impl TermOrigin {
    pub fn label(&self, n: usize) -> String {
        match self.part {
            Part::A => format!("A{}", self.kind),
            Part::B(i) if i == n => format!("Bn{}", self.kind),
            Part::B(i) => format!("B{i},{}", self.kind),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleTerm {
    pub sign: Sign,
    pub outer: Vec<Slot>,
    pub origin: TermOrigin,
}

impl fmt::Display for AdmissibleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.outer.iter().map(Slot::to_string).collect();
        write!(f, "{}({})", self.sign.symbol(), body.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedSequence {
    pub sign: Sign,
    pub seq: Vec<Generator>,
}

impl fmt::Display for SignedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.seq.iter().map(Generator::to_string).collect();
        write!(f, "{}{}", self.sign.symbol(), body.join(" "))
    }
}

pub fn term_count(n: usize) -> Option<u64> {
    let shift = u32::try_from(2 * n.checked_sub(1)?).ok()?;
    1u64.checked_shl(shift)?.checked_mul(n as u64 + 1)
}

/// The argument list `a_1..a_n` of one bracket, with the block somewhere.
fn apply_word(w: &CommutatorWord, args: &[Slot]) -> Vec<Slot> {
    w.perm.iter().map(|&i| args[i - 1].clone()).collect()
}

fn apply_word_gens(w: &CommutatorWord, args: &[Generator]) -> Vec<Generator> {
    w.perm.iter().map(|&i| args[i - 1]).collect()
}

/// All `2^{2n-2}(n+1)` terms of `J^n` of the n-commutator, expanded word by
/// word. Word `2j` of `W_n` is word `j` of `W_{n-1}` followed by `X_n`, word
/// `2j + 1` is `-X_n` followed by it, which gives each term its label.
pub fn expand_jacobian_terms(n: usize) -> Result<Vec<AdmissibleTerm>> {
    if n < 2 {
        return Err(Error::ArityTooSmall { found: n, min: 2 });
    }
    if term_count(n).is_none_or(|c| c > 1 << 24) {
        return Err(Error::InvalidArgument(format!("expansion at n = {n} is too large")));
    }
    let words = commutator_words(n)?;
    let xs: Vec<Generator> = (1..n).map(Generator::x).collect();
    let ys: Vec<Generator> = (1..=n).map(Generator::y).collect();
    let mut terms = Vec::with_capacity(term_count(n).unwrap_or(0) as usize);

    // [α(x_1..x_{n-1}), [y_1..y_n]]
    for (a, ow) in words.iter().enumerate() {
        for (b, iw) in words.iter().enumerate() {
            let mut args: Vec<Slot> = xs.iter().map(|&g| Slot::Twisted(g)).collect();
            args.push(Slot::Block(apply_word_gens(iw, &ys)));
            // outer append/prepend, inner append/prepend -> A1..A4
            let kind = 1 + 2 * (a % 2) as u8 + (b % 2) as u8;
            terms.push(AdmissibleTerm {
                sign: ow.sign * iw.sign,
                outer: apply_word(ow, &args),
                origin: TermOrigin { part: Part::A, kind, outer_word: a / 2, inner_word: b / 2 },
            });
        }
    }

    // -[α(y_1..y_{i-1}), [x_1..x_{n-1}, y_i], α(y_{i+1}..y_n)]
    for i in 1..=n {
        let mut inner_args = xs.clone();
        inner_args.push(ys[i - 1]);
        for (a, ow) in words.iter().enumerate() {
            for (b, iw) in words.iter().enumerate() {
                let mut args: Vec<Slot> = Vec::with_capacity(n);
                for (j, &y) in ys.iter().enumerate() {
                    if j + 1 == i {
                        args.push(Slot::Block(apply_word_gens(iw, &inner_args)));
                    } else {
                        args.push(Slot::Twisted(y));
                    }
                }
                let (outer_prepend, inner_prepend) = (a % 2 == 1, b % 2 == 1);
                let kind = if i == n {
                    1 + 2 * outer_prepend as u8 + inner_prepend as u8
                } else {
                    1 + outer_prepend as u8 + 2 * inner_prepend as u8
                };
                terms.push(AdmissibleTerm {
                    sign: -(ow.sign * iw.sign),
                    outer: apply_word(ow, &args),
                    origin: TermOrigin { part: Part::B(i), kind, outer_word: a / 2, inner_word: b / 2 },
                });
            }
        }
    }
    Ok(terms)
}

/// The signed flattened generator sequence of an admissible term.
pub fn normalize(term: &AdmissibleTerm) -> Result<SignedSequence> {
    let n = term.outer.len();
    let mut blocks = 0;
    let mut seq = Vec::with_capacity(2 * n - 1);
    for slot in &term.outer {
        match slot {
            Slot::Twisted(g) => seq.push(*g),
            Slot::Block(gs) => {
                blocks += 1;
                if gs.len() != n {
                    return Err(Error::InvalidArgument(format!("block of length {} in a {n}-ary term", gs.len())));
                }
                seq.extend_from_slice(gs);
            }
        }
    }
    if blocks != 1 {
        return Err(Error::InvalidArgument(format!("{blocks} inner blocks in {term}")));
    }
    let mut seen = seq.clone();
    seen.sort();
    let expected: Vec<Generator> = (1..n).map(Generator::x).chain((1..=n).map(Generator::y)).collect();
    if seen != expected {
        return Err(Error::InvalidArgument(format!("{term} does not use each generator once")));
    }
    Ok(SignedSequence { sign: term.sign, seq })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    /// Normal forms whose signs do not cancel, one entry per unit of net
    /// coefficient.
    Residual(Vec<SignedSequence>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub n: usize,
    pub terms: usize,
    pub normal_forms: usize,
    pub verdict: Verdict,
}

impl Proof {
    pub fn proved(&self) -> bool {
        self.verdict == Verdict::Proved
    }
}

/// Sums signs per normal form over the whole expansion.
pub fn verify_terms(n: usize, terms: &[AdmissibleTerm]) -> Result<Proof> {
    let mut net: HashMap<Vec<Generator>, i64> = HashMap::new();
    for t in terms {
        let s = normalize(t)?;
        *net.entry(s.seq).or_default() += s.sign.as_i64();
    }
    let normal_forms = net.len();
    let mut residual: Vec<SignedSequence> = Vec::new();
    for (seq, c) in net {
        let sign = if c > 0 { Sign::Plus } else { Sign::Minus };
        for _ in 0..c.unsigned_abs() {
            residual.push(SignedSequence { sign, seq: seq.clone() });
        }
    }
    residual.sort();
    let verdict = if residual.is_empty() { Verdict::Proved } else { Verdict::Residual(residual) };
    Ok(Proof { n, terms: terms.len(), normal_forms, verdict })
}

pub fn verify_cancellation(n: usize) -> Result<Proof> {
    verify_terms(n, &expand_jacobian_terms(n)?)
}

/// Cancelling pair types. The first six are the families of the main proof;
/// the last two are the pairs already cancelled when the leading bracket and
/// the `i = n` bracket are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A1Bi1,
    A4Bi4,
    Bn1Bi3,
    Bn4Bi2,
    Bi1Bj3,
    Bi2Bj4,
    A2Bn3,
    A3Bn2,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::A1Bi1,
        Family::A4Bi4,
        Family::Bn1Bi3,
        Family::Bn4Bi2,
        Family::Bi1Bj3,
        Family::Bi2Bj4,
        Family::A2Bn3,
        Family::A3Bn2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::A1Bi1 => "A1-Bi1",
            Family::A4Bi4 => "A4-Bi4",
            Family::Bn1Bi3 => "Bn1-Bi3",
            Family::Bn4Bi2 => "Bn4-Bi2",
            Family::Bi1Bj3 => "Bi1-Bj3",
            Family::Bi2Bj4 => "Bi2-Bj4",
            Family::A2Bn3 => "A2-Bn3",
            Family::A3Bn2 => "A3-Bn2",
        }
    }

    /// One of the six families of the main proof.
    pub fn is_main(self) -> bool {
        !matches!(self, Family::A2Bn3 | Family::A3Bn2)
    }

    fn classify(n: usize, p: &TermOrigin, q: &TermOrigin) -> Option<Family> {
        use Part::*;
        let inner_b = |part: Part| matches!(part, B(i) if i < n);
        let pair = |a: &TermOrigin, b: &TermOrigin| -> Option<Family> {
            match (a.part, a.kind, b.part, b.kind) {
                (A, 1, bp, 1) if inner_b(bp) => Some(Family::A1Bi1),
                (A, 4, bp, 4) if inner_b(bp) => Some(Family::A4Bi4),
                (B(i), 1, bp, 3) if i == n && inner_b(bp) => Some(Family::Bn1Bi3),
                (B(i), 4, bp, 2) if i == n && inner_b(bp) => Some(Family::Bn4Bi2),
                (B(i), 1, B(j), 3) if inner_b(B(i)) && inner_b(B(j)) && i != j => Some(Family::Bi1Bj3),
                (B(i), 2, B(j), 4) if inner_b(B(i)) && inner_b(B(j)) && i != j => Some(Family::Bi2Bj4),
                (A, 2, B(i), 3) if i == n => Some(Family::A2Bn3),
                (A, 3, B(i), 2) if i == n => Some(Family::A3Bn2),
                _ => None,
            }
        };
        pair(p, q).or_else(|| pair(q, p))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    pub terms: Vec<AdmissibleTerm>,
    /// Index pairs into `terms`, positive term first.
    pub pairs: Vec<(usize, usize, Family)>,
}

impl Census {
    pub fn family_counts(&self) -> BTreeMap<Family, usize> {
        let mut counts: BTreeMap<Family, usize> = Family::ALL.iter().map(|&f| (f, 0)).collect();
        for (_, _, f) in &self.pairs {
            *counts.get_mut(f).expect("all families present") += 1;
        }
        counts
    }
}

/// Kuhn augmenting path from positive term `u`.
fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], match_neg: &mut [Option<usize>]) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if match_neg[v].is_none_or(|w| augment(w, adj, seen, match_neg)) {
            match_neg[v] = Some(u);
            return true;
        }
    }
    false
}

/// Pairs every term with a term of opposite sign and equal normal form such
/// that the pair's labels form one of the [`Family`] types. Fails with
/// `MatchingFailed(k)` when `k` terms are left unpaired.
pub fn cancellation_census(n: usize) -> Result<Census> {
    let terms = expand_jacobian_terms(n)?;
    let mut buckets: BTreeMap<Vec<Generator>, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (idx, t) in terms.iter().enumerate() {
        let s = normalize(t)?;
        let entry = buckets.entry(s.seq).or_default();
        match s.sign {
            Sign::Plus => entry.0.push(idx),
            Sign::Minus => entry.1.push(idx),
        }
    }
    let mut pairs = Vec::with_capacity(terms.len() / 2);
    let mut unmatched = 0;
    for (pos, neg) in buckets.values() {
        let adj: Vec<Vec<usize>> = pos
            .iter()
            .map(|&p| {
                (0..neg.len())
                    .filter(|&k| Family::classify(n, &terms[p].origin, &terms[neg[k]].origin).is_some())
                    .collect()
            })
            .collect();
        let mut match_neg: Vec<Option<usize>> = vec![None; neg.len()];
        for u in 0..pos.len() {
            let mut seen = vec![false; neg.len()];
            augment(u, &adj, &mut seen, &mut match_neg);
        }
        let matched = match_neg.iter().flatten().count();
        unmatched += pos.len() + neg.len() - 2 * matched;
        for (k, m) in match_neg.iter().enumerate() {
            if let Some(u) = m {
                let (p, q) = (pos[*u], neg[k]);
                let family = Family::classify(n, &terms[p].origin, &terms[q].origin).expect("edge is labelled");
                pairs.push((p, q, family));
            }
        }
    }
    if unmatched > 0 {
        return Err(Error::MatchingFailed(unmatched));
    }
    pairs.sort();
    Ok(Census { n, terms, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_counts() {
        for (n, c) in [(2, 12), (3, 64), (4, 320), (5, 1536), (6, 7168)] {
            assert_eq!(expand_jacobian_terms(n).unwrap().len(), c);
            assert_eq!(term_count(n), Some(c as u64));
        }
        assert!(matches!(expand_jacobian_terms(1), Err(Error::ArityTooSmall { found: 1, .. })));
    }

    #[test]
    fn label_sizes() {
        // each label A_k, B_{ik} collects |W_{n-1}|^2 terms
        let n = 4;
        let terms = expand_jacobian_terms(n).unwrap();
        let mut per_label: HashMap<(Part, u8), usize> = HashMap::new();
        for t in &terms {
            *per_label.entry((t.origin.part, t.origin.kind)).or_default() += 1;
        }
        assert_eq!(per_label.len(), 4 * (n + 1));
        assert!(per_label.values().all(|&c| c == 16));
    }

    #[test]
    fn n2_terms_by_hand() {
        let terms = expand_jacobian_terms(2).unwrap();
        let shown: Vec<String> = terms.iter().map(|t| format!("{} {}", t.origin.label(2), t)).collect();
        assert!(shown.contains(&"A1 +(α(x1), (y1,y2))".to_string()));
        assert!(shown.contains(&"A4 +((y2,y1), α(x1))".to_string()));
        assert!(shown.contains(&"B1,2 +(α(y2), (x1,y1))".to_string()));
        assert!(shown.contains(&"Bn3 +((x1,y2), α(y1))".to_string()));
        let t = terms.iter().find(|t| t.to_string() == "+(α(y2), (x1,y1))").unwrap();
        assert_eq!(normalize(t).unwrap().to_string(), "+y2 x1 y1");
    }

    #[test]
    fn normalize_rejects_malformed() {
        let origin = TermOrigin { part: Part::A, kind: 1, outer_word: 0, inner_word: 0 };
        let bad = AdmissibleTerm {
            sign: Sign::Plus,
            outer: vec![Slot::Twisted(Generator::x(1)), Slot::Twisted(Generator::y(1))],
            origin,
        };
        assert!(normalize(&bad).is_err());
        let dup = AdmissibleTerm {
            sign: Sign::Plus,
            outer: vec![Slot::Twisted(Generator::x(1)), Slot::Block(vec![Generator::x(1), Generator::y(1)])],
            origin,
        };
        assert!(normalize(&dup).is_err());
    }

    #[test]
    fn proved_for_small_arities() {
        for n in 2..=6 {
            let p = verify_cancellation(n).unwrap();
            assert!(p.proved(), "n = {n}: {:?}", p.verdict);
        }
    }

    #[test]
    fn dropping_a_term_leaves_a_residual() {
        let mut terms = expand_jacobian_terms(3).unwrap();
        let gone = terms.remove(5);
        let p = verify_terms(3, &terms).unwrap();
        let expected = normalize(&gone).unwrap();
        assert_eq!(
            p.verdict,
            Verdict::Residual(vec![SignedSequence { sign: -expected.sign, seq: expected.seq }])
        );
    }

    #[test]
    fn census_is_perfect() {
        for n in 2..=5 {
            let c = cancellation_census(n).unwrap();
            assert_eq!(c.pairs.len() * 2, c.terms.len());
            let counts = c.family_counts();
            let w = 1usize << (2 * n - 4);
            assert_eq!(counts[&Family::A2Bn3], w);
            assert_eq!(counts[&Family::A3Bn2], w);
            for f in [Family::A1Bi1, Family::A4Bi4, Family::Bn1Bi3, Family::Bn4Bi2] {
                assert_eq!(counts[&f], w, "{f} at n = {n}");
            }
            let empty = counts[&Family::Bi1Bj3] == 0 && counts[&Family::Bi2Bj4] == 0;
            assert_eq!(empty, n == 2);
        }
    }
}
