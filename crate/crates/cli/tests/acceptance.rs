//! Acceptance criteria 1-9. Each test prints one PASS/FAIL line.

use std::collections::BTreeSet;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use homnambu::arity::{check_reduction_conditions, expand_arity, expand_arity_k, reduce_arity, reduce_arity_seq};
use homnambu::examples::{
    braid_algebra, braid_hom_algebra, braid_twisted_product_only, bundled, bundled_braid_ternary, eigenspace_algebra,
    BraidSpec, Monomial, PolySpec, PolyVariant, TruncPolyAlgebra,
};
use homnambu::homalg::{
    block_term, check_multiplicative, check_total_hom_associativity, check_twist_residuals, derived_twist_sequence,
    twist_algebra, CheckMode, HomAlgebra,
};
use homnambu::nambu::{check_hom_nambu, commutator_algebra, commutator_product, commutator_words, n_commutator};
use homnambu::{Error, FieldSpec, MultiMap, Vector};
use homnambu_cli::format::write_algebra;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn criterion(id: u32, what: &str, limit: Duration, body: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let mut result = body();
    let took = start.elapsed();
    if result.is_ok() && took > limit {
        result = Err(format!("took {took:?}, limit {limit:?}"));
    }
    match result {
        Ok(()) => println!("criterion {id}: PASS {what} ({took:.2?})"),
        Err(msg) => {
            println!("criterion {id}: FAIL {what}: {msg}");
            panic!("criterion {id} failed: {msg}");
        }
    }
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homnambu")).args(args).output().expect("binary runs")
}

fn cli_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = cli(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

fn passes(r: homnambu::Result<homnambu::homalg::CheckReport>, what: &str) -> Result<(), String> {
    let r = r.map_err(|e| format!("{what}: {e}"))?;
    ensure(r.passed(), format!("{what}: {}", r.summary()))
}

#[test]
fn criterion_1_word_sets() {
    criterion(1, "commutator word sets", Duration::from_secs(1), || {
        let expected: [&[&str]; 3] = [
            &["+(1,2)", "-(2,1)"],
            &["+(1,2,3)", "-(2,1,3)", "-(3,1,2)", "+(3,2,1)"],
            &[
                "+(1,2,3,4)",
                "-(2,1,3,4)",
                "-(3,1,2,4)",
                "+(3,2,1,4)",
                "-(4,1,2,3)",
                "+(4,2,1,3)",
                "+(4,3,1,2)",
                "-(4,3,2,1)",
            ],
        ];
        for (n, want) in [2, 3, 4].into_iter().zip(expected) {
            let out = cli(&["words", "--n", &n.to_string()]);
            ensure(out.status.success(), format!("words --n {n} exited {:?}", out.status.code()))?;
            let text = String::from_utf8_lossy(&out.stdout);
            let got: BTreeSet<&str> = text.lines().collect();
            let want: BTreeSet<&str> = want.iter().copied().collect();
            ensure(got == want && text.lines().count() == want.len(), format!("W_{n}: got {got:?}"))?;
        }
        for n in 2..=12 {
            let ws = commutator_words(n).map_err(|e| e.to_string())?;
            ensure(ws.len() == 1 << (n - 1), format!("|W_{n}| = {}", ws.len()))?;
            let distinct: BTreeSet<_> = ws.iter().map(|w| w.perm.clone()).collect();
            ensure(distinct.len() == ws.len(), format!("W_{n} repeats a permutation"))?;
        }
        let out = cli(&["words", "--n", "1"]);
        ensure(out.status.code() == Some(2), "words --n 1 should exit 2")
    });
}

#[test]
fn criterion_2_symbolic_cancellation() {
    criterion(2, "symbolic Hom-Nambu proof and census for n = 2..6", Duration::from_secs(5), || {
        let counts = [12u64, 64, 320, 1536, 7168];
        for (n, count) in (2..=6u64).zip(counts) {
            ensure(count == (1 << (2 * n - 2)) * (n + 1), format!("count formula at n = {n}"))?;
            let (code, v) = cli_json(&["prove", "--n", &n.to_string(), "--census"]);
            let d = &v["details"];
            ensure(code == 0, format!("prove --n {n} exited {code}"))?;
            ensure(d["verdict"] == "Proved", format!("n = {n}: {}", d["verdict"]))?;
            ensure(d["terms"] == count, format!("n = {n}: {} terms", d["terms"]))?;
            let census = &d["census"];
            ensure(census["perfect"] == true && census["pairs"] == count / 2, format!("n = {n}: census {census}"))?;
            let fam = |name: &str| census["families"][name].as_u64().unwrap_or(u64::MAX);
            let total: u64 = census["families"].as_object().map_or(0, |m| m.values().filter_map(Value::as_u64).sum());
            ensure(total == count / 2, format!("n = {n}: families cover {total} pairs"))?;
            for name in ["A1-Bi1", "A4-Bi4", "Bn1-Bi3", "Bn4-Bi2"] {
                ensure(fam(name) > 0, format!("n = {n}: family {name} empty"))?;
            }
            let five_six_empty = fam("Bi1-Bj3") == 0 && fam("Bi2-Bj4") == 0;
            ensure(five_six_empty == (n == 2), format!("n = {n}: families 5-6 empty = {five_six_empty}"))?;
        }
        let (code, _) = cli_json(&["prove-commutator", "--n", "3"]);
        ensure(code == 0, "prove-commutator alias")
    });
}

#[test]
fn criterion_3_braid_example() {
    criterion(3, "braid composition algebras", Duration::from_secs(60), || {
        let q = FieldSpec::Rationals;
        for dims in [vec![2, 2], vec![1, 2, 1]] {
            let spec = BraidSpec::new(q, dims.clone()).map_err(|e| e.to_string())?;
            passes(check_total_hom_associativity(&braid_algebra(&spec), CheckMode::Exhaustive), &format!("plain {dims:?}"))?;
            let spec = spec.with_random_gammas(11).map_err(|e| e.to_string())?;
            let a = braid_hom_algebra(&spec).map_err(|e| e.to_string())?;
            passes(check_total_hom_associativity(&a, CheckMode::Exhaustive), &format!("twisted {dims:?}"))?;
            passes(check_multiplicative(&a, CheckMode::Exhaustive), &format!("twisted {dims:?} mult"))?;
        }
        // μ_α with identity twists, bundled γ: an explicit counterexample
        let wrong = braid_twisted_product_only(&bundled_braid_ternary().unwrap()).map_err(|e| e.to_string())?;
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let file = dir.path().join("wrong.json");
        std::fs::write(&file, write_algebra(&wrong)).map_err(|e| e.to_string())?;
        let (code, v) = cli_json(&["check", "assoc", file.to_str().unwrap()]);
        ensure(code == 1, format!("check assoc on μ_α with Id twists exited {code}"))?;
        let c = &v["checks"][0]["counterexample"];
        ensure(c["tuple"].as_array().map_or(0, Vec::len) == 5 && c["lhs"] != c["rhs"], format!("counterexample {c}"))?;
        // the counterexample is genuine
        let tuple: Vec<usize> = c["tuple"].as_array().unwrap().iter().map(|k| k.as_u64().unwrap() as usize - 1).collect();
        let args: Vec<Vector> = tuple.iter().map(|&k| wrong.basis(k)).collect();
        let refs: Vec<&Vector> = args.iter().collect();
        let i = c["index"].as_u64().unwrap() as usize;
        let assoc = homnambu::homalg::hom_associator(&wrong, i, &refs).map_err(|e| e.to_string())?;
        ensure(!assoc.is_zero(), "reported tuple has a zero associator")
    });
}

#[test]
fn criterion_4_nambu_numeric() {
    criterion(4, "commutator algebras satisfy the Hom-Nambu identity", Duration::from_secs(120), || {
        let q = FieldSpec::Rationals;
        let specs = [
            bundled_braid_ternary().map_err(|e| e.to_string())?,
            BraidSpec::new(q, vec![2, 2]).and_then(|s| s.with_random_gammas(5)).map_err(|e| e.to_string())?,
        ];
        for spec in &specs {
            let a = braid_hom_algebra(spec).map_err(|e| e.to_string())?;
            let n = commutator_algebra(&a).map_err(|e| e.to_string())?;
            let r = check_hom_nambu(&n, CheckMode::Exhaustive).map_err(|e| e.to_string())?;
            let d = a.dim() as u64;
            ensure(r.passed() && r.tuples_checked == d.pow(5), format!("braid {:?}: {}", spec.dims, r.summary()))?;
        }
        let e = eigenspace_algebra(7, 3, 13, 4).map_err(|e| e.to_string())?;
        let n = commutator_algebra(&e).map_err(|e| e.to_string())?;
        let r = check_hom_nambu(&n, CheckMode::Sampled { trials: 100_000, seed: 0 }).map_err(|e| e.to_string())?;
        ensure(r.passed() && r.tuples_checked == 100_000, format!("eigenspace: {}", r.summary()))
    });
}

#[test]
fn criterion_5_twist_closure() {
    criterion(5, "twists, derived sequences and residual pairs", Duration::from_secs(60), || {
        for (name, a) in bundled().map_err(|e| e.to_string())? {
            let alpha = a.common_twist().ok_or(format!("{name}: unequal twists"))?.clone();
            let mut derived = vec![("twist by alpha", twist_algebra(&a, &alpha).map_err(|e| format!("{name}: {e}"))?)];
            for k in [1, 2] {
                derived.push(("derived", derived_twist_sequence(&a, k).map_err(|e| format!("{name}: {e}"))?));
            }
            for (what, t) in &derived {
                passes(check_total_hom_associativity(t, CheckMode::Exhaustive), &format!("{name} {what}"))?;
                passes(check_multiplicative(t, CheckMode::Exhaustive), &format!("{name} {what} mult"))?;
            }
            passes(check_twist_residuals(&a, &alpha, CheckMode::Exhaustive), &format!("{name} residuals"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_6_arity_expansion() {
    criterion(6, "arity expansion", Duration::from_secs(120), || {
        let q = FieldSpec::Rationals;
        let small = BraidSpec::new(q, vec![1, 1]).and_then(|s| s.with_random_gammas(4)).map_err(|e| e.to_string())?;
        for spec in [small, bundled_braid_ternary().map_err(|e| e.to_string())?] {
            let a = braid_hom_algebra(&spec).map_err(|e| e.to_string())?;
            let e1 = expand_arity(&a).map_err(|e| e.to_string())?;
            ensure(e1.arity() == 5, "expanded arity")?;
            passes(check_total_hom_associativity(&e1, CheckMode::Exhaustive), &format!("expanded {:?}", spec.dims))?;
            passes(check_multiplicative(&e1, CheckMode::Exhaustive), &format!("expanded {:?} mult", spec.dims))?;
            let twice = expand_arity(&e1).map_err(|e| e.to_string())?;
            let k2 = expand_arity_k(&a, 2).map_err(|e| e.to_string())?;
            ensure(k2.arity() == 9, "k = 2 arity")?;
            ensure(k2.product() == twice.product() && k2.twists() == twice.twists(), "k = 2 differs from iterating")?;
        }
        Ok(())
    });
}

#[test]
fn criterion_7_arity_reduction() {
    criterion(7, "arity reduction", Duration::from_secs(10), || {
        let a = eigenspace_algebra(7, 3, 13, 1).map_err(|e| e.to_string())?;
        let x = a.basis(0);
        let r1 = reduce_arity(&a, &x).map_err(|e| e.to_string())?;
        ensure(r1.algebra.arity() == 3, "first reduction arity")?;
        passes(check_total_hom_associativity(&r1.algebra, CheckMode::Exhaustive), "ternary")?;
        let r2 = reduce_arity_seq(&a, &[x.clone(), x.clone()]).map_err(|e| e.to_string())?;
        ensure(r2.algebra.arity() == 2, "second reduction arity")?;
        passes(check_total_hom_associativity(&r2.algebra, CheckMode::Exhaustive), "binary")?;
        let again = reduce_arity(&r1.algebra, &x).map_err(|e| e.to_string())?;
        ensure(again.algebra.product() == r2.algebra.product(), "staged and sequential reductions differ")?;

        // α(X) = X^4 ≠ X
        let b = eigenspace_algebra(7, 3, 13, 4).map_err(|e| e.to_string())?;
        let report = check_reduction_conditions(&b, &b.basis(0)).map_err(|e| e.to_string())?;
        let c = report.counterexample.as_ref().ok_or("no counterexample")?;
        ensure(!report.passed() && c.identity == "alpha_{n-1}(a) = a", format!("rejection: {}", report.summary()))?;
        ensure(matches!(reduce_arity(&b, &b.basis(0)), Err(Error::ConditionsFailed { stage: 1, .. })), "reduce accepted")
    });
}

#[test]
fn criterion_8_polynomial_witness() {
    criterion(8, "parenthesization witness in truncated polynomials", Duration::from_secs(1), || {
        let (m1, m2, n) = (3usize, 1usize, 2usize);
        let spec = PolySpec::new(FieldSpec::Rationals, 2, 30, vec![m1 as u64, m2 as u64], true).map_err(|e| e.to_string())?;
        let a = TruncPolyAlgebra::new(spec, PolyVariant::TwistedProductOnly);
        let (x1, x2) = (a.x_pow(0, 1), a.x_pow(1, 1));
        let args = [&x1, &x1, &x1, &x2, &x2];
        let mono = |e1: usize, e2: usize| a.monomial(Monomial::from_word([vec![0; e1], vec![1; e2]].concat(), true));
        let left = block_term(&a, 1, &args);
        let right = block_term(&a, 3, &args);
        let want_left = (m1 * m1 * (n + 1), m2 * n);
        let want_right = (m1 * (m1 + n), m2 * m2 * n);
        ensure(want_left == (27, 2) && want_right == (15, 2), "exponent formulas")?;
        ensure(left == mono(want_left.0, want_left.1), format!("left = {left}"))?;
        ensure(right == mono(want_right.0, want_right.1), format!("right = {right}"))?;
        ensure(left != right, "parenthesizations agree")
    });
}

fn random_symmetric_product(field: FieldSpec, arity: usize, dim: usize, seed: u64) -> MultiMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = std::collections::BTreeMap::new();
    MultiMap::from_fn(field, arity, dim, |ins| {
        let mut key = ins.to_vec();
        key.sort();
        table
            .entry(key)
            .or_insert_with(|| {
                if rng.gen_bool(0.5) {
                    Vector::zero(field)
                } else {
                    Vector::term(rng.gen_range(0..dim), field.from_i64(rng.gen_range(1..7)))
                }
            })
            .clone()
    })
}

#[test]
fn criterion_9_property_suite() {
    criterion(9, "bracket properties", Duration::from_secs(30), || {
        let q = FieldSpec::Rationals;
        for n in 2..=5 {
            for seed in 0..100 {
                let mu = random_symmetric_product(q, n, 3, seed);
                let bracket = commutator_product(&mu).map_err(|e| e.to_string())?;
                ensure(bracket.is_zero(), format!("symmetric product, n = {n}, seed {seed}"))?;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 3..=5 {
            let mu = MultiMap::from_fn(q, n, 2, |_| {
                Vector::from_terms(q, (0..2).map(|k| (k, q.from_i64(rng.gen_range(-3..=3)))))
            });
            let mut rec = MultiMap::zero(q, n, 2);
            for z in commutator_words(n - 1).map_err(|e| e.to_string())? {
                let zs: Vec<usize> = z.perm.iter().map(|i| i - 1).collect();
                let s = q.from_i64(z.sign.as_i64());
                let tail: Vec<usize> = zs.iter().copied().chain([n - 1]).collect();
                let head: Vec<usize> = [n - 1].into_iter().chain(zs.iter().copied()).collect();
                rec.add_scaled(&mu.permute_inputs(&tail).unwrap(), &s).unwrap();
                rec.add_scaled(&mu.permute_inputs(&head).unwrap(), &-&s).unwrap();
            }
            ensure(commutator_product(&mu).unwrap() == rec, format!("recursion at n = {n}"))?;
        }
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mu = MultiMap::from_fn(q, 2, 3, |_| Vector::term(rng.gen_range(0..3), q.from_i64(rng.gen_range(-2..=2))));
            let a = HomAlgebra::with_identity_twists(mu);
            let u = Vector::from_terms(q, [(0, q.from_i64(1)), (2, q.from_i64(-3))]);
            let v = Vector::from_terms(q, [(1, q.from_i64(2)), (2, q.from_i64(5))]);
            let uv = n_commutator(&a, &[&u, &v]).unwrap();
            ensure(uv == n_commutator(&a, &[&v, &u]).unwrap().neg(), "binary antisymmetry")?;
        }
        // stored witness: [f1[1,1], f1[1,1], f2[1,1]] = 0 but [f1[1,1], f2[1,1], f1[1,1]] = -2 f1[2,1]
        let a = braid_hom_algebra(&bundled_braid_ternary().unwrap()).unwrap();
        let n = commutator_algebra(&a).map_err(|e| e.to_string())?;
        let (e0, e2) = (a.basis(0), a.basis(2));
        let lhs = n.algebra().apply(&[&e0, &e0, &e2]).unwrap();
        let swapped = n.algebra().apply(&[&e0, &e2, &e0]).unwrap();
        ensure(lhs.is_zero() && swapped == Vector::term(1, q.from_i64(-2)), "ternary witness")?;
        ensure(swapped != lhs.neg(), "ternary bracket antisymmetric on the witness")
    });
}
