use homnambu::examples::{braid_hom_algebra, bundled, bundled_braid_ternary};
use homnambu::homalg::{check_total_hom_associativity, twist_algebra, CheckMode, HomAlgebra};
use homnambu::nambu::{commutator_algebra, commutator_product, commutator_words, n_commutator};
use homnambu::symbolic::{expand_jacobian_terms, normalize};
use homnambu::{FieldSpec, LinMap, MultiMap, Scalar, Vector};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 101;

fn fp() -> FieldSpec {
    FieldSpec::Prime(P)
}

fn random_product(field: FieldSpec, arity: usize, dim: usize, rng: &mut ChaCha8Rng) -> MultiMap {
    MultiMap::from_fn(field, arity, dim, |_| {
        if rng.gen_bool(0.4) {
            return Vector::zero(field);
        }
        Vector::from_terms(field, (0..dim).map(|k| (k, field.from_i64(rng.gen_range(-3..=3)))))
    })
}

/// `μ(e_{i_1}, .., e_{i_n})` depends only on the multiset of indices.
fn random_symmetric_product(field: FieldSpec, arity: usize, dim: usize, seed: u64) -> MultiMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = std::collections::BTreeMap::new();
    MultiMap::from_fn(field, arity, dim, |ins| {
        let mut key = ins.to_vec();
        key.sort();
        table
            .entry(key)
            .or_insert_with(|| {
                if rng.gen_bool(0.6) {
                    Vector::zero(field)
                } else {
                    Vector::term(rng.gen_range(0..dim), field.from_i64(rng.gen_range(1..9)))
                }
            })
            .clone()
    })
}

fn vec_strategy(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, dim)
}

fn to_vector(field: FieldSpec, cs: &[i64]) -> Vector {
    Vector::from_terms(field, cs.iter().enumerate().map(|(k, &c)| (k, field.from_i64(c))))
}

fn scalar(field: FieldSpec) -> impl Strategy<Value = Scalar> {
    match field {
        FieldSpec::Rationals => (-20i64..=20, 1i64..=9).prop_map(move |(a, b)| field.ratio(a, b).unwrap()).boxed(),
        FieldSpec::Prime(p) => (0..p as i64).prop_map(move |a| field.from_i64(a)).boxed(),
    }
}

proptest! {
    #[test]
    fn field_axioms(a in scalar(fp()), b in scalar(fp()), c in scalar(fp()),
                    x in scalar(FieldSpec::Rationals), y in scalar(FieldSpec::Rationals), z in scalar(FieldSpec::Rationals)) {
        for (a, b, c) in [(a, b, c), (x, y, z)] {
            let f = a.field();
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a - &a, f.zero());
            if let Some(inv) = a.inv() {
                prop_assert_eq!(&a * &inv, f.one());
            } else {
                prop_assert!(a.is_zero());
            }
        }
    }

    #[test]
    fn products_are_multilinear(seed in any::<u64>(), u in vec_strategy(3), v in vec_strategy(3),
                                w in vec_strategy(3), c in scalar(fp()), slot in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = random_product(fp(), 3, 3, &mut rng);
        let (u, v, w) = (to_vector(fp(), &u), to_vector(fp(), &v), to_vector(fp(), &w));
        let mut combo = u.clone();
        combo.add_scaled(&v, &c);
        let with = |x: &Vector| {
            let mut args = [&w, &w, &w];
            args[slot] = x;
            mu.apply(&args).unwrap()
        };
        let mut expected = with(&u);
        expected.add_scaled(&with(&v), &c);
        prop_assert_eq!(with(&combo), expected);
    }

    #[test]
    fn binary_bracket_is_antisymmetric(seed in any::<u64>(), u in vec_strategy(3), v in vec_strategy(3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = HomAlgebra::with_identity_twists(random_product(FieldSpec::Rationals, 2, 3, &mut rng));
        let (u, v) = (to_vector(FieldSpec::Rationals, &u), to_vector(FieldSpec::Rationals, &v));
        prop_assert_eq!(n_commutator(&a, &[&u, &v]).unwrap(), n_commutator(&a, &[&v, &u]).unwrap().neg());
    }

    #[test]
    fn normal_forms_ignore_expansion_order(n in 2usize..=4, seed in any::<u64>()) {
        let terms = expand_jacobian_terms(n).unwrap();
        let mut shuffled = terms.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut a: Vec<_> = terms.iter().map(|t| normalize(t).unwrap()).collect();
        let mut b: Vec<_> = shuffled.iter().map(|t| normalize(t).unwrap()).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

}

#[test]
fn twisting_by_powers_of_alpha_stays_associative() {
    for (name, a) in bundled().unwrap().into_iter().take(3) {
        for k in 0..3 {
            let beta = a.common_twist().unwrap().pow(k).unwrap();
            let t = twist_algebra(&a, &beta).unwrap();
            assert!(check_total_hom_associativity(&t, CheckMode::Exhaustive).unwrap().passed(), "{name}, k = {k}");
        }
    }
}

#[test]
fn symmetric_products_have_zero_bracket() {
    for n in 2..=5 {
        for seed in 0..100 {
            let mu = random_symmetric_product(fp(), n, 3, seed);
            assert!(commutator_product(&mu).unwrap().is_zero(), "n = {n}, seed {seed}");
        }
    }
}

#[test]
fn bracket_recursion() {
    // [a_1..a_n] = Σ_{z ∈ W_{n-1}} (z(a_1..a_{n-1}), a_n) - (a_n, z(a_1..a_{n-1}))
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 3..=5 {
        let mu = random_product(FieldSpec::Rationals, n, 2, &mut rng);
        let mut expected = MultiMap::zero(FieldSpec::Rationals, n, 2);
        for z in commutator_words(n - 1).unwrap() {
            let zs: Vec<usize> = z.perm.iter().map(|i| i - 1).collect();
            let sign = FieldSpec::Rationals.from_i64(z.sign.as_i64());
            let mut tail = zs.clone();
            tail.push(n - 1);
            let mut head = vec![n - 1];
            head.extend_from_slice(&zs);
            expected.add_scaled(&mu.permute_inputs(&tail).unwrap(), &sign).unwrap();
            expected.add_scaled(&mu.permute_inputs(&head).unwrap(), &-&sign).unwrap();
        }
        assert_eq!(commutator_product(&mu).unwrap(), expected, "n = {n}");
    }
}

#[test]
fn ternary_bracket_is_not_antisymmetric() {
    // f1[1,1], f1[1,1], f2[1,1] in the bundled braid ternary algebra
    let a = braid_hom_algebra(&bundled_braid_ternary().unwrap()).unwrap();
    let n = commutator_algebra(&a).unwrap();
    let (e0, e2) = (a.basis(0), a.basis(2));
    let q = FieldSpec::Rationals;
    assert!(n.algebra().apply(&[&e0, &e0, &e2]).unwrap().is_zero());
    assert_eq!(n.algebra().apply(&[&e0, &e2, &e0]).unwrap(), Vector::term(1, q.from_i64(-2)));
    // swapping the first two slots does negate
    assert_eq!(n.algebra().apply(&[&e2, &e0, &e0]).unwrap(), Vector::term(1, q.from_i64(2)));
}

#[test]
fn identity_twist_is_a_fixed_point() {
    for (name, a) in bundled().unwrap() {
        let id = LinMap::identity(a.field(), a.dim());
        let t = twist_algebra(&a, &id).unwrap();
        assert_eq!(t.product(), a.product(), "{name}");
    }
}
