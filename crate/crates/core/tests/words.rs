use lenspec::moebius::{int_matrix, GeneratorTuple};
use lenspec::words::*;
use num_rational::BigRational;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn brute_count(m: usize, n: usize) -> u128 {
    // plain nested loops, no shared code with visit_reduced
    let a = 2 * m as u8;
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &words {
            for k in 0..a {
                if w.last().map_or(true, |&l| l ^ 1 != k) {
                    let mut v = w.clone();
                    v.push(k);
                    next.push(v);
                }
            }
        }
        words = next;
    }
    words.len() as u128
}

#[test]
fn reduced_counts_match_formula() {
    for m in 1..=4 {
        for n in 1..=10 {
            let mut count = 0u128;
            visit_reduced(m, n, &[], |_| count += 1);
            let formula = 2 * m as u128 * (2 * m as u128 - 1).pow(n as u32 - 1);
            assert_eq!(count, formula, "m = {m}, n = {n}");
            assert_eq!(reduced_word_count(m, n), formula);
        }
    }
    for (m, n) in [(1, 6), (2, 6), (3, 4)] {
        assert_eq!(brute_count(m, n), reduced_word_count(m, n));
    }
}

#[test]
fn iterator_and_visitor_agree() {
    for n in 0..=6 {
        let mut visited = Vec::new();
        visit_reduced(2, n, &[], |k| visited.push(k.to_vec()));
        let iterated: Vec<Vec<u8>> = enumerate_reduced(2, n).map(|w| w.keys()).collect();
        assert_eq!(visited, iterated);
    }
    let prefix: Word = "a1 A2".parse().unwrap();
    let with: Vec<Word> = enumerate_reduced_with_prefix(2, 5, &prefix).collect();
    assert_eq!(with.len(), 27);
    assert!(with.iter().all(|w| w.letters()[..2] == *prefix.letters()));
}

fn orbit_min(keys: &[u8], oriented: bool) -> Vec<u8> {
    let n = keys.len();
    let inv: Vec<u8> = keys.iter().rev().map(|k| k ^ 1).collect();
    let mut sources = vec![keys.to_vec()];
    if !oriented {
        sources.push(inv);
    }
    sources
        .iter()
        .flat_map(|s| {
            (0..n).map(move |r| {
                let mut v = s.clone();
                v.rotate_left(r);
                v
            })
        })
        .min()
        .unwrap()
}

#[test]
fn classes_match_orbit_oracle() {
    for oriented in [false, true] {
        let classes = enumerate_classes(2, 8, false, oriented);
        for n in 1..=8 {
            let mut oracle = BTreeSet::new();
            visit_reduced(2, n, &[], |k| {
                if n == 1 || k[0] != k[n - 1] ^ 1 {
                    oracle.insert(orbit_min(k, oriented));
                }
            });
            let got: Vec<Vec<u8>> = classes
                .iter()
                .filter(|c| c.len() == n)
                .map(|c| c.representative().keys())
                .collect();
            let got_set: BTreeSet<Vec<u8>> = got.iter().cloned().collect();
            assert_eq!(got.len(), got_set.len(), "duplicates at n = {n}");
            assert_eq!(got_set, oracle, "n = {n}, oriented = {oriented}");
        }
    }
}

#[test]
fn primitive_classes_match_necklace_counts() {
    // primitive oriented classes of length n: (1/n) Σ_{d | n} μ(n/d) c(d), where
    // c(d) counts cyclically reduced words of length d
    fn mobius(n: usize) -> i64 {
        let (mut n, mut r, mut p) = (n, 1i64, 2);
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                r = -r;
            }
            p += 1;
        }
        if n > 1 {
            r = -r;
        }
        r
    }
    let cyc = |d: usize| 3i64.pow(d as u32) + 1 + if d % 2 == 0 { 2 } else { 0 };
    let classes = enumerate_classes(2, 8, true, true);
    for n in 1..=8 {
        let expected: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(n / d) * cyc(d)).sum::<i64>() / n as i64;
        let got = classes.iter().filter(|c| c.len() == n).count() as i64;
        assert_eq!(got, expected, "n = {n}");
    }
}

fn word_strategy(m: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * m, 0..max_len).prop_map(|k| Word::free_reduce(k.into_iter().map(Letter::from_key)))
}

fn pair_tuple() -> GeneratorTuple<BigRational> {
    GeneratorTuple::free(vec![int_matrix(2, 1, 1, 1), int_matrix(1, 3, 1, 4)]).unwrap()
}

proptest! {
    #[test]
    fn canonical_class_is_idempotent(w in word_strategy(3, 14)) {
        if let Ok(c) = canonical_class(&w) {
            prop_assert_eq!(canonical_class(c.representative()).unwrap(), c.clone());
            prop_assert!(is_canonical_keys(&c.representative().keys(), false));
        }
    }

    #[test]
    fn canonical_class_ignores_rotation_inversion_conjugation(
        w in word_strategy(3, 14),
        u in word_strategy(3, 6),
        r in 0usize..20,
    ) {
        if let Ok(c) = canonical_class(&w) {
            let reduced = w.cyclic_reduce();
            let rotated = reduced.rotate(r % reduced.len());
            prop_assert_eq!(&canonical_class(&rotated).unwrap(), &c);
            prop_assert_eq!(&canonical_class(&w.inverse()).unwrap(), &c);
            let conj = u.concat(&w).concat(&u.inverse());
            prop_assert_eq!(&canonical_class(&conj).unwrap(), &c);
            let oriented = canonical_class_oriented(&conj).unwrap();
            prop_assert_eq!(oriented, canonical_class_oriented(&rotated).unwrap());
        }
    }

    #[test]
    fn inverse_cancels(w in word_strategy(2, 16)) {
        prop_assert!(w.concat(&w.inverse()).is_empty());
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn evaluate_is_a_homomorphism(u in word_strategy(2, 8), v in word_strategy(2, 8)) {
        let t = pair_tuple();
        let uv = evaluate(&u.concat(&v), &t).unwrap();
        let prod = evaluate(&u, &t).unwrap().mul(&evaluate(&v, &t).unwrap());
        prop_assert_eq!(uv, prod);
        let inv = evaluate(&u.inverse(), &t).unwrap();
        prop_assert_eq!(inv, evaluate(&u, &t).unwrap().inverse());
    }

    #[test]
    fn trace_is_a_class_function(w in word_strategy(2, 10)) {
        let t = pair_tuple();
        if let Ok(c) = canonical_class(&w) {
            let tw = evaluate(&w, &t).unwrap().trace();
            let tc = evaluate(c.representative(), &t).unwrap().trace();
            prop_assert_eq!(tw, tc);
        }
    }

    #[test]
    fn primitive_detection_matches_powers(w in word_strategy(2, 6), k in 1usize..4) {
        let r = w.cyclic_reduce();
        if let Ok(c) = canonical_class(&r) {
            let p = canonical_class(&r.pow(k)).unwrap();
            if k > 1 {
                prop_assert!(!p.is_primitive());
            } else {
                prop_assert_eq!(p.is_primitive(), c.is_primitive());
            }
        }
    }
}
