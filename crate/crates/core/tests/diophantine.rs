use std::collections::BTreeMap;

use lenspec::diophantine::*;
use lenspec::moebius::{preset, sample_tuple, AnyTuple, GeneratorTuple, Matrix2};
use lenspec::spectrum::{build_spectrum, gap_scan, GapStatus};
use lenspec::words::{evaluate, visit_reduced, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn words_up_to(m: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 1..=n {
        visit_reduced(m, len, &[], |k| out.push(Word::from_keys(k)));
    }
    out
}

#[test]
fn monic_chebyshev_attains_extremal_value() {
    for d in 1..=8 {
        let r = chebyshev_sup_bound(&IntegerPolynomial::chebyshev_monic(d)).unwrap();
        let want = 2f64.powi(1 - d as i32);
        assert!((r.bound - want).abs() < 1e-15);
        // T_D(cos θ) = cos Dθ, so the closed-form sup is exactly 2^{1-D}
        assert!((r.empirical_sup - want).abs() < 1e-10, "degree {d}: {}", r.empirical_sup);
    }
}

#[test]
fn random_integer_polynomials_meet_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=6u32);
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=5) {
            let mut e = vec![0u32; n];
            let mut left = rng.gen_range(0..=d);
            for k in 0..n {
                let take = if k == n - 1 { left } else { rng.gen_range(0..=left) };
                e[k] = take;
                left -= take;
            }
            terms.push((e, q(rng.gen_range(-5..=5), 1)));
        }
        let p = IntegerPolynomial::from_terms(IntegerPolynomial::default_names(n), terms).unwrap();
        let Some(deg) = p.degree() else { continue };
        let r = chebyshev_sup_bound(&p).unwrap();
        if n > 1 && deg > 0 {
            assert_eq!(r.bound, 2f64.powi(1 - deg as i32));
        }
        assert!(r.empirical_sup >= r.bound);
        checked += 1;
    }
}

#[test]
fn sublevel_measure_of_monomials() {
    for d in 1..=4u32 {
        let mut coeffs = vec![BigRational::zero(); d as usize + 1];
        coeffs[d as usize] = BigRational::one();
        let p = IntegerPolynomial::univariate(&coeffs);
        for eps in [1e-6, 1e-5, 1e-4, 1e-3] {
            let m = sublevel_measure_1d(&p, eps, -1.0, 1.0);
            let want = 2.0 * eps.powf(1.0 / d as f64);
            assert!((m - want).abs() <= 1e-9 * want, "D={d} eps={eps}: {m} vs {want}");
            let r = remez_measure_bound(&p, eps, &BoxDomain::cube(1), &RemezOptions::default()).unwrap();
            assert!(r.bound >= m);
        }
        let slope = sublevel_exponent(&p, &[1e-6, 1e-5, 1e-4, 1e-3], -1.0, 1.0).unwrap();
        assert!((slope - 1.0 / d as f64).abs() <= 0.02 / d as f64);
    }
}

#[test]
fn monte_carlo_measure_agrees_with_exact_area() {
    // {|x1 + x2| <= 0.2} in [-1,1]^2: the square minus two triangles with legs 1.8
    let p: IntegerPolynomial = "x1 + x2".parse().unwrap();
    let r = remez_measure_bound(&p, 0.2, &BoxDomain::cube(2), &RemezOptions::default()).unwrap();
    assert!((r.estimate.estimated_measure - 0.76).abs() <= r.estimate.confidence_width);
    assert!(r.bound >= 0.76);
}

#[test]
fn summability_verdicts() {
    let lin = DegreeSequence::linear(q(1, 1));
    assert!(borel_cantelli_check(&Sequence::super_geometric(2, q(1, 1)), &lin, None).unwrap().converges);
    assert!(!borel_cantelli_check(&Sequence::geometric(2, q(1, 1)), &lin, None).unwrap().converges);
    for g in 2..=4 {
        let (e, d, m) = quadexp_series(g, q(1, 100));
        assert!(borel_cantelli_check(&e, &d, Some(&m)).unwrap().converges);
        let (e, d, m) = quadexp_series(g, q(0, 1));
        assert!(!borel_cantelli_check(&e, &d, Some(&m)).unwrap().converges);
    }
}

#[test]
fn trace_degree_equals_word_length() {
    for w in words_up_to(2, 6) {
        let t = trace_polynomial(&w, 2, false).unwrap();
        assert_eq!(t.numerator.degree(), Some(w.len() as u32), "{w}");
        assert!(t.numerator.is_integral());
    }
}

/// Rewrites `a_j^α d_j^k` (with `α >= k`) as `a_j^{α-k} (1 + b_j c_j)^k`.
fn reduce_by_determinant(p: &IntegerPolynomial, m: usize) -> IntegerPolynomial {
    let names = p.names().to_vec();
    let mut out = IntegerPolynomial::zero(names.clone());
    for (e, c) in p.terms() {
        let mut term = IntegerPolynomial::zero(names.clone());
        let mut mono = e.clone();
        let mut factors = Vec::new();
        for j in 0..m {
            let k = e[4 * j + 3];
            assert!(e[4 * j] >= k);
            mono[4 * j] -= k;
            mono[4 * j + 3] = 0;
            let mut det = IntegerPolynomial::constant(names.clone(), BigRational::one());
            let mut bc = vec![0; names.len()];
            bc[4 * j + 1] = 1;
            bc[4 * j + 2] = 1;
            det.add_term(bc, BigRational::one());
            factors.push(det.pow(k));
        }
        term.add_term(mono, c.clone());
        for f in factors {
            term = term.mul(&f);
        }
        out = out.add(&term);
    }
    out
}

#[test]
fn elimination_is_a_symbolic_identity() {
    for w in words_up_to(2, 4) {
        let plain = trace_polynomial(&w, 2, false).unwrap();
        let elim = trace_polynomial(&w, 2, true).unwrap();
        let cleared = plain.numerator.mul(&elim.denominator());
        assert_eq!(reduce_by_determinant(&cleared, 2), elim.numerator, "{w}");
        assert!(elim.numerator.degree().unwrap() <= elim.degree_bound);
    }
}

fn random_sl2(rng: &mut ChaCha8Rng) -> Matrix2<BigRational> {
    loop {
        let a = q(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let b = q(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let c = q(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        if a.is_zero() {
            continue;
        }
        let d = (BigRational::one() + &b * &c) / &a;
        return Matrix2::new(a, b, c, d).unwrap();
    }
}

#[test]
fn trace_polynomial_matches_matrix_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let words = words_up_to(3, 4);
    let polys: BTreeMap<String, (TracePolynomial, TracePolynomial)> = words
        .iter()
        .step_by(7)
        .map(|w| (w.to_string(), (trace_polynomial(w, 3, false).unwrap(), trace_polynomial(w, 3, true).unwrap())))
        .collect();
    for _ in 0..100 {
        let gens: Vec<_> = (0..3).map(|_| random_sl2(&mut rng)).collect();
        let values: Vec<BigRational> = gens.iter().flat_map(|g| g.entries().map(|x| x.clone())).collect();
        let t = GeneratorTuple::free(gens).unwrap();
        for (s, (plain, elim)) in &polys {
            let w: Word = s.parse().unwrap();
            let tr = evaluate(&w, &t).unwrap().trace();
            assert_eq!(plain.numerator.eval_rational(&values), tr);
            let den = elim.denominator().eval_rational(&values);
            assert_eq!(elim.numerator.eval_rational(&values), tr * den);
        }
    }
}

#[test]
fn quadexp_gaps_agree_with_gap_scan() {
    let cutoff = 4;
    let r = quadexp_check(&QuadExpOptions { cutoff, tuple_count: 2, seed: 3, ..Default::default() }).unwrap();
    assert_eq!((r.base, r.exponent_constant), (7, 48));
    for s in &r.seeds {
        assert!(s.log10_k.is_finite());
        assert!(s.violations.is_empty());
        let t = sample_tuple(4, true, s.seed, 1.0).unwrap();
        for level in 1..=cutoff {
            let scan = gap_scan(&build_spectrum(&t, level));
            let by_pair: BTreeMap<(String, String), _> = scan
                .pairs
                .iter()
                .map(|p| ((p.first.to_string(), p.second.to_string()), p))
                .collect();
            for (l, p) in s.pairs.iter().filter(|(l, _)| *l == level) {
                let other = by_pair[&(p.first.to_string(), p.second.to_string())];
                assert_eq!(*l, level);
                assert_eq!(p.status, other.status);
                assert_eq!(p.gap.lo(), other.gap.lo());
                assert_eq!(p.gap.hi(), other.gap.hi());
            }
        }
    }
}

#[test]
fn quadexp_excludes_equal_lengths() {
    let t = sample_tuple(4, true, 1, 1.0).unwrap();
    let s = quadexp_seed(&t, 1, 4, 7, 48.1);
    assert!(s.equal_pairs > 0);
    let distinct: usize = s.levels.iter().map(|l| l.pairs).sum();
    assert_eq!(distinct + s.equal_pairs + s.undecided_pairs, s.pairs.len());
    for (_, p) in &s.pairs {
        if p.status == GapStatus::Equal {
            assert!(p.gap.is_point() && !p.gap.is_positive());
        }
    }
}

#[test]
fn word_identity_bounds() {
    let AnyTuple::Rational(sanov) = preset("sanov").unwrap() else { panic!() };
    let r = word_identity_check_tuple(&sanov, 0.1, 8, "sanov").unwrap();
    assert!(r.min_norm >= BigRational::one());
    assert!(r.violations.is_empty());
    assert_eq!(r.words_checked, (1..=8).map(|n| 4 * 3u64.pow(n - 1)).sum::<u64>());

    let r = word_identity_bound_check(2, 0.1, 8, 20, 0).unwrap();
    assert_eq!(r.tuples.len(), 20);
    assert_eq!(r.violation_count(), 0);
    for t in &r.tuples {
        assert!(t.min_norm > BigRational::zero());
    }
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn poly3() -> impl Strategy<Value = IntegerPolynomial> {
        prop::collection::vec((prop::collection::vec(0u32..4, 3), -20i64..=20), 0..8).prop_map(|terms| {
            let terms = terms.into_iter().map(|(e, c)| (e, q(c, 1)));
            IntegerPolynomial::from_terms(IntegerPolynomial::default_names(3), terms).unwrap()
        })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(p in poly3()) {
            let text = p.to_string();
            let back: IntegerPolynomial = text.parse().unwrap();
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(back.is_zero(), p.is_zero());
        }

        #[test]
        fn evaluation_is_a_ring_map(p in poly3(), r in poly3(), x in prop::collection::vec(-5i64..=5, 3)) {
            let pt: Vec<BigRational> = x.iter().map(|&v| q(v, 1)).collect();
            let (pv, rv) = (p.eval_rational(&pt), r.eval_rational(&pt));
            prop_assert_eq!(p.mul(&r).eval_rational(&pt), &pv * &rv);
            prop_assert_eq!(p.add(&r).eval_rational(&pt), &pv + &rv);
        }

        #[test]
        fn chebyshev_bound_below_sup(p in poly3()) {
            prop_assume!(!p.is_zero());
            let rep = chebyshev_sup_bound(&p).unwrap();
            prop_assert!(rep.empirical_sup >= rep.bound * (1.0 - 1e-12));
        }
    }
}
