use lenspec::moebius::{is_schottky, preset, sample_tuple, AnyTuple, GeneratorTuple, Matrix2, Relation};
use lenspec::smallgap::*;
use lenspec::spectrum::length_of;
use lenspec::words::evaluate;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

fn rational(name: &str) -> GeneratorTuple<BigRational> {
    match preset(name).unwrap() {
        AnyTuple::Rational(t) => t,
        _ => panic!("{name} is not rational"),
    }
}

fn f(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

/// `2 log |tr(P1 P2)|` from the rank-one eigenprojections, computed in f64.
fn closed_form_kappa(a1: &Matrix2<BigRational>, a2: &Matrix2<BigRational>) -> f64 {
    let proj = |m: &Matrix2<BigRational>| {
        let (a, b, c, d) = (f(&m.a), f(&m.b), f(&m.c), f(&m.d));
        let tr = a + d;
        let mu = (tr + tr.signum() * (tr * tr - 4.0).sqrt()) / 2.0;
        let u = [b, mu - a];
        let w = [c, mu - a];
        let s = w[0] * u[0] + w[1] * u[1];
        [[u[0] * w[0] / s, u[0] * w[1] / s], [u[1] * w[0] / s, u[1] * w[1] / s]]
    };
    let (p, q) = (proj(a1), proj(a2));
    let tr = p[0][0] * q[0][0] + p[0][1] * q[1][0] + p[1][0] * q[0][1] + p[1][1] * q[1][1];
    2.0 * tr.abs().ln()
}

#[test]
fn asymptote_on_hyperbolic_sanov() {
    let t = rational("sanov-hyperbolic");
    let (a1, a2) = (t.generator(0), t.generator(1));
    let model = fit_asymptote(a1, a2, 12, 12).unwrap();
    let levels = model.residual_by_level();
    assert!(levels[..6].windows(2).all(|w| w[1] < w[0]), "{levels:?}");
    assert!((model.kappa - closed_form_kappa(a1, a2)).abs() < 1e-9);
    assert_eq!(model.lambda1, leading_log_eigenvalue(a1, SMALLGAP_PRECISION).unwrap());
    assert_eq!(model.lambda2, leading_log_eigenvalue(a2, SMALLGAP_PRECISION).unwrap());
    assert!(model.residual_bound < 1e-3);
}

#[test]
fn target_search_examples() {
    let t = rational("sanov-hyperbolic");
    let (a1, a2) = (t.generator(0), t.generator(1));
    let model = fit_asymptote(a1, a2, 8, 8).unwrap();
    let exact = length_of(&a1.pow(3).mul(&a2.pow(2)), SMALLGAP_PRECISION).unwrap();
    let hit = dense_target_search(&model, exact.mid_f64(), 1e-12, 64, 64).unwrap();
    assert_eq!((hit.k, hit.m), (3, 2));

    let hit = dense_target_search(&model, 20.0, 0.05, 64, 64);
    // exhaustive oracle over the same caps
    let mut any = false;
    for k in 1..=12 {
        for m in 1..=12 {
            let l = length_of(&a1.pow(k).mul(&a2.pow(m)), 128).unwrap().mid_f64();
            any |= (l - 20.0).abs() < 0.05;
        }
    }
    assert_eq!(hit.is_ok(), any);
    if let Err(e) = &hit {
        assert!(matches!(e, lenspec::Error::CapsExhausted { .. }));
    }

    let lam1 = model.lambda1.mid_f64();
    for i in 0..20 {
        let target = model.kappa + 2.0 * (lam1 + model.lambda2.mid_f64()) + 1.0 + 0.37 * i as f64;
        assert!(dense_target_search(&model, target, lam1 * 1.01, 64, 64).is_ok(), "target {target}");
    }
}

#[test]
fn equalize_on_schottky_triple() {
    let t = rational("schottky-triple");
    let r = equalize_lengths(&t, 8, 0.25).unwrap();
    assert!(r.exact);
    assert!(r.achieved_gap.is_point() && r.achieved_gap.contains_zero());
    assert_eq!(r.matched_length_before, r.matched_length_after);
    assert_eq!(r.target_length_after, r.matched_length_after);
    assert_ne!(r.target_word, r.matched_word);
    assert!(is_schottky(&r.tuple));
    let x = evaluate(&r.target_word, &r.tuple).unwrap().trace();
    let w = evaluate(&r.matched_word, &r.tuple).unwrap().trace();
    assert_eq!(x.abs(), w.abs());
    // |η c| is the trace deficit, bounded through the length window
    let before = evaluate(&r.target_word, &t).unwrap();
    let deficit = (&r.eta * &before.c).abs();
    let scale = before.trace().abs().max(w.abs());
    assert!(f(&deficit) <= f(&scale) * 0.25);
}

#[test]
fn loose_delta_gives_small_eta_scale() {
    let t = rational("schottky-triple");
    let r = equalize_lengths(&t, 6, 1e3).unwrap();
    assert!(r.exact);
}

#[test]
fn schedule_exp_three_pairs() {
    let t = rational("schottky-triple");
    let func: GapFunction = "exp:1".parse().unwrap();
    let s = run_schedule(&t, &func, 3, &ScheduleOptions::default()).unwrap();
    assert_eq!(s.entries.len(), 3);
    assert!(s.entries.windows(2).all(|w| w[0].max_length.certainly_lt(&w[1].max_length)));
    assert!(s.entries.iter().all(|e| e.pass && e.result.exact));
    let shifted = unipotent_shift(t.generator(2), &s.total_eta);
    assert_eq!(&shifted, s.final_tuple.generator(2));
    assert!(f(&s.total_eta.abs()) <= s.eta_abs_sum * (1.0 + 1e-12));

    let one = run_schedule(&t, &func, 1, &ScheduleOptions::default()).unwrap();
    let direct = equalize_lengths(&t, ScheduleOptions::default().start_n, ScheduleOptions::default().delta).unwrap();
    assert_eq!(one.entries[0].result.eta, direct.eta);
}

#[test]
fn genus_three_repair_keeps_equality() {
    let t = sample_tuple(6, true, 7, 1.0).unwrap();
    assert_eq!(t.relation(), Relation::Genus(3));
    let r = equalize_lengths(&t, 6, 0.5).unwrap();
    assert!(r.repaired && r.exact);
    assert_eq!(r.tuple.relation(), Relation::Genus(3));
    assert_eq!(r.matched_length_before, r.matched_length_after);
    for i in 0..2 {
        assert_eq!(r.tuple.generator(i), t.generator(i));
    }
}
