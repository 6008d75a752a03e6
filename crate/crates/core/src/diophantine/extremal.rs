//! Sup-norm lower bounds on the cube and sublevel-set measure bounds.

use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::IntegerPolynomial;
use crate::error::{Error, Result};
use crate::number_theory::poly::approximate_roots;

/// Total number of grid points used for empirical sup estimates.
pub const SUP_GRID_BUDGET: f64 = 40_000.0;
const REFINE_SEEDS: usize = 8;
const REFINE_SWEEPS: usize = 3;
const GOLDEN_STEPS: usize = 60;

#[derive(Clone, Debug)]
pub struct ChebyshevReport {
    pub degree: u32,
    /// Proven lower bound for `sup |P|` on `[-1, 1]^n`.
    pub bound: f64,
    /// Largest `|P|` found; a lower estimate of the true sup.
    pub empirical_sup: f64,
    pub argmax: Vec<f64>,
}

/// Lower bound for `sup_{[-1,1]^n} |P|` with an empirical sup that must meet it.
///
/// Univariate: `|a_D| / 2^{D-1}` for any real coefficients. Several variables:
/// `2^{1-D}`, valid for nonzero integer coefficients.
pub fn chebyshev_sup_bound(p: &IntegerPolynomial) -> Result<ChebyshevReport> {
    let degree = p.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    let bound = if degree == 0 {
        p.height().to_f64().unwrap_or(f64::INFINITY)
    } else if p.nvars() == 1 {
        let lead = p.terms().iter().next_back().map(|(_, c)| c.abs()).unwrap();
        lead.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(degree as i32 - 1)
    } else {
        if !p.is_integral() {
            return Err(Error::InvalidInput(
                "the several-variable bound needs integer coefficients".into(),
            ));
        }
        2f64.powi(1 - degree as i32)
    };
    let cube = BoxDomain::cube(p.nvars());
    let (empirical_sup, argmax) = empirical_sup(p, &cube);
    if empirical_sup < bound * (1.0 - 1e-12) {
        return Err(Error::Verification(format!(
            "empirical sup {empirical_sup} below the lower bound {bound} for {p}"
        )));
    }
    Ok(ChebyshevReport { degree, bound, empirical_sup, argmax })
}

/// Axis-parallel box `∏ [lo_i, hi_i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDomain {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidInput("box needs lo < hi in every coordinate".into()));
        }
        Ok(BoxDomain { lo, hi })
    }

    pub fn cube(n: usize) -> Self {
        BoxDomain { lo: vec![-1.0; n], hi: vec![1.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }
}

/// Grid search followed by coordinate-wise golden-section refinement around
/// the best grid points. Every reported value is `|P|` at an actual point.
pub fn empirical_sup(p: &IntegerPolynomial, b: &BoxDomain) -> (f64, Vec<f64>) {
    let n = b.dim();
    let mut g = (SUP_GRID_BUDGET.powf(1.0 / n as f64) as usize).max(5);
    if g % 2 == 0 {
        g += 1;
    }
    let step: Vec<f64> = (0..n).map(|i| (b.hi[i] - b.lo[i]) / (g - 1) as f64).collect();
    let coord = |i: usize, k: usize| if k == g - 1 { b.hi[i] } else { b.lo[i] + k as f64 * step[i] };
    let mut best: Vec<(f64, Vec<f64>)> = Vec::with_capacity(REFINE_SEEDS + 1);
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    loop {
        for i in 0..n {
            x[i] = coord(i, idx[i]);
        }
        let v = p.eval_f64(&x).abs();
        if best.len() < REFINE_SEEDS || v > best.last().unwrap().0 {
            let pos = best.partition_point(|(w, _)| *w >= v);
            best.insert(pos, (v, x.clone()));
            best.truncate(REFINE_SEEDS);
        }
        let mut i = 0;
        while i < n {
            idx[i] += 1;
            if idx[i] < g {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let (mut sup, mut arg) = best[0].clone();
    for (mut v, mut x) in best {
        for _ in 0..REFINE_SWEEPS {
            for i in 0..n {
                let lo = (x[i] - step[i]).max(b.lo[i]);
                let hi = (x[i] + step[i]).min(b.hi[i]);
                let (t, w) = golden_max(|t| {
                    let mut y = x.clone();
                    y[i] = t;
                    p.eval_f64(&y).abs()
                }, lo, hi);
                if w > v {
                    v = w;
                    x[i] = t;
                }
            }
        }
        if v > sup {
            sup = v;
            arg = x;
        }
    }
    (sup, arg)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = if fc > fd { (c, fc) } else { (d, fd) };
    for _ in 0..GOLDEN_STEPS {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        for (t, v) in [(c, fc), (d, fd)] {
            if v > best.1 {
                best = (t, v);
            }
        }
    }
    for t in [a, b] {
        let v = f(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}

/// Measure of `{x in B : |P(x)| <= eps}`, exact or sampled.
#[derive(Clone, Debug)]
pub struct MeasureEstimate {
    pub epsilon: f64,
    pub estimated_measure: f64,
    /// Zero when the measure was computed from the real roots (one variable).
    pub samples: usize,
    pub confidence_width: f64,
}

#[derive(Clone, Debug)]
pub struct RemezOptions {
    /// Overrides the default constant `(4 n vol(B))^D`.
    pub c_b: Option<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for RemezOptions {
    fn default() -> Self {
        RemezOptions { c_b: None, samples: 100_000, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct RemezReport {
    pub degree: u32,
    pub c_b: f64,
    pub volume: f64,
    /// Lower estimate of `sup_B |P|`, which only enlarges the bound.
    pub sup_estimate: f64,
    /// `(C_B eps / sup)^{1/D}`.
    pub bound: f64,
    pub estimate: MeasureEstimate,
    /// `eps` reaches the sup estimate, so the sublevel set may be all of `B`.
    pub saturated: bool,
}

/// Default constant for a box in `n` dimensions: `(4 n vol(B))^D`.
///
/// It comes from the Chebyshev growth `T_D(x) <= (2x)^D` applied to the
/// convex-body Remez inequality with measure ratio `mes(E) / vol(B)`.
pub fn default_remez_constant(b: &BoxDomain, degree: u32) -> f64 {
    (4.0 * b.dim() as f64 * b.volume()).powi(degree as i32)
}

/// Sublevel-set bound `mes{|P| <= eps} <= (C_B eps / sup_B |P|)^{1/D}` with a
/// measured comparison: exact in one variable, Monte Carlo otherwise.
pub fn remez_measure_bound(
    p: &IntegerPolynomial,
    eps: f64,
    b: &BoxDomain,
    opts: &RemezOptions,
) -> Result<RemezReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    if b.dim() != p.nvars() {
        return Err(Error::InvalidInput(format!(
            "box has dimension {}, polynomial has {} variables",
            b.dim(),
            p.nvars()
        )));
    }
    let degree = p.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    let volume = b.volume();
    let (sup_estimate, _) = empirical_sup(p, b);
    let c_b = opts.c_b.unwrap_or_else(|| default_remez_constant(b, degree));
    let bound = if degree == 0 {
        if eps >= sup_estimate { volume } else { 0.0 }
    } else {
        (c_b * eps / sup_estimate).powf(1.0 / degree as f64)
    };
    let estimate = if p.nvars() == 1 {
        MeasureEstimate {
            epsilon: eps,
            estimated_measure: sublevel_measure_1d(p, eps, b.lo[0], b.hi[0]),
            samples: 0,
            confidence_width: 0.0,
        }
    } else {
        monte_carlo_measure(p, eps, b, opts.samples, opts.seed)?
    };
    if estimate.estimated_measure - estimate.confidence_width > bound {
        return Err(Error::Verification(format!(
            "sublevel measure {} exceeds the bound {bound}",
            estimate.estimated_measure
        )));
    }
    Ok(RemezReport { degree, c_b, volume, sup_estimate, bound, estimate, saturated: eps >= sup_estimate })
}

fn monte_carlo_measure(
    p: &IntegerPolynomial,
    eps: f64,
    b: &BoxDomain,
    samples: usize,
    seed: u64,
) -> Result<MeasureEstimate> {
    if samples == 0 {
        return Err(Error::InvalidInput("Monte Carlo needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; b.dim()];
    let mut hits = 0usize;
    for _ in 0..samples {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = rng.gen_range(b.lo[i]..b.hi[i]);
        }
        if p.eval_f64(&x).abs() <= eps {
            hits += 1;
        }
    }
    let n = samples as f64;
    let frac = hits as f64 / n;
    let volume = b.volume();
    // three standard errors plus one sample of slack for empty counts
    let width = volume * (3.0 * (frac * (1.0 - frac) / n).sqrt() + 1.0 / n);
    Ok(MeasureEstimate { epsilon: eps, estimated_measure: frac * volume, samples, confidence_width: width })
}

/// Measure of `{x in [a, b] : |P(x)| <= eps}` for univariate `P`, by splitting at
/// the critical points and bisecting for `P = ±eps` on each monotone piece.
pub fn sublevel_measure_1d(p: &IntegerPolynomial, eps: f64, a: f64, b: f64) -> f64 {
    let q = p.to_qpoly().expect("univariate polynomial");
    let f = |x: f64| p.eval_f64(&[x]);
    let mut cuts = vec![a, b];
    let dq = q.derivative();
    if dq.degree().is_some_and(|d| d > 0) {
        // squarefree part keeps the root finder away from clustered roots
        for (re, im) in approximate_roots(&dq.squarefree_part()) {
            if im.abs() <= 1e-6 * (1.0 + re.abs()) && re > a && re < b {
                cuts.push(re);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let (u, v) = (w[0], w[1]);
            let sign = if f(v) >= f(u) { 1.0 } else { -1.0 };
            let g = |x: f64| sign * f(x);
            // g is nondecreasing on [u, v]
            if g(v) < -eps || g(u) > eps {
                return 0.0;
            }
            let lo = if g(u) >= -eps { u } else { bisect(&g, u, v, -eps) };
            let hi = if g(v) <= eps { v } else { bisect(&g, u, v, eps) };
            (hi - lo).max(0.0)
        })
        .sum()
}

/// Crossing of a nondecreasing function with `level`, assuming `g(u) < level < g(v)`.
fn bisect(g: &impl Fn(f64) -> f64, mut u: f64, mut v: f64, level: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (u + v);
        if m <= u || m >= v {
            break;
        }
        if g(m) < level {
            u = m;
        } else {
            v = m;
        }
    }
    0.5 * (u + v)
}

/// Least-squares slope of `ln(measure)` against `ln(eps)`.
pub fn sublevel_exponent(p: &IntegerPolynomial, eps: &[f64], a: f64, b: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .map(|&e| (e.ln(), sublevel_measure_1d(p, e, a, b)))
        .filter(|(_, m)| *m > 0.0)
        .map(|(x, m)| (x, m.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn poly(s: &str) -> IntegerPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn linear_and_product() {
        let r = chebyshev_sup_bound(&poly("x")).unwrap();
        assert_eq!(r.bound, 1.0);
        assert_eq!(r.empirical_sup, 1.0);
        let r = chebyshev_sup_bound(&poly("x1*x2")).unwrap();
        assert_eq!(r.bound, 0.5);
        assert_eq!(r.empirical_sup, 1.0);
        let zero = IntegerPolynomial::zero(vec!["x".into()]);
        assert!(chebyshev_sup_bound(&zero).is_err());
        assert!(chebyshev_sup_bound(&poly("1/2*x1*x2")).is_err());
    }

    #[test]
    fn chebyshev_attains_bound() {
        let r = chebyshev_sup_bound(&IntegerPolynomial::chebyshev_monic(3)).unwrap();
        assert!((r.bound - 0.25).abs() < 1e-15);
        assert!((r.empirical_sup - 0.25).abs() < 1e-12);
    }

    #[test]
    fn interval_measure_exact() {
        let r = remez_measure_bound(&poly("x"), 0.1, &BoxDomain::cube(1), &RemezOptions::default()).unwrap();
        assert!((r.estimate.estimated_measure - 0.2).abs() < 1e-12);
        assert!(r.bound >= 0.2);
        assert!(!r.saturated);
        let r = remez_measure_bound(&poly("x^2"), 2.0, &BoxDomain::cube(1), &RemezOptions::default()).unwrap();
        assert!(r.saturated);
        assert!((r.estimate.estimated_measure - 2.0).abs() < 1e-12);
        assert!(r.bound >= r.volume);
    }

    #[test]
    fn sublevel_of_shifted_quadratic() {
        // x^2 - 1/4 on [-1,1]: |.| <= 0.01 on two intervals around ±1/2
        let p = IntegerPolynomial::univariate(&[BigRational::new((-1).into(), 4.into()), BigRational::from_integer(0.into()), BigRational::from_integer(1.into())]);
        let m = sublevel_measure_1d(&p, 0.01, -1.0, 1.0);
        let want = 2.0 * (0.26f64.sqrt() - 0.24f64.sqrt());
        assert!((m - want).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_two_variables() {
        let b = BoxDomain::cube(2);
        let opts = RemezOptions { samples: 20_000, ..Default::default() };
        let r = remez_measure_bound(&poly("x1*x2"), 0.05, &b, &opts).unwrap();
        assert!(r.estimate.samples == 20_000);
        assert!(r.estimate.estimated_measure > 0.0 && r.estimate.estimated_measure <= 4.0);
    }
}
