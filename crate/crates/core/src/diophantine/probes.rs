//! Empirical probes of the almost-sure Diophantine bounds on sampled tuples.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::moebius::{sample_tuple, GeneratorTuple, Matrix2, Scalar};
use crate::spectrum::{build_spectrum, compare_records, GapPair, GapStatus, MAX_PRECISION};
use crate::words::{reduced_word_count, Word};

/// Largest number of reduced words a probe may enumerate per tuple.
pub const PROBE_WORD_BUDGET: u128 = 5_000_000;

/// Base `4g - 1` and exponent constant `(2g + 4)(4g - 2)` of the quadratic
/// exponential gap bound.
pub fn quadexp_constants(g: u32) -> (u64, u64) {
    let g = g as u64;
    (4 * g - 1, (2 * g + 4) * (4 * g - 2))
}

#[derive(Clone, Debug)]
pub struct QuadExpOptions {
    pub g: u32,
    pub eta: f64,
    pub cutoff: usize,
    pub tuple_count: usize,
    pub seed: u64,
}

impl Default for QuadExpOptions {
    fn default() -> Self {
        QuadExpOptions { g: 2, eta: 0.1, cutoff: 6, tuple_count: 20, seed: 0 }
    }
}

/// Minimal gap and minimal gap-to-bound ratio among pairs whose longer word has length `level`.
#[derive(Clone, Debug)]
pub struct LevelSummary {
    pub level: usize,
    pub pairs: usize,
    pub min_log10_gap: f64,
    pub min_log10_ratio: f64,
}

#[derive(Clone, Debug)]
pub struct ViolationCandidate {
    pub first: String,
    pub second: String,
    pub level: usize,
    pub log10_ratio: f64,
    pub reason: &'static str,
}

#[derive(Clone, Debug)]
pub struct SeedReport {
    pub seed: u64,
    pub records: usize,
    pub levels: Vec<LevelSummary>,
    /// Certified pairs with the level they were scanned at.
    pub pairs: Vec<(usize, GapPair)>,
    pub equal_pairs: usize,
    pub undecided_pairs: usize,
    /// `log10 K`, where `K` is the smallest gap-to-bound ratio.
    pub log10_k: f64,
    pub violations: Vec<ViolationCandidate>,
}

#[derive(Clone, Debug)]
pub struct QuadExpReport {
    pub g: u32,
    pub eta: f64,
    pub base: u64,
    pub exponent_constant: u64,
    pub cutoff: usize,
    pub seeds: Vec<SeedReport>,
}

impl QuadExpReport {
    pub fn violation_count(&self) -> usize {
        self.seeds.iter().map(|s| s.violations.len()).sum()
    }
}

fn total_words(m: usize, cutoff: usize) -> u128 {
    (1..=cutoff).map(|n| reduced_word_count(m, n)).sum()
}

fn log10_lower(gap: &GapPair) -> f64 {
    gap.gap.lo().log2_abs() * std::f64::consts::LOG10_2
}

/// Probes the quadratic-exponential gap bound on seeded genus-`g` tuples.
///
/// At each level `k`, the smallest gap between a class of word length `k` and
/// any class of word length at most `k` is attained by neighbours in the
/// sorted spectrum truncated at `k`, so adjacent pairs there are exhaustive.
pub fn quadexp_check(opts: &QuadExpOptions) -> Result<QuadExpReport> {
    if opts.g < 2 {
        return Err(Error::InvalidInput("genus must be at least 2".into()));
    }
    let m = 2 * opts.g as usize;
    let words = total_words(m, opts.cutoff);
    if words > PROBE_WORD_BUDGET {
        return Err(Error::Budget(format!(
            "cutoff {} needs {words} words per tuple, budget is {PROBE_WORD_BUDGET}",
            opts.cutoff
        )));
    }
    let (base, constant) = quadexp_constants(opts.g);
    let mut seeds = Vec::with_capacity(opts.tuple_count);
    for i in 0..opts.tuple_count as u64 {
        let seed = opts.seed + i;
        let t = sample_tuple(m, true, seed, 1.0)?;
        seeds.push(quadexp_seed(&t, seed, opts.cutoff, base, constant as f64 + opts.eta));
    }
    Ok(QuadExpReport {
        g: opts.g,
        eta: opts.eta,
        base,
        exponent_constant: constant,
        cutoff: opts.cutoff,
        seeds,
    })
}

/// The per-tuple part of [`quadexp_check`]; `exponent` is `(2g+4)(4g-2) + η`.
pub fn quadexp_seed<S: Scalar>(
    t: &GeneratorTuple<S>,
    seed: u64,
    cutoff: usize,
    base: u64,
    exponent: f64,
) -> SeedReport {
    let spectrum = build_spectrum(t, cutoff);
    let records = spectrum.records();
    let log_base = (base as f64).log10();
    let mut levels = Vec::new();
    let mut pairs = Vec::new();
    let (mut equal_pairs, mut undecided_pairs) = (0, 0);
    let mut violations = Vec::new();
    let mut log10_k = f64::INFINITY;
    let mut previous: Option<f64> = None;
    for level in 1..=cutoff {
        let sub: Vec<_> = records.iter().filter(|r| r.word_length <= level).collect();
        let mut summary = LevelSummary {
            level,
            pairs: 0,
            min_log10_gap: f64::INFINITY,
            min_log10_ratio: f64::INFINITY,
        };
        let mut worst: Option<GapPair> = None;
        for w in sub.windows(2) {
            if w[0].word_length != level && w[1].word_length != level {
                continue;
            }
            let p = compare_records(w[0], w[1], MAX_PRECISION);
            match p.status {
                GapStatus::Equal => equal_pairs += 1,
                GapStatus::Undecided => undecided_pairs += 1,
                GapStatus::Distinct => {
                    summary.pairs += 1;
                    let lg = log10_lower(&p);
                    let ratio = lg + exponent * (level * level) as f64 * log_base;
                    summary.min_log10_gap = summary.min_log10_gap.min(lg);
                    if ratio < summary.min_log10_ratio {
                        summary.min_log10_ratio = ratio;
                        worst = Some(p.clone());
                    }
                    if ratio < 0.0 {
                        violations.push(ViolationCandidate {
                            first: p.first.to_string(),
                            second: p.second.to_string(),
                            level,
                            log10_ratio: ratio,
                            reason: "gap below the bound with K = 1",
                        });
                    }
                }
            }
            pairs.push((level, p));
        }
        if let Some(p) = worst {
            log10_k = log10_k.min(summary.min_log10_ratio);
            if previous.is_some_and(|prev| summary.min_log10_ratio < prev) {
                violations.push(ViolationCandidate {
                    first: p.first.to_string(),
                    second: p.second.to_string(),
                    level,
                    log10_ratio: summary.min_log10_ratio,
                    reason: "minimal ratio decreased from the previous level",
                });
            }
            previous = Some(summary.min_log10_ratio);
        }
        levels.push(summary);
    }
    SeedReport {
        seed,
        records: records.len(),
        levels,
        pairs,
        equal_pairs,
        undecided_pairs,
        log10_k,
        violations,
    }
}

fn log10_rational(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    log10_int(q.numer()) - log10_int(q.denom())
}

fn log10_int(n: &BigInt) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let head = (n.abs() >> shift).to_f64().unwrap_or(1.0);
    head.log10() + shift as f64 * std::f64::consts::LOG10_2
}

#[derive(Clone, Debug)]
pub struct IdentityViolation {
    pub word: String,
    pub log10_norm: f64,
    pub log10_bound: f64,
}

#[derive(Clone, Debug)]
pub struct TupleIdentityReport {
    pub label: String,
    pub words_checked: u64,
    /// Smallest `max |(W - I)_{ij}|` over all words.
    pub min_norm: BigRational,
    /// Per word length: smallest `log10 ||W - I|| - log10 bound`.
    pub min_margin_by_length: Vec<(usize, f64)>,
    pub violations: Vec<IdentityViolation>,
}

#[derive(Clone, Debug)]
pub struct WordIdentityReport {
    pub m: usize,
    pub eta: f64,
    pub cutoff: usize,
    pub tuples: Vec<TupleIdentityReport>,
}

impl WordIdentityReport {
    pub fn violation_count(&self) -> usize {
        self.tuples.iter().map(|t| t.violations.len()).sum()
    }
}

fn max_entry_distance(x: &Matrix2<BigRational>) -> BigRational {
    let one = BigRational::one();
    let [a, b, c, d] = x.entries();
    [(a - &one).abs(), b.abs(), c.abs(), (d - &one).abs()].into_iter().max().unwrap()
}

/// Checks `||W - I|| > (2m-1)^{-|W|^2 (m+2+η)}` (max-entry norm) for every
/// nonempty reduced word of length at most `cutoff`.
pub fn word_identity_check_tuple(
    t: &GeneratorTuple<BigRational>,
    eta: f64,
    cutoff: usize,
    label: &str,
) -> Result<TupleIdentityReport> {
    let m = t.arity();
    let words = total_words(m, cutoff);
    if words > PROBE_WORD_BUDGET {
        return Err(Error::Budget(format!("cutoff {cutoff} needs {words} words, budget is {PROBE_WORD_BUDGET}")));
    }
    let letters: Vec<Matrix2<BigRational>> = (0..2 * m)
        .map(|k| {
            let g = t.generator(k / 2);
            if k % 2 == 1 { g.inverse() } else { g.clone() }
        })
        .collect();
    let log_base = ((2 * m - 1) as f64).log10();
    let exponent = m as f64 + 2.0 + eta;
    let mut report = TupleIdentityReport {
        label: label.to_string(),
        words_checked: 0,
        min_norm: BigRational::from_integer(BigInt::from(-1)),
        min_margin_by_length: (1..=cutoff).map(|n| (n, f64::INFINITY)).collect(),
        violations: Vec::new(),
    };
    // depth-first over reduced words with prefix products
    let mut keys: Vec<u8> = Vec::with_capacity(cutoff);
    let mut stack: Vec<Matrix2<BigRational>> = Vec::with_capacity(cutoff);
    let mut next: Vec<u8> = vec![0];
    while let Some(k) = next.pop() {
        if k as usize >= 2 * m {
            if keys.pop().is_some() {
                stack.pop();
            }
            continue;
        }
        next.push(k + 1);
        if keys.last().is_some_and(|&p| p == k ^ 1) {
            continue;
        }
        let x = match stack.last() {
            Some(prev) => prev.mul(&letters[k as usize]),
            None => letters[k as usize].clone(),
        };
        keys.push(k);
        let n = keys.len();
        let norm = max_entry_distance(&x);
        let log_norm = log10_rational(&norm);
        let log_bound = -((n * n) as f64) * exponent * log_base;
        report.words_checked += 1;
        if report.min_norm.is_negative() || norm < report.min_norm {
            report.min_norm = norm;
        }
        let slot = &mut report.min_margin_by_length[n - 1].1;
        *slot = slot.min(log_norm - log_bound);
        if log_norm <= log_bound {
            let w = Word::from_keys(&keys).to_string();
            report.violations.push(IdentityViolation { word: w, log10_norm: log_norm, log10_bound: log_bound });
        }
        if n < cutoff {
            stack.push(x);
            next.push(0);
        } else {
            keys.pop();
        }
    }
    Ok(report)
}

/// [`word_identity_check_tuple`] on `tuple_count` seeded free Schottky tuples.
pub fn word_identity_bound_check(
    m: usize,
    eta: f64,
    cutoff: usize,
    tuple_count: usize,
    seed: u64,
) -> Result<WordIdentityReport> {
    if m < 2 {
        return Err(Error::InvalidInput("need at least two generators".into()));
    }
    let tuples = (0..tuple_count as u64)
        .map(|i| {
            let t = sample_tuple(m, false, seed + i, 1.0)?;
            word_identity_check_tuple(&t, eta, cutoff, &format!("seed {}", seed + i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WordIdentityReport { m, eta, cutoff, tuples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::{preset, AnyTuple};

    #[test]
    fn constants_for_genus_two() {
        assert_eq!(quadexp_constants(2), (7, 48));
        assert_eq!(quadexp_constants(3), (11, 100));
    }

    #[test]
    fn sanov_identity_norms() {
        let AnyTuple::Rational(t) = preset("sanov").unwrap() else { panic!() };
        let r = word_identity_check_tuple(&t, 0.1, 5, "sanov").unwrap();
        assert_eq!(r.words_checked as u128, total_words(2, 5));
        assert!(r.min_norm >= BigRational::one());
        assert!(r.violations.is_empty());
    }

    #[test]
    fn budget_guard() {
        let opts = QuadExpOptions { cutoff: 12, tuple_count: 1, ..Default::default() };
        assert!(matches!(quadexp_check(&opts), Err(Error::Budget(_))));
    }
}
