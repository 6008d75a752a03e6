//! Length spectrum of a generator tuple: records per primitive class, gap and
//! multiplicity analysis, separation fits and certified gap lower bounds.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::moebius::{Classification, GeneratorTuple, Matrix2, Scalar};
use crate::number_theory::{
    combine_classes, difference_lower_bound, embedding_height, AlgebraicClass, DenominatorClass,
    Dyadic, FieldElement, RigorousReal,
};
use crate::words::{is_primitive_keys, walk_classes, CyclicClass, Letter, Word};

/// Precision of the first pass; escalation doubles from here.
pub const BASE_PRECISION: u32 = 64;
/// Ceiling for precision escalation in gap scans.
pub const MAX_PRECISION: u32 = 512;
/// Bins used for the lower envelope in separation fits.
pub const FIT_BINS: usize = 16;
/// Minimum number of certified-distinct pairs for a separation fit.
pub const MIN_FIT_PAIRS: usize = 10;

/// `2 acosh(|tr| / 2)`, requiring `|tr| > 2` to be certain.
pub fn length_from_trace(trace: &RigorousReal) -> Result<RigorousReal> {
    let prec = trace.precision();
    let half = trace
        .abs()
        .mul(&RigorousReal::point(Dyadic::new(BigInt::one(), -1), prec));
    if !RigorousReal::one(prec).certainly_lt(&half) {
        return Err(Error::NotHyperbolic(format!("|trace| = {} not above 2", trace.abs())));
    }
    let a = half.acosh().expect("argument above one");
    Ok(a.add(&a))
}

/// Translation length of a hyperbolic matrix.
pub fn length_of<S: Scalar>(x: &Matrix2<S>, prec: u32) -> Result<RigorousReal> {
    match x.classify()? {
        Classification::Hyperbolic => length_from_trace(&x.trace().to_real(prec)),
        c => Err(Error::NotHyperbolic(format!("{x} is {c:?}"))),
    }
}

#[derive(Clone, Debug)]
pub struct GeodesicRecord<S> {
    pub class: CyclicClass,
    pub trace: S,
    pub trace_enclosure: RigorousReal,
    pub length: RigorousReal,
    pub word_length: usize,
}

impl<S: Scalar> GeodesicRecord<S> {
    /// Length recomputed from the trace at another precision.
    pub fn length_at(&self, prec: u32) -> RigorousReal {
        if prec == self.length.precision() {
            return self.length.clone();
        }
        length_from_trace(&self.trace.to_real(prec)).unwrap_or_else(|_| self.length.clone())
    }

    /// `|trace|` as an exact scalar.
    fn abs_trace(&self) -> S {
        if self.trace.sign() == Some(-1) {
            self.trace.neg()
        } else {
            self.trace.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exclusion {
    Elliptic,
    Parabolic,
    Identity,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct ExcludedClass {
    pub class: CyclicClass,
    pub trace_enclosure: RigorousReal,
    pub reason: Exclusion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumOptions {
    /// Classes up to rotation only, so `w` and `w⁻¹` are separate records.
    pub oriented: bool,
    pub primitive_only: bool,
    pub precision: u32,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            oriented: false,
            primitive_only: true,
            precision: BASE_PRECISION,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LengthSpectrum<S> {
    records: Vec<GeodesicRecord<S>>,
    excluded: Vec<ExcludedClass>,
    cutoff: usize,
    options: SpectrumOptions,
}

impl<S: Scalar> LengthSpectrum<S> {
    pub fn records(&self) -> &[GeodesicRecord<S>] {
        &self.records
    }

    pub fn excluded(&self) -> &[ExcludedClass] {
        &self.excluded
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn options(&self) -> SpectrumOptions {
        self.options
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn max_word_length(&self) -> usize {
        self.records.iter().map(|r| r.word_length).max().unwrap_or(0)
    }

    /// CSV with columns `class_string, word_length, trace_exact, trace_lo,
    /// trace_hi, length_lo, length_hi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class_string,word_length,trace_exact,trace_lo,trace_hi,length_lo,length_hi\n");
        for r in &self.records {
            let exact = if S::EXACT { r.trace.to_string() } else { String::new() };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                csv_field(&r.class.to_string()),
                r.word_length,
                csv_field(&exact),
                r.trace_enclosure.lo_f64(),
                r.trace_enclosure.hi_f64(),
                r.length.lo_f64(),
                r.length.hi_f64()
            );
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn midpoint(x: &RigorousReal) -> Dyadic {
    x.lo().add(x.hi())
}

/// Spectrum of primitive unoriented classes of word length `<= cutoff`.
pub fn build_spectrum<S: Scalar>(t: &GeneratorTuple<S>, cutoff: usize) -> LengthSpectrum<S> {
    build_spectrum_with(t, cutoff, &SpectrumOptions::default())
}

pub fn build_spectrum_with<S: Scalar>(
    t: &GeneratorTuple<S>,
    cutoff: usize,
    opts: &SpectrumOptions,
) -> LengthSpectrum<S> {
    let m = t.arity();
    let letters: Vec<Matrix2<S>> = (0..2 * m)
        .map(|k| {
            let g = t.generator(k / 2);
            if k % 2 == 1 {
                g.inverse()
            } else {
                g.clone()
            }
        })
        .collect();
    let mut records = Vec::new();
    let mut excluded = Vec::new();
    if cutoff > 0 {
        let root = t.generator(0).identity();
        walk_classes(
            m,
            cutoff,
            opts.oriented,
            &root,
            &mut |x: &Matrix2<S>, k: u8| x.mul(&letters[k as usize]),
            &mut |keys: &[u8], x: &Matrix2<S>| {
                if opts.primitive_only && !is_primitive_keys(keys) {
                    return;
                }
                let class = class_from_keys(keys, opts.oriented);
                let trace = x.trace();
                let trace_enclosure = trace.to_real(opts.precision);
                let reason = match x.classify() {
                    Ok(Classification::Hyperbolic) => {
                        match length_from_trace(&trace_enclosure) {
                            Ok(length) => {
                                records.push(GeodesicRecord {
                                    class,
                                    trace,
                                    trace_enclosure,
                                    length,
                                    word_length: keys.len(),
                                });
                                return;
                            }
                            Err(_) => Exclusion::Undecided,
                        }
                    }
                    Ok(Classification::Elliptic) => Exclusion::Elliptic,
                    Ok(Classification::Parabolic) => Exclusion::Parabolic,
                    Ok(Classification::Identity) => Exclusion::Identity,
                    Err(_) => Exclusion::Undecided,
                };
                excluded.push(ExcludedClass {
                    class,
                    trace_enclosure,
                    reason,
                });
            },
        );
    }
    records.sort_by_cached_key(|r| (midpoint(&r.length), r.class.clone()));
    excluded.sort_by(|a, b| a.class.len().cmp(&b.class.len()).then_with(|| a.class.cmp(&b.class)));
    LengthSpectrum {
        records,
        excluded,
        cutoff,
        options: *opts,
    }
}

fn class_from_keys(keys: &[u8], oriented: bool) -> CyclicClass {
    let w = Word::from_reduced(keys.iter().map(|&k| Letter::from_key(k)).collect());
    let c = if oriented {
        crate::words::canonical_class_oriented(&w)
    } else {
        crate::words::canonical_class(&w)
    };
    c.expect("non-empty word")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapStatus {
    Distinct,
    Equal,
    Undecided,
}

impl GapStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            GapStatus::Distinct => "distinct",
            GapStatus::Equal => "equal",
            GapStatus::Undecided => "undecided",
        }
    }
}

/// One adjacent pair of the sorted spectrum.
#[derive(Clone, Debug)]
pub struct GapPair {
    pub first: CyclicClass,
    pub second: CyclicClass,
    pub first_length: RigorousReal,
    pub second_length: RigorousReal,
    pub gap: RigorousReal,
    pub status: GapStatus,
    /// Precision at which the status was decided.
    pub precision: u32,
}

impl GapPair {
    pub fn max_length(&self) -> RigorousReal {
        self.first_length.max(&self.second_length)
    }
}

#[derive(Clone, Debug)]
pub struct GapReport {
    pub pairs: Vec<GapPair>,
    pub min_certified_gap: Option<RigorousReal>,
}

impl GapReport {
    pub fn distinct(&self) -> impl Iterator<Item = &GapPair> {
        self.pairs.iter().filter(|p| p.status == GapStatus::Distinct)
    }

    pub fn count(&self, status: GapStatus) -> usize {
        self.pairs.iter().filter(|p| p.status == status).count()
    }

    /// CSV with columns `class_1, class_2, status, precision, gap_lo, gap_hi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class_1,class_2,status,precision,gap_lo,gap_hi\n");
        for p in &self.pairs {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                p.first,
                p.second,
                p.status.as_str(),
                p.precision,
                p.gap.lo_f64(),
                p.gap.hi_f64()
            );
        }
        out
    }
}

/// Decides whether two records have equal or distinct lengths.
///
/// Exact scalars settle equality of `|trace|` outright. Otherwise the length
/// enclosures are recomputed at doubling precision until they separate or
/// `max_precision` is passed.
pub fn compare_records<S: Scalar>(
    r1: &GeodesicRecord<S>,
    r2: &GeodesicRecord<S>,
    max_precision: u32,
) -> GapPair {
    let base = r1.length.precision().min(r2.length.precision());
    let make = |l1: RigorousReal, l2: RigorousReal, status, precision| GapPair {
        first: r1.class.clone(),
        second: r2.class.clone(),
        gap: l2.sub(&l1).abs(),
        first_length: l1,
        second_length: l2,
        status,
        precision,
    };
    if S::EXACT && r1.abs_trace().exact_eq(&r2.abs_trace()) == Some(true) {
        let l = r1.length.clone();
        return GapPair {
            first: r1.class.clone(),
            second: r2.class.clone(),
            first_length: l.clone(),
            second_length: l,
            gap: RigorousReal::zero(base),
            status: GapStatus::Equal,
            precision: base,
        };
    }
    let mut prec = base;
    loop {
        let (l1, l2) = (r1.length_at(prec), r2.length_at(prec));
        if !l1.overlaps(&l2) {
            return make(l1, l2, GapStatus::Distinct, prec);
        }
        if prec * 2 > max_precision {
            return make(l1, l2, GapStatus::Undecided, prec);
        }
        prec *= 2;
    }
}

/// Adjacent-pair gaps of the sorted spectrum, escalating up to [`MAX_PRECISION`].
pub fn gap_scan<S: Scalar>(s: &LengthSpectrum<S>) -> GapReport {
    gap_scan_with(s, MAX_PRECISION)
}

pub fn gap_scan_with<S: Scalar>(s: &LengthSpectrum<S>, max_precision: u32) -> GapReport {
    let pairs: Vec<GapPair> = s
        .records
        .windows(2)
        .map(|w| compare_records(&w[0], &w[1], max_precision))
        .collect();
    let min_certified_gap = pairs
        .iter()
        .filter(|p| p.status == GapStatus::Distinct)
        .map(|p| p.gap.clone())
        .reduce(|a, b| a.min(&b));
    GapReport {
        pairs,
        min_certified_gap,
    }
}

/// Non-conjugate classes sharing one exact `|trace|`.
#[derive(Clone, Debug)]
pub struct MultiplicityGroup {
    pub trace: String,
    pub length: RigorousReal,
    pub classes: Vec<CyclicClass>,
}

#[derive(Clone, Debug, Default)]
pub struct MultiplicityReport {
    pub groups: Vec<MultiplicityGroup>,
    /// Set when the scalars cannot certify equality.
    pub notice: Option<String>,
}

impl MultiplicityReport {
    pub fn max_multiplicity(&self) -> usize {
        self.groups.iter().map(|g| g.classes.len()).max().unwrap_or(1)
    }
}

/// Groups records by exactly equal `|trace|`; groups of size one are omitted.
pub fn multiplicity_report<S: Scalar>(s: &LengthSpectrum<S>) -> MultiplicityReport {
    if !S::EXACT {
        return MultiplicityReport {
            groups: Vec::new(),
            notice: Some("interval scalars cannot certify equal lengths".into()),
        };
    }
    let mut by_trace: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, r) in s.records.iter().enumerate() {
        by_trace.entry(r.abs_trace().to_string()).or_default().push(i);
    }
    let mut groups: Vec<MultiplicityGroup> = by_trace
        .into_iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(trace, v)| MultiplicityGroup {
            trace,
            length: s.records[v[0]].length.clone(),
            classes: v.iter().map(|&i| s.records[i].class.clone()).collect(),
        })
        .collect();
    groups.sort_by_cached_key(|g| (midpoint(&g.length), g.classes[0].clone()));
    MultiplicityReport { groups, notice: None }
}

/// `|l2 - l1| ≈ C exp(-β max(l1, l2))` fitted to the lower envelope.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationFit {
    pub c: f64,
    pub beta: f64,
    /// `ln(gap) - (ln C - β x)` for each envelope point.
    pub residuals: Vec<f64>,
    pub pairs_used: usize,
    pub envelope_points: usize,
}

/// Fits over the certified-distinct pairs of a gap report.
pub fn fit_separation(r: &GapReport) -> Result<SeparationFit> {
    let points: Vec<(f64, f64)> = r
        .distinct()
        .map(|p| (p.max_length().mid_f64(), p.gap.mid_f64()))
        .collect();
    fit_envelope(&points, FIT_BINS)
}

/// Least squares of `ln(gap)` against `x` over the per-bin minimum gaps of
/// `bins` equal-width bins in `x`.
pub fn fit_envelope(points: &[(f64, f64)], bins: usize) -> Result<SeparationFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, g)| x.is_finite() && g > 0.0 && g.is_finite())
        .collect();
    if pts.len() < MIN_FIT_PAIRS {
        return Err(Error::InsufficientData(format!(
            "{} certified-distinct pairs, need {MIN_FIT_PAIRS}",
            pts.len()
        )));
    }
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return Err(Error::InsufficientData("all pairs at one length".into()));
    }
    let width = (hi - lo) / bins as f64;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; bins];
    for &(x, g) in &pts {
        let b = (((x - lo) / width) as usize).min(bins - 1);
        if best[b].map_or(true, |(_, bg)| g < bg) {
            best[b] = Some((x, g));
        }
    }
    let env: Vec<(f64, f64)> = best.into_iter().flatten().map(|(x, g)| (x, g.ln())).collect();
    if env.len() < 2 {
        return Err(Error::InsufficientData("envelope has fewer than two bins".into()));
    }
    let n = env.len() as f64;
    let mx = env.iter().map(|p| p.0).sum::<f64>() / n;
    let my = env.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = env.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = env.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    Ok(SeparationFit {
        c: intercept.exp(),
        beta: -slope,
        residuals: env.iter().map(|p| p.1 - (intercept + slope * p.0)).collect(),
        pairs_used: pts.len(),
        envelope_points: env.len(),
    })
}

/// Word length against geometric length: `(max m/l, max l/m)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MilnorConstants {
    pub c_low: f64,
    pub c_high: f64,
}

impl MilnorConstants {
    /// Smallest `C` with `l/C <= m <= C l` on every record.
    pub fn c(&self) -> f64 {
        self.c_low.max(self.c_high)
    }
}

pub fn milnor_constants<S: Scalar>(s: &LengthSpectrum<S>) -> Result<MilnorConstants> {
    if s.is_empty() {
        return Err(Error::InsufficientData("empty spectrum".into()));
    }
    let (mut c_low, mut c_high) = (0.0f64, 0.0f64);
    for r in &s.records {
        let l = r.length.mid_f64();
        let m = r.word_length as f64;
        c_low = c_low.max(m / l);
        c_high = c_high.max(l / m);
    }
    Ok(MilnorConstants { c_low, c_high })
}

/// Explicit separation certificate for an algebraic tuple.
#[derive(Clone, Debug)]
pub struct CertifiedGapBound {
    pub field_degree: usize,
    /// Common denominator `N` of all generator entries.
    pub denominator: BigInt,
    /// Entries lie in `H(L, N, 1)` with this `L`.
    pub entry_height: RigorousReal,
    pub max_word_length: usize,
    /// Class holding `e^r` for every record.
    pub eigenvalue_class: AlgebraicClass,
    /// Lower bound on `|e^{r1} - e^{r2}|` for distinct lengths.
    pub eigenvalue_bound: RigorousReal,
    /// Lower bound on `|l1 - l2|` for distinct lengths.
    pub length_bound: RigorousReal,
    pub min_observed_gap: Option<RigorousReal>,
}

impl CertifiedGapBound {
    pub fn log10_length_bound(&self) -> f64 {
        self.length_bound.log10_mid()
    }
}

/// Certified lower bound on distinct length gaps within the spectrum.
///
/// Entries of a word of length `m` lie in `H((2L)^m, N, m)`, so `e^r` is a
/// root of `x^2 - tr x + 1` with coefficients in `H(2 (2L)^(2m), N, 2m)`.
/// Since `2L >= N` for determinant-one matrices, the class for the longest
/// word contains every shorter one. The difference bound for that class is
/// turned into a length bound through `|l1 - l2| >= 2 |e^{r1} - e^{r2}| / e^{r_max}`
/// and `e^{r_max} <= |tr_max|`. Every certified-distinct gap of the spectrum
/// is then checked against it.
pub fn certified_gap_bound<S: Scalar>(
    t: &GeneratorTuple<S>,
    s: &LengthSpectrum<S>,
) -> Result<CertifiedGapBound> {
    let entries: Vec<FieldElement> = t
        .generators()
        .iter()
        .flat_map(|g| g.entries())
        .map(|e| {
            e.to_field_element()
                .ok_or_else(|| Error::UnsupportedScalar("certified bounds need algebraic scalars".into()))
        })
        .collect::<Result<_>>()?;
    if s.is_empty() {
        return Err(Error::InsufficientData("empty spectrum".into()));
    }
    let field = entries[0].field().clone();
    let d = field.degree();
    let n = entries
        .iter()
        .flat_map(|e| e.coords())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nq = BigRational::from_integer(n.clone());
    let l = entries
        .iter()
        .map(|e| embedding_height(&e.scale(&nq)))
        .reduce(|a, b| a.max(&b))
        .expect("at least one entry");
    let l = RigorousReal::new(l.hi().clone(), l.hi().clone(), l.precision());
    let entry_class = DenominatorClass::new(l.clone(), n.clone(), 1)?;
    for e in &entries {
        entry_class.check_member(e)?;
    }

    let m2 = s.max_word_length();
    let two = RigorousReal::from_i64(2, l.precision());
    let coeff_height = two.mul(&l).powi(2 * m2 as u32).mul(&two);
    let class = AlgebraicClass::new(coeff_height.clone(), n.clone(), 2 * m2 as u32, 2)?;
    let trace_class = DenominatorClass::new(coeff_height, n.clone(), 2 * m2 as u32)?;
    for r in &s.records {
        let tr = r
            .trace
            .to_field_element()
            .expect("traces of algebraic tuples are algebraic");
        trace_class.check_member(&tr)?;
    }
    let combined = combine_classes(&class, &class)?;
    let delta = difference_lower_bound(&combined, d);
    let tr_max = s
        .records
        .iter()
        .map(|r| r.trace_enclosure.abs())
        .reduce(|a, b| a.max(&b))
        .expect("non-empty");
    let tr_max = RigorousReal::new(tr_max.hi().clone(), tr_max.hi().clone(), tr_max.precision());
    let bound = delta
        .mul(&two)
        .div(&tr_max)
        .expect("|trace| above two");
    let length_bound = RigorousReal::new(bound.lo().clone(), bound.lo().clone(), bound.precision());

    let report = gap_scan(s);
    for p in report.distinct() {
        if !length_bound.certainly_le(&p.gap) {
            return Err(Error::Verification(format!(
                "gap {} between {} and {} is below the certified bound {}",
                p.gap, p.first, p.second, length_bound
            )));
        }
    }
    Ok(CertifiedGapBound {
        field_degree: d,
        denominator: n,
        entry_height: l,
        max_word_length: m2,
        eigenvalue_class: class,
        eigenvalue_bound: delta,
        length_bound,
        min_observed_gap: report.min_certified_gap,
    })
}
