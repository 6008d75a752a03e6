use std::fmt::Write as _;
use std::str::FromStr;

use lenspec::diophantine::{
    borel_cantelli_check, chebyshev_sup_bound, quadexp_check, quadexp_series,
    remez_measure_bound, word_identity_bound_check, word_identity_check_tuple, word_identity_series,
    BoxDomain, DegreeSequence, IntegerPolynomial, QuadExpOptions, RemezOptions, Sequence,
    WordIdentityReport,
};
use lenspec::moebius::{parse_group, preset, to_group_text, AnyTuple, GeneratorTuple, Scalar, PRESET_NAMES};
use lenspec::number_theory::RigorousReal;
use lenspec::smallgap::{run_schedule, GapFunction, ScheduleOptions};
use lenspec::spectrum::{
    build_spectrum_with, certified_gap_bound, fit_separation, gap_scan_with, milnor_constants,
    multiplicity_report, GapReport, GapStatus, LengthSpectrum, SpectrumOptions,
};
use lenspec::{Error, Result};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::config::{Check, Command, Format, RunConfig};

/// Rendered output plus the exit status it implies.
pub struct Outcome {
    pub body: String,
    pub warnings: Vec<String>,
    pub status: u8,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, warnings: Vec::new(), status: 0 }
    }
}

pub const EXIT_PRECISION: u8 = 3;
pub const EXIT_VERIFICATION: u8 = 5;

macro_rules! with_tuple {
    ($any:expr, |$t:ident| $body:expr) => {
        match $any {
            AnyTuple::Rational($t) => $body,
            AnyTuple::Field($t) => $body,
            AnyTuple::Interval($t) => $body,
        }
    };
}

fn interval(x: &RigorousReal) -> Value {
    json!({ "lo": x.lo_f64(), "hi": x.hi_f64() })
}

fn load_group(cfg: &RunConfig) -> Result<AnyTuple> {
    match (&cfg.common.group, &cfg.common.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            parse_group(&text)
        }
        (None, Some(name)) => preset(name),
        (None, None) => Err(Error::InvalidInput("give --group FILE or --preset NAME".into())),
    }
}

fn config_json(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json renders");
    s.push('\n');
    s
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let cutoff = |default: usize| cfg.common.cutoff.unwrap_or(default);
    let format = |default: Format| cfg.common.format.unwrap_or(default);
    match &cfg.command {
        Command::Spectrum { oriented } => {
            let g = load_group(cfg)?;
            let opts = SpectrumOptions { oriented: *oriented, ..Default::default() };
            with_tuple!(&g, |t| spectrum(cfg, t, cutoff(8), &opts, format(Format::Csv)))
        }
        Command::Gaps => {
            let g = load_group(cfg)?;
            with_tuple!(&g, |t| gaps(cfg, t, cutoff(8), format(Format::Csv)))
        }
        Command::Fit => {
            let g = load_group(cfg)?;
            with_tuple!(&g, |t| fit(cfg, t, cutoff(10), format(Format::Json)))
        }
        Command::Smallgap { count, function, start_n, n_step, delta } => {
            let g = load_group(cfg)?;
            let f = GapFunction::from_str(function)?;
            let opts = ScheduleOptions { start_n: *start_n, n_step: *n_step, delta: *delta };
            with_tuple!(&g, |t| smallgap(cfg, t, &f, *count, &opts, format(Format::Json)))
        }
        Command::Diophantine { check } => diophantine(cfg, check, &cutoff),
        Command::Examples => examples(cfg),
    }
}

fn spectrum<S: Scalar>(
    cfg: &RunConfig,
    t: &GeneratorTuple<S>,
    cutoff: usize,
    opts: &SpectrumOptions,
    format: Format,
) -> Result<Outcome> {
    let s = build_spectrum_with(t, cutoff, opts);
    let gaps = gap_scan_with(&s, cfg.common.precision);
    let milnor = milnor_constants(&s).ok();
    let summary = json!({
        "records": s.len(),
        "excluded": s.excluded().len(),
        "min_certified_gap": gaps.min_certified_gap.as_ref().map(interval),
        "undecided_pairs": gaps.count(GapStatus::Undecided),
        "max_multiplicity": multiplicity_report(&s).max_multiplicity(),
        "milnor": milnor.map(|m| json!({ "c_low": m.c_low, "c_high": m.c_high, "c": m.c() })),
    });
    let mut out = match format {
        Format::Csv => Outcome::ok(s.to_csv()),
        Format::Json => Outcome::ok(render(&json!({
            "config": config_json(cfg),
            "summary": summary,
            "records": records_json(&s),
        }))),
    };
    if format == Format::Csv {
        out.warnings.push(format!("summary: {summary}"));
    }
    let undecided = gaps.count(GapStatus::Undecided);
    if undecided > 0 {
        out.warnings.push(format!("{undecided} pairs undecided at {} bits", cfg.common.precision));
    }
    Ok(out)
}

fn records_json<S: Scalar>(s: &LengthSpectrum<S>) -> Value {
    Value::Array(
        s.records()
            .iter()
            .map(|r| {
                json!({
                    "class": r.class.to_string(),
                    "word_length": r.word_length,
                    "trace": if S::EXACT { Value::from(r.trace.to_string()) } else { Value::Null },
                    "trace_enclosure": interval(&r.trace_enclosure),
                    "length": interval(&r.length),
                })
            })
            .collect(),
    )
}

fn gap_json(r: &GapReport) -> Value {
    Value::Array(
        r.pairs
            .iter()
            .map(|p| {
                json!({
                    "first": p.first.to_string(),
                    "second": p.second.to_string(),
                    "status": p.status.as_str(),
                    "precision": p.precision,
                    "gap": interval(&p.gap),
                })
            })
            .collect(),
    )
}

fn certified_json<S: Scalar>(t: &GeneratorTuple<S>, s: &LengthSpectrum<S>) -> Result<Value> {
    match certified_gap_bound(t, s) {
        Ok(b) => Ok(json!({
            "field_degree": b.field_degree,
            "denominator": b.denominator.to_string(),
            "max_word_length": b.max_word_length,
            "log10_length_bound": b.log10_length_bound(),
            "length_bound": interval(&b.length_bound),
        })),
        Err(Error::UnsupportedScalar(msg)) => Ok(json!({ "unavailable": msg })),
        Err(e) => Err(e),
    }
}

fn precision_status(r: &GapReport, cfg: &RunConfig, out: &mut Outcome) {
    let undecided = r.count(GapStatus::Undecided);
    if undecided > 0 {
        out.warnings.push(format!("{undecided} pairs undecided at {} bits", cfg.common.precision));
        out.status = EXIT_PRECISION;
    }
}

fn gaps<S: Scalar>(cfg: &RunConfig, t: &GeneratorTuple<S>, cutoff: usize, format: Format) -> Result<Outcome> {
    let s = build_spectrum_with(t, cutoff, &SpectrumOptions::default());
    let r = gap_scan_with(&s, cfg.common.precision);
    let mut out = match format {
        Format::Csv => Outcome::ok(r.to_csv()),
        Format::Json => Outcome::ok(render(&json!({
            "config": config_json(cfg),
            "min_certified_gap": r.min_certified_gap.as_ref().map(interval),
            "certified_bound": certified_json(t, &s)?,
            "pairs": gap_json(&r),
        }))),
    };
    precision_status(&r, cfg, &mut out);
    Ok(out)
}

fn fit<S: Scalar>(cfg: &RunConfig, t: &GeneratorTuple<S>, cutoff: usize, format: Format) -> Result<Outcome> {
    let s = build_spectrum_with(t, cutoff, &SpectrumOptions::default());
    let r = gap_scan_with(&s, cfg.common.precision);
    let f = fit_separation(&r)?;
    let milnor = milnor_constants(&s)?;
    let certified = certified_json(t, &s)?;
    let mut out = match format {
        Format::Csv => {
            let mut body = String::from("key,value\n");
            let rows: [(&str, String); 6] = [
                ("c", f.c.to_string()),
                ("beta", f.beta.to_string()),
                ("pairs_used", f.pairs_used.to_string()),
                ("envelope_points", f.envelope_points.to_string()),
                ("milnor_c", milnor.c().to_string()),
                ("log10_length_bound", certified.get("log10_length_bound").map_or(String::new(), |v| v.to_string())),
            ];
            for (k, v) in rows {
                let _ = writeln!(body, "{k},{v}");
            }
            Outcome::ok(body)
        }
        Format::Json => Outcome::ok(render(&json!({
            "config": config_json(cfg),
            "fit": {
                "c": f.c,
                "beta": f.beta,
                "residuals": f.residuals,
                "pairs_used": f.pairs_used,
                "envelope_points": f.envelope_points,
            },
            "milnor": { "c_low": milnor.c_low, "c_high": milnor.c_high, "c": milnor.c() },
            "certified_bound": certified,
        }))),
    };
    precision_status(&r, cfg, &mut out);
    Ok(out)
}

fn smallgap<S: Scalar>(
    cfg: &RunConfig,
    t: &GeneratorTuple<S>,
    f: &GapFunction,
    count: usize,
    opts: &ScheduleOptions,
    format: Format,
) -> Result<Outcome> {
    let sched = run_schedule(t, f, count, opts)?;
    let all_pass = sched.entries.iter().all(|e| e.pass);
    let body = match format {
        Format::Csv => {
            let mut body = String::from(
                "step,n,eta,target_word,matched_word,max_length_lo,max_length_hi,gap_lo,gap_hi,threshold,pass,exact\n",
            );
            for (i, e) in sched.entries.iter().enumerate() {
                let r = &e.result;
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    i + 1,
                    r.n,
                    r.eta,
                    r.target_word,
                    r.matched_word,
                    e.max_length.lo_f64(),
                    e.max_length.hi_f64(),
                    r.achieved_gap.lo_f64(),
                    r.achieved_gap.hi_f64(),
                    e.threshold,
                    e.pass,
                    r.exact
                );
            }
            body
        }
        Format::Json => render(&json!({
            "config": config_json(cfg),
            "function": f.to_string(),
            "entries": sched.entries.iter().map(|e| {
                let r = &e.result;
                json!({
                    "n": r.n,
                    "eta": r.eta.to_string(),
                    "lattice": r.lattice.map(|(k, m)| json!([k, m])),
                    "target_word": r.target_word.to_string(),
                    "matched_word": r.matched_word.to_string(),
                    "target_length_before": interval(&r.target_length_before),
                    "target_length_after": interval(&r.target_length_after),
                    "matched_length_before": interval(&r.matched_length_before),
                    "matched_length_after": interval(&r.matched_length_after),
                    "achieved_gap": interval(&r.achieved_gap),
                    "exact": r.exact,
                    "repaired": r.repaired,
                    "max_length": interval(&e.max_length),
                    "threshold": e.threshold,
                    "pass": e.pass,
                    "final_gap": interval(&e.final_gap),
                })
            }).collect::<Vec<_>>(),
            "total_eta": sched.total_eta.to_string(),
            "eta_abs_sum": sched.eta_abs_sum,
            "generator_drift": sched.generator_drift,
            "all_pass": all_pass,
        })),
    };
    let mut out = Outcome::ok(body);
    if !all_pass {
        out.warnings.push("some pairs did not meet the gap function".into());
        out.status = EXIT_VERIFICATION;
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|_| Error::Parse { line: 1, column: 1, message: format!("not a rational number: {s}") })
}

fn parse_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(parse_rational).collect()
}

fn parse_sequence(spec: &str) -> Result<Sequence> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["exp", base, coeffs] => Ok(Sequence::Exp { base: parse_rational(base)?, exponent: parse_list(coeffs)? }),
        ["pow", p] => Ok(Sequence::Power { p: parse_rational(p)? }),
        _ => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected exp:BASE:c0,c1,... or pow:P, got {spec}"),
        }),
    }
}

fn parse_degrees(spec: &str) -> Result<DegreeSequence> {
    match spec.strip_prefix("poly:") {
        Some(c) => Ok(DegreeSequence::Poly(parse_list(c)?)),
        None => Err(Error::Parse { line: 1, column: 1, message: format!("expected poly:c0,c1,..., got {spec}") }),
    }
}

fn identity_json(r: &WordIdentityReport) -> Value {
    json!({
        "generators": r.m,
        "eta": r.eta,
        "cutoff": r.cutoff,
        "violations": r.violation_count(),
        "tuples": r.tuples.iter().map(|t| json!({
            "label": t.label,
            "words_checked": t.words_checked,
            "min_norm": t.min_norm.to_string(),
            "min_log10_margin_by_length": t.min_margin_by_length.iter().map(|(n, m)| json!([n, m])).collect::<Vec<_>>(),
            "violations": t.violations.iter().map(|v| json!({
                "word": v.word,
                "log10_norm": v.log10_norm,
                "log10_bound": v.log10_bound,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn diophantine(cfg: &RunConfig, check: &Check, cutoff: &dyn Fn(usize) -> usize) -> Result<Outcome> {
    if cfg.common.format == Some(Format::Csv) {
        return Err(Error::InvalidInput("diophantine reports are JSON only".into()));
    }
    let report = match check {
        Check::Quadexp { genus, eta, tuples } => {
            let r = quadexp_check(&QuadExpOptions {
                g: *genus,
                eta: *eta,
                cutoff: cutoff(6),
                tuple_count: *tuples,
                seed: cfg.common.seed,
            })?;
            json!({
                "genus": r.g,
                "eta": r.eta,
                "base": r.base,
                "exponent_constant": r.exponent_constant,
                "cutoff": r.cutoff,
                "violations": r.violation_count(),
                "seeds": r.seeds.iter().map(|s| json!({
                    "seed": s.seed,
                    "records": s.records,
                    "distinct_pairs": s.levels.iter().map(|l| l.pairs).sum::<usize>(),
                    "equal_pairs": s.equal_pairs,
                    "undecided_pairs": s.undecided_pairs,
                    "log10_k": s.log10_k,
                    "levels": s.levels.iter().map(|l| json!({
                        "level": l.level,
                        "pairs": l.pairs,
                        "min_log10_gap": l.min_log10_gap,
                        "min_log10_ratio": l.min_log10_ratio,
                    })).collect::<Vec<_>>(),
                    "violations": s.violations.iter().map(|v| json!({
                        "first": v.first,
                        "second": v.second,
                        "level": v.level,
                        "log10_ratio": v.log10_ratio,
                        "reason": v.reason,
                    })).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })
        }
        Check::Identity { generators, eta, tuples } => {
            let r = if cfg.common.group.is_some() || cfg.common.preset.is_some() {
                let AnyTuple::Rational(t) = load_group(cfg)? else {
                    return Err(Error::UnsupportedScalar("identity check needs rational generators".into()));
                };
                let label = cfg.common.preset.clone().unwrap_or_else(|| "group".into());
                WordIdentityReport {
                    m: t.arity(),
                    eta: *eta,
                    cutoff: cutoff(8),
                    tuples: vec![word_identity_check_tuple(&t, *eta, cutoff(8), &label)?],
                }
            } else {
                word_identity_bound_check(*generators, *eta, cutoff(8), *tuples, cfg.common.seed)?
            };
            identity_json(&r)
        }
        Check::Chebyshev { poly } => {
            let p = IntegerPolynomial::from_str(poly)?;
            let r = chebyshev_sup_bound(&p)?;
            json!({
                "polynomial": p.to_string(),
                "terms": p.to_term_list(),
                "degree": r.degree,
                "bound": r.bound,
                "empirical_sup": r.empirical_sup,
                "argmax": r.argmax,
            })
        }
        Check::Remez { poly, epsilon, samples, c_b } => {
            let p = IntegerPolynomial::from_str(poly)?;
            let opts = RemezOptions { c_b: *c_b, samples: *samples, seed: cfg.common.seed };
            let r = remez_measure_bound(&p, *epsilon, &BoxDomain::cube(p.nvars()), &opts)?;
            json!({
                "polynomial": p.to_string(),
                "degree": r.degree,
                "c_b": r.c_b,
                "volume": r.volume,
                "sup_estimate": r.sup_estimate,
                "bound": r.bound,
                "saturated": r.saturated,
                "estimate": {
                    "epsilon": r.estimate.epsilon,
                    "measure": r.estimate.estimated_measure,
                    "samples": r.estimate.samples,
                    "confidence_width": r.estimate.confidence_width,
                },
            })
        }
        Check::Summability { series, index, eta, epsilon, degree, multiplicity } => {
            let (e, d, m) = match series.as_str() {
                "closing" => {
                    let (e, d, m) = quadexp_series(*index, parse_rational(eta)?);
                    (e, d, Some(m))
                }
                "identity" => {
                    let (e, d, m) = word_identity_series(*index, parse_rational(eta)?);
                    (e, d, Some(m))
                }
                "custom" => {
                    let need = |x: &Option<String>, flag: &str| {
                        x.clone().ok_or_else(|| Error::InvalidInput(format!("custom series needs --{flag}")))
                    };
                    let e = parse_sequence(&need(epsilon, "epsilon")?)?;
                    let d = parse_degrees(&need(degree, "degree")?)?;
                    let m = multiplicity.as_deref().map(parse_sequence).transpose()?;
                    (e, d, m)
                }
                other => return Err(Error::InvalidInput(format!("unknown series {other}"))),
            };
            let v = borel_cantelli_check(&e, &d, m.as_ref())?;
            json!({
                "epsilon": e.to_string(),
                "degrees": format!("{d:?}"),
                "multiplicity": m.map(|m| m.to_string()),
                "converges": v.converges,
                "rationale": v.tail_bound_rationale.to_string(),
                "partial_sums": v.partial_sums,
            })
        }
    };
    Ok(Outcome::ok(render(&json!({ "config": config_json(cfg), "report": report }))))
}

fn examples(cfg: &RunConfig) -> Result<Outcome> {
    if let Some(name) = &cfg.common.preset {
        return Ok(Outcome::ok(to_group_text(&preset(name)?)));
    }
    let mut body = String::from("presets:\n");
    for name in PRESET_NAMES {
        let g = preset(name)?;
        let _ = writeln!(body, "  {name:<18} {} generators, {} scalars", g.arity(), kind(&g));
    }
    body.push_str(
        "\nexamples:\n\
         \x20 lenspec spectrum --preset sanov --cutoff 8\n\
         \x20 lenspec gaps --preset sanov --cutoff 12 --format json\n\
         \x20 lenspec fit --preset sanov --cutoff 12\n\
         \x20 lenspec smallgap --preset schottky-triple --count 3 --function exp:1\n\
         \x20 lenspec diophantine quadexp --genus 2 --cutoff 6 --tuples 20\n\
         \x20 lenspec diophantine chebyshev --poly 'x^3 - 3/4*x'\n\
         \x20 lenspec diophantine summability --series closing --eta 0\n\
         \x20 lenspec examples --preset sqrt2 > sqrt2.group\n",
    );
    Ok(Outcome::ok(body))
}

fn kind(g: &AnyTuple) -> &'static str {
    match g {
        AnyTuple::Rational(_) => "rational",
        AnyTuple::Field(_) => "field",
        AnyTuple::Interval(_) => "interval",
    }
}
