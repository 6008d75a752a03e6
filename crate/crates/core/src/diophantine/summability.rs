//! Convergence of `Σ_N M_N ε_N^{1/D_N}` for symbolic or tabulated sequences.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Number of leading terms whose partial sums are reported.
pub const PARTIAL_SUM_TERMS: usize = 20;

/// A positive sequence indexed by `N >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum Sequence {
    /// `base^{e(N)}` with `e` a polynomial in `N` (constant term first).
    Exp { base: BigRational, exponent: Vec<BigRational> },
    /// `N^p`.
    Power { p: BigRational },
    /// Explicit values for `N = 1..=len`, then the tail model.
    Table { values: Vec<f64>, tail: Option<Box<Sequence>> },
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim(out)
}

fn poly_eval(p: &[BigRational], n: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * n + c.to_f64().unwrap_or(f64::NAN))
}

impl Sequence {
    /// `base^{-(coeff) N}`.
    pub fn geometric(base: i64, coeff: BigRational) -> Self {
        Sequence::Exp { base: q(base), exponent: vec![q(0), -coeff] }
    }

    /// `base^{-(coeff) N^2}`.
    pub fn super_geometric(base: i64, coeff: BigRational) -> Self {
        Sequence::Exp { base: q(base), exponent: vec![q(0), q(0), -coeff] }
    }

    pub fn polynomial(p: BigRational) -> Self {
        Sequence::Power { p }
    }

    /// `ln` of the `N`-th value.
    pub fn ln_value(&self, n: u64) -> Result<f64> {
        let x = n as f64;
        match self {
            Sequence::Exp { base, exponent } => {
                Ok(base.to_f64().unwrap_or(f64::NAN).ln() * poly_eval(exponent, x))
            }
            Sequence::Power { p } => Ok(p.to_f64().unwrap_or(f64::NAN) * x.ln()),
            Sequence::Table { values, tail } => match values.get(n as usize - 1) {
                Some(v) => Ok(v.ln()),
                None => tail.as_ref().ok_or(Error::MissingTailModel)?.ln_value(n),
            },
        }
    }

    fn tail(&self) -> Result<&Sequence> {
        match self {
            Sequence::Table { tail, .. } => tail.as_deref().ok_or(Error::MissingTailModel)?.tail(),
            s => Ok(s),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Sequence::Exp { base, .. } if !(base > &q(1)) => {
                Err(Error::InvalidInput(format!("exponential base {base} must exceed 1")))
            }
            Sequence::Table { values, tail } => {
                if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                    return Err(Error::InvalidInput("table values must be positive".into()));
                }
                tail.as_ref().ok_or(Error::MissingTailModel)?.validate()
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = |p: &[BigRational]| {
            let terms: Vec<String> = p
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| match i {
                    0 => format!("{c}"),
                    1 => format!("{c}*N"),
                    _ => format!("{c}*N^{i}"),
                })
                .collect();
            if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
        };
        match self {
            Sequence::Exp { base, exponent } => write!(f, "{base}^({})", poly(exponent)),
            Sequence::Power { p } => write!(f, "N^({p})"),
            Sequence::Table { values, tail } => {
                write!(f, "table[{}]", values.len())?;
                match tail {
                    Some(t) => write!(f, " then {t}"),
                    None => f.write_str(" without tail"),
                }
            }
        }
    }
}

/// Degree sequence `D_N > 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum DegreeSequence {
    /// Polynomial in `N`, constant term first, with positive leading coefficient.
    Poly(Vec<BigRational>),
    Table { values: Vec<f64>, tail: Option<Box<DegreeSequence>> },
}

impl DegreeSequence {
    /// `D_N = c N`.
    pub fn linear(c: BigRational) -> Self {
        DegreeSequence::Poly(vec![q(0), c])
    }

    pub fn constant(c: BigRational) -> Self {
        DegreeSequence::Poly(vec![c])
    }

    pub fn value(&self, n: u64) -> Result<f64> {
        match self {
            DegreeSequence::Poly(p) => Ok(poly_eval(p, n as f64)),
            DegreeSequence::Table { values, tail } => match values.get(n as usize - 1) {
                Some(v) => Ok(*v),
                None => tail.as_ref().ok_or(Error::MissingTailModel)?.value(n),
            },
        }
    }

    fn tail(&self) -> Result<&[BigRational]> {
        match self {
            DegreeSequence::Poly(p) => Ok(p),
            DegreeSequence::Table { tail, .. } => tail.as_deref().ok_or(Error::MissingTailModel)?.tail(),
        }
    }

    /// Multiplies every degree by `k`.
    pub fn scaled(&self, k: &BigRational) -> Self {
        match self {
            DegreeSequence::Poly(p) => DegreeSequence::Poly(trim(p.iter().map(|c| c * k).collect())),
            DegreeSequence::Table { values, tail } => DegreeSequence::Table {
                values: values.iter().map(|v| v * k.to_f64().unwrap_or(f64::NAN)).collect(),
                tail: tail.as_ref().map(|t| Box::new(t.scaled(k))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rationale {
    /// `ln t_N ~ c N^s` with `c < 0` and `s >= 1`: root test.
    RootTest { leading: f64, order: i64 },
    /// Exponential decay dominates polynomial factors: ratio test.
    RatioTest,
    /// `Σ N^{-p}` with the recorded `p`.
    PSeries { p: f64 },
    /// The terms do not tend to zero.
    TermsDoNotVanish,
    /// Terms grow without bound.
    TermsDiverge,
    /// Logarithmic exponent compared after rounding to `f64`.
    FloatComparison(Box<Rationale>),
}

impl fmt::Display for Rationale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rationale::RootTest { leading, order } => {
                write!(f, "root test: ln t_N ~ {leading:.6} N^{order}")
            }
            Rationale::RatioTest => f.write_str("ratio test: exponential decay"),
            Rationale::PSeries { p } => write!(f, "p-series with p = {p:.6}"),
            Rationale::TermsDoNotVanish => f.write_str("terms do not tend to zero"),
            Rationale::TermsDiverge => f.write_str("terms grow without bound"),
            Rationale::FloatComparison(r) => write!(f, "{r} (floating-point exponents)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SummabilityVerdict {
    pub converges: bool,
    /// Running sums of the first [`PARTIAL_SUM_TERMS`] terms.
    pub partial_sums: Vec<f64>,
    pub tail_bound_rationale: Rationale,
}

/// Decides whether `Σ_N M_N ε_N^{1/D_N}` converges, with `M_N = 1` when no
/// multiplicity is given. The verdict rests on the symbolic tail; tables only
/// contribute to the partial sums.
pub fn borel_cantelli_check(
    epsilons: &Sequence,
    degrees: &DegreeSequence,
    multiplicity: Option<&Sequence>,
) -> Result<SummabilityVerdict> {
    epsilons.validate()?;
    if let Some(m) = multiplicity {
        m.validate()?;
    }
    let eps_tail = epsilons.tail()?;
    let deg_tail = trim(degrees.tail()?.to_vec());
    if deg_tail.last().map_or(true, |c| !c.is_positive()) {
        return Err(Error::InvalidInput("degrees must have a positive leading coefficient".into()));
    }
    let mult_tail = multiplicity.map(|m| m.tail()).transpose()?;

    let mut partial_sums = Vec::with_capacity(PARTIAL_SUM_TERMS);
    let mut acc = 0.0;
    for n in 1..=PARTIAL_SUM_TERMS as u64 {
        let d = degrees.value(n)?;
        let m = multiplicity.map_or(Ok(0.0), |m| m.ln_value(n))?;
        acc += (m + epsilons.ln_value(n)? / d).exp();
        partial_sums.push(acc);
    }
    let (converges, tail_bound_rationale) = classify(eps_tail, &deg_tail, mult_tail)?;
    Ok(SummabilityVerdict { converges, partial_sums, tail_bound_rationale })
}

fn classify(
    eps: &Sequence,
    deg: &[BigRational],
    mult: Option<&Sequence>,
) -> Result<(bool, Rationale)> {
    let deg_order = deg.len() as i64 - 1;
    match (eps, mult) {
        (Sequence::Exp { base, exponent }, None) => {
            Ok(classify_exact(&trim(exponent.clone()), deg, base))
        }
        (Sequence::Exp { base, exponent }, Some(Sequence::Exp { base: mb, exponent: me })) if mb == base => {
            // ln t_N / ln b = (g D + f) / D with everything exact
            let h = poly_add(&poly_mul(me, deg), exponent);
            Ok(classify_exact(&h, deg, base))
        }
        (Sequence::Exp { base, exponent }, Some(Sequence::Exp { base: mb, exponent: me })) => {
            let lb = base.to_f64().unwrap().ln();
            let lm = mb.to_f64().unwrap().ln();
            let to_f = |p: &[BigRational]| p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect::<Vec<_>>();
            let gd = to_f(&poly_mul(me, deg));
            let f = to_f(exponent);
            let mut h = vec![0.0; gd.len().max(f.len())];
            for (i, c) in gd.iter().enumerate() {
                h[i] += lm * c;
            }
            for (i, c) in f.iter().enumerate() {
                h[i] += lb * c;
            }
            let scale = h.iter().fold(0.0f64, |a, c| a.max(c.abs()));
            while h.last().is_some_and(|c| c.abs() <= 1e-12 * scale) {
                h.pop();
            }
            let d_lead = deg.last().unwrap().to_f64().unwrap();
            let (c, v) = classify_orders(h.last().copied().unwrap_or(0.0) / d_lead, h.len() as i64 - 1 - deg_order, h.is_empty());
            Ok((c, Rationale::FloatComparison(Box::new(v))))
        }
        (Sequence::Exp { .. }, Some(Sequence::Power { .. })) => {
            let (c, r) = classify(eps, deg, None)?;
            // polynomial weights do not change an exponential-order verdict
            match r {
                Rationale::RootTest { order, .. } if order >= 1 => Ok((c, Rationale::RatioTest)),
                _ => Ok((false, Rationale::TermsDoNotVanish)),
            }
        }
        (Sequence::Power { p }, mult) => {
            // ε_N^{1/D_N} = N^{p/D_N}; only constant degrees keep a decaying power
            let mult_power = match mult {
                None => Some(BigRational::zero()),
                Some(Sequence::Power { p }) => Some(p.clone()),
                Some(Sequence::Exp { exponent, .. }) => {
                    let e = trim(exponent.clone());
                    return Ok(match e.len() {
                        0 | 1 => classify(eps, deg, None)?,
                        _ if e.last().unwrap().is_negative() => (true, Rationale::RatioTest),
                        _ => (false, Rationale::TermsDiverge),
                    });
                }
                Some(Sequence::Table { .. }) => unreachable!("tails are resolved"),
            };
            if deg_order > 0 {
                return Ok((false, Rationale::TermsDoNotVanish));
            }
            let total = mult_power.unwrap() + p / &deg[0];
            let pf = -total.to_f64().unwrap_or(f64::NAN);
            Ok((total < -BigRational::one(), Rationale::PSeries { p: pf }))
        }
        (Sequence::Table { .. }, _) | (_, Some(Sequence::Table { .. })) => unreachable!("tails are resolved"),
    }
}

/// `ln t_N = ln b · h(N) / D(N)` with exact rational `h` and `D`.
fn classify_exact(h: &[BigRational], deg: &[BigRational], base: &BigRational) -> (bool, Rationale) {
    let lb = base.to_f64().unwrap().ln();
    if h.is_empty() {
        return (false, Rationale::TermsDoNotVanish);
    }
    let lead = h.last().unwrap() / deg.last().unwrap();
    let order = h.len() as i64 - deg.len() as i64;
    classify_orders(lb * lead.to_f64().unwrap_or(f64::NAN), order, false)
}

fn classify_orders(lead: f64, order: i64, flat: bool) -> (bool, Rationale) {
    if flat {
        return (false, Rationale::TermsDoNotVanish);
    }
    if order >= 1 {
        if lead < 0.0 {
            (true, Rationale::RootTest { leading: lead, order })
        } else {
            (false, Rationale::TermsDiverge)
        }
    } else {
        (false, Rationale::TermsDoNotVanish)
    }
}

/// Series closing the quadratic-exponential gap argument for genus `g`:
/// `ε_k = (4g-1)^{-[(2g+4)(4g-2)+η] k^2}`, `D_k = (4g-2)(g+2) k` and
/// `(4g-1)^{2k}` pairs at level `k`.
pub fn quadexp_series(g: u32, eta: BigRational) -> (Sequence, DegreeSequence, Sequence) {
    let g = g as i64;
    let base = 4 * g - 1;
    let c = q((2 * g + 4) * (4 * g - 2)) + eta;
    (
        Sequence::super_geometric(base, c),
        DegreeSequence::linear(q((4 * g - 2) * (g + 2))),
        Sequence::Exp { base: q(base), exponent: vec![q(0), q(2)] },
    )
}

/// Series for the word-identity bound with `m` generators:
/// `ε_D = (2m-1)^{-D^2 (m+2+η)}`, degrees `(m+2) D` and `(2m-1)^D` words.
pub fn word_identity_series(m: u32, eta: BigRational) -> (Sequence, DegreeSequence, Sequence) {
    let m = m as i64;
    let base = 2 * m - 1;
    (
        Sequence::super_geometric(base, q(m + 2) + eta),
        DegreeSequence::linear(q(m + 2)),
        Sequence::Exp { base: q(base), exponent: vec![q(0), q(1)] },
    )
}
