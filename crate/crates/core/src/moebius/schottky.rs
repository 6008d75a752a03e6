//! Schottky configurations: ping-pong verification, seeded sampling, and presets.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{int_matrix, Matrix2};
use super::scalar::Scalar;
use super::tuple::{relation_repair, GeneratorTuple, Relation};
use crate::error::{Error, Result};
use crate::number_theory::{FieldElement, NumberField, RigorousReal};

const PINGPONG_PRECISION: u32 = 128;

/// A closed region of the real line: `None` endpoints are infinite.
#[derive(Clone, Debug)]
struct Region {
    lo: Option<RigorousReal>,
    hi: Option<RigorousReal>,
}

impl Region {
    /// Interiors are certainly disjoint.
    fn disjoint(&self, o: &Region) -> bool {
        let before = |x: &Region, y: &Region| match (&x.hi, &y.lo) {
            (Some(h), Some(l)) => h.certainly_le(l),
            _ => false,
        };
        before(self, o) || before(o, self)
    }
}

/// The two ping-pong regions of a generator: the diameters of its isometric
/// circles, or for a translation `z -> z + τ` the half-lines `|x| >= |τ|/2`.
fn regions<S: Scalar>(m: &Matrix2<S>) -> Option<Vec<Region>> {
    let p = PINGPONG_PRECISION;
    match m.c.sign()? {
        0 => {
            let one = m.a.one_like();
            let unipotent = (m.a.exact_eq(&one)? && m.d.exact_eq(&one)?)
                || (m.a.exact_eq(&one.neg())? && m.d.exact_eq(&one.neg())?);
            if !unipotent || m.b.sign()? == 0 {
                return None;
            }
            let h = m.b.to_real(p).abs().mul(&RigorousReal::from_rational(
                &BigRational::new(1.into(), 2.into()),
                p,
            ));
            Some(vec![
                Region {
                    lo: None,
                    hi: Some(h.neg()),
                },
                Region {
                    lo: Some(h),
                    hi: None,
                },
            ])
        }
        _ => {
            let c = m.c.to_real(p);
            let r = c.abs().recip()?;
            let centers = [m.d.to_real(p).neg().div(&c)?, m.a.to_real(p).div(&c)?];
            Some(
                centers
                    .iter()
                    .map(|x| Region {
                        lo: Some(x.sub(&r)),
                        hi: Some(x.add(&r)),
                    })
                    .collect(),
            )
        }
    }
}

/// Ping-pong check: all isometric-circle regions have pairwise disjoint
/// interiors, which makes the group free and discrete on these generators.
pub fn is_schottky<S: Scalar>(t: &GeneratorTuple<S>) -> bool {
    let mut all = Vec::new();
    for g in t.generators() {
        match regions(g) {
            Some(r) => all.extend(r),
            None => return false,
        }
    }
    // at most one translation: two would overlap at infinity
    let unbounded = all.iter().filter(|r| r.lo.is_none() || r.hi.is_none()).count();
    if unbounded > 2 {
        return false;
    }
    (0..all.len()).all(|i| (i + 1..all.len()).all(|j| all[i].disjoint(&all[j])))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The generator with isometric circles centred at `p` (its own) and `q` (its
/// inverse's), both of radius `r`: `c = 1/r`, `a = q c`, `d = -p c`.
fn circle_generator(p: &BigRational, qc: &BigRational, r: &BigRational) -> Matrix2<BigRational> {
    let c = r.recip();
    let a = qc * &c;
    let d = -(p * &c);
    let b = (&a * &d - BigRational::from_integer(1.into())) / &c;
    Matrix2::from_entries(a, b, c, d)
}

/// Hyperbolic element with rational fixed points `x1` (attracting) and `x2`
/// and eigenvalue `l > 1` on the attracting eigenvector.
fn fixed_point_generator(x1: &BigRational, x2: &BigRational, l: &BigRational) -> Matrix2<BigRational> {
    let one = BigRational::from_integer(1.into());
    let p = Matrix2::from_entries(x1.clone(), x2.clone(), one.clone(), one);
    let det = x1 - x2;
    let pinv = Matrix2::from_entries(
        p.d.clone() / &det,
        -p.b.clone() / &det,
        -p.c.clone() / &det,
        p.a.clone() / &det,
    );
    let d = Matrix2::from_entries(l.clone(), q(0, 1), q(0, 1), l.recip());
    p.mul(&d).mul(&pinv)
}

/// `2m` slot centres with jitter, a radius per generator, and a random pairing.
fn schottky_generators(rng: &mut ChaCha8Rng, m: usize, spread: f64) -> Vec<Matrix2<BigRational>> {
    let mut slots: Vec<usize> = (0..2 * m).collect();
    slots.shuffle(rng);
    let center = |rng: &mut ChaCha8Rng, k: usize| q(100 * k as i64 + rng.gen_range(-4..=4), 100);
    (0..m)
        .map(|j| {
            let u: f64 = rng.gen_range(0.2..0.45);
            let rn = ((spread * u * 100.0).round() as i64).clamp(1, 45);
            let r = q(rn, 100);
            let p = center(rng, slots[2 * j]);
            let qc = center(rng, slots[2 * j + 1]);
            circle_generator(&p, &qc, &r)
        })
        .collect()
}

/// Deterministic tuple from a seed.
///
/// Free mode returns `m` Schottky generators (disjoint isometric circles, so the
/// group is free and discrete and every non-trivial element is hyperbolic).
/// Genus mode (`m = 2g`, `g >= 2`) samples `2g - 2` Schottky-style generators and
/// a penultimate one with rational fixed points, then completes the tuple by
/// [`relation_repair`], resampling on failure.
pub fn sample_tuple(m: usize, genus: bool, seed: u64, spread: f64) -> Result<GeneratorTuple<BigRational>> {
    if m < 2 {
        return Err(Error::InvalidInput("need at least two generators".into()));
    }
    if !(spread > 0.0 && spread <= 1.0) {
        return Err(Error::InvalidInput("spread must lie in (0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if !genus {
        let t = GeneratorTuple::free(schottky_generators(&mut rng, m, spread))?;
        debug_assert!(is_schottky(&t));
        return Ok(t);
    }
    if m % 2 != 0 || m < 4 {
        return Err(Error::InvalidInput(
            "genus mode needs m = 2g generators with g >= 2".into(),
        ));
    }
    const ATTEMPTS: usize = 32;
    for _ in 0..ATTEMPTS {
        let mut gens = schottky_generators(&mut rng, m - 2, spread);
        let base = 200 * m as i64;
        let x1 = q(base + rng.gen_range(-20..=20), 100);
        let x2 = q(-base + rng.gen_range(-20..=20), 100);
        let lambda = [q(2, 1), q(3, 1), q(5, 2), q(3, 2), q(4, 1), q(5, 3)][rng.gen_range(0..6)].clone();
        gens.push(fixed_point_generator(&x1, &x2, &lambda));
        if let Ok(out) = relation_repair(&gens) {
            if let Ok(t) = out.complete(&gens) {
                return Ok(t);
            }
        }
    }
    Err(Error::SamplingFailed(ATTEMPTS))
}

/// A named generator tuple with its scalar kind.
#[derive(Clone, Debug)]
pub enum AnyTuple {
    Rational(GeneratorTuple<BigRational>),
    Field(GeneratorTuple<FieldElement>),
    Interval(GeneratorTuple<RigorousReal>),
}

impl AnyTuple {
    pub fn arity(&self) -> usize {
        match self {
            AnyTuple::Rational(t) => t.arity(),
            AnyTuple::Field(t) => t.arity(),
            AnyTuple::Interval(t) => t.arity(),
        }
    }

    pub fn relation(&self) -> Relation {
        match self {
            AnyTuple::Rational(t) => t.relation(),
            AnyTuple::Field(t) => t.relation(),
            AnyTuple::Interval(t) => t.relation(),
        }
    }
}

pub const PRESET_NAMES: [&str; 6] = [
    "sanov",
    "sanov-hyperbolic",
    "sqrt2",
    "schottky-pair",
    "schottky-triple",
    "genus2",
];

/// Classical and seeded generator tuples by name.
pub fn preset(name: &str) -> Result<AnyTuple> {
    Ok(match name {
        "sanov" => AnyTuple::Rational(GeneratorTuple::free(vec![
            int_matrix(1, 2, 0, 1),
            int_matrix(1, 0, 2, 1),
        ])?),
        // ab and a^2 b of the Sanov pair: a hyperbolic pair in the same group
        "sanov-hyperbolic" => AnyTuple::Rational(GeneratorTuple::free(vec![
            int_matrix(5, 2, 2, 1),
            int_matrix(9, 4, 2, 1),
        ])?),
        "sqrt2" => {
            let k: Arc<NumberField> =
                NumberField::new(&[BigInt::from(-2), BigInt::from(0), BigInt::from(1)], None)?;
            let e = |c0: i64, c1: i64| FieldElement::new(&k, vec![q(c0, 1), q(c1, 1)]);
            let a1 = Matrix2::new(e(3, 0)?, e(0, 2)?, e(0, 2)?, e(3, 0)?)?;
            let a2 = Matrix2::new(e(0, 3)?, e(17, 0)?, e(1, 0)?, e(0, 3)?)?;
            AnyTuple::Field(GeneratorTuple::free(vec![a1, a2])?)
        }
        "schottky-pair" => AnyTuple::Rational(sample_tuple(2, false, 1, 1.0)?),
        "schottky-triple" => AnyTuple::Rational(sample_tuple(3, false, 1, 1.0)?),
        "genus2" => AnyTuple::Rational(sample_tuple(4, true, 1, 1.0)?),
        _ => return Err(Error::InvalidInput(format!("unknown preset {name:?}"))),
    })
}
