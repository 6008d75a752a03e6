//! Certified real enclosures with dyadic endpoints.
//!
//! Every primitive operation returns the exact result rounded *outward* to the
//! working precision (lower endpoint rounded toward −∞, upper toward +∞). The
//! transcendental operations (`ln`, `acosh`) are correctly rounded in the
//! directed sense, so an expression re-evaluated at a higher precision from the
//! same exact inputs always produces an interval nested inside the coarser one.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Precision (mantissa bits) used when callers have no preference.
pub const DEFAULT_PRECISION: u32 = 64;

/// Rounding direction for a single endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// An exact binary fraction `mant * 2^exp`.
///
/// Normalized so that `mant` is odd (or zero with `exp == 0`), which makes
/// derived equality structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// Exact conversion; `None` for non-finite input.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(mant) * sign, exp))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus
    }

    /// Bit length of the mantissa magnitude.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Position of the leading bit: the value lies in `[2^(top-1), 2^top)` in magnitude.
    fn top(&self) -> i64 {
        self.bits() as i64 + self.exp
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let m = match dir {
            Round::Down => &self.mant >> shift,
            Round::Up => -((-&self.mant) >> shift),
        };
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// Directed-rounded quotient. Panics on a zero divisor.
    pub fn div_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = (prec as i64 + 2 + other.bits() as i64 - self.bits() as i64).max(0) as u64;
        let num = &self.mant << shift;
        let q = match dir {
            Round::Down => num.div_floor(&other.mant),
            Round::Up => -((-num).div_floor(&other.mant)),
        };
        Dyadic::new(q, self.exp - other.exp - shift as i64).round(prec, dir)
    }

    /// Directed-rounded square root of a non-negative value.
    pub fn sqrt_round(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "square root of a negative number");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut m = self.mant.clone();
        let mut e = self.exp;
        if e.rem_euclid(2) == 1 {
            m <<= 1u32;
            e -= 1;
        }
        let want = 2 * prec as u64 + 4;
        let extra = want.saturating_sub(m.bits());
        let t = extra.div_ceil(2);
        m <<= 2 * t;
        e -= 2 * t as i64;
        let s = m.sqrt();
        let s = match dir {
            Round::Down => s,
            Round::Up => {
                if &s * &s == m {
                    s
                } else {
                    s + 1
                }
            }
        };
        Dyadic::new(s, e / 2).round(prec, dir)
    }

    /// Exact rational value.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest `f64` in the requested direction (saturating to ±∞ / 0 outside range).
    pub fn to_f64_round(&self, dir: Round) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(53, dir);
        let m = r.mant.to_i64().expect("53-bit mantissa fits i64") as f64;
        let top = r.top();
        if top > 1024 {
            return if r.is_negative() {
                if dir == Round::Up {
                    f64::MIN
                } else {
                    f64::NEG_INFINITY
                }
            } else if dir == Round::Up {
                f64::INFINITY
            } else {
                f64::MAX
            };
        }
        if top < -1021 {
            // below the normal range; keep the directed guarantee
            return match (dir, r.is_negative()) {
                (Round::Down, false) => 0.0,
                (Round::Up, false) => f64::MIN_POSITIVE,
                (Round::Down, true) => -f64::MIN_POSITIVE,
                (Round::Up, true) => -0.0,
            };
        }
        m * pow2(r.exp)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(53, Round::Down);
        let top = r.top();
        if top > 1024 {
            return if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if top < -1060 {
            return 0.0;
        }
        r.mant.to_f64().unwrap_or(0.0) * pow2(r.exp)
    }

    /// Approximate base-2 logarithm of the magnitude; usable far outside the `f64` range.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let b = self.bits();
        let shift = b.saturating_sub(60);
        let head = (self.mant.abs() >> shift).to_f64().unwrap_or(1.0);
        head.log2() + (shift as i64 + self.exp) as f64
    }
}

fn pow2(e: i64) -> f64 {
    // exact for the range reached from to_f64 (split to avoid intermediate overflow)
    let half = e / 2;
    2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let by_magnitude = self.top().cmp(&other.top());
        if by_magnitude != Ordering::Equal {
            return if sa == Sign::Plus {
                by_magnitude
            } else {
                by_magnitude.reverse()
            };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

// Fixed-point helpers for the logarithm. Values are integers scaled by 2^w.

/// `2^w * atanh(t / 2^w)` for `|t| <= 2^w / 3`, with a bound on the absolute error in ulps.
fn atanh_fixed(t: &BigInt, w: u64) -> (BigInt, u64) {
    // odd function: sum on |t| so that every shift truncates toward zero
    let neg = t.is_negative();
    let t = t.abs();
    let t2 = (&t * &t) >> w;
    let mut term = t.clone();
    let mut sum = t.clone();
    let mut j: u64 = 1;
    loop {
        term = (&term * &t2) >> w;
        if term.is_zero() {
            break;
        }
        let q = &term / BigInt::from(2 * j + 1);
        sum += q;
        j += 1;
    }
    // each term carries at most 3 ulps of truncation error; the neglected tail is < 4 ulps
    (if neg { -sum } else { sum }, 3 * j + 8)
}

/// Enclosure `[s - e, s + e] * 2^-w` of `ln x` for `x > 0`, `x != 1`.
fn ln_fixed(x: &Dyadic, w: u64) -> (BigInt, BigInt) {
    let b = x.bits() as i64;
    let m = x.mantissa();
    // x = y * 2^k with y in [0.75, 1.5)
    let mut k = x.exponent() + b - 1;
    let mut lead_shift = w as i64 - (b - 1);
    let two_bit = if b >= 2 {
        (m >> (b as u64 - 2)) == BigInt::from(3)
    } else {
        false
    };
    if two_bit {
        k += 1;
        lead_shift -= 1;
    }
    let y = if lead_shift >= 0 {
        m << lead_shift as u64
    } else {
        m >> (-lead_shift) as u64
    };
    let one = BigInt::one() << w;
    let t = ((&y - &one) << w).div_floor(&(&y + &one));
    let (s, e) = atanh_fixed(&t, w);
    let ln_y = s * 2;
    let err_y = 2 * e + 6;

    let (ln2, err2) = {
        let t3 = &one / BigInt::from(3);
        let (s, e) = atanh_fixed(&t3, w);
        (s * 2, 2 * e + 3)
    };
    let kb = BigInt::from(k);
    let total = ln_y + &kb * ln2;
    let err = BigInt::from(err_y) + kb.abs() * BigInt::from(err2) + 1;
    (total, err)
}

/// Correctly directed-rounded natural logarithm of a positive dyadic.
pub fn ln_round(x: &Dyadic, prec: u32, dir: Round) -> Dyadic {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    if *x == Dyadic::from_i64(1) {
        return Dyadic::zero();
    }
    let k_bits = 64 - (x.exponent() + x.bits() as i64).unsigned_abs().leading_zeros() as u64;
    let mut w = prec as u64 + 40 + k_bits;
    loop {
        let (s, e) = ln_fixed(x, w);
        let lo = Dyadic::new(&s - &e, -(w as i64));
        let hi = Dyadic::new(&s + &e, -(w as i64));
        let a = lo.round(prec, dir);
        let b = hi.round(prec, dir);
        if a == b {
            return a;
        }
        if w > 1 << 20 {
            // give up on the exact directed rounding, still a valid bound
            return match dir {
                Round::Down => lo.round(prec, Round::Down),
                Round::Up => hi.round(prec, Round::Up),
            };
        }
        w += w.max(64) / 2;
    }
}

/// A real number carried as a certified enclosure `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigorousReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl RigorousReal {
    /// Builds `[lo, hi]` rounded outward to `prec` bits. Panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "empty enclosure");
        RigorousReal {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        RigorousReal::new(x.clone(), x, prec)
    }

    pub fn zero(prec: u32) -> Self {
        RigorousReal::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        RigorousReal::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        RigorousReal::point(Dyadic::from_i64(n), prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        RigorousReal::point(Dyadic::from_int(n.clone()), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let n = Dyadic::from_int(q.numer().clone());
        let d = Dyadic::from_int(q.denom().clone());
        RigorousReal {
            lo: n.div_round(&d, prec, Round::Down),
            hi: n.div_round(&d, prec, Round::Up),
            prec,
        }
    }

    /// Exact enclosure of a finite `f64`.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        RigorousReal::point(Dyadic::from_f64(x).expect("finite f64"), prec)
    }

    /// Enclosure `[mid - rad, mid + rad]` of two finite `f64`s.
    pub fn from_mid_rad(mid: f64, rad: f64, prec: u32) -> Self {
        let m = Dyadic::from_f64(mid).expect("finite midpoint");
        let r = Dyadic::from_f64(rad.abs()).expect("finite radius");
        RigorousReal::new(m.sub(&r), m.add(&r), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Same set, re-rounded outward to `prec` bits.
    pub fn with_precision(&self, prec: u32) -> Self {
        RigorousReal::new(self.lo.clone(), self.hi.clone(), prec)
    }

    fn out(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        RigorousReal {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid_f64(&self) -> f64 {
        self.lo.add(&self.hi).mul_pow2(-1).to_f64()
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let lo = self.lo.to_rational();
        let hi = self.hi.to_rational();
        &lo <= q && q <= &hi
    }

    pub fn subset_of(&self, other: &RigorousReal) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &RigorousReal) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &RigorousReal) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &RigorousReal) -> bool {
        self.hi <= other.lo
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn neg(&self) -> Self {
        RigorousReal {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let hi = self.lo.abs().max(self.hi.clone());
            RigorousReal {
                lo: Dyadic::zero(),
                hi,
                prec: self.prec,
            }
        }
    }

    pub fn add(&self, other: &RigorousReal) -> Self {
        let p = self.prec.max(other.prec);
        RigorousReal::out(self.lo.add(&other.lo), self.hi.add(&other.hi), p)
    }

    pub fn sub(&self, other: &RigorousReal) -> Self {
        let p = self.prec.max(other.prec);
        RigorousReal::out(self.lo.sub(&other.hi), self.hi.sub(&other.lo), p)
    }

    pub fn mul(&self, other: &RigorousReal) -> Self {
        let p = self.prec.max(other.prec);
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RigorousReal::out(lo, hi, p)
    }

    pub fn square(&self) -> Self {
        let a = self.abs();
        let p = self.prec;
        RigorousReal::out(a.lo.mul(&a.lo), a.hi.mul(&a.hi), p)
    }

    /// `None` when the divisor encloses zero.
    pub fn div(&self, other: &RigorousReal) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let p = self.prec.max(other.prec);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.div_round(b, p, Round::Down))
            .min()
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| a.div_round(b, p, Round::Up))
            .max()
            .unwrap();
        Some(RigorousReal { lo, hi, prec: p })
    }

    pub fn recip(&self) -> Option<Self> {
        RigorousReal::one(self.prec).div(self)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = RigorousReal::one(self.prec);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Square root; negative parts of the enclosure are clipped to zero. `None` if entirely negative.
    pub fn sqrt(&self) -> Option<Self> {
        if self.hi.is_negative() {
            return None;
        }
        let lo = if self.lo.is_negative() {
            Dyadic::zero()
        } else {
            self.lo.sqrt_round(self.prec, Round::Down)
        };
        let hi = self.hi.sqrt_round(self.prec, Round::Up);
        Some(RigorousReal {
            lo,
            hi,
            prec: self.prec,
        })
    }

    /// Natural logarithm; `None` unless the enclosure is strictly positive.
    pub fn ln(&self) -> Option<Self> {
        if !self.is_positive() {
            return None;
        }
        Some(RigorousReal {
            lo: ln_round(&self.lo, self.prec, Round::Down),
            hi: ln_round(&self.hi, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    /// `acosh(x) = ln(x + sqrt(x^2 - 1))`; `None` unless `x >= 1` is certain.
    pub fn acosh(&self) -> Option<Self> {
        let one = RigorousReal::one(self.prec);
        if self.lo < *one.lo() {
            return None;
        }
        let s = self.square().sub(&one).sqrt()?;
        let arg = self.add(&s);
        if arg.lo < *one.lo() {
            // rounding can dip below one only for x == 1 exactly
            let clipped = RigorousReal {
                lo: one.lo.clone(),
                hi: arg.hi.clone(),
                prec: self.prec,
            };
            return clipped.ln();
        }
        arg.ln()
    }

    pub fn max(&self, other: &RigorousReal) -> Self {
        RigorousReal {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn min(&self, other: &RigorousReal) -> Self {
        RigorousReal {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn hull(&self, other: &RigorousReal) -> Self {
        RigorousReal {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    /// Intersection of two enclosures of the same quantity; `None` if they are disjoint.
    pub fn intersect(&self, other: &RigorousReal) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo > hi {
            return None;
        }
        Some(RigorousReal {
            lo,
            hi,
            prec: self.prec.max(other.prec),
        })
    }

    /// Approximate `log10` of the midpoint magnitude, valid far outside the `f64` range.
    pub fn log10_mid(&self) -> f64 {
        let m = self.lo.add(&self.hi).mul_pow2(-1);
        m.log2_abs() * std::f64::consts::LOG10_2
    }
}

impl fmt::Display for RigorousReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_f64(), self.hi_f64())
    }
}
