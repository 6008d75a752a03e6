//! Univariate polynomials over Q, resultants, and certified complex root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::complex::ComplexBox;
use super::rigorous::{Dyadic, RigorousReal, Round};
use crate::error::{Error, Result};

/// Dense univariate polynomial with rational coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly::new(vec![rat(1)])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        QPoly::new(vec![rat(0), rat(1)])
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn from_i64(c: &[i64]) -> Self {
        QPoly::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        QPoly::new(c.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_box(&self, z: &ComplexBox) -> ComplexBox {
        let p = z.precision();
        let mut acc = ComplexBox::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&ComplexBox::from_rational(c, p));
        }
        acc
    }

    pub fn eval_real(&self, x: &RigorousReal) -> RigorousReal {
        let p = x.precision();
        let mut acc = RigorousReal::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&RigorousReal::from_rational(c, p));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn add(&self, o: &QPoly) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        QPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &QPoly) -> Self {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(QPoly::one(), |acc, _| acc.mul(self))
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &QPoly) -> Self {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&QPoly::constant(c.clone()));
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = &r[i] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] -= &c * dc;
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        self.scale(&(BigRational::one() / lc))
    }

    /// Monic greatest common divisor (zero if both inputs vanish).
    pub fn gcd(&self, o: &QPoly) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Scale to a primitive integer polynomial with positive leading coefficient.
    pub fn to_primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }

    /// Integer coefficients, if all coefficients are integers.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Determinant of a square rational matrix by fraction Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    det
}

/// Resultant of two non-zero polynomials via the Sylvester determinant.
pub fn resultant(p: &QPoly, q: &QPoly) -> BigRational {
    let (m, n) = (
        p.degree().expect("non-zero polynomial"),
        q.degree().expect("non-zero polynomial"),
    );
    if m == 0 && n == 0 {
        return BigRational::one();
    }
    if m == 0 {
        return p.leading().pow(n as i32);
    }
    if n == 0 {
        return q.leading().pow(m as i32);
    }
    let size = m + n;
    let mut s = vec![vec![BigRational::zero(); size]; size];
    for r in 0..n {
        for (i, c) in p.coeffs.iter().rev().enumerate() {
            s[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in q.coeffs.iter().rev().enumerate() {
            s[n + r][r + i] = c.clone();
        }
    }
    determinant(s)
}

/// Interpolating polynomial through `(x_i, y_i)` (Newton divided differences).
pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> QPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = QPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = QPoly::new(vec![-xs[i].clone(), BigRational::one()]);
        acc = acc.mul(&lin).add(&QPoly::constant(dd[i].clone()));
    }
    acc
}

/// Monic polynomial whose roots are all `a + b` (`difference == false`) or `a - b`
/// for roots `a` of `p1` and `b` of `p2`: `Res_y(p1(y), p2(±(x - y)))`.
pub fn sum_polynomial(p1: &QPoly, p2: &QPoly, difference: bool) -> QPoly {
    let d1 = p1.degree().expect("non-zero polynomial");
    let d2 = p2.degree().expect("non-zero polynomial");
    let n = d1 * d2;
    let xs: Vec<BigRational> = (0..=n as i64).map(rat).collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x0| {
            // a + b = x  <=>  b = x - y ; a - b = x  <=>  b = y - x
            let arg = if difference {
                QPoly::new(vec![-x0.clone(), rat(1)])
            } else {
                QPoly::new(vec![x0.clone(), rat(-1)])
            };
            resultant(p1, &p2.compose(&arg))
        })
        .collect();
    interpolate(&xs, &ys).monic()
}

// ---- root finding ----

/// Approximate complex roots in `f64` (Aberth–Ehrlich iteration).
pub fn approximate_roots(p: &QPoly) -> Vec<(f64, f64)> {
    let d = p.degree().unwrap_or(0);
    if d == 0 {
        return vec![];
    }
    let c = p.monic().to_f64();
    let bound = 1.0 + c[..d].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let radius = bound.min(
        // Fujiwara-style estimate keeps the initial circle near the roots
        2.0 * (0..d)
            .map(|i| c[i].abs().powf(1.0 / (d - i) as f64))
            .fold(0.0, f64::max),
    );
    let mut z: Vec<(f64, f64)> = (0..d)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            (radius * th.cos(), radius * th.sin())
        })
        .collect();
    let eval = |x: (f64, f64)| {
        let mut v = (0.0, 0.0);
        let mut dv = (0.0, 0.0);
        for coef in c.iter().rev() {
            dv = cadd(cmul(dv, x), v);
            v = cadd(cmul(v, x), (*coef, 0.0));
        }
        (v, dv)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv) = eval(z[i]);
            if v == (0.0, 0.0) {
                continue;
            }
            let ratio = cdiv(v, dv);
            let mut s = (0.0, 0.0);
            for j in 0..d {
                if j != i {
                    s = cadd(s, cdiv((1.0, 0.0), csub(z[i], z[j])));
                }
            }
            let denom = csub((1.0, 0.0), cmul(ratio, s));
            let w = cdiv(ratio, denom);
            if w.0.is_finite() && w.1.is_finite() {
                z[i] = csub(z[i], w);
                moved = moved.max((w.0 * w.0 + w.1 * w.1).sqrt() / (1.0 + cabs(z[i])));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn cadd(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 + b.0, a.1 + b.1)
}
fn csub(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}
fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}
fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let n = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
}
fn cabs(a: (f64, f64)) -> f64 {
    (a.0 * a.0 + a.1 * a.1).sqrt()
}

/// Approximate complex number with dyadic parts, rounded at a working precision.
#[derive(Clone, Debug)]
struct DzApprox {
    re: Dyadic,
    im: Dyadic,
}

impl DzApprox {
    fn add(&self, o: &DzApprox) -> DzApprox {
        DzApprox {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }
    fn sub(&self, o: &DzApprox) -> DzApprox {
        DzApprox {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }
    fn mul(&self, o: &DzApprox, w: u32) -> DzApprox {
        DzApprox {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)).round(w, Round::Down),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)).round(w, Round::Down),
        }
    }
    fn div(&self, o: &DzApprox, w: u32) -> Option<DzApprox> {
        let n = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        if n.is_zero() {
            return None;
        }
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        Some(DzApprox {
            re: re.div_round(&n, w, Round::Down),
            im: im.div_round(&n, w, Round::Down),
        })
    }
    fn to_box(&self, prec: u32) -> ComplexBox {
        ComplexBox::new(
            RigorousReal::point(self.re.clone(), prec),
            RigorousReal::point(self.im.clone(), prec),
        )
    }
}

fn newton_refine(p: &QPoly, z0: (f64, f64), w: u32) -> DzApprox {
    let coeffs: Vec<DzApprox> = p
        .coeffs
        .iter()
        .map(|c| {
            let d = Dyadic::from_int(c.numer().clone())
                .div_round(&Dyadic::from_int(c.denom().clone()), w + 8, Round::Down);
            DzApprox {
                re: d,
                im: Dyadic::zero(),
            }
        })
        .collect();
    let mut z = DzApprox {
        re: Dyadic::from_f64(z0.0).unwrap_or_else(Dyadic::zero),
        im: Dyadic::from_f64(z0.1).unwrap_or_else(Dyadic::zero),
    };
    let mut prec = 60u32;
    let mut steps = 0;
    loop {
        prec = (prec * 2).min(w + 8);
        let mut v = DzApprox {
            re: Dyadic::zero(),
            im: Dyadic::zero(),
        };
        let mut dv = v.clone();
        for c in coeffs.iter().rev() {
            dv = dv.mul(&z, prec).add(&v);
            v = v.mul(&z, prec).add(c);
        }
        match v.div(&dv, prec) {
            Some(step) => z = z.sub(&step),
            None => break,
        }
        steps += 1;
        if prec >= w + 8 && steps > 3 || steps > 64 {
            break;
        }
    }
    z
}

/// Certified enclosures of all complex roots of a square-free polynomial.
///
/// Each returned box contains exactly one root. Roots certified to be real have
/// a point imaginary part equal to zero. Boxes of non-real roots come in
/// conjugate pairs. The order is: real roots ascending, then complex roots by
/// ascending real part with the positive-imaginary member first.
pub fn isolate_roots(p: &QPoly, prec: u32) -> Result<Vec<ComplexBox>> {
    let d = p
        .degree()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::RootIsolation("constant polynomial".into()))?;
    if p.gcd(&p.derivative()).degree() != Some(0) {
        return Err(Error::RootIsolation("polynomial is not square-free".into()));
    }
    let approx = approximate_roots(p);
    let mut w = prec + 32;
    for _attempt in 0..4 {
        // symmetrize: snap near-real roots, pair conjugates
        let mut centers: Vec<DzApprox> = Vec::with_capacity(d);
        let mut snapped = vec![false; d];
        let mut used = vec![false; d];
        for i in 0..d {
            if used[i] {
                continue;
            }
            used[i] = true;
            let (re, im) = approx[i];
            let near_real = im.abs() <= 1e-7 * (1.0 + re.abs());
            let z = newton_refine(p, (re, if near_real { 0.0 } else { im }), w);
            if near_real {
                centers.push(DzApprox {
                    re: z.re,
                    im: Dyadic::zero(),
                });
                snapped.push(true);
            } else {
                // find the conjugate partner among remaining approximations
                let partner = (0..d)
                    .filter(|&j| !used[j])
                    .min_by(|&a, &b| {
                        let da = cabs(csub(approx[a], (re, -im)));
                        let db = cabs(csub(approx[b], (re, -im)));
                        da.partial_cmp(&db).unwrap()
                    })
                    .ok_or_else(|| Error::RootIsolation("unpaired complex root".into()))?;
                used[partner] = true;
                let zc = DzApprox {
                    re: z.re.clone(),
                    im: z.im.neg(),
                };
                centers.push(z);
                centers.push(zc);
            }
        }
        snapped.clear();
        let boxes: Vec<ComplexBox> = centers.iter().map(|c| c.to_box(w)).collect();
        let lc = RigorousReal::from_rational(&p.leading(), w).abs();
        let dr = RigorousReal::from_i64(d as i64, w);
        let mut radii = Vec::with_capacity(d);
        let mut ok = true;
        for i in 0..d {
            let mut denom = lc.clone();
            for j in 0..d {
                if j != i {
                    denom = denom.mul(&boxes[i].sub(&boxes[j]).abs());
                }
            }
            match p.eval_box(&boxes[i]).abs().mul(&dr).div(&denom) {
                Some(r) => radii.push(r.hi().clone()),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            'pairs: for i in 0..d {
                for j in i + 1..d {
                    let dist = boxes[i].sub(&boxes[j]).abs();
                    let rsum = RigorousReal::point(radii[i].add(&radii[j]), w);
                    if !rsum.certainly_lt(&dist) {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        if ok {
            let mut out: Vec<(bool, ComplexBox)> = centers
                .iter()
                .zip(&radii)
                .map(|(c, r)| {
                    let re = RigorousReal::new(c.re.sub(r), c.re.add(r), prec);
                    let real = c.im.is_zero();
                    let im = if real {
                        RigorousReal::zero(prec)
                    } else {
                        RigorousReal::new(c.im.sub(r), c.im.add(r), prec)
                    };
                    (real, ComplexBox::new(re, im))
                })
                .collect();
            out.sort_by(|a, b| {
                b.0.cmp(&a.0)
                    .then(a.1.re.lo().cmp(b.1.re.lo()))
                    .then(b.1.im.lo().cmp(a.1.im.lo()))
            });
            return Ok(out.into_iter().map(|(_, b)| b).collect());
        }
        w *= 2;
    }
    Err(Error::RootIsolation(format!(
        "inclusion discs failed to separate for degree {d}"
    )))
}

/// Searches for a non-trivial monic integer factor of a monic integer polynomial
/// using certified root enclosures: every factor is a product of `x - root` over
/// a conjugation-closed subset of roots.
pub fn find_integer_factor(p: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let q = QPoly::from_ints(p);
    let d = q.degree().unwrap_or(0);
    if d <= 1 {
        return Ok(None);
    }
    if !q.is_monic() {
        return Err(Error::InvalidInput("polynomial must be monic".into()));
    }
    if q.gcd(&q.derivative()).degree() != Some(0) {
        // a repeated factor is a factor
        return Ok(Some(q.gcd(&q.derivative()).to_primitive_integer()));
    }
    let roots = isolate_roots(&q, 96)?;
    // group into conjugation orbits: real roots alone, complex pairs together
    let mut units: Vec<Vec<usize>> = Vec::new();
    let mut taken = vec![false; d];
    for i in 0..d {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        if roots[i].is_real() {
            units.push(vec![i]);
        } else {
            let conj = roots[i].conj();
            let j = (0..d)
                .find(|&j| !taken[j] && roots[j].overlaps(&conj))
                .ok_or_else(|| Error::RootIsolation("conjugate not found".into()))?;
            taken[j] = true;
            units.push(vec![i, j]);
        }
    }
    let prec = 96;
    let mut best: Option<Vec<BigInt>> = None;
    let mut stack: Vec<(usize, usize, Vec<ComplexBox>)> =
        vec![(0, 0, vec![ComplexBox::one(prec)])];
    while let Some((next, size, poly)) = stack.pop() {
        if size > 0 && size <= d / 2 {
            if let Some(cand) = integer_candidate(&poly) {
                let cq = QPoly::from_ints(&cand);
                if q.div_rem(&cq).1.is_zero() {
                    best = Some(cand);
                    break;
                }
            }
        }
        for u in next..units.len() {
            let add = units[u].len();
            if size + add > d / 2 {
                continue;
            }
            let mut np = poly.clone();
            for &r in &units[u] {
                np = mul_linear(&np, &roots[r]);
            }
            stack.push((u + 1, size + add, np));
        }
    }
    Ok(best)
}

fn mul_linear(p: &[ComplexBox], root: &ComplexBox) -> Vec<ComplexBox> {
    let prec = root.precision();
    let mut out = vec![ComplexBox::zero(prec); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] = out[i + 1].add(c);
        out[i] = out[i].sub(&c.mul(root));
    }
    out
}

fn integer_candidate(p: &[ComplexBox]) -> Option<Vec<BigInt>> {
    p.iter()
        .map(|c| {
            if !c.im.contains_zero() {
                return None;
            }
            let lo = c.re.lo().to_rational().ceil().to_integer();
            let hi = c.re.hi().to_rational().floor().to_integer();
            (lo <= hi).then_some(lo)
        })
        .collect()
}

/// Irreducibility over Q of a monic integer polynomial of degree at most 16.
pub fn is_irreducible(p: &[BigInt]) -> Result<bool> {
    let d = p.len().saturating_sub(1);
    if d > 16 {
        return Err(Error::DegreeTooLarge(d));
    }
    if d == 0 {
        return Ok(false);
    }
    Ok(find_integer_factor(p)?.is_none())
}
