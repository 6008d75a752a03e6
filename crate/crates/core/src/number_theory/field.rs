//! Real number fields `Q(θ)` presented by a monic irreducible integer polynomial,
//! with a chosen real embedding and certified enclosures of every conjugate.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::complex::ComplexBox;
use super::poly::{is_irreducible, isolate_roots, QPoly};
use super::rigorous::RigorousReal;
use crate::error::{Error, Result};

/// Base precision of the root enclosures; higher levels double it.
const ROOT_BASE_PREC: u32 = 64;

pub struct NumberField {
    minpoly: QPoly,
    /// Index into the root list of the chosen real embedding of `θ`.
    real_index: usize,
    /// Nested root enclosures at precisions `64 * 2^k`.
    roots: Mutex<Vec<Vec<ComplexBox>>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("minpoly", &self.minpoly.to_string())
            .field("real_index", &self.real_index)
            .finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        self.minpoly == o.minpoly && self.real_index == o.real_index
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// The field of rationals, presented by `x`.
    pub fn rationals() -> Arc<NumberField> {
        NumberField::new(&[BigInt::zero(), BigInt::one()], None).expect("x is irreducible")
    }

    /// Builds `Q(θ)` with `θ` a root of the monic integer polynomial `coeffs`
    /// (constant term first). The real embedding is the real root whose
    /// enclosure meets `[mid - rad, mid + rad]`, or the largest real root.
    pub fn new(coeffs: &[BigInt], embedding: Option<(f64, f64)>) -> Result<Arc<NumberField>> {
        let minpoly = QPoly::from_ints(coeffs);
        let d = minpoly.degree().ok_or(Error::DegreeZero)?;
        if d == 0 {
            return Err(Error::DegreeZero);
        }
        if !minpoly.is_monic() {
            return Err(Error::InvalidInput("minimal polynomial must be monic".into()));
        }
        if !is_irreducible(coeffs)? {
            return Err(Error::Reducible(minpoly.to_string()));
        }
        let roots = isolate_roots(&minpoly, ROOT_BASE_PREC)?;
        let real: Vec<usize> = (0..d).filter(|&i| roots[i].is_real()).collect();
        let real_index = match embedding {
            None => *real
                .last()
                .ok_or_else(|| Error::InvalidInput(format!("{minpoly} has no real root")))?,
            Some((mid, rad)) => {
                let window = RigorousReal::from_mid_rad(mid, rad, ROOT_BASE_PREC);
                let hits: Vec<usize> = real
                    .iter()
                    .copied()
                    .filter(|&i| roots[i].re.overlaps(&window))
                    .collect();
                match hits.as_slice() {
                    [i] => *i,
                    [] => {
                        return Err(Error::InvalidInput(format!(
                            "no real root of {minpoly} near {mid}"
                        )))
                    }
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "embedding window around {mid} is ambiguous"
                        )))
                    }
                }
            }
        };
        Ok(Arc::new(NumberField {
            minpoly,
            real_index,
            roots: Mutex::new(vec![roots]),
        }))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// Certified enclosures of all `d` roots at precision at least `prec`.
    ///
    /// Enclosures at a higher precision are contained in those at a lower one.
    pub fn roots(&self, prec: u32) -> Vec<ComplexBox> {
        let mut level = 0usize;
        while (ROOT_BASE_PREC << level) < prec {
            level += 1;
        }
        let mut cache = self.roots.lock().expect("root cache poisoned");
        while cache.len() <= level {
            let p = ROOT_BASE_PREC << cache.len();
            let fresh = isolate_roots(&self.minpoly, p)
                .expect("a root isolation that succeeded once succeeds at higher precision");
            let prev = cache.last().unwrap();
            let next = prev
                .iter()
                .map(|old| {
                    fresh
                        .iter()
                        .find_map(|b| b.intersect(old))
                        .expect("refined root lies in its coarser enclosure")
                })
                .collect();
            cache.push(next);
        }
        cache[level].clone()
    }

    /// Enclosure of the primitive element in the chosen real embedding.
    pub fn real_root(&self, prec: u32) -> RigorousReal {
        self.roots(prec)[self.real_index].re.clone()
    }

    /// Text form: `field c0 c1 ... cd` and `embedding mid rad`.
    pub fn to_text(&self) -> String {
        let coeffs: Vec<String> = self
            .minpoly
            .to_integers()
            .expect("integer minimal polynomial")
            .iter()
            .map(|c| c.to_string())
            .collect();
        let r = self.real_root(ROOT_BASE_PREC);
        let rad = (r.hi_f64() - r.lo_f64()).max(1e-12);
        format!("field {}\nembedding {} {}\n", coeffs.join(" "), r.mid_f64(), rad)
    }
}

/// An element `Σ c_i θ^i` of a number field in power-basis coordinates.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<NumberField>,
    poly: QPoly,
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.same_field(o) && self.poly == o.poly
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.poly.hash(h);
    }
}

impl FieldElement {
    pub fn new(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() > field.degree() {
            return Err(Error::InvalidInput(format!(
                "{} coordinates for a degree {} field",
                coords.len(),
                field.degree()
            )));
        }
        Ok(FieldElement {
            field: field.clone(),
            poly: QPoly::new(coords),
        })
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        FieldElement {
            field: field.clone(),
            poly: QPoly::constant(q),
        }
    }

    pub fn from_i64(field: &Arc<NumberField>, n: i64) -> Self {
        FieldElement::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        FieldElement::from_i64(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        FieldElement::from_i64(field, 1)
    }

    /// The primitive element `θ`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        let poly = QPoly::x().div_rem(field.minpoly()).1;
        FieldElement {
            field: field.clone(),
            poly,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> Vec<BigRational> {
        (0..self.field.degree()).map(|i| self.poly.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.poly == QPoly::one()
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.poly.degree().unwrap_or(0) == 0).then(|| self.poly.coeff(0))
    }

    fn same_field(&self, o: &FieldElement) -> bool {
        Arc::ptr_eq(&self.field, &o.field) || *self.field == *o.field
    }

    fn check(&self, o: &FieldElement) -> Result<()> {
        if self.same_field(o) {
            Ok(())
        } else {
            Err(Error::ScalarMismatch(format!(
                "elements of {} and {}",
                self.field.minpoly, o.field.minpoly
            )))
        }
    }

    fn wrap(&self, poly: QPoly) -> Self {
        FieldElement {
            field: self.field.clone(),
            poly,
        }
    }

    pub fn add(&self, o: &FieldElement) -> Result<Self> {
        self.check(o)?;
        Ok(self.wrap(self.poly.add(&o.poly)))
    }

    pub fn sub(&self, o: &FieldElement) -> Result<Self> {
        self.check(o)?;
        Ok(self.wrap(self.poly.sub(&o.poly)))
    }

    pub fn mul(&self, o: &FieldElement) -> Result<Self> {
        self.check(o)?;
        Ok(self.wrap(self.poly.mul(&o.poly).div_rem(self.field.minpoly()).1))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.poly.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        self.wrap(self.poly.scale(q))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = FieldElement::one(&self.field);
        for _ in 0..n {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        // invariant: r_i = s_i * a (mod minpoly)
        let (mut r0, mut r1) = (self.field.minpoly().clone(), self.poly.clone());
        let (mut s0, mut s1) = (QPoly::zero(), QPoly::one());
        while r1.degree() != Some(0) {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            if r1.is_zero() {
                return Err(Error::Reducible(self.field.minpoly.to_string()));
            }
        }
        let c = r1.coeff(0);
        Ok(self.wrap(s1.scale(&(BigRational::one() / c)).div_rem(self.field.minpoly()).1))
    }

    pub fn div(&self, o: &FieldElement) -> Result<Self> {
        self.mul(&o.inverse()?)
    }

    /// Enclosures of `σ_j(self)` for every embedding, in root order.
    pub fn embeddings(&self, prec: u32) -> Vec<ComplexBox> {
        self.field
            .roots(prec)
            .iter()
            .map(|r| self.poly.eval_box(r))
            .collect()
    }

    /// Enclosure of the value in the chosen real embedding.
    pub fn real_value(&self, prec: u32) -> RigorousReal {
        if let Some(q) = self.as_rational() {
            return RigorousReal::from_rational(&q, prec);
        }
        self.poly.eval_real(&self.field.real_root(prec))
    }

    /// Exact sign in the real embedding, refining until decided.
    pub fn signum(&self) -> i32 {
        if let Some(q) = self.as_rational() {
            return if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            };
        }
        // non-zero, so some precision separates it from zero
        let mut p = 64;
        loop {
            let v = self.real_value(p);
            if v.is_positive() {
                return 1;
            }
            if v.is_negative() {
                return -1;
            }
            p *= 2;
        }
    }

    /// Characteristic polynomial of multiplication by `self` (monic, degree `d`),
    /// by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> QPoly {
        let d = self.field.degree();
        // column j holds the coordinates of self * θ^j
        let theta = FieldElement::generator(&self.field);
        let mut cols = Vec::with_capacity(d);
        let mut basis = FieldElement::one(&self.field);
        for _ in 0..d {
            cols.push(self.mul(&basis).expect("same field").coords());
            basis = basis.mul(&theta).expect("same field");
        }
        let a: Vec<Vec<BigRational>> = (0..d)
            .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
            .collect();
        let matmul = |x: &Vec<Vec<BigRational>>, y: &Vec<Vec<BigRational>>| {
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            (0..d).fold(BigRational::zero(), |acc, k| acc + &x[i][k] * &y[k][j])
                        })
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        };
        let mut coeffs = vec![BigRational::zero(); d + 1];
        coeffs[d] = BigRational::one();
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d]; d];
        let mut c_prev = BigRational::one();
        for k in 1..=d {
            // M_k = A M_{k-1} + c_{d-k+1} I,  c_{d-k} = -tr(A M_k) / k
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += &c_prev;
            }
            let am = matmul(&a, &m);
            let tr = (0..d).fold(BigRational::zero(), |acc, i| acc + &am[i][i]);
            let c = -tr / BigRational::from_integer(BigInt::from(k));
            coeffs[d - k] = c.clone();
            m = am;
            c_prev = c;
        }
        QPoly::new(coeffs)
    }

    /// Minimal polynomial over Q as a primitive integer polynomial with positive leading coefficient.
    pub fn minimal_polynomial(&self) -> Vec<BigInt> {
        self.char_poly().squarefree_part().to_primitive_integer()
    }

    /// Integral over Z iff the characteristic polynomial has integer coefficients.
    pub fn is_algebraic_integer(&self) -> bool {
        self.char_poly().to_integers().is_some()
    }

    /// Parses comma-separated rational coordinates such as `1/2,3`.
    pub fn parse(field: &Arc<NumberField>, s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<Result<Vec<_>>>()?;
        FieldElement::new(field, coords)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = if self.is_zero() {
            vec!["0".into()]
        } else {
            (0..=self.poly.degree().unwrap())
                .map(|i| self.poly.coeff(i).to_string())
                .collect()
        };
        write!(f, "{}", coords.join(","))
    }
}

/// Parses `p`, `p/q`, or a finite decimal such as `-1.25` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let whole: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = BigRational::from_integer(whole.abs()) + BigRational::new(f, scale);
        return Ok(if neg { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}
