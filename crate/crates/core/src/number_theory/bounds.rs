//! Effective lower bounds for non-zero algebraic numbers with controlled
//! denominators and conjugate sizes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::FieldElement;
use super::poly::QPoly;
use super::rigorous::RigorousReal;
use crate::error::{Error, Result};

/// Working precision of the bound formulas.
pub const BOUND_PRECISION: u32 = 128;

/// `H(L, N, p)`: elements `β / N^p` with `β` an algebraic integer all of whose
/// conjugates have modulus at most `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorClass {
    pub l: RigorousReal,
    pub n: BigInt,
    pub p: u32,
}

/// `I(L, N, p, D)`: roots of monic polynomials of degree at most `D` whose
/// coefficients lie in `H(L, N, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicClass {
    pub l: RigorousReal,
    pub n: BigInt,
    pub p: u32,
    pub d: usize,
}

impl DenominatorClass {
    pub fn new(l: RigorousReal, n: BigInt, p: u32) -> Result<Self> {
        if l.is_negative() || !n.is_positive() {
            return Err(Error::InvalidInput("class needs L >= 0 and N >= 1".into()));
        }
        Ok(DenominatorClass { l, n, p })
    }

    pub fn from_ints(l: i64, n: i64, p: u32) -> Result<Self> {
        DenominatorClass::new(RigorousReal::from_i64(l, BOUND_PRECISION), n.into(), p)
    }

    /// Checks `α ∈ H(L, N, p)`: `α N^p` must be an algebraic integer whose
    /// embedding height is not certainly above `L`.
    pub fn check_member(&self, alpha: &FieldElement) -> Result<()> {
        let scale = BigRational::from_integer(num_traits::pow(self.n.clone(), self.p as usize));
        let beta = alpha.scale(&scale);
        if !beta.is_algebraic_integer() {
            return Err(Error::NotInClass(format!(
                "{alpha} times N^p is not an algebraic integer"
            )));
        }
        let h = embedding_height(&beta);
        if self.l.certainly_lt(&h) {
            return Err(Error::NotInClass(format!(
                "embedding height {h} exceeds L = {}",
                self.l
            )));
        }
        Ok(())
    }

    pub fn with_degree(&self, d: usize) -> AlgebraicClass {
        AlgebraicClass {
            l: self.l.clone(),
            n: self.n.clone(),
            p: self.p,
            d,
        }
    }
}

impl AlgebraicClass {
    pub fn new(l: RigorousReal, n: BigInt, p: u32, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("degree cap must be at least 1".into()));
        }
        Ok(DenominatorClass::new(l, n, p)?.with_degree(d))
    }

    pub fn from_ints(l: i64, n: i64, p: u32, d: usize) -> Result<Self> {
        AlgebraicClass::new(RigorousReal::from_i64(l, BOUND_PRECISION), n.into(), p, d)
    }

    /// The class `{0}`: roots of `x`, coefficients in `H(0, 1, 0)`.
    pub fn zero() -> Self {
        AlgebraicClass {
            l: RigorousReal::zero(BOUND_PRECISION),
            n: BigInt::one(),
            p: 0,
            d: 1,
        }
    }

    pub fn is_zero_class(&self) -> bool {
        self.d == 1 && self.p == 0 && self.l.is_point() && self.l.contains_zero()
    }

    /// The same class presented with denominator exponent `q >= p`, using
    /// `H(L, N, p) ⊆ H(L N^(q-p), N, q)`.
    pub fn lift(&self, q: u32) -> Self {
        assert!(q >= self.p);
        let f = RigorousReal::from_int(&num_traits::pow(self.n.clone(), (q - self.p) as usize), BOUND_PRECISION);
        AlgebraicClass {
            l: self.l.mul(&f),
            n: self.n.clone(),
            p: q,
            d: self.d,
        }
    }
}

/// `|a0| / (1 + Σ_{j<D} |a_j|)^(D-1)` for a monic polynomial of degree `D >= 1`;
/// every root has at least this modulus.
pub fn smallest_root_bound(p: &QPoly) -> Result<BigRational> {
    let d = p.degree().ok_or(Error::DegreeZero)?;
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    if !p.is_monic() {
        return Err(Error::InvalidInput(format!("{p} is not monic")));
    }
    let a0 = p.coeff(0).abs();
    let s = p.coeffs()[..d]
        .iter()
        .fold(BigRational::one(), |acc, c| acc + c.abs());
    Ok(a0 / s.pow(d as i32 - 1))
}

/// Enclosure of `max_j |σ_j(β)|` over all embeddings.
pub fn embedding_height(beta: &FieldElement) -> RigorousReal {
    embedding_height_at(beta, BOUND_PRECISION)
}

pub fn embedding_height_at(beta: &FieldElement, prec: u32) -> RigorousReal {
    beta.embeddings(prec)
        .iter()
        .map(|z| z.abs())
        .reduce(|a, b| a.max(&b))
        .expect("a field has at least one embedding")
}

fn n_pow(n: &BigInt, p: u32) -> RigorousReal {
    RigorousReal::from_int(&num_traits::pow(n.clone(), p as usize), BOUND_PRECISION)
}

/// `1 / (L^(d-1) N^p)` for a non-zero `α ∈ H(L, N, p)` in a degree `d` field,
/// after verifying membership.
pub fn field_lower_bound(alpha: &FieldElement, class: &DenominatorClass) -> Result<RigorousReal> {
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    class.check_member(alpha)?;
    let d = alpha.field().degree() as u32;
    let den = class.l.powi(d - 1).mul(&n_pow(&class.n, class.p));
    den.recip()
        .ok_or_else(|| Error::NotInClass("L = 0 admits no non-zero member".into()))
}

/// `1 / (L^(d-1) N^p (D L + 1)^(D-1))`: lower bound for every non-zero member of
/// `I(L, N, p, D)` when the coefficients lie in a degree `d` field.
///
/// Values of `L` below one are replaced by one, which only enlarges the class.
pub fn algebraic_lower_bound(class: &AlgebraicClass, d: usize) -> RigorousReal {
    let one = RigorousReal::one(BOUND_PRECISION);
    let l = class.l.max(&one);
    let dl1 = RigorousReal::from_i64(class.d as i64, BOUND_PRECISION)
        .mul(&l)
        .add(&one);
    let den = l
        .powi(d.saturating_sub(1) as u32)
        .mul(&n_pow(&class.n, class.p))
        .mul(&dl1.powi(class.d as u32 - 1));
    den.recip().expect("denominator is at least one")
}

/// A class containing `α1 ± α2` for all `α1 ∈ c1`, `α2 ∈ c2`.
///
/// With `p` unified, `ρ_i = 1 + D_i L_i` bounds every conjugate root of the
/// defining polynomials, so the coefficients of `Res_y(P1(y), P2(x ∓ y))` are
/// at most `(1 + ρ1 + ρ2)^n` with `n = D1 D2`, and become algebraic integers
/// after multiplication by `N^(p (D1 + D2))`.
pub fn combine_classes(c1: &AlgebraicClass, c2: &AlgebraicClass) -> Result<AlgebraicClass> {
    if c2.is_zero_class() {
        return Ok(c1.clone());
    }
    if c1.is_zero_class() {
        return Ok(c2.clone());
    }
    if c1.n != c2.n {
        return Err(Error::ClassMismatch(format!(
            "denominators {} and {} differ",
            c1.n, c2.n
        )));
    }
    let q = c1.p.max(c2.p);
    let (a, b) = (c1.lift(q), c2.lift(q));
    let one = RigorousReal::one(BOUND_PRECISION);
    let rho = |c: &AlgebraicClass| {
        RigorousReal::from_i64(c.d as i64, BOUND_PRECISION)
            .mul(&c.l)
            .add(&one)
    };
    let n = a.d * b.d;
    let p = q * (a.d + b.d) as u32;
    let l = one
        .add(&rho(&a))
        .add(&rho(&b))
        .powi(n as u32)
        .mul(&n_pow(&a.n, p));
    Ok(AlgebraicClass {
        l,
        n: a.n,
        p,
        d: n,
    })
}

/// Two members of a class `c` whose difference lies in the combined class are
/// either equal or at least this far apart. Pass `combine_classes(c, c)`.
pub fn difference_lower_bound(combined: &AlgebraicClass, d: usize) -> RigorousReal {
    algebraic_lower_bound(combined, d)
}

/// The smallest `(L, p)` for which a monic rational polynomial has all
/// coefficients in `H(L, N, p)` over Q, or `None` if some denominator does not
/// divide a power of `N`.
pub fn witness_class(poly: &QPoly, n: &BigInt, max_p: u32) -> Option<(BigInt, u32)> {
    'p: for p in 0..=max_p {
        let np = BigRational::from_integer(num_traits::pow(n.clone(), p as usize));
        let mut height = BigInt::zero();
        let d = poly.degree()?;
        for c in &poly.coeffs()[..d] {
            let beta = c * &np;
            if !beta.is_integer() {
                continue 'p;
            }
            height = height.max(beta.to_integer().abs());
        }
        return Some((height, p));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_theory::field::NumberField;
    use crate::number_theory::poly::sum_polynomial;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn smallest_root_examples() {
        assert_eq!(smallest_root_bound(&QPoly::from_i64(&[2, -3, 1])).unwrap(), q(1, 3));
        assert_eq!(smallest_root_bound(&QPoly::from_i64(&[0, 1])).unwrap(), q(0, 1));
        assert_eq!(smallest_root_bound(&QPoly::from_i64(&[2, 0, 0, 1])).unwrap(), q(2, 9));
        assert_eq!(smallest_root_bound(&QPoly::from_i64(&[3])), Err(Error::DegreeZero));
    }

    #[test]
    fn heights_in_sqrt2() {
        let k = NumberField::new(&[BigInt::from(-2), 0.into(), 1.into()], None).unwrap();
        let b = FieldElement::new(&k, vec![q(1, 1), q(1, 1)]).unwrap();
        let h = embedding_height(&b);
        assert!((h.mid_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        let s = FieldElement::generator(&k);
        assert!((embedding_height(&s).mid_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!(embedding_height(&FieldElement::one(&k)).contains_rational(&q(1, 1)));
    }

    #[test]
    fn field_bound_examples() {
        let k = NumberField::new(&[BigInt::from(-2), 0.into(), 1.into()], None).unwrap();
        let l = FieldElement::new(&k, vec![q(1, 1), q(1, 1)]).unwrap().real_value(128);
        let class = DenominatorClass::new(l, 2.into(), 1).unwrap();
        let a = FieldElement::new(&k, vec![q(1, 2), q(1, 2)]).unwrap();
        let bound = field_lower_bound(&a, &class).unwrap();
        assert!((bound.mid_f64() - 0.20710678118654752).abs() < 1e-12);
        let b = FieldElement::new(&k, vec![q(1, 2), q(-1, 2)]).unwrap();
        let bb = field_lower_bound(&b, &class).unwrap();
        assert!(bb.lo() <= b.real_value(128).abs().hi());
        assert_eq!(
            field_lower_bound(&FieldElement::zero(&k), &class),
            Err(Error::ZeroElement)
        );
        let c = FieldElement::new(&k, vec![q(1, 4), q(0, 1)]).unwrap();
        assert!(matches!(field_lower_bound(&c, &class), Err(Error::NotInClass(_))));
    }

    #[test]
    fn algebraic_bound_examples() {
        let b = algebraic_lower_bound(&AlgebraicClass::from_ints(1, 1, 0, 1).unwrap(), 1);
        assert!(b.contains_rational(&q(1, 1)));
        let b = algebraic_lower_bound(&AlgebraicClass::from_ints(2, 3, 1, 2).unwrap(), 2);
        assert!(b.contains_rational(&q(1, 30)));
        let b = algebraic_lower_bound(&AlgebraicClass::from_ints(1, 2, 2, 1).unwrap(), 1);
        assert!(b.contains_rational(&q(1, 4)));
    }

    #[test]
    fn combined_class_contains_sqrt2_plus_sqrt3() {
        let c2 = AlgebraicClass::from_ints(3, 1, 0, 2).unwrap();
        let c = combine_classes(&c2, &c2).unwrap();
        assert_eq!(c.d, 4);
        let s = sum_polynomial(&QPoly::from_i64(&[-2, 0, 1]), &QPoly::from_i64(&[-3, 0, 1]), false);
        let (h, p) = witness_class(&s, &BigInt::one(), c.p).unwrap();
        assert_eq!((h.clone(), p), (BigInt::from(10), 0));
        assert!(RigorousReal::from_int(&h, 64).certainly_le(&c.l));
        assert_eq!(combine_classes(&c2, &AlgebraicClass::zero()).unwrap(), c2);
        let other = AlgebraicClass::from_ints(3, 2, 0, 2).unwrap();
        assert!(matches!(combine_classes(&c2, &other), Err(Error::ClassMismatch(_))));
    }

    #[test]
    fn rational_difference_bound() {
        // 3/2 = 9/6 and 4/3 = 8/6 lie in H(9, 6, 1)
        let c = AlgebraicClass::from_ints(9, 6, 1, 1).unwrap();
        let bound = difference_lower_bound(&combine_classes(&c, &c).unwrap(), 1);
        let gap = q(3, 2) - q(4, 3);
        assert_eq!(gap, q(1, 6));
        assert!(bound.hi_f64() <= 1.0 / 6.0);
    }
}
