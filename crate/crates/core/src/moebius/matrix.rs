//! 2×2 unit-determinant matrices.

use std::fmt;

use num_rational::BigRational;

use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::number_theory::RigorousReal;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

/// Conjugacy type of an SL2 element, read off from its trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Hyperbolic,
    Parabolic,
    Elliptic,
    /// `±I`.
    Identity,
}

impl<S: Scalar> Matrix2<S> {
    /// Checked constructor: exact scalars need `ad - bc = 1`, rigorous ones an
    /// enclosure of the determinant containing 1.
    pub fn new(a: S, b: S, c: S, d: S) -> Result<Self> {
        if !(a.compatible(&b) && a.compatible(&c) && a.compatible(&d)) {
            return Err(Error::ScalarMismatch("entries from different fields".into()));
        }
        let m = Matrix2 { a, b, c, d };
        let det = m.det();
        let ok = match det.as_rational() {
            Some(q) if S::EXACT => q == BigRational::from_integer(1.into()),
            _ => det.to_real(64).contains_rational(&BigRational::from_integer(1.into())),
        };
        if !ok {
            return Err(Error::InvalidInput(format!("determinant {det} is not 1")));
        }
        Ok(m)
    }

    /// Unchecked constructor for entries known to give determinant one.
    pub fn from_entries(a: S, b: S, c: S, d: S) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn identity_like(x: &S) -> Self {
        Matrix2 {
            a: x.one_like(),
            b: x.zero_like(),
            c: x.zero_like(),
            d: x.one_like(),
        }
    }

    pub fn identity(&self) -> Self {
        Matrix2::identity_like(&self.a)
    }

    pub fn entries(&self) -> [&S; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn compatible(&self, o: &Self) -> bool {
        self.a.compatible(&o.a)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Matrix2 {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    /// Product with a scalar-kind check.
    pub fn multiply(&self, o: &Self) -> Result<Self> {
        if !self.compatible(o) {
            return Err(Error::ScalarMismatch("matrices over different fields".into()));
        }
        Ok(self.mul(o))
    }

    /// Inverse by the adjugate.
    pub fn inverse(&self) -> Self {
        Matrix2 {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Matrix2 {
            a: self.a.neg(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.d.neg(),
        }
    }

    pub fn trace(&self) -> S {
        self.a.add(&self.d)
    }

    pub fn det(&self) -> S {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.identity();
        let mut sq = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// `[X, Y] = X Y X⁻¹ Y⁻¹`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).mul(&self.inverse()).mul(&o.inverse())
    }

    /// Exact equality when decidable.
    pub fn exact_eq(&self, o: &Self) -> Option<bool> {
        let mut all = Some(true);
        for (x, y) in self.entries().iter().zip(o.entries()) {
            match x.exact_eq(y) {
                Some(false) => return Some(false),
                None => all = None,
                Some(true) => {}
            }
        }
        all
    }

    pub fn is_identity(&self) -> Option<bool> {
        self.exact_eq(&self.identity())
    }

    pub fn to_real(&self, prec: u32) -> Matrix2<RigorousReal> {
        Matrix2 {
            a: self.a.to_real(prec),
            b: self.b.to_real(prec),
            c: self.c.to_real(prec),
            d: self.d.to_real(prec),
        }
    }

    /// Enclosure of `max |entry(X - I)|`.
    pub fn distance_from_identity(&self, prec: u32) -> RigorousReal {
        let one = RigorousReal::one(prec);
        let r = self.to_real(prec);
        [r.a.sub(&one), r.b, r.c, r.d.sub(&one)]
            .iter()
            .map(|e| e.abs())
            .reduce(|x, y| x.max(&y))
            .unwrap()
    }

    /// Classifies by `|tr|` against 2; rigorous scalars may be undecidable.
    pub fn classify(&self) -> Result<Classification> {
        let t = self.trace();
        let four = t.from_i64_like(4);
        let disc = t.mul(&t).sub(&four);
        match disc.sign() {
            Some(1) => Ok(Classification::Hyperbolic),
            Some(-1) => Ok(Classification::Elliptic),
            Some(_) => {
                if S::EXACT {
                    let scalar = self.b.is_zero_exact()
                        && self.c.is_zero_exact()
                        && self.a.exact_eq(&self.d) == Some(true);
                    Ok(if scalar {
                        Classification::Identity
                    } else {
                        Classification::Parabolic
                    })
                } else {
                    Err(Error::Undecided(format!("|trace| = 2 within {t}")))
                }
            }
            None => Err(Error::Undecided(format!("trace {t} straddles ±2"))),
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.classify() == Ok(Classification::Hyperbolic)
    }
}

impl<S: Scalar> fmt::Display for Matrix2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Rational matrix from integer entries; panics unless the determinant is 1.
pub fn int_matrix(a: i64, b: i64, c: i64, d: i64) -> Matrix2<BigRational> {
    let q = |x: i64| BigRational::from_integer(x.into());
    Matrix2::new(q(a), q(b), q(c), q(d)).expect("determinant one")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanov_product() {
        let x = int_matrix(1, 2, 0, 1);
        let y = int_matrix(1, 0, 2, 1);
        let xy = x.mul(&y);
        assert_eq!(xy, int_matrix(5, 2, 2, 1));
        assert_eq!(xy.trace(), BigRational::from_integer(6.into()));
        assert_eq!(x.identity().mul(&x), x);
        assert_eq!(x.mul(&x.inverse()), x.identity());
        assert_eq!(x.pow(-3), x.inverse().pow(3));
    }

    #[test]
    fn classification() {
        assert_eq!(int_matrix(1, 1, 0, 1).classify(), Ok(Classification::Parabolic));
        assert_eq!(int_matrix(2, 1, 1, 1).classify(), Ok(Classification::Hyperbolic));
        assert_eq!(int_matrix(0, 1, -1, 0).classify(), Ok(Classification::Elliptic));
        assert_eq!(int_matrix(-1, 0, 0, -1).classify(), Ok(Classification::Identity));
        let r = int_matrix(1, 1, 0, 1).to_real(64);
        assert!(matches!(r.classify(), Err(Error::Undecided(_))));
        assert_eq!(int_matrix(2, 1, 1, 1).to_real(64).classify(), Ok(Classification::Hyperbolic));
    }

    #[test]
    fn rejects_bad_determinant() {
        let q = |x: i64| BigRational::from_integer(x.into());
        assert!(Matrix2::new(q(2), q(0), q(0), q(1)).is_err());
    }
}
