//! Scalar rings a matrix can carry: exact rationals, number-field elements, or
//! certified real enclosures.

use std::fmt::{self, Debug, Display};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::number_theory::{FieldElement, NumberField, RigorousReal};

/// Working precision for rigorous scalars built from exact data.
pub const SCALAR_PRECISION: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Rational,
    Field,
    Interval,
}

impl Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarKind::Rational => "rational",
            ScalarKind::Field => "field",
            ScalarKind::Interval => "interval",
        })
    }
}

/// Ring operations shared by every scalar kind.
///
/// Binary operations panic when the operands live in different number
/// fields; [`Scalar::compatible`] is the fallible check used at API borders.
pub trait Scalar: Clone + Debug + Display + PartialEq + Send + Sync {
    const EXACT: bool;

    fn kind(&self) -> ScalarKind;
    fn compatible(&self, other: &Self) -> bool;
    /// The rational `q` in the same ring as `self`.
    fn rational_like(&self, q: &BigRational) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` when the divisor is (or may be) zero.
    fn div(&self, o: &Self) -> Option<Self>;

    /// Certified enclosure in the chosen real embedding.
    fn to_real(&self, prec: u32) -> RigorousReal;
    /// The exact rational value, when the scalar is a known rational.
    fn as_rational(&self) -> Option<BigRational>;
    /// Certified sign; `None` only for rigorous scalars straddling zero.
    fn sign(&self) -> Option<i32>;
    /// Exact equality when decidable.
    fn exact_eq(&self, o: &Self) -> Option<bool>;

    fn zero_like(&self) -> Self {
        self.rational_like(&BigRational::zero())
    }
    fn one_like(&self) -> Self {
        self.rational_like(&BigRational::one())
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.rational_like(&BigRational::from_integer(n.into()))
    }
    fn is_zero_exact(&self) -> bool {
        self.sign() == Some(0)
    }
    /// The value as an element of a number field, for algebraic scalars.
    fn to_field_element(&self) -> Option<FieldElement> {
        None
    }
}

fn rational_sign(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn kind(&self) -> ScalarKind {
        ScalarKind::Rational
    }
    fn compatible(&self, _: &Self) -> bool {
        true
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        q.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, o: &Self) -> Option<Self> {
        (!o.is_zero()).then(|| self / o)
    }
    fn to_real(&self, prec: u32) -> RigorousReal {
        RigorousReal::from_rational(self, prec)
    }
    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn sign(&self) -> Option<i32> {
        Some(rational_sign(self))
    }
    fn exact_eq(&self, o: &Self) -> Option<bool> {
        Some(self == o)
    }
    fn to_field_element(&self) -> Option<FieldElement> {
        Some(FieldElement::from_rational(&NumberField::rationals(), self.clone()))
    }
}

impl Scalar for FieldElement {
    const EXACT: bool = true;

    fn kind(&self) -> ScalarKind {
        ScalarKind::Field
    }
    fn compatible(&self, o: &Self) -> bool {
        Arc::ptr_eq(self.field(), o.field()) || **self.field() == **o.field()
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        FieldElement::from_rational(self.field(), q.clone())
    }
    fn add(&self, o: &Self) -> Self {
        FieldElement::add(self, o).expect("elements of one field")
    }
    fn sub(&self, o: &Self) -> Self {
        FieldElement::sub(self, o).expect("elements of one field")
    }
    fn mul(&self, o: &Self) -> Self {
        FieldElement::mul(self, o).expect("elements of one field")
    }
    fn neg(&self) -> Self {
        FieldElement::neg(self)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        FieldElement::div(self, o).ok()
    }
    fn to_real(&self, prec: u32) -> RigorousReal {
        self.real_value(prec)
    }
    fn as_rational(&self) -> Option<BigRational> {
        FieldElement::as_rational(self)
    }
    fn sign(&self) -> Option<i32> {
        Some(self.signum())
    }
    fn exact_eq(&self, o: &Self) -> Option<bool> {
        Some(self == o)
    }
    fn to_field_element(&self) -> Option<FieldElement> {
        Some(self.clone())
    }
}

impl Scalar for RigorousReal {
    const EXACT: bool = false;

    fn kind(&self) -> ScalarKind {
        ScalarKind::Interval
    }
    fn compatible(&self, _: &Self) -> bool {
        true
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        RigorousReal::from_rational(q, self.precision())
    }
    fn add(&self, o: &Self) -> Self {
        RigorousReal::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RigorousReal::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RigorousReal::mul(self, o)
    }
    fn neg(&self) -> Self {
        RigorousReal::neg(self)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        RigorousReal::div(self, o)
    }
    fn to_real(&self, _prec: u32) -> RigorousReal {
        self.clone()
    }
    fn as_rational(&self) -> Option<BigRational> {
        self.is_point().then(|| self.lo().to_rational())
    }
    fn sign(&self) -> Option<i32> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else if self.is_point() {
            Some(0)
        } else {
            None
        }
    }
    fn exact_eq(&self, o: &Self) -> Option<bool> {
        if !self.overlaps(o) {
            Some(false)
        } else if self.is_point() && self == o {
            Some(true)
        } else {
            None
        }
    }
}

