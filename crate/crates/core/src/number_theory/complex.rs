//! Rectangular complex enclosures built on [`RigorousReal`].

use num_rational::BigRational;

use super::rigorous::RigorousReal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBox {
    pub re: RigorousReal,
    pub im: RigorousReal,
}

impl ComplexBox {
    pub fn new(re: RigorousReal, im: RigorousReal) -> Self {
        ComplexBox { re, im }
    }

    pub fn real(re: RigorousReal) -> Self {
        let p = re.precision();
        ComplexBox {
            re,
            im: RigorousReal::zero(p),
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        ComplexBox::real(RigorousReal::from_rational(q, prec))
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBox::real(RigorousReal::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        ComplexBox::real(RigorousReal::one(prec))
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().max(self.im.precision())
    }

    pub fn add(&self, o: &ComplexBox) -> Self {
        ComplexBox::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &ComplexBox) -> Self {
        ComplexBox::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        ComplexBox::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, o: &ComplexBox) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        ComplexBox::new(re, im)
    }

    pub fn scale(&self, s: &RigorousReal) -> Self {
        ComplexBox::new(self.re.mul(s), self.im.mul(s))
    }

    pub fn conj(&self) -> Self {
        ComplexBox::new(self.re.clone(), self.im.neg())
    }

    /// Enclosure of the modulus.
    pub fn abs(&self) -> RigorousReal {
        self.re
            .square()
            .add(&self.im.square())
            .sqrt()
            .expect("sum of squares is non-negative")
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_point() && self.im.contains_zero()
    }

    pub fn overlaps(&self, o: &ComplexBox) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn intersect(&self, o: &ComplexBox) -> Option<Self> {
        Some(ComplexBox::new(
            self.re.intersect(&o.re)?,
            self.im.intersect(&o.im)?,
        ))
    }

    pub fn subset_of(&self, o: &ComplexBox) -> bool {
        self.re.subset_of(&o.re) && self.im.subset_of(&o.im)
    }
}
