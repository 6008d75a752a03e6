//! Exact arithmetic over Q and real number fields, certified real enclosures,
//! and effective lower bounds for algebraic numbers.

pub mod bounds;
pub mod complex;
pub mod field;
pub mod poly;
pub mod rigorous;

pub use bounds::{
    algebraic_lower_bound, combine_classes, difference_lower_bound, embedding_height,
    field_lower_bound, smallest_root_bound, AlgebraicClass, DenominatorClass,
};
pub use field::{FieldElement, NumberField};
pub use num_rational::BigRational as Rational;
pub use rigorous::{Dyadic, RigorousReal, Round};
