//! Length spectra of hyperbolic surfaces presented by 2×2 matrix generators.
//!
//! The crate enumerates closed-geodesic classes as cyclic words, computes their
//! lengths with certified interval arithmetic, studies gaps and multiplicities
//! in the resulting spectrum, manufactures near-collisions by a one-parameter
//! trace perturbation, and probes polynomial Diophantine lower bounds.

pub mod diophantine;
pub mod error;
pub mod moebius;
pub mod number_theory;
pub mod smallgap;
pub mod spectrum;
pub mod words;

pub use error::{Error, Result};
