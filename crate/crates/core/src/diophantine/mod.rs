//! Polynomial Diophantine machinery: sup-norm and sublevel-set bounds,
//! summability tests, trace polynomials of words, and probes of almost-sure
//! lower bounds on sampled tuples.

pub mod extremal;
pub mod poly;
pub mod probes;
pub mod summability;
pub mod trace;

pub use extremal::{
    chebyshev_sup_bound, default_remez_constant, empirical_sup, remez_measure_bound,
    sublevel_exponent, sublevel_measure_1d, BoxDomain, ChebyshevReport, MeasureEstimate,
    RemezOptions, RemezReport,
};
pub use poly::IntegerPolynomial;
pub use probes::{
    quadexp_check, quadexp_constants, quadexp_seed, word_identity_bound_check,
    word_identity_check_tuple, QuadExpOptions, QuadExpReport, SeedReport, WordIdentityReport,
};
pub use summability::{
    borel_cantelli_check, quadexp_series, word_identity_series, DegreeSequence, Rationale,
    Sequence, SummabilityVerdict,
};
pub use trace::{entry_names, trace_polynomial, word_matrix_polynomials, TracePolynomial};
