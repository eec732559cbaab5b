//! Hermite-basis pairings of tempered distributions.
//!
//! The central object is the e-product
//! `<F, G>_e = sum_n conj(<e_n, F>) <e_n, G>` taken over the orthonormal
//! Hermite functions `e_n`. The series rarely converges in the ordinary
//! sense once `F` or `G` leaves L2, so every result carries a status
//! describing how (or whether) a value was obtained.
//!
//! The crate is `no_std` with `alloc` when the default `std` feature is off.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod distributions;
pub mod eproduct;
pub mod error;
pub mod exact;
pub mod hermite_core;
pub mod numeric;
pub mod operators;
pub mod quadrature;
pub mod special_functions;
pub mod summation;

pub use distributions::{CoeffSequence, Coefficients, Distribution, L2Sample, Parity};
pub use eproduct::{classify_and_sum, EProductResult, Status, SummationConfig};
pub use error::Error;
pub use exact::{ExactTerm, Scalar};
pub use numeric::{Complex, Precision, Real};
pub use operators::{Letter, OperatorExpr};
