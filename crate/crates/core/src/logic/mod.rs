//! Logics of algebraic test spaces and finite orthoalgebras.

mod build;
mod orthoalgebra;
mod reconstruct;

pub use build::{build_logic, is_algebraic, AlgebraicityViolation, Logic};
pub use orthoalgebra::{FlagReport, Orthoalgebra};
pub use reconstruct::{canonical_isomorphism, oa_to_test_space, roundtrip_logic, Roundtrip};
