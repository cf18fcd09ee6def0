//! Finite and metrically sampled test spaces.
//!
//! A test space `(X, 𝔄)` is a set of outcomes `X` covered by a family of
//! tests `𝔄`, each test being the outcome set of one experiment. This crate
//! builds the event structure of finite test spaces, constructs the
//! orthoalgebra logic of algebraic ones, solves for states (including
//! dispersion-free states), realizes the hyperspace topology on finite
//! samples of the unit sphere, and extracts dense semi-classical
//! sub-test-spaces from sampled frames.

pub mod corpus;
pub mod error;
pub mod logic;
pub mod metric;
pub mod semiclassical;
pub mod space;
pub mod states;

pub use error::{Error, Result};
pub use logic::{build_logic, is_algebraic, Logic, Orthoalgebra};
pub use metric::{MetricSample, VietorisBasicOpen};
pub use semiclassical::{extract_semiclassical, is_semiclassical, ExtractionResult};
pub use space::{Event, OutcomeSet, TestSpace, DEFAULT_EVENT_CAP};
pub use states::{DensityMatrix, ExactState, FloatState, State};
