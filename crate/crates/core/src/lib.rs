//! Approximation of high-dimensional functions with deterministic and Monte
//! Carlo methods, together with the closed-form error bounds, lower-bound
//! constants and curse-of-dimensionality formulas that go with them.
//!
//! Every randomized routine takes an explicit [`rng::RandomSource`], so
//! results are reproducible per `(seed, stream)`.

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod field;
pub mod gauss;
pub mod monomc;
pub mod numerics;
pub mod parse;
pub mod report;
pub mod rkhs;
pub mod rng;
pub mod seqspace;
pub mod smooth;
pub mod special;

pub use error::{Error, Result};
pub use rng::RandomSource;
