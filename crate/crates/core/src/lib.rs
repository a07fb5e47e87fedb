//! Planning toolkit for entanglement distillation over two-node quantum links.
//!
//! Provides exact channel maps and analytic resource models for concatenated
//! error-detection distillation, a constrained sequence optimizer, Monte Carlo
//! cross-checks, unencoding gate schedules, and pipeline sizing helpers.

pub mod analytic;
pub mod channels;
pub mod codes;
pub mod estimators;
pub mod montecarlo;
pub mod optimizer;
pub mod pauli;
pub mod pipeline;
pub mod schedule;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
