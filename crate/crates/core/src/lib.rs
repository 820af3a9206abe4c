//! Numerical laboratory for regularized feedback control of Caputo fractional evolution
//! equations with non-instantaneous impulses and state-dependent delay, posed on spectrally
//! truncated generators.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod error;
pub mod experiment;
pub mod mild;
pub mod quad;
pub mod special;
pub mod phase_space;
pub mod state_space;

pub use error::{Error, Result};
