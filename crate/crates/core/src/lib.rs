#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

//! Driven single-photon transfer between two qubits through a detuned
//! coupler chain.

pub mod bessel;
pub mod dynamics;
pub mod error;
pub mod metrics;
pub mod quad;
pub mod scenarios;
pub mod spectrum;
pub mod tls;
pub mod types;

pub use error::{Error, Result};
