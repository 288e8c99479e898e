//! Circuit-QED modelling toolkit: composite Hilbert spaces, transmon and
//! cavity parameters, thermal baths, Lindblad dynamics and post-processing.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cavity;
pub mod circuit;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod thermal;
pub mod units;

pub use error::{Error, Result};

/// Toolkit version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub mod scenario;
