//! Exact computer algebra for L∞[1]-algebroids over finite dgas, their
//! Chevalley–Eilenberg differentials, and the differential on the formal
//! neighbourhood of an embedding assembled from finite tensor data.
//!
//! Everything is exact over the Gaussian rationals and truncated at a
//! configurable symmetric weight.

// Tensor code reads more clearly with explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod algebroid;
pub mod error;
pub mod geometry;
pub mod graded;
pub mod linfty;
pub mod random;
pub mod symtensor;

pub use error::{Error, Result};
