//! L∞[1]-algebroids over a fixed dga and their Chevalley–Eilenberg
//! differentials.

mod ce;
mod residuals;
mod structure;

pub use ce::{bracket_from_derivation, ce_differential, extract_structure, CeAlgebra};
pub use residuals::{algebroid_jacobi_residual, all_residuals_vanish, anchor_morphism_residual, leibniz_residual, LeibnizDefect};
pub use structure::AlgebroidStructure;
