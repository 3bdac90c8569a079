//! Formal neighbourhoods of embeddings: finite tensor models of the
//! geometric data, the differential `𝔇` on `Ŝ_A(Nm∨)` built from them and
//! the L∞[1]-algebroid it encodes.

mod frakd;
mod model;
mod operators;
mod structure;

pub use frakd::{
    ambient_differential, build_frakd, build_kapranov, commutator_lemma_residual, dnormal_zero_terms, frakd_oracle_residual,
    frakd_square_report, retraction_residual, transport_lemma_residual, SquareReport,
};
pub use model::{beta_differential, split_curvature, validate_geometric_model, GeometricModel, LetterMap, ModuleMap, Splitting};
pub use operators::{AmbientSym, Operators};
pub use structure::structure_from_geometry;
