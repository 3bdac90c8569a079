//! The weight-truncated completed symmetric algebra and its derivations.

mod automorphism;
mod derivation;
mod sym;

pub use automorphism::FilteredAutomorphism;
pub use derivation::Generator;
pub use derivation::Derivation;
pub(crate) use derivation::dual_pairing;
pub use sym::{SymAlgebra, SymElement, Word};
