//! Dg algebras and dg coalgebras as structure-constant tables.

mod builders;
mod lie;
mod ops;
pub mod pbw;
mod structure;
pub mod validate;

pub use builders::{
    ce_coalgebra, dual_numbers, exterior_algebra, exterior_coalgebra, ground_algebra, ground_coalgebra, sort_odd,
    subsets, sym_algebra, universal_envelope,
};
pub use lie::LiePresentation;
pub use ops::{
    coenveloping, coopposite, dual_name, dualize, dualize_algebra, enveloping, opposite, same_field, tensor_algebras,
    tensor_coalgebras,
};
pub use structure::{normalize_terms, CoTerm, DgAlgebra, DgCoalgebra, Family, Truncation};
pub use validate::{validate_algebra, validate_coalgebra, AxiomCheck, ValidationReport};
