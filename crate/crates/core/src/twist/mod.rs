//! Twisted tensor products `M⊗_τC`, `L⊗_τA`, `A⊗_τC⊗_τA`, and the acyclicity criteria.

mod acyclicity;
mod complexes;
mod modules;

pub use acyclicity::{
    acyclicity_check, cone_report, enveloping_pair, factorization_check, full_window, opposite_twisting,
    AcyclicityReport, CellDim, ConeReport, FactorizationReport, Stabilization,
};
pub use complexes::{algebra_complex, twisted_bimodule, twisted_left, twisted_right, Side, TwistedComplex};
pub use modules::{RightComodule, RightModule};
