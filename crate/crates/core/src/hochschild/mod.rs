//! Brace complexes on both sides: Hochschild cochains of a dg algebra and
//! coHochschild cochains of a dg coalgebra, with cup products, Gerstenhaber
//! brackets, cohomology tables and the duality report.

mod cochain;
mod complex;
mod gerstenhaber;
pub mod oracle;

pub use cochain::{brace, bracket, cup, differential, homotopy_defect, unit_cochain, BraceStructure, Cochain, Side, Term};
pub use complex::{
    cell_basis, coordinates, hochschild_cohomology, to_cochain, FilteredCell, HochschildCell, HochschildComplex,
    HochschildTable,
};
pub use gerstenhaber::{
    duality_report, gerstenhaber_report, polyvector_report, CellComparison, CohomologyBasis, DualityReport,
    GerstenhaberReport, Operation, Pairing, RankComparison, StructureConstants, Verdict,
};

#[cfg(test)]
mod tests;
