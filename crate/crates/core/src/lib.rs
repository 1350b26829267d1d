//! Exact computer algebra for Koszul–Moore duality.
//!
//! The crate is layered bottom-up: [`linalg`] (exact scalars, sparse
//! elimination), [`graded`] (bigraded spaces and complexes), [`dg`] (dg
//! algebras and coalgebras with validators and builders), [`barcobar`]
//! (convolution algebra, twisting cochains, bar and cobar), [`twist`]
//! (twisted tensor products and acyclicity) and [`hochschild`] (brace
//! complexes on both sides and the duality report).

mod error;
pub mod barcobar;
pub mod dg;
pub mod graded;
pub mod hochschild;
pub mod linalg;
pub mod par;
pub mod sign;
pub mod twist;

pub use error::{Error, Result};

/// Version tag of the sign and degree conventions, embedded in every report.
pub const CONVENTIONS_VERSION: &str = "kmd-conventions/1";
