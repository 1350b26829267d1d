//! Bigraded spaces, homogeneous maps, cochain complexes and their cohomology.

mod bidegree;
mod complex;
mod map;
mod space;

pub use bidegree::{Bidegree, Window};
pub use complex::{cone, intersect, tensor_complex, Certification, CochainComplex, CohomologyCell, CohomologyTable};
pub use map::{tensor_map, GradedMap};
pub use space::{materialize, tensor_name, tensor_space, tensor_space_filtered, BasisElem, CellGenerator, GradedSpace, LazySpace};
