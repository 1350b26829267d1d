use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedSpace};
use crate::linalg::{Accum, Field, Scalar, SparseVec};

/// How a materialized structure relates to the (possibly infinite) one it stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "bound", rename_all = "kebab-case")]
pub enum Truncation {
    /// Nothing omitted.
    Exact,
    /// Quotient algebra or sub-coalgebra that agrees with the full structure in weights ≤ bound.
    Weight(u32),
    /// Cut at a word length with no exactness guarantee.
    WordLength(u32),
    /// A filtration piece; products beyond the bound are undefined.
    Filtered(u32),
}

impl Truncation {
    /// Weight up to which the materialized data is exact, `None` if unbounded.
    pub fn exact_up_to(&self) -> Option<u32> {
        match self {
            Truncation::Exact => None,
            Truncation::Weight(n) | Truncation::Filtered(n) => Some(*n),
            Truncation::WordLength(_) => Some(0),
        }
    }

    pub fn is_filtered(&self) -> bool {
        matches!(self, Truncation::Filtered(_))
    }

    /// Truncation of a tensor product whose basis was cut at total weight `bound`.
    pub fn combine(self, other: Truncation, bound: Option<u32>) -> Truncation {
        use Truncation::*;
        let t = match (self, other) {
            (Exact, t) | (t, Exact) => t,
            (Filtered(a), Filtered(b)) | (Filtered(a), Weight(b)) | (Weight(b), Filtered(a)) => Filtered(a.min(b)),
            (Weight(a), Weight(b)) => Weight(a.min(b)),
            (WordLength(a), WordLength(b)) => WordLength(a.min(b)),
            (WordLength(a), _) | (_, WordLength(a)) => WordLength(a),
        };
        match (t, bound) {
            (Exact, Some(b)) => Weight(b),
            (Weight(a), Some(b)) => Weight(a.min(b)),
            (Filtered(a), Some(b)) => Filtered(a.min(b)),
            (t, _) => t,
        }
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::Exact => write!(f, "exact"),
            Truncation::Weight(n) => write!(f, "weight ≤ {n}"),
            Truncation::WordLength(n) => write!(f, "word length ≤ {n}"),
            Truncation::Filtered(n) => write!(f, "filtration ≤ {n}"),
        }
    }
}

/// Which builder produced a structure; used to look up closed-form oracles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Ground,
    Sym { dim: usize },
    ExtCoalgebra { dim: usize },
    ExtAlgebra { dim: usize },
    DualNumbers,
    Ce { lie: String },
    Envelope { lie: String },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Ground => write!(f, "ground"),
            Family::Sym { dim } => write!(f, "sym(dim {dim})"),
            Family::ExtCoalgebra { dim } => write!(f, "ext-coalgebra(dim {dim})"),
            Family::ExtAlgebra { dim } => write!(f, "ext-algebra(dim {dim})"),
            Family::DualNumbers => write!(f, "dual-numbers"),
            Family::Ce { lie } => write!(f, "ce({lie})"),
            Family::Envelope { lie } => write!(f, "envelope({lie})"),
        }
    }
}

/// A dg algebra by structure constants. `mult[i * n + j]` is `e_i e_j`,
/// or `None` when the product lies beyond a filtration bound.
#[derive(Clone, Debug)]
pub struct DgAlgebra {
    field: Field,
    space: Arc<GradedSpace>,
    unit: usize,
    mult: Vec<Option<SparseVec>>,
    d: Vec<SparseVec>,
    augmentation: SparseVec,
    truncation: Truncation,
    family: Option<Family>,
}

impl DgAlgebra {
    /// Assembles an algebra; shapes are checked here, axioms by `validate_algebra`.
    pub fn new(
        field: Field,
        space: Arc<GradedSpace>,
        unit: usize,
        mult: Vec<Option<SparseVec>>,
        d: Vec<SparseVec>,
        augmentation: SparseVec,
        truncation: Truncation,
    ) -> Result<DgAlgebra> {
        let n = space.dim();
        if unit >= n || mult.len() != n * n || d.len() != n {
            return Err(Error::Invalid("algebra tables do not match the basis size".into()));
        }
        let in_range = |v: &SparseVec| v.entries().last().is_none_or(|(i, _)| *i < n);
        if !mult.iter().flatten().all(in_range) || !d.iter().all(in_range) || !in_range(&augmentation) {
            return Err(Error::Invalid("structure constant refers to a missing basis element".into()));
        }
        Ok(DgAlgebra { field, space, unit, mult, d, augmentation, truncation, family: None })
    }

    pub fn with_family(mut self, family: Family) -> DgAlgebra {
        self.family = Some(family);
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn augmentation(&self) -> &SparseVec {
        &self.augmentation
    }

    pub fn d(&self, i: usize) -> &SparseVec {
        &self.d[i]
    }

    pub fn differential(&self) -> &[SparseVec] {
        &self.d
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.space.degree(i)
    }

    pub fn weight(&self, i: usize) -> Option<i32> {
        self.space.weight(i)
    }

    pub fn name(&self, i: usize) -> &str {
        self.space.name(i)
    }

    /// Raw table entry, `None` on overflow.
    pub fn product_entry(&self, i: usize, j: usize) -> Option<&SparseVec> {
        self.mult[i * self.dim() + j].as_ref()
    }

    pub fn mul(&self, i: usize, j: usize) -> Result<&SparseVec> {
        self.product_entry(i, j).ok_or_else(|| self.overflow(i, j))
    }

    fn overflow(&self, i: usize, j: usize) -> Error {
        let bound = match self.truncation {
            Truncation::Filtered(n) | Truncation::Weight(n) | Truncation::WordLength(n) => n,
            Truncation::Exact => 0,
        };
        Error::OverflowAccess(format!("{}·{}", self.name(i), self.name(j)), bound)
    }

    pub fn mul_vec(&self, a: &SparseVec, b: &SparseVec) -> Result<SparseVec> {
        let mut acc = Accum::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                acc.add_vec(&(x * y), self.mul(i, j)?);
            }
        }
        Ok(acc.finish())
    }

    pub fn d_vec(&self, a: &SparseVec) -> SparseVec {
        let mut acc = Accum::new();
        for (i, x) in a.iter() {
            acc.add_vec(x, &self.d[i]);
        }
        acc.finish()
    }

    pub fn augment(&self, a: &SparseVec) -> Scalar {
        a.dot(&self.augmentation).unwrap_or_else(|| self.field.zero())
    }

    /// Basis indices of the augmentation ideal (all but the unit).
    pub fn reduced_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| i != self.unit).collect()
    }

    /// True when `d` and the product preserve weight on a fully weighted basis.
    pub fn is_weight_graded(&self) -> bool {
        if !self.space.is_weighted() || self.truncation.is_filtered() {
            return false;
        }
        let w = |i: usize| self.weight(i).unwrap();
        let n = self.dim();
        (0..n).all(|i| self.d[i].iter().all(|(j, _)| w(j) == w(i)))
            && (0..n).all(|i| {
                (0..n).all(|j| self.product_entry(i, j).is_none_or(|p| p.iter().all(|(k, _)| w(k) == w(i) + w(j))))
            })
    }

    pub fn differential_map(&self) -> Result<GradedMap> {
        let weight = if self.is_weight_graded() { Some(0) } else { None };
        GradedMap::new(self.space.clone(), self.space.clone(), 1, weight, self.field, self.d.clone())
    }

    /// Same structure over the same basis with a replaced differential.
    pub fn with_differential(&self, d: Vec<SparseVec>) -> DgAlgebra {
        DgAlgebra { d, ..self.clone() }
    }

    /// Same algebra with the whole product table replaced, `table[i * n + j] = e_i e_j`.
    pub fn with_products(&self, table: Vec<Option<SparseVec>>) -> DgAlgebra {
        assert_eq!(table.len(), self.mult.len());
        DgAlgebra { mult: table, ..self.clone() }
    }

    /// Same structure with one product table entry replaced (used to build faulty inputs in tests and files).
    pub fn with_product(&self, i: usize, j: usize, value: Option<SparseVec>) -> DgAlgebra {
        let mut out = self.clone();
        let n = self.dim();
        out.mult[i * n + j] = value;
        out
    }
}

/// One term `coef · e_left ⊗ e_right` of a coproduct.
pub type CoTerm = (usize, usize, Scalar);

/// A dg coalgebra by structure constants.
#[derive(Clone, Debug)]
pub struct DgCoalgebra {
    field: Field,
    space: Arc<GradedSpace>,
    coaugmentation: usize,
    comult: Vec<Vec<CoTerm>>,
    d: Vec<SparseVec>,
    counit: SparseVec,
    truncation: Truncation,
    family: Option<Family>,
}

impl DgCoalgebra {
    pub fn new(
        field: Field,
        space: Arc<GradedSpace>,
        coaugmentation: usize,
        comult: Vec<Vec<CoTerm>>,
        d: Vec<SparseVec>,
        counit: SparseVec,
        truncation: Truncation,
    ) -> Result<DgCoalgebra> {
        let n = space.dim();
        if coaugmentation >= n || comult.len() != n || d.len() != n {
            return Err(Error::Invalid("coalgebra tables do not match the basis size".into()));
        }
        let in_range = |v: &SparseVec| v.entries().last().is_none_or(|(i, _)| *i < n);
        if comult.iter().flatten().any(|(a, b, _)| *a >= n || *b >= n) || !d.iter().all(in_range) || !in_range(&counit) {
            return Err(Error::Invalid("structure constant refers to a missing basis element".into()));
        }
        let comult = comult.into_iter().map(normalize_terms).collect();
        Ok(DgCoalgebra { field, space, coaugmentation, comult, d, counit, truncation, family: None })
    }

    pub fn with_family(mut self, family: Family) -> DgCoalgebra {
        self.family = Some(family);
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Index of the group-like element `1`.
    pub fn coaugmentation(&self) -> usize {
        self.coaugmentation
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn counit(&self) -> &SparseVec {
        &self.counit
    }

    pub fn coproduct(&self, i: usize) -> &[CoTerm] {
        &self.comult[i]
    }

    pub fn d(&self, i: usize) -> &SparseVec {
        &self.d[i]
    }

    pub fn differential(&self) -> &[SparseVec] {
        &self.d
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.space.degree(i)
    }

    pub fn weight(&self, i: usize) -> Option<i32> {
        self.space.weight(i)
    }

    pub fn name(&self, i: usize) -> &str {
        self.space.name(i)
    }

    pub fn counit_of(&self, i: usize) -> Scalar {
        self.counit.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Basis indices of the reduced part `C̄` (all but the coaugmentation).
    pub fn reduced_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| i != self.coaugmentation).collect()
    }

    /// Reduced coproduct: the terms of `Δ(e_i)` with both factors in `C̄`.
    pub fn reduced_coproduct(&self, i: usize) -> Vec<CoTerm> {
        let one = self.coaugmentation;
        self.comult[i].iter().filter(|(a, b, _)| *a != one && *b != one).cloned().collect()
    }

    pub fn is_weight_graded(&self) -> bool {
        if !self.space.is_weighted() || self.truncation.is_filtered() {
            return false;
        }
        let w = |i: usize| self.weight(i).unwrap();
        (0..self.dim()).all(|i| {
            self.d[i].iter().all(|(j, _)| w(j) == w(i)) && self.comult[i].iter().all(|(a, b, _)| w(*a) + w(*b) == w(i))
        })
    }

    pub fn differential_map(&self) -> Result<GradedMap> {
        let weight = if self.is_weight_graded() { Some(0) } else { None };
        GradedMap::new(self.space.clone(), self.space.clone(), 1, weight, self.field, self.d.clone())
    }

    pub fn with_differential(&self, d: Vec<SparseVec>) -> DgCoalgebra {
        DgCoalgebra { d, ..self.clone() }
    }

    pub fn with_coproducts(&self, table: Vec<Vec<CoTerm>>) -> DgCoalgebra {
        assert_eq!(table.len(), self.comult.len());
        DgCoalgebra { comult: table.into_iter().map(normalize_terms).collect(), ..self.clone() }
    }

    pub fn with_coproduct(&self, i: usize, terms: Vec<CoTerm>) -> DgCoalgebra {
        let mut out = self.clone();
        out.comult[i] = normalize_terms(terms);
        out
    }

    pub fn with_truncation(mut self, t: Truncation) -> DgCoalgebra {
        self.truncation = t;
        self
    }
}

/// Merges duplicate terms, drops zeros, sorts.
pub fn normalize_terms(terms: Vec<CoTerm>) -> Vec<CoTerm> {
    let mut map: std::collections::BTreeMap<(usize, usize), Scalar> = std::collections::BTreeMap::new();
    for (a, b, c) in terms {
        match map.get_mut(&(a, b)) {
            Some(x) => *x = &*x + &c,
            None => {
                map.insert((a, b), c);
            }
        }
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect()
}
