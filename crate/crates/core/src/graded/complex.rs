use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::bidegree::{Bidegree, Window};
use super::map::{tensor_map, GradedMap};
use super::space::{BasisElem, GradedSpace};
use crate::error::{Error, Result};
use crate::linalg::{subquotient_dim, Field, Scalar, SparseMatrix, SparseVec, Subquotient};
use crate::par;

/// How far a reported cohomology group can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certification {
    /// The omitted part of the complex cannot contribute.
    Exact,
    /// Computed on a truncation at `bound`; `stabilized` records whether the
    /// answer agreed with the next smaller truncation.
    Truncated { bound: u32, stabilized: bool },
}

impl Certification {
    pub fn tag(&self) -> &'static str {
        match self {
            Certification::Exact => "exact",
            Certification::Truncated { stabilized: true, .. } => "truncated-stabilized",
            Certification::Truncated { stabilized: false, .. } => "truncated-unstable",
        }
    }

    /// The weaker of two certificates.
    pub fn meet(self, other: Certification) -> Certification {
        match (self, other) {
            (Certification::Exact, c) | (c, Certification::Exact) => c,
            (
                Certification::Truncated { bound: a, stabilized: s },
                Certification::Truncated { bound: b, stabilized: t },
            ) => Certification::Truncated { bound: a.min(b), stabilized: s && t },
        }
    }
}

impl fmt::Display for Certification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certification::Exact => write!(f, "exact"),
            Certification::Truncated { bound, .. } => write!(f, "{} (bound {bound})", self.tag()),
        }
    }
}

/// A finite cochain complex: a graded space with a degree +1 square-zero endomorphism.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    space: Arc<GradedSpace>,
    d: GradedMap,
    valid: Option<Window>,
    certification: Certification,
}

impl CochainComplex {
    /// Checks shape and `d∘d = 0`; the error names a basis element where it fails.
    pub fn new(d: GradedMap) -> Result<CochainComplex> {
        if d.source() != d.target() {
            return Err(Error::Incompatible("differential must be an endomorphism".into()));
        }
        if d.degree() != 1 {
            return Err(Error::Invalid(format!("differential has degree {}, expected +1", d.degree())));
        }
        let space = d.source().clone();
        for i in 0..space.dim() {
            let dd = d.apply(d.column(i));
            if !dd.is_zero() {
                return Err(Error::NotAComplex(format!("d² ≠ 0 on {}", space.name(i))));
            }
        }
        let valid = space.window();
        Ok(CochainComplex { space, d, valid, certification: Certification::Exact })
    }

    /// Declares the region where cohomology is meaningful and how it is certified.
    pub fn certified(mut self, valid: Option<Window>, certification: Certification) -> CochainComplex {
        self.valid = valid;
        self.certification = certification;
        self
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn differential(&self) -> &GradedMap {
        &self.d
    }

    pub fn field(&self) -> Field {
        self.d.field()
    }

    pub fn valid(&self) -> Option<Window> {
        self.valid
    }

    pub fn certification(&self) -> Certification {
        self.certification
    }

    /// True when cohomology can be split by weight.
    pub fn splits_by_weight(&self) -> bool {
        self.d.weight().is_some() && self.space.is_weighted()
    }

    /// The window covering every materialized basis element.
    pub fn support(&self) -> Option<Window> {
        let s = &self.space;
        if s.dim() == 0 {
            return None;
        }
        let degs = (0..s.dim()).map(|i| s.degree(i));
        let (lo, hi) = (degs.clone().min().unwrap(), degs.max().unwrap());
        let weights = if self.splits_by_weight() {
            let ws: Vec<i32> = (0..s.dim()).filter_map(|i| s.weight(i)).collect();
            Some((*ws.iter().min().unwrap(), *ws.iter().max().unwrap()))
        } else {
            None
        };
        Some(Window::new((lo, hi), weights))
    }

    pub fn cohomology(&self, window: &Window) -> Result<CohomologyTable> {
        if let Some(valid) = &self.valid {
            let probe = if self.splits_by_weight() { *window } else { Window::new(window.degrees, None) };
            let valid = if self.splits_by_weight() { *valid } else { Window::new(valid.degrees, None) };
            if !probe.within(&valid) {
                return Err(Error::WindowNotCertified(format!(
                    "requested {window} but the complex is only complete on {valid}"
                )));
            }
        }
        let by_weight = self.splits_by_weight() && window.weights.is_some();
        let cells = self.space.cells(by_weight);
        let mut keys: Vec<Bidegree> = window
            .bidegrees()
            .into_iter()
            .map(|b| if by_weight { b } else { b.forget_weight() })
            .collect();
        keys.dedup();
        let shift = if by_weight { self.d.weight() } else { None };
        let empty: Vec<usize> = Vec::new();
        let results = par::map(&keys, |&b| {
            let here = cells.get(&b).unwrap_or(&empty);
            let next = cells.get(&b.shift(1, shift)).unwrap_or(&empty);
            let prev = cells.get(&b.shift(-1, shift.map(|s| -s))).unwrap_or(&empty);
            let cycles = self.block(here, next);
            let boundaries = self.block(prev, here);
            subquotient_dim(&cycles, &boundaries).map(|q| (b, here.clone(), q))
        });
        let mut out = BTreeMap::new();
        for r in results {
            let (b, positions, q) = r?;
            out.insert(b, CohomologyCell::new(positions, q));
        }
        Ok(CohomologyTable {
            field: self.field(),
            window: *window,
            by_weight,
            certification: self.certification,
            cells: out,
        })
    }

    /// Matrix of `d` from the basis subset `from` to the subset `to` (local coordinates).
    fn block(&self, from: &[usize], to: &[usize]) -> SparseMatrix {
        let mut pos = std::collections::HashMap::with_capacity(to.len());
        for (k, &j) in to.iter().enumerate() {
            pos.insert(j, k);
        }
        let cols: Vec<SparseVec> = from
            .iter()
            .map(|&i| self.d.column(i).reindex(|j| pos.get(&j).copied()))
            .collect();
        SparseMatrix::from_columns(to.len(), self.field(), &cols)
    }
}

/// One cell of a cohomology table.
#[derive(Clone, Debug)]
pub struct CohomologyCell {
    pub dim: usize,
    /// Cycle vectors in the ambient basis whose classes form a basis.
    pub representatives: Vec<SparseVec>,
    positions: Vec<usize>,
    quotient: Subquotient,
}

impl CohomologyCell {
    pub fn new(positions: Vec<usize>, quotient: Subquotient) -> CohomologyCell {
        let representatives = quotient
            .representatives
            .iter()
            .map(|v| v.reindex(|k| Some(positions[k])))
            .collect();
        CohomologyCell { dim: quotient.dim, representatives, positions, quotient }
    }

    /// Coordinates of an ambient cycle in the representative basis; `None` if it is not a cycle of this cell.
    pub fn coordinates(&self, z: &SparseVec) -> Option<Vec<Scalar>> {
        let mut local = Vec::new();
        for (i, x) in z.iter() {
            match self.positions.binary_search(&i) {
                Ok(k) => local.push((k, x.clone())),
                Err(_) => return None,
            }
        }
        self.quotient.coordinates(&SparseVec::from_pairs(local))
    }
}

/// Cohomology dimensions and representatives over a window.
#[derive(Clone, Debug)]
pub struct CohomologyTable {
    pub field: Field,
    pub window: Window,
    pub by_weight: bool,
    pub certification: Certification,
    pub cells: BTreeMap<Bidegree, CohomologyCell>,
}

impl CohomologyTable {
    pub fn dim(&self, b: Bidegree) -> usize {
        self.cells.get(&b).map_or(0, |c| c.dim)
    }

    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.cells.iter().map(|(b, c)| (*b, c.dim)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.cells.values().all(|c| c.dim == 0)
    }

    /// First nonzero cell, if any.
    pub fn witness(&self) -> Option<Bidegree> {
        self.cells.iter().find(|(_, c)| c.dim > 0).map(|(b, _)| *b)
    }

    /// Total dimension per degree.
    pub fn by_degree(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (b, c) in &self.cells {
            *out.entry(b.degree).or_insert(0) += c.dim;
        }
        out
    }
}

/// Mapping cone of a degree-0 chain map `phi: X → Y`:
/// degree n is `X^{n+1} ⊕ Y^n`, `d(x, y) = (-dx, φx + dy)`.
pub fn cone(x: &CochainComplex, y: &CochainComplex, phi: &GradedMap) -> Result<CochainComplex> {
    if phi.source() != x.space() || phi.target() != y.space() || phi.degree() != 0 {
        return Err(Error::Incompatible("cone needs a degree-0 map X → Y".into()));
    }
    let lhs = phi.compose(x.differential())?;
    let rhs = y.differential().compose(phi)?;
    for i in 0..x.space().dim() {
        if lhs.column(i) != rhs.column(i) {
            return Err(Error::NotAComplex(format!("φ is not a chain map at {}", x.space().name(i))));
        }
    }
    let (xs, ys) = (x.space(), y.space());
    let nx = xs.dim();
    let mut elems = Vec::with_capacity(nx + ys.dim());
    for e in xs.elems() {
        elems.push(BasisElem {
            name: format!("X:{}", e.name),
            bidegree: Bidegree { degree: e.bidegree.degree - 1, weight: e.bidegree.weight },
        });
    }
    for e in ys.elems() {
        elems.push(BasisElem { name: format!("Y:{}", e.name), bidegree: e.bidegree });
    }
    let space = Arc::new(GradedSpace::new(elems)?);
    let field = x.field();
    let minus = field.from_i64(-1);
    let one = field.one();
    let mut cols = Vec::with_capacity(space.dim());
    for i in 0..nx {
        let dx = x.differential().column(i).scale(&minus);
        let fx = phi.column(i).reindex(|j| Some(j + nx));
        cols.push(dx.add_scaled(&one, &fx));
    }
    for j in 0..ys.dim() {
        cols.push(y.differential().column(j).reindex(|k| Some(k + nx)));
    }
    let weight = match (x.differential().weight(), y.differential().weight(), phi.weight()) {
        (Some(0), Some(0), Some(0)) => Some(0),
        _ => None,
    };
    let d = GradedMap::new(space.clone(), space, 1, weight, field, cols)?;
    let valid = match (x.valid(), y.valid()) {
        (Some(a), Some(b)) => Some(intersect(&shift_degrees(&a, -1), &b)),
        (Some(a), None) => Some(shift_degrees(&a, -1)),
        (None, b) => b,
    };
    Ok(CochainComplex::new(d)?.certified(valid, x.certification().meet(y.certification())))
}

fn shift_degrees(w: &Window, by: i32) -> Window {
    Window::new((w.degrees.0 + by, w.degrees.1 + by), w.weights)
}

/// Largest window inside both.
pub fn intersect(a: &Window, b: &Window) -> Window {
    let d = (a.degrees.0.max(b.degrees.0), a.degrees.1.min(b.degrees.1));
    let w = match (a.weights, b.weights) {
        (Some(p), Some(q)) => Some((p.0.max(q.0), p.1.min(q.1))),
        (Some(p), None) | (None, Some(p)) => Some(p),
        (None, None) => None,
    };
    Window::new(d, w)
}

/// Tensor product of complexes with `d⊗1 + 1⊗d`.
pub fn tensor_complex(x: &CochainComplex, y: &CochainComplex) -> Result<CochainComplex> {
    let field = x.field();
    let ix = GradedMap::identity(x.space().clone(), field);
    let iy = GradedMap::identity(y.space().clone(), field);
    let d = tensor_map(x.differential(), &iy)?.add(&tensor_map(&ix, y.differential())?)?;
    Ok(CochainComplex::new(d)?.certified(None, x.certification().meet(y.certification())))
}
