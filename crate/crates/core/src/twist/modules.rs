use std::sync::Arc;

use crate::dg::{CoTerm, DgAlgebra, DgCoalgebra};
use crate::error::{Error, Result};
use crate::graded::{BasisElem, GradedSpace};
use crate::linalg::SparseVec;

/// A dg right module over `A` by structure constants: `action[m * dim A + a] = e_m · e_a`.
#[derive(Clone, Debug)]
pub struct RightModule {
    algebra: Arc<DgAlgebra>,
    space: Arc<GradedSpace>,
    d: Vec<SparseVec>,
    action: Vec<Option<SparseVec>>,
}

impl RightModule {
    pub fn new(algebra: Arc<DgAlgebra>, space: Arc<GradedSpace>, d: Vec<SparseVec>, action: Vec<Option<SparseVec>>) -> Result<RightModule> {
        if d.len() != space.dim() || action.len() != space.dim() * algebra.dim() {
            return Err(Error::Invalid("module tables do not match the basis sizes".into()));
        }
        Ok(RightModule { algebra, space, d, action })
    }

    /// `A` acting on itself from the right.
    pub fn regular(a: Arc<DgAlgebra>) -> RightModule {
        let n = a.dim();
        let action = (0..n * n).map(|k| a.product_entry(k / n, k % n).cloned()).collect();
        let d = a.differential().to_vec();
        RightModule { space: a.space().clone(), algebra: a, d, action }
    }

    /// The ground field with `A` acting through the augmentation.
    pub fn augmentation(a: Arc<DgAlgebra>) -> RightModule {
        let field = a.field();
        let weighted = a.space().is_weighted();
        let space = Arc::new(GradedSpace::new(vec![BasisElem::new("k", 0, weighted.then_some(0))]).unwrap());
        let action = (0..a.dim()).map(|j| Some(SparseVec::unit(0, field).scale(&a.augment(&SparseVec::unit(j, field))))).collect();
        RightModule { algebra: a, space, d: vec![SparseVec::new()], action }
    }

    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        &self.algebra
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn d(&self, m: usize) -> &SparseVec {
        &self.d[m]
    }

    pub fn act(&self, m: usize, a: usize) -> Result<&SparseVec> {
        self.action[m * self.algebra.dim() + a]
            .as_ref()
            .ok_or_else(|| Error::OverflowAccess(format!("{}·{}", self.space.name(m), self.algebra.name(a)), 0))
    }

    /// `e_m · v` for a vector `v` of `A`.
    pub fn act_vec(&self, m: usize, v: &SparseVec) -> Result<SparseVec> {
        let mut acc = crate::linalg::Accum::new();
        for (j, x) in v.iter() {
            acc.add_vec(x, self.act(m, j)?);
        }
        Ok(acc.finish())
    }
}

/// A dg right comodule over `C`: `coaction[l]` lists `(l1, c, coef)` for `l ↦ Σ coef · l1 ⊗ c`.
#[derive(Clone, Debug)]
pub struct RightComodule {
    coalgebra: Arc<DgCoalgebra>,
    space: Arc<GradedSpace>,
    d: Vec<SparseVec>,
    coaction: Vec<Vec<CoTerm>>,
}

impl RightComodule {
    pub fn new(coalgebra: Arc<DgCoalgebra>, space: Arc<GradedSpace>, d: Vec<SparseVec>, coaction: Vec<Vec<CoTerm>>) -> Result<RightComodule> {
        if d.len() != space.dim() || coaction.len() != space.dim() {
            return Err(Error::Invalid("comodule tables do not match the basis size".into()));
        }
        Ok(RightComodule { coalgebra, space, d, coaction })
    }

    /// `C` coacting on itself through `Δ`.
    pub fn regular(c: Arc<DgCoalgebra>) -> RightComodule {
        let coaction = (0..c.dim()).map(|i| c.coproduct(i).to_vec()).collect();
        let d = c.differential().to_vec();
        RightComodule { space: c.space().clone(), coalgebra: c, d, coaction }
    }

    /// The ground field with the coaction `1 ↦ 1 ⊗ 1`.
    pub fn trivial(c: Arc<DgCoalgebra>) -> RightComodule {
        let weighted = c.space().is_weighted();
        let space = Arc::new(GradedSpace::new(vec![BasisElem::new("k", 0, weighted.then_some(0))]).unwrap());
        let coaction = vec![vec![(0, c.coaugmentation(), c.field().one())]];
        RightComodule { coalgebra: c, space, d: vec![SparseVec::new()], coaction }
    }

    pub fn coalgebra(&self) -> &Arc<DgCoalgebra> {
        &self.coalgebra
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn d(&self, l: usize) -> &SparseVec {
        &self.d[l]
    }

    pub fn coaction(&self, l: usize) -> &[CoTerm] {
        &self.coaction[l]
    }
}
