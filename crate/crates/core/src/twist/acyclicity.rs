use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use super::complexes::{algebra_complex, twisted_bimodule};
use crate::barcobar::{cobar, enveloping_twisting, tau_to_algebra_morphism, ConvolutionElement, TwistingCochain};
use crate::dg::{coenveloping, coopposite, enveloping, opposite};
use crate::error::{Error, Result};
use crate::graded::{cone, tensor_complex, Bidegree, Certification, CochainComplex, GradedMap, Window};
use crate::linalg::SparseVec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellDim {
    pub bidegree: Bidegree,
    pub dim: usize,
}

fn nonzero(dims: &BTreeMap<Bidegree, usize>) -> Vec<CellDim> {
    dims.iter().filter(|(_, &d)| d > 0).map(|(&bidegree, &dim)| CellDim { bidegree, dim }).collect()
}

/// The window of all materialized bidegrees, with weights cut at `bound`.
pub fn full_window(cx: &CochainComplex, bound: Option<u32>) -> Option<Window> {
    let mut w = cx.support()?;
    if let (Some(b), Some((lo, hi))) = (bound, w.weights) {
        w.weights = Some((lo, hi.min(b as i32)));
    }
    Some(w)
}

fn dims(cx: &CochainComplex, bound: Option<u32>) -> Result<BTreeMap<Bidegree, usize>> {
    match full_window(cx, bound) {
        Some(w) => Ok(cx.cohomology(&w)?.dims()),
        None => Ok(BTreeMap::new()),
    }
}

/// Cohomology of the cone of one comparison map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub criterion: String,
    pub exact: bool,
    pub witness: Option<Bidegree>,
    pub source: Vec<CellDim>,
    pub target: Vec<CellDim>,
    pub cone: Vec<CellDim>,
}

pub fn cone_report(criterion: &str, x: &CochainComplex, y: &CochainComplex, phi: &GradedMap, bound: Option<u32>) -> Result<ConeReport> {
    let c = cone(x, y, phi)?;
    let cone_dims = dims(&c, bound)?;
    let witness = cone_dims.iter().find(|(_, &d)| d > 0).map(|(&b, _)| b);
    Ok(ConeReport {
        criterion: criterion.to_string(),
        exact: witness.is_none(),
        witness,
        source: nonzero(&dims(x, bound)?),
        target: nonzero(&dims(y, bound)?),
        cone: nonzero(&cone_dims),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilization {
    pub lower_bound: u32,
    pub lower_acyclic: bool,
    pub agrees: bool,
}

/// Verdict of criteria iv) and, when word bounds allow, ii) on a weight window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityReport {
    pub bound: Option<u32>,
    pub acyclic: bool,
    pub certification: Certification,
    pub two_sided: ConeReport,
    pub cobar: Option<ConeReport>,
    pub stabilization: Option<Stabilization>,
}

impl AcyclicityReport {
    pub fn witness(&self) -> Option<Bidegree> {
        self.two_sided.witness.or(self.cobar.as_ref().and_then(|c| c.witness))
    }
}

/// Criterion ii): the cone of `ΩC → A`; `None` when the cobar side cannot be certified.
fn cobar_cone(tau: &TwistingCochain, bound: Option<u32>) -> Result<Option<ConeReport>> {
    let b = match bound {
        Some(b) => b,
        None => return Ok(None),
    };
    let window = Window::new((i32::MIN / 2, i32::MAX / 2), Some((0, b as i32)));
    let omega = match cobar(tau.coalgebra().clone(), b, Some(&window), false) {
        Ok(o) => o,
        Err(Error::WindowNotCertified(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let (source, skeep) = algebra_complex(&omega.algebra, Some(b))?;
    let (target, tkeep) = algebra_complex(tau.algebra(), Some(b))?;
    let g = tau_to_algebra_morphism(tau, &omega)?;
    let pos: HashMap<usize, usize> = tkeep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let cols: Vec<SparseVec> = skeep.iter().map(|&i| g.column(i).reindex(|j| pos.get(&j).copied())).collect();
    let weight = (source.differential().weight().is_some() && target.differential().weight().is_some()).then_some(0);
    let phi = GradedMap::new(source.space().clone(), target.space().clone(), 0, weight, tau.algebra().field(), cols)?;
    Ok(Some(cone_report("ΩC → A", &source, &target, &phi, bound)?))
}

fn run(tau: &TwistingCochain, bound: Option<u32>) -> Result<(ConeReport, Option<ConeReport>, Certification, Option<u32>)> {
    let (tw, target, phi) = twisted_bimodule(tau, bound)?;
    let iv = cone_report("A⊗_τC⊗_τA → A", &tw.complex, &target, &phi, tw.bound)?;
    let ii = cobar_cone(tau, tw.bound)?;
    Ok((iv, ii, tw.complex.certification(), tw.bound))
}

/// Checks criteria iv) and ii) on the weight window `0..=bound`.
/// Filtered inputs are also checked at `bound − 1` and flagged stabilized when both agree.
pub fn acyclicity_check(tau: &TwistingCochain, bound: Option<u32>) -> Result<AcyclicityReport> {
    let (iv, ii, cert, bound) = run(tau, bound)?;
    let acyclic = iv.exact && ii.as_ref().is_none_or(|r| r.exact);
    let (certification, stabilization) = match cert {
        Certification::Exact => (cert, None),
        Certification::Truncated { bound: n, .. } => {
            let lower = n.saturating_sub(1);
            let (iv2, ii2, _, _) = run(tau, Some(lower))?;
            let lower_acyclic = iv2.exact && ii2.as_ref().is_none_or(|r| r.exact);
            let agrees = lower_acyclic == acyclic && iv2.cone == iv.cone;
            let stab = Stabilization { lower_bound: lower, lower_acyclic, agrees };
            (Certification::Truncated { bound: n, stabilized: agrees }, Some(stab))
        }
    };
    Ok(AcyclicityReport { bound, acyclic, certification, two_sided: iv, cobar: ii, stabilization })
}

/// `τ^op = −τ` as a twisting cochain `C^cop → A^op`.
pub fn opposite_twisting(tau: &TwistingCochain) -> Result<TwistingCochain> {
    let c = Arc::new(coopposite(tau.coalgebra()));
    let a = Arc::new(opposite(tau.algebra()));
    let minus = a.field().from_i64(-1);
    let values = tau.element().values().iter().map(|v| v.scale(&minus)).collect();
    TwistingCochain::new(ConvolutionElement::new(c, a, 1, values)?)
}

/// `τ^e` on `C ⊗ C^cop → A ⊗ A^op`, both cut at weight `bound`.
pub fn enveloping_pair(tau: &TwistingCochain, bound: u32) -> Result<TwistingCochain> {
    let ce = Arc::new(coenveloping(tau.coalgebra(), Some(bound))?);
    let ae = Arc::new(enveloping(tau.algebra(), Some(bound))?);
    TwistingCochain::new(enveloping_twisting(tau, ce, ae)?)
}

/// Dimensions of `H(A^e ⊗ C^e ⊗ A^e)` against `H((A⊗C⊗A) ⊗ (A^op⊗C^op⊗A^op))` on weights `0..=bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub bound: u32,
    pub enveloping: Vec<CellDim>,
    pub factored: Vec<CellDim>,
    pub agree: bool,
}

pub fn factorization_check(tau: &TwistingCochain, bound: u32) -> Result<FactorizationReport> {
    let te = enveloping_pair(tau, bound)?;
    let (xe, _, _) = twisted_bimodule(&te, Some(bound))?;
    let (x, _, _) = twisted_bimodule(tau, Some(bound))?;
    let (xop, _, _) = twisted_bimodule(&opposite_twisting(tau)?, Some(bound))?;
    let product = tensor_complex(&x.complex, &xop.complex)?;
    let enveloping = nonzero(&dims(&xe.complex, Some(bound))?);
    let factored = nonzero(&dims(&product, Some(bound))?);
    let agree = enveloping == factored;
    Ok(FactorizationReport { bound, enveloping, factored, agree })
}
