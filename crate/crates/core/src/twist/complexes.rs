use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::modules::{RightComodule, RightModule};
use crate::barcobar::TwistingCochain;
use crate::dg::{DgAlgebra, Truncation};
use crate::error::{Error, Result};
use crate::graded::{BasisElem, Certification, CochainComplex, GradedMap, GradedSpace, Window};
use crate::linalg::{Accum, Field, Scalar, SparseVec};
use crate::sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `M ⊗_τ C`
    Right,
    /// `L ⊗_τ A`
    Left,
    /// `A ⊗_τ C ⊗_τ A`
    TwoSided,
}

/// A tensor product with differential `d⊗1 + 1⊗d + d_τ`.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub complex: CochainComplex,
    pub side: Side,
    /// Total weight cut, if any.
    pub bound: Option<u32>,
    /// Factor indices of each basis element.
    pub tuples: Vec<Vec<usize>>,
}

/// Basis of a tensor product of spaces, cut at total weight `bound`.
pub(crate) fn product_basis(factors: &[&GradedSpace], bound: Option<u32>) -> Result<(GradedSpace, Vec<Vec<usize>>)> {
    if bound.is_some() {
        let ok = factors.iter().all(|s| (0..s.dim()).all(|i| s.weight(i).is_some_and(|w| w >= 0)));
        if !ok {
            return Err(Error::Incompatible("a weight cut needs nonnegative weights on every factor".into()));
        }
    }
    let mut tuples: Vec<(Vec<usize>, i32, Option<i32>)> = vec![(vec![], 0, Some(0))];
    for s in factors {
        let mut next = Vec::new();
        for (t, deg, wt) in &tuples {
            for i in 0..s.dim() {
                let w = wt.zip(s.weight(i)).map(|(a, b)| a + b);
                if let (Some(b), Some(w)) = (bound, w) {
                    if w > b as i32 {
                        continue;
                    }
                }
                let mut t = t.clone();
                t.push(i);
                next.push((t, deg + s.degree(i), w));
            }
        }
        tuples = next;
    }
    let elems = tuples
        .iter()
        .map(|(t, deg, wt)| {
            let name = t.iter().zip(factors).map(|(&i, s)| s.name(i)).collect::<Vec<_>>().join("⊗");
            BasisElem::new(name, *deg, *wt)
        })
        .collect();
    Ok((GradedSpace::new(elems)?, tuples.into_iter().map(|(t, _, _)| t).collect()))
}

/// Certification of a construction from inputs with the given truncations, cut at `bound`.
pub(crate) fn certify(truncations: &[Truncation], graded: bool, bound: Option<u32>) -> Result<(Option<u32>, Certification, Option<Window>)> {
    let limits: Vec<u32> = truncations
        .iter()
        .filter_map(|t| match t {
            Truncation::Exact => None,
            Truncation::Weight(n) | Truncation::WordLength(n) | Truncation::Filtered(n) => Some(*n),
        })
        .collect();
    let bound = bound.or(limits.iter().copied().min());
    if let Some(t) = truncations.iter().find(|t| matches!(t, Truncation::WordLength(_))) {
        let n = t.exact_up_to().unwrap_or(0);
        return Ok((bound, Certification::Truncated { bound: bound.unwrap_or(n), stabilized: false }, None));
    }
    if let Some(b) = bound {
        if let Some(&lim) = limits.iter().find(|&&lim| lim < b) {
            return Err(Error::WindowNotCertified(format!("an input is only materialized up to weight {lim}, cut asks for {b}")));
        }
    }
    let filtered = !graded || truncations.iter().any(Truncation::is_filtered);
    if filtered {
        let b = bound.ok_or_else(|| Error::WindowNotCertified("filtered inputs need a weight cut".into()))?;
        return Ok((bound, Certification::Truncated { bound: b, stabilized: false }, None));
    }
    let valid = bound.map(|b| Window::new((i32::MIN / 2, i32::MAX / 2), Some((0, b as i32))));
    Ok((bound, Certification::Exact, valid))
}

/// `Some(0)` when every column preserves weight.
pub(crate) fn infer_weight(space: &GradedSpace, cols: &[SparseVec]) -> Option<i32> {
    if !space.is_weighted() {
        return None;
    }
    let ok = cols.iter().enumerate().all(|(i, c)| c.iter().all(|(j, _)| space.weight(j) == space.weight(i)));
    ok.then_some(0)
}

pub(crate) fn assemble(
    field: Field,
    space: GradedSpace,
    cols: Vec<SparseVec>,
    cert: Certification,
    valid: Option<Window>,
) -> Result<CochainComplex> {
    let space = Arc::new(space);
    let weight = infer_weight(&space, &cols);
    let d = GradedMap::new(space.clone(), space, 1, weight, field, cols)?;
    match CochainComplex::new(d) {
        Ok(c) => Ok(c.certified(valid, cert)),
        Err(Error::NotAComplex(w)) => Err(Error::NotATwistingCochain(format!("d² ≠ 0 at {w}"))),
        Err(e) => Err(e),
    }
}

struct Lookup {
    index: HashMap<Vec<usize>, usize>,
}

impl Lookup {
    fn new(tuples: &[Vec<usize>]) -> Lookup {
        Lookup { index: tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect() }
    }

    /// Adds `coef · e_t`, dropping tuples cut away by the weight bound.
    fn add(&self, acc: &mut Accum, t: &[usize], coef: &Scalar) {
        if let Some(&k) = self.index.get(t) {
            acc.add(k, coef);
        }
    }
}

fn graded_inputs(a: &DgAlgebra, tau: &TwistingCochain) -> bool {
    a.is_weight_graded() && tau.coalgebra().is_weight_graded()
}

/// `M ⊗_τ C`: `d(m⊗c) = dm⊗c + (−1)^{|m|} m⊗dc − (−1)^{|m|} Σ m·τ(c1) ⊗ c2`.
pub fn twisted_right(m: &RightModule, tau: &TwistingCochain, bound: Option<u32>) -> Result<TwistedComplex> {
    let (a, c) = (tau.algebra(), tau.coalgebra());
    if !Arc::ptr_eq(m.algebra(), a) {
        return Err(Error::Incompatible("module over a different algebra".into()));
    }
    let (bound, cert, valid) = certify(&[a.truncation(), c.truncation()], graded_inputs(a, tau), bound)?;
    let (space, tuples) = product_basis(&[m.space(), c.space()], bound)?;
    let look = Lookup::new(&tuples);
    let mut cols = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let (x, y) = (t[0], t[1]);
        let sm = sign::odd(m.space().degree(x));
        let mut acc = Accum::new();
        for (j, k) in m.d(x).iter() {
            look.add(&mut acc, &[j, y], k);
        }
        for (j, k) in c.d(y).iter() {
            look.add(&mut acc, &[x, j], &k.clone().neg_if(sm));
        }
        for (c1, c2, k) in c.coproduct(y) {
            let tv = tau.value(*c1);
            if tv.is_zero() {
                continue;
            }
            for (j, z) in m.act_vec(x, tv)?.iter() {
                look.add(&mut acc, &[j, *c2], &(k * z).neg_if(!sm));
            }
        }
        cols.push(acc.finish());
    }
    Ok(TwistedComplex { complex: assemble(a.field(), space, cols, cert, valid)?, side: Side::Right, bound, tuples })
}

/// `L ⊗_τ A`: `d(l⊗a) = dl⊗a + (−1)^{|l|} l⊗da + Σ (−1)^{|l1|} l1 ⊗ τ(l2)·a`.
pub fn twisted_left(l: &RightComodule, tau: &TwistingCochain, bound: Option<u32>) -> Result<TwistedComplex> {
    let (a, c) = (tau.algebra(), tau.coalgebra());
    if !Arc::ptr_eq(l.coalgebra(), c) {
        return Err(Error::Incompatible("comodule over a different coalgebra".into()));
    }
    let (bound, cert, valid) = certify(&[a.truncation(), c.truncation()], graded_inputs(a, tau), bound)?;
    let (space, tuples) = product_basis(&[l.space(), a.space()], bound)?;
    let look = Lookup::new(&tuples);
    let field = a.field();
    let mut cols = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let (x, y) = (t[0], t[1]);
        let sl = sign::odd(l.space().degree(x));
        let mut acc = Accum::new();
        for (j, k) in l.d(x).iter() {
            look.add(&mut acc, &[j, y], k);
        }
        for (j, k) in a.d(y).iter() {
            look.add(&mut acc, &[x, j], &k.clone().neg_if(sl));
        }
        for (l1, l2, k) in l.coaction(x) {
            let tv = tau.value(*l2);
            if tv.is_zero() {
                continue;
            }
            let p = a.mul_vec(tv, &SparseVec::unit(y, field))?;
            let s = sign::odd(l.space().degree(*l1));
            for (j, z) in p.iter() {
                look.add(&mut acc, &[*l1, j], &(k * z).neg_if(s));
            }
        }
        cols.push(acc.finish());
    }
    Ok(TwistedComplex { complex: assemble(a.field(), space, cols, cert, valid)?, side: Side::Left, bound, tuples })
}

/// The complex of `A` cut at total weight `bound`, as the target of a comparison map.
pub fn algebra_complex(a: &DgAlgebra, bound: Option<u32>) -> Result<(CochainComplex, Vec<usize>)> {
    let keep: Vec<usize> =
        (0..a.dim()).filter(|&i| bound.is_none_or(|b| a.weight(i).is_none_or(|w| w <= b as i32))).collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let space = a.space().restrict(&keep);
    let mut cols = Vec::with_capacity(keep.len());
    for &i in &keep {
        if a.d(i).iter().any(|(j, _)| !pos.contains_key(&j)) {
            return Err(Error::Invalid("weight cut of the algebra is not a subcomplex".into()));
        }
        cols.push(a.d(i).reindex(|j| pos.get(&j).copied()));
    }
    let (_, cert, valid) = certify(&[a.truncation()], a.is_weight_graded(), bound)?;
    let space = Arc::new(space);
    let weight = infer_weight(&space, &cols);
    let d = GradedMap::new(space.clone(), space, 1, weight, a.field(), cols)?;
    Ok((CochainComplex::new(d)?.certified(valid, cert), keep))
}

/// `A ⊗_τ C ⊗_τ A` with the comparison map `a⊗c⊗b ↦ ε(c)·ab` onto `A` (cut at the same weight).
pub fn twisted_bimodule(tau: &TwistingCochain, bound: Option<u32>) -> Result<(TwistedComplex, CochainComplex, GradedMap)> {
    let (a, c) = (tau.algebra(), tau.coalgebra());
    let (bound, cert, valid) = certify(&[a.truncation(), c.truncation()], graded_inputs(a, tau), bound)?;
    let (space, tuples) = product_basis(&[a.space(), c.space(), a.space()], bound)?;
    let look = Lookup::new(&tuples);
    let field = a.field();
    let unit_vec = |i: usize| SparseVec::unit(i, field);
    let mut cols = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let (x, y, z) = (t[0], t[1], t[2]);
        let sx = sign::odd(a.degree(x));
        let sxy = sign::odd(a.degree(x) + c.degree(y));
        let mut acc = Accum::new();
        for (j, k) in a.d(x).iter() {
            look.add(&mut acc, &[j, y, z], k);
        }
        for (j, k) in c.d(y).iter() {
            look.add(&mut acc, &[x, j, z], &k.clone().neg_if(sx));
        }
        for (j, k) in a.d(z).iter() {
            look.add(&mut acc, &[x, y, j], &k.clone().neg_if(sxy));
        }
        for (c1, c2, k) in c.coproduct(y) {
            let left = tau.value(*c1);
            if !left.is_zero() {
                for (j, w) in a.mul_vec(&unit_vec(x), left)?.iter() {
                    look.add(&mut acc, &[j, *c2, z], &(k * w).neg_if(!sx));
                }
            }
            let right = tau.value(*c2);
            if !right.is_zero() {
                let s = sx ^ sign::odd(c.degree(*c1));
                for (j, w) in a.mul_vec(right, &unit_vec(z))?.iter() {
                    look.add(&mut acc, &[x, *c1, j], &(k * w).neg_if(s));
                }
            }
        }
        cols.push(acc.finish());
    }
    let complex = assemble(field, space, cols, cert, valid)?;
    let (target, keep) = algebra_complex(a, bound)?;
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut phi = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let e = c.counit_of(t[1]);
        if e.is_zero() {
            phi.push(SparseVec::new());
            continue;
        }
        let p = a.mul(t[0], t[2])?.scale(&e);
        if p.iter().any(|(j, _)| !pos.contains_key(&j)) {
            return Err(Error::Invalid("comparison map leaves the weight cut".into()));
        }
        phi.push(p.reindex(|j| pos.get(&j).copied()));
    }
    let weight = (complex.differential().weight().is_some() && target.differential().weight().is_some()).then_some(0);
    let phi = GradedMap::new(complex.space().clone(), target.space().clone(), 0, weight, field, phi)?;
    let twisted = TwistedComplex { complex, side: Side::TwoSided, bound, tuples };
    Ok((twisted, target, phi))
}
