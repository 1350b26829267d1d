use std::sync::Arc;

use super::construct::{BarConstruction, CobarConstruction};
use super::convolution::{ConvolutionElement, TwistingCochain};
use crate::dg::{DgAlgebra, DgCoalgebra};
use crate::error::{Error, Result};
use crate::graded::{tensor_name, GradedMap};
use crate::linalg::{Accum, Scalar, SparseVec};

/// Terms of the iterated reduced coproduct `Δ̄^(n)(c)`, as factor sequences with coefficients.
fn iterated_reduced(c: &DgCoalgebra, i: usize, n: usize) -> Vec<(Vec<usize>, Scalar)> {
    if i == c.coaugmentation() {
        return vec![];
    }
    let mut terms = vec![(vec![i], c.field().one())];
    for _ in 1..n {
        let mut next = Vec::new();
        for (seq, k) in &terms {
            for (a, b, x) in c.reduced_coproduct(seq[0]) {
                let mut s = vec![a, b];
                s.extend_from_slice(&seq[1..]);
                next.push((s, k * &x));
            }
        }
        terms = next;
    }
    terms
}

/// Expands `x1 ⊗ … ⊗ xn` of vectors into basis sequences with coefficients.
fn expand(factors: &[&SparseVec], field: crate::linalg::Field) -> Vec<(Vec<usize>, Scalar)> {
    let mut out = vec![(vec![], field.one())];
    for f in factors {
        let mut next = Vec::new();
        for (seq, k) in &out {
            for (j, x) in f.iter() {
                let mut s = seq.clone();
                s.push(j);
                next.push((s, k * x));
            }
        }
        out = next;
    }
    out
}

/// The coalgebra morphism `C → BA`, `c ↦ ε(c)·1 + Σ_n [τ(c1)|…|τ(cn)]` over `Δ̄^(n)`.
pub fn tau_to_coalgebra_morphism(tau: &TwistingCochain, bar: &BarConstruction) -> Result<GradedMap> {
    let c = tau.coalgebra();
    if !Arc::ptr_eq(tau.algebra(), bar.tau.algebra()) {
        return Err(Error::Incompatible("bar construction of a different algebra".into()));
    }
    let field = c.field();
    let ba = &bar.coalgebra;
    let max_len = bar.words().iter().map(Vec::len).max().unwrap_or(0);
    let mut cols = Vec::with_capacity(c.dim());
    for i in 0..c.dim() {
        let mut acc = Accum::new();
        acc.add(ba.coaugmentation(), &c.counit_of(i));
        for n in 1..=max_len.max(1) {
            let terms = iterated_reduced(c, i, n);
            if terms.is_empty() {
                break;
            }
            for (seq, k) in terms {
                let factors: Vec<&SparseVec> = seq.iter().map(|&x| tau.value(x)).collect();
                for (word, x) in expand(&factors, field) {
                    let t = bar.word_index(&word).ok_or_else(|| {
                        Error::WindowNotCertified(format!("image of {} leaves the bar truncation", c.name(i)))
                    })?;
                    acc.add(t, &(&k * &x));
                }
            }
        }
        cols.push(acc.finish());
    }
    let weight = (c.space().is_weighted() && ba.space().is_weighted()).then_some(0);
    GradedMap::new(c.space().clone(), ba.space().clone(), 0, weight, field, cols)
}

/// The algebra morphism `ΩC → A`, `[c1|…|cn] ↦ τ(c1)⋯τ(cn)`.
pub fn tau_to_algebra_morphism(tau: &TwistingCochain, cobar: &CobarConstruction) -> Result<GradedMap> {
    let a = tau.algebra();
    let c = tau.coalgebra();
    let field = a.field();
    let omega = &cobar.algebra;
    let src = cobar.tau.coalgebra();
    let mut cols = Vec::with_capacity(omega.dim());
    for w in cobar.words() {
        let mut v = SparseVec::unit(a.unit(), field);
        for &l in w {
            let name = src.name(cobar.letter_source(l));
            let i = c.space().index_of(name).ok_or_else(|| Error::Incompatible(format!("{name} is not in the coalgebra")))?;
            v = a.mul_vec(&v, tau.value(i))?;
        }
        cols.push(v);
    }
    let weight = (a.space().is_weighted() && omega.space().is_weighted() && a.is_weight_graded()).then_some(0);
    GradedMap::new(omega.space().clone(), a.space().clone(), 0, weight, field, cols)
}

/// `B(g): BA → BA'`, `[a1|…|an] ↦ [g a1|…|g an]` for an augmented algebra morphism `g`.
pub fn bar_map(g: &GradedMap, from: &BarConstruction, to: &BarConstruction) -> Result<GradedMap> {
    let a = from.tau.algebra();
    let b = to.tau.algebra();
    let field = a.field();
    let mut cols = Vec::with_capacity(from.words().len());
    for w in from.words() {
        let images: Vec<SparseVec> = w
            .iter()
            .map(|&l| {
                let src = a.reduced_basis()[l];
                let img = g.column(src);
                SparseVec::from_pairs(img.iter().filter(|(j, _)| *j != b.unit()).map(|(j, x)| (j, x.clone())))
            })
            .collect();
        let refs: Vec<&SparseVec> = images.iter().collect();
        let mut acc = Accum::new();
        for (word, x) in expand(&refs, field) {
            let t = to
                .word_index(&word)
                .ok_or_else(|| Error::WindowNotCertified("image word leaves the bar truncation".into()))?;
            acc.add(t, &x);
        }
        cols.push(acc.finish());
    }
    GradedMap::new(
        from.coalgebra.space().clone(),
        to.coalgebra.space().clone(),
        0,
        g.weight(),
        field,
        cols,
    )
}

/// `τ^e(c⊗c') = τ(c)⊗ε(c')1 − ε(c)1⊗τ(c')` on `C⊗C^cop → A⊗A^op`.
/// The sign on the second term is the opposite twisting cochain `τ^op = −τ`.
pub fn enveloping_twisting(tau: &TwistingCochain, ce: Arc<DgCoalgebra>, ae: Arc<DgAlgebra>) -> Result<ConvolutionElement> {
    let c = tau.coalgebra();
    let a = tau.algebra();
    let one_a = a.name(a.unit());
    let mut values = Vec::with_capacity(ce.dim());
    for i in 0..ce.dim() {
        let name = ce.name(i);
        let mut acc = Accum::new();
        for x in 0..c.dim() {
            for y in 0..c.dim() {
                if tensor_name(c.name(x), c.name(y)) != name {
                    continue;
                }
                let (ex, ey) = (c.counit_of(x), c.counit_of(y));
                for (j, k) in tau.value(x).iter() {
                    if let Some(t) = ae.space().index_of(&tensor_name(a.name(j), one_a)) {
                        acc.add(t, &(k * &ey));
                    }
                }
                for (j, k) in tau.value(y).iter() {
                    if let Some(t) = ae.space().index_of(&tensor_name(one_a, a.name(j))) {
                        acc.add(t, &-(k * &ex));
                    }
                }
            }
        }
        values.push(acc.finish());
    }
    ConvolutionElement::new(ce, ae, 1, values)
}
