use std::collections::HashMap;
use std::sync::Arc;

use super::convolution::{ConvolutionElement, TwistingCochain};
use crate::dg::{DgAlgebra, DgCoalgebra, Truncation};
use crate::error::{Error, Result};
use crate::graded::{BasisElem, Certification, GradedSpace, Window};
use crate::linalg::{Accum, Scalar, SparseVec};
use crate::sign;

/// A letter of a bar or cobar word: a reduced basis element with its shifted degree.
#[derive(Clone, Debug)]
struct Letter {
    source: usize,
    name: String,
    degree: i32,
    weight: Option<i32>,
}

/// Words over `letters`, by length then lexicographically, with length at most
/// `max_len` and, when `max_weight` is set, total absolute weight at most that.
fn words(letters: &[Letter], max_len: usize, max_weight: Option<i32>) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<(Vec<usize>, i32)> = vec![(vec![], 0)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, wt) in &frontier {
            for (l, letter) in letters.iter().enumerate() {
                let lw = wt + letter.weight.map_or(0, i32::abs);
                if max_weight.is_some_and(|m| lw > m) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push((v, lw));
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().map(|(w, _)| w.clone()));
        frontier = next;
    }
    out
}

fn word_name(letters: &[Letter], w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let parts: Vec<&str> = w.iter().map(|&l| letters[l].name.as_str()).collect();
    format!("[{}]", parts.join("|"))
}

fn word_space(letters: &[Letter], all: &[Vec<usize>], weighted: bool) -> Result<GradedSpace> {
    let elems = all
        .iter()
        .map(|w| {
            let deg = w.iter().map(|&l| letters[l].degree).sum();
            let wt = weighted.then(|| w.iter().map(|&l| letters[l].weight.unwrap()).sum());
            BasisElem::new(word_name(letters, w), deg, wt)
        })
        .collect();
    GradedSpace::new(elems)
}

/// How a bar or cobar construction is cut down to finitely many words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cut {
    /// Words of absolute weight at most the bound; exact there.
    Weight(u32),
    /// Words of absolute weight at most the bound, on a filtered input.
    Filtered(u32),
    /// Words of length at most the bound.
    Length(u32),
}

/// Letter weights are all nonzero and of one sign.
fn one_signed(ws: &[Option<i32>]) -> bool {
    let all = |f: fn(i32) -> bool| ws.iter().all(|w| w.is_some_and(f));
    !ws.is_empty() && (all(|w| w >= 1) || all(|w| w <= -1))
}

fn choose_cut(
    weights: &[Option<i32>],
    graded: bool,
    filtered_input: bool,
    input_bound: Option<u32>,
    word_bound: u32,
    window: Option<&Window>,
    filtered: bool,
) -> Result<Cut> {
    if weights.is_empty() {
        return Ok(Cut::Weight(0));
    }
    if one_signed(weights) && (graded || filtered_input) {
        let w = match window.and_then(|w| w.weights) {
            Some((lo, hi)) => lo.unsigned_abs().max(hi.unsigned_abs()),
            None => match (window, input_bound) {
                (Some(_), _) | (None, None) => word_bound,
                (None, Some(b)) => word_bound.min(b),
            },
        };
        if word_bound < w {
            return Err(Error::WindowNotCertified(format!(
                "words of weight {w} can have length {w}, above the word bound {word_bound}"
            )));
        }
        if let Some(b) = input_bound {
            if w > b {
                return Err(Error::WindowNotCertified(format!("input is exact only up to weight {b}, window needs {w}")));
            }
        }
        return Ok(if graded { Cut::Weight(w) } else { Cut::Filtered(w) });
    }
    if filtered {
        return Ok(Cut::Length(word_bound));
    }
    Err(Error::WindowNotCertified(
        "letter weights do not bound word length; rerun in filtered mode for stabilization flags".into(),
    ))
}

fn certification(cut: Cut) -> (Certification, Option<Window>) {
    let all = (i32::MIN / 2, i32::MAX / 2);
    match cut {
        Cut::Weight(w) => (Certification::Exact, Some(Window::new(all, Some((-(w as i32), w as i32))))),
        Cut::Filtered(w) => (Certification::Truncated { bound: w, stabilized: false }, None),
        Cut::Length(n) => (Certification::Truncated { bound: n, stabilized: false }, None),
    }
}

fn bound_of(cut: Cut) -> (usize, Option<i32>) {
    match cut {
        Cut::Weight(w) | Cut::Filtered(w) => (w as usize, Some(w as i32)),
        Cut::Length(n) => (n as usize, None),
    }
}

/// The bar construction together with its canonical twisting cochain `BA → A`.
#[derive(Clone, Debug)]
pub struct BarConstruction {
    pub coalgebra: Arc<DgCoalgebra>,
    pub tau: TwistingCochain,
    pub certification: Certification,
    /// Bidegrees in which the truncated construction agrees with the full one.
    pub valid: Option<Window>,
    words: Vec<Vec<usize>>,
    letter_of: HashMap<usize, usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl BarConstruction {
    /// Index of the word whose letters are the given basis elements of `A`.
    pub fn word_index(&self, elems: &[usize]) -> Option<usize> {
        let w: Option<Vec<usize>> = elems.iter().map(|e| self.letter_of.get(e).copied()).collect();
        self.index.get(&w?).copied()
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn letter_index(&self, elem: usize) -> Option<usize> {
        self.letter_of.get(&elem).copied()
    }
}

/// `BA`: words `[a1|…|an]` over `Ā` with letter degree `|a|−1`, deconcatenation coproduct
/// and the coderivation extending `b1(sa) = −s(da)`, `b2(sa,sb) = (−1)^{|a|} s(ab)`.
pub fn bar(a: Arc<DgAlgebra>, word_bound: u32, window: Option<&Window>, filtered: bool) -> Result<BarConstruction> {
    let field = a.field();
    let reduced = a.reduced_basis();
    let letters: Vec<Letter> = reduced
        .iter()
        .map(|&i| Letter { source: i, name: a.name(i).to_string(), degree: a.degree(i) - 1, weight: a.weight(i) })
        .collect();
    let weights: Vec<Option<i32>> = letters.iter().map(|l| l.weight).collect();
    let filtered_input = a.truncation().is_filtered() && a.space().is_weighted();
    let cut = choose_cut(&weights, a.is_weight_graded(), filtered_input, a.truncation().exact_up_to(), word_bound, window, filtered)?;
    let (max_len, max_weight) = bound_of(cut);
    let all = words(&letters, max_len, max_weight);
    let weighted = a.space().is_weighted() && cut != Cut::Length(word_bound);
    let space = Arc::new(word_space(&letters, &all, weighted)?);
    let index: HashMap<Vec<usize>, usize> = all.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let letter_of: HashMap<usize, usize> = letters.iter().enumerate().map(|(l, x)| (x.source, l)).collect();

    let mut comult = Vec::with_capacity(all.len());
    let mut d = Vec::with_capacity(all.len());
    for w in &all {
        comult.push((0..=w.len()).map(|k| (index[&w[..k]], index[&w[k..]], field.one())).collect());
        let mut acc = Accum::new();
        let mut before = 0;
        for p in 0..w.len() {
            let x = &letters[w[p]];
            let outer = sign::odd(before);
            for (j, c) in a.d(x.source).iter() {
                if let Some(&l) = letter_of.get(&j) {
                    let mut v = w.clone();
                    v[p] = l;
                    if let Some(&t) = index.get(&v) {
                        acc.add(t, &c.clone().neg_if(!outer));
                    }
                }
            }
            if p + 1 < w.len() {
                let y = &letters[w[p + 1]];
                let prod = a.mul(x.source, y.source)?;
                let s = outer ^ sign::odd(x.degree + 1);
                for (j, c) in prod.iter() {
                    if let Some(&l) = letter_of.get(&j) {
                        let mut v = w[..p].to_vec();
                        v.push(l);
                        v.extend_from_slice(&w[p + 2..]);
                        if let Some(&t) = index.get(&v) {
                            acc.add(t, &c.clone().neg_if(s));
                        }
                    }
                }
            }
            before += x.degree;
        }
        d.push(acc.finish());
    }
    let truncation = match cut {
        Cut::Weight(w) => Truncation::Weight(w),
        Cut::Filtered(w) => Truncation::Filtered(w),
        Cut::Length(n) => Truncation::WordLength(n),
    };
    let coalgebra = DgCoalgebra::new(field, space, 0, comult, d, SparseVec::unit(0, field), truncation)?;
    let coalgebra = Arc::new(coalgebra);
    let values = all
        .iter()
        .map(|w| match w.as_slice() {
            [l] => SparseVec::unit(letters[*l].source, field),
            _ => SparseVec::new(),
        })
        .collect();
    let tau = TwistingCochain::new(ConvolutionElement::new(coalgebra.clone(), a, 1, values)?)?;
    let (certification, valid) = certification(cut);
    Ok(BarConstruction { coalgebra, tau, certification, valid, words: all, letter_of, index })
}

/// The cobar construction together with its canonical twisting cochain `C → ΩC`.
#[derive(Clone, Debug)]
pub struct CobarConstruction {
    pub algebra: Arc<DgAlgebra>,
    pub tau: TwistingCochain,
    pub certification: Certification,
    pub valid: Option<Window>,
    words: Vec<Vec<usize>>,
    letter_sources: Vec<usize>,
}

impl CobarConstruction {
    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    /// Basis element of `C` behind each letter.
    pub fn letter_source(&self, l: usize) -> usize {
        self.letter_sources[l]
    }
}

/// `ΩC`: words over `C̄` with letter degree `|c|+1`, concatenation product and the derivation
/// extending `c1 = −s⁻¹(dc)` and `c2(s⁻¹c) = −Σ (−1)^{|c'|} s⁻¹c' ⊗ s⁻¹c''` over `Δ̄`.
pub fn cobar(c: Arc<DgCoalgebra>, word_bound: u32, window: Option<&Window>, filtered: bool) -> Result<CobarConstruction> {
    let field = c.field();
    let reduced = c.reduced_basis();
    let letters: Vec<Letter> = reduced
        .iter()
        .map(|&i| Letter { source: i, name: c.name(i).to_string(), degree: c.degree(i) + 1, weight: c.weight(i) })
        .collect();
    let weights: Vec<Option<i32>> = letters.iter().map(|l| l.weight).collect();
    let weighted_filtration = c.space().is_weighted() && !c.is_weight_graded() && one_signed(&weights) && {
        // weight-nonincreasing differential, weight-preserving coproduct
        let w = |i: usize| c.weight(i).unwrap();
        (0..c.dim()).all(|i| {
            c.d(i).iter().all(|(j, _)| w(j) <= w(i)) && c.coproduct(i).iter().all(|(x, y, _)| w(*x) + w(*y) == w(i))
        })
    };
    let cut = choose_cut(
        &weights,
        c.is_weight_graded(),
        weighted_filtration || c.truncation().is_filtered(),
        c.truncation().exact_up_to(),
        word_bound,
        window,
        filtered,
    )?;
    let (max_len, max_weight) = bound_of(cut);
    let all = words(&letters, max_len, max_weight);
    let weighted = c.space().is_weighted() && !matches!(cut, Cut::Length(_));
    let space = Arc::new(word_space(&letters, &all, weighted)?);
    let index: HashMap<Vec<usize>, usize> = all.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let letter_of: HashMap<usize, usize> = letters.iter().enumerate().map(|(l, x)| (x.source, l)).collect();
    let n = all.len();

    let beyond = || match cut {
        Cut::Filtered(_) => None,
        _ => Some(SparseVec::new()),
    };
    let mut mult = Vec::with_capacity(n * n);
    for u in &all {
        for v in &all {
            let mut w = u.clone();
            w.extend_from_slice(v);
            mult.push(match index.get(&w) {
                Some(&t) => Some(SparseVec::unit(t, field)),
                None => beyond(),
            });
        }
    }
    // d on a single letter, as a list of words with coefficients
    let letter_d: Vec<Vec<(Vec<usize>, Scalar)>> = letters
        .iter()
        .map(|x| {
            let mut out = Vec::new();
            for (j, k) in c.d(x.source).iter() {
                if let Some(&l) = letter_of.get(&j) {
                    out.push((vec![l], -k.clone()));
                }
            }
            for (p, q, k) in c.reduced_coproduct(x.source) {
                let neg = !sign::odd(c.degree(p));
                out.push((vec![letter_of[&p], letter_of[&q]], k.neg_if(neg)));
            }
            out
        })
        .collect();
    let mut d = Vec::with_capacity(n);
    for w in &all {
        let mut acc = Accum::new();
        let mut before = 0;
        for p in 0..w.len() {
            let outer = sign::odd(before);
            for (mid, k) in &letter_d[w[p]] {
                let mut v = w[..p].to_vec();
                v.extend_from_slice(mid);
                v.extend_from_slice(&w[p + 1..]);
                if let Some(&t) = index.get(&v) {
                    acc.add(t, &k.clone().neg_if(outer));
                }
            }
            before += letters[w[p]].degree;
        }
        d.push(acc.finish());
    }
    let truncation = match cut {
        Cut::Weight(w) => Truncation::Weight(w),
        Cut::Filtered(w) => Truncation::Filtered(w),
        Cut::Length(n) => Truncation::WordLength(n),
    };
    let algebra = Arc::new(DgAlgebra::new(field, space, 0, mult, d, SparseVec::unit(0, field), truncation)?);
    // past a filtration bound τ∗τ is undefined, so τ lives on the weight ≤ W sub-coalgebra
    let domain = match cut {
        Cut::Filtered(w) => Arc::new(weight_piece(&c, w)?),
        _ => c,
    };
    let values = (0..domain.dim())
        .map(|i| match index_of_letter(&domain, &letters, i).and_then(|l| index.get(&vec![l])) {
            Some(&t) => SparseVec::unit(t, field),
            None => SparseVec::new(),
        })
        .collect();
    let tau = TwistingCochain::new(ConvolutionElement::new(domain, algebra.clone(), 1, values)?)?;
    let (certification, valid) = certification(cut);
    let letter_sources = letters.iter().map(|l| l.source).collect();
    Ok(CobarConstruction { algebra, tau, certification, valid, words: all, letter_sources })
}

fn index_of_letter(c: &DgCoalgebra, letters: &[Letter], i: usize) -> Option<usize> {
    letters.iter().position(|l| l.name == c.name(i))
}

/// The sub-coalgebra of basis elements with absolute weight at most `w`.
/// Requires a coproduct that preserves weight and a differential that does not raise it.
pub fn weight_piece(c: &DgCoalgebra, w: u32) -> Result<DgCoalgebra> {
    let keep: Vec<usize> = (0..c.dim()).filter(|&i| c.weight(i).is_some_and(|x| x.unsigned_abs() <= w)).collect();
    let new: HashMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let not_closed = || Error::Invalid(format!("weight ≤ {w} part is not a sub-coalgebra"));
    let mut comult = Vec::with_capacity(keep.len());
    let mut d = Vec::with_capacity(keep.len());
    for &i in &keep {
        let mut terms = Vec::new();
        for (a, b, k) in c.coproduct(i) {
            terms.push((*new.get(a).ok_or_else(not_closed)?, *new.get(b).ok_or_else(not_closed)?, k.clone()));
        }
        comult.push(terms);
        if c.d(i).iter().any(|(j, _)| !new.contains_key(&j)) {
            return Err(not_closed());
        }
        d.push(c.d(i).reindex(|j| new.get(&j).copied()));
    }
    let unit = *new.get(&c.coaugmentation()).ok_or_else(not_closed)?;
    let space = Arc::new(c.space().restrict(&keep));
    let counit = c.counit().reindex(|j| new.get(&j).copied());
    let truncation = match c.truncation() {
        Truncation::Exact | Truncation::Weight(_) if c.is_weight_graded() => Truncation::Weight(w),
        _ => Truncation::Filtered(w),
    };
    let mut out = DgCoalgebra::new(c.field(), space, unit, comult, d, counit, truncation)?;
    if let Some(f) = c.family() {
        out = out.with_family(f.clone());
    }
    Ok(out)
}
