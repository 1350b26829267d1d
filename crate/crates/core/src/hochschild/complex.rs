use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::cochain::{differential, BraceStructure, Cochain, Side, Term};
use crate::error::{Error, Result};
use crate::graded::{Bidegree, Certification, Window};
use crate::linalg::{kernel_basis, subquotient_dim, Scalar, SparseMatrix, SparseVec, Subquotient};
use crate::par;

/// Normalized basis cochains of one bidegree `(total degree, weight)`.
pub fn cell_basis(s: &BraceStructure, b: Bidegree) -> Result<Vec<Term>> {
    let w = b.weight.ok_or_else(|| Error::WindowNotCertified("brace cells need a weight".into()))?;
    let letters: Vec<usize> = (0..s.dim()).filter(|&i| i != s.unit()).collect();
    let mut lw = Vec::with_capacity(letters.len());
    for &l in &letters {
        match s.weight(l) {
            Some(x) if x != 0 => lw.push(x),
            _ => {
                return Err(Error::WindowNotCertified(format!(
                    "letter {} has weight 0, so word lengths are unbounded",
                    s.name(l)
                )))
            }
        }
    }
    let positive = lw.iter().all(|&x| x > 0);
    if !positive && !lw.iter().all(|&x| x < 0) {
        return Err(Error::WindowNotCertified("letter weights have mixed signs".into()));
    }
    if s.side == Side::Algebra && !s.complete {
        return Err(Error::WindowNotCertified(
            "algebra-side cochains need the whole algebra; the input is truncated".into(),
        ));
    }
    let mut out = Vec::new();
    for conn in 0..s.dim() {
        let cw = s.weight(conn).unwrap_or(0);
        let target = match s.side {
            Side::Algebra => cw - w,
            Side::Coalgebra => w + cw,
        };
        if (positive && target < 0) || (!positive && target > 0) {
            continue;
        }
        let mut word = Vec::new();
        collect_words(s, &letters, &lw, target, conn, b.degree, &mut word, &mut out);
    }
    out.sort_by(|a, b| (a.word.len(), a.conn, &a.word).cmp(&(b.word.len(), b.conn, &b.word)));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn collect_words(
    s: &BraceStructure,
    letters: &[usize],
    lw: &[i32],
    remaining: i32,
    conn: usize,
    degree: i32,
    word: &mut Vec<usize>,
    out: &mut Vec<Term>,
) {
    if remaining == 0 {
        let t = Term { conn, word: word.clone() };
        if s.total_degree(&t) == degree {
            out.push(t);
        }
        return;
    }
    for (k, &l) in letters.iter().enumerate() {
        let r = remaining - lw[k];
        if r.signum() * remaining.signum() < 0 {
            continue;
        }
        word.push(l);
        collect_words(s, letters, lw, r, conn, degree, word, out);
        word.pop();
    }
}

fn single(s: &BraceStructure, t: &Term) -> Cochain {
    Cochain::term(s.side, t.conn, t.word.clone(), s.field.one())
}

/// Coordinates of `f` on a list of basis cochains, `None` if some term lies outside.
pub fn coordinates(f: &Cochain, index: &HashMap<Term, usize>) -> Option<SparseVec> {
    let mut pairs = Vec::with_capacity(f.len());
    for (t, x) in f.terms() {
        pairs.push((*index.get(t)?, x.clone()));
    }
    Some(SparseVec::from_pairs(pairs))
}

pub fn to_cochain(s: &BraceStructure, basis: &[Term], v: &SparseVec) -> Cochain {
    Cochain::from_terms(s.side, v.iter().map(|(i, x)| (basis[i].clone(), x.clone())))
}

/// One cell of Hochschild cohomology with a quotient basis.
#[derive(Clone, Debug)]
pub struct HochschildCell {
    pub bidegree: Bidegree,
    pub dim: usize,
    pub basis: Vec<Term>,
    pub representatives: Vec<Cochain>,
    index: HashMap<Term, usize>,
    quotient: Subquotient,
}

impl HochschildCell {
    /// Class of a cocycle in the representative basis; `None` if `z` is not a cocycle of this cell.
    pub fn class_of(&self, z: &Cochain) -> Option<Vec<Scalar>> {
        let v = coordinates(z, &self.index)?;
        self.quotient.coordinates(&v)
    }
}

/// The brace complex of one structure with cells computed on demand.
#[derive(Debug)]
pub struct HochschildComplex {
    pub structure: BraceStructure,
    bases: Mutex<HashMap<Bidegree, Arc<Vec<Term>>>>,
    cells: Mutex<HashMap<Bidegree, Arc<HochschildCell>>>,
}

impl HochschildComplex {
    pub fn new(structure: BraceStructure) -> HochschildComplex {
        HochschildComplex { structure, bases: Mutex::new(HashMap::new()), cells: Mutex::new(HashMap::new()) }
    }

    pub fn basis(&self, b: Bidegree) -> Result<Arc<Vec<Term>>> {
        if let Some(v) = self.bases.lock().unwrap().get(&b) {
            return Ok(v.clone());
        }
        let v = Arc::new(cell_basis(&self.structure, b)?);
        self.bases.lock().unwrap().insert(b, v.clone());
        Ok(v)
    }

    /// Matrix of `δ` from the cell `from` into the concatenation of the cells `to`.
    fn delta(&self, from: &[Term], to: &[Arc<Vec<Term>>]) -> Result<SparseMatrix> {
        let s = &self.structure;
        let mut index = HashMap::new();
        for cell in to {
            for t in cell.iter() {
                let k = index.len();
                index.insert(t.clone(), k);
            }
        }
        let cols: Vec<Result<SparseVec>> = par::map(from, |t| {
            let d = differential(s, &single(s, t))?;
            coordinates(&d, &index).ok_or_else(|| Error::NotAComplex(format!("δ of {} leaves its target", s.render_term(t))))
        });
        let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_columns(index.len(), s.field, &cols))
    }

    /// Cohomology of a weight-preserving brace complex at one bidegree.
    pub fn cell(&self, b: Bidegree) -> Result<Arc<HochschildCell>> {
        if let Some(c) = self.cells.lock().unwrap().get(&b) {
            return Ok(c.clone());
        }
        if !self.structure.weight_graded {
            return Err(Error::WindowNotCertified(
                "the differential does not preserve weight; use the filtered computation".into(),
            ));
        }
        let here = self.basis(b)?;
        let next = self.basis(b.shift(1, Some(0)))?;
        let prev = self.basis(b.shift(-1, Some(0)))?;
        let cycles = self.delta(&here, &[next])?;
        let boundaries = self.delta(&prev, std::slice::from_ref(&here))?;
        let quotient = subquotient_dim(&cycles, &boundaries)?;
        let s = &self.structure;
        let representatives = quotient.representatives.iter().map(|v| to_cochain(s, &here, v)).collect();
        let index = here.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let cell = Arc::new(HochschildCell {
            bidegree: b,
            dim: quotient.dim,
            basis: here.to_vec(),
            representatives,
            index,
            quotient,
        });
        self.cells.lock().unwrap().insert(b, cell.clone());
        Ok(cell)
    }

    /// Every cell of a window; the window must carry a weight range.
    pub fn table(&self, window: &Window) -> Result<HochschildTable> {
        if window.weights.is_none() {
            return Err(Error::WindowNotCertified("a weight range is required".into()));
        }
        let keys = window.bidegrees();
        let cells = par::map(&keys, |&b| self.cell(b));
        let mut out = BTreeMap::new();
        for (b, c) in keys.into_iter().zip(cells) {
            out.insert(b, c?);
        }
        Ok(HochschildTable { side: self.structure.side, window: *window, certification: Certification::Exact, cells: out })
    }
}

/// Hochschild cohomology on a window, cell by cell.
#[derive(Clone, Debug)]
pub struct HochschildTable {
    pub side: Side,
    pub window: Window,
    pub certification: Certification,
    pub cells: BTreeMap<Bidegree, Arc<HochschildCell>>,
}

impl HochschildTable {
    pub fn dim(&self, b: Bidegree) -> usize {
        self.cells.get(&b).map_or(0, |c| c.dim)
    }

    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.cells.iter().map(|(b, c)| (*b, c.dim)).collect()
    }
}

/// Builds the brace complex of either kind of structure and tabulates it.
pub fn hochschild_cohomology(structure: BraceStructure, window: &Window) -> Result<HochschildTable> {
    HochschildComplex::new(structure).table(window)
}

/// Filtered cohomology `(Z ∩ F_N) / (B ∩ F_N)` at one total degree, with `F_N` = weight ≤ N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilteredCell {
    pub degree: i32,
    pub bound: i32,
    pub dim: usize,
    /// Dimension with preimages taken from weight ≤ N+1 and ≤ N+2.
    pub by_preimage_bound: (usize, usize),
    pub certification: Certification,
}

impl HochschildComplex {
    fn lowest_weight(&self) -> i32 {
        let s = &self.structure;
        let max_conn = (0..s.dim()).filter_map(|i| s.weight(i)).max().unwrap_or(0);
        match s.side {
            Side::Coalgebra => -max_conn,
            Side::Algebra => -(0..s.dim()).filter_map(|i| s.weight(i)).map(i32::abs).sum::<i32>(),
        }
    }

    fn filtered_basis(&self, t: i32, lo: i32, hi: i32) -> Result<Vec<Arc<Vec<Term>>>> {
        (lo..=hi).map(|w| self.basis(Bidegree::new(t, w))).collect()
    }

    /// `dim (Z ∩ F_N)/(B ∩ F_N)` in total degree `t`, boundaries drawn from weight ≤ `m`.
    fn filtered_dim(&self, t: i32, n: i32, m: i32) -> Result<usize> {
        let lo = self.lowest_weight();
        let here: Vec<Term> = self.filtered_basis(t, lo, n)?.iter().flat_map(|c| c.iter().cloned()).collect();
        let next = self.filtered_basis(t + 1, lo, n)?;
        let cycles = self.delta(&here, &next)?;
        // preimage candidates of weight ≤ m whose boundary lies in F_N
        let prev: Vec<Term> = self.filtered_basis(t - 1, lo, m)?.iter().flat_map(|c| c.iter().cloned()).collect();
        let low = self.filtered_basis(t, lo, n)?;
        let high = self.filtered_basis(t, n + 1, m)?;
        let mut targets = low.clone();
        targets.extend(high.iter().cloned());
        let full = self.delta(&prev, &targets)?;
        let split = here.len();
        let above: Vec<usize> = (split..full.nrows()).collect();
        let below: Vec<usize> = (0..split).collect();
        let all: Vec<usize> = (0..full.ncols()).collect();
        let k = kernel_basis(&full.select(&above, &all));
        let restricted = full.select(&below, &all);
        let images: Vec<SparseVec> = k.iter().map(|v| restricted.mul_vec(v)).collect();
        let boundaries = SparseMatrix::from_columns(split, self.structure.field, &images);
        Ok(subquotient_dim(&cycles, &boundaries)?.dim)
    }

    /// Filtered cohomology at total degree `t` and filtration `n`, with the stabilization check.
    pub fn filtered_cell(&self, t: i32, n: i32) -> Result<FilteredCell> {
        let a = self.filtered_dim(t, n, n + 1)?;
        let b = self.filtered_dim(t, n, n + 2)?;
        let stabilized = a == b;
        Ok(FilteredCell {
            degree: t,
            bound: n,
            dim: b,
            by_preimage_bound: (a, b),
            certification: Certification::Truncated { bound: (n + 2) as u32, stabilized },
        })
    }
}
