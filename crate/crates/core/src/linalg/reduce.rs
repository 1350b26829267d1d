//! Gaussian elimination over an exact field.
//!
//! Rows enter the echelon form sparsest first (ties by lowest index), each
//! reduced against existing pivots on its leading entry only. Full reduced
//! row-echelon form is produced on demand by back-substitution.

use std::collections::BTreeMap;

use super::scalar::{Field, Scalar};
use super::sparse::{SparseMatrix, SparseVec};
use crate::error::{Error, Result};

/// An echelon basis: at most one row per leading column, each with leading coefficient 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon { field, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Reduces `v` until its leading column is not a pivot (or it vanishes).
    pub fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        while let Some((c, x)) = v.leading() {
            match self.pivots.get(&c) {
                Some(p) => {
                    let coef = -x;
                    v = v.add_scaled(&coef, p);
                }
                None => break,
            }
        }
        v
    }

    /// Eliminates every pivot column from `v`.
    pub fn reduce_full(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = 0usize;
        loop {
            let next = v
                .iter()
                .find(|(c, _)| *c >= cursor && self.pivots.contains_key(c))
                .map(|(c, x)| (c, x.clone()));
            match next {
                Some((c, x)) => {
                    v = v.add_scaled(&(-x), &self.pivots[&c]);
                    cursor = c + 1;
                }
                None => return v,
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_leading(v.clone()).is_zero()
    }

    /// Adds `v` to the span; returns false when it was already dependent.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce_leading(v);
        match r.leading() {
            None => false,
            Some((c, x)) => {
                let inv = x.inv();
                let r = r.scale(&inv);
                self.pivots.insert(c, r);
                true
            }
        }
    }

    /// Back-substitutes so each pivot column is zero outside its pivot row.
    pub fn into_rref(mut self) -> Vec<(usize, SparseVec)> {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &c in &cols {
            let pivot = self.pivots[&c].clone();
            for (&other, row) in self.pivots.iter_mut() {
                if other < c {
                    if let Some(x) = row.get(c).cloned() {
                        *row = row.add_scaled(&(-x), &pivot);
                    }
                }
            }
        }
        self.pivots.into_iter().collect()
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

fn insertion_order(rows: &[SparseVec]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| (rows[i].nnz(), i));
    order
}

fn echelon_of_rows(field: Field, rows: &[SparseVec]) -> Echelon {
    let mut e = Echelon::new(field);
    for i in insertion_order(rows) {
        if !rows[i].is_zero() {
            e.insert(rows[i].clone());
        }
    }
    e
}

/// Result of [`row_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: SparseMatrix,
}

/// Reduced row-echelon form; zero rows are dropped from `reduced`.
pub fn row_reduce(m: &SparseMatrix) -> RowReduction {
    let e = echelon_of_rows(m.field(), m.rows());
    let rref = e.into_rref();
    let pivots: Vec<usize> = rref.iter().map(|(c, _)| *c).collect();
    let reduced = SparseMatrix::from_rows(m.ncols(), m.field(), rref.into_iter().map(|(_, r)| r).collect());
    RowReduction { rank: pivots.len(), pivots, reduced }
}

pub fn rank(m: &SparseMatrix) -> usize {
    // Rows or columns, whichever side is shorter to insert.
    if m.nrows() <= m.ncols() {
        echelon_of_rows(m.field(), m.rows()).rank()
    } else {
        echelon_of_rows(m.field(), &m.columns()).rank()
    }
}

/// Basis of the right kernel `{v : m v = 0}`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let field = m.field();
    let rref = echelon_of_rows(field, m.rows()).into_rref();
    let pivot_cols: std::collections::BTreeSet<usize> = rref.iter().map(|(c, _)| *c).collect();
    // For each free column f: e_f - sum_r row_r[f] e_{pivot(r)}.
    let mut by_free: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (pc, row) in &rref {
        for (c, x) in row.iter() {
            if c != *pc {
                by_free.entry(c).or_default().push((*pc, -x));
            }
        }
    }
    (0..m.ncols())
        .filter(|c| !pivot_cols.contains(c))
        .map(|f| {
            let mut pairs = by_free.remove(&f).unwrap_or_default();
            pairs.push((f, field.one()));
            SparseVec::from_pairs(pairs)
        })
        .collect()
}

/// Cohomology of `U --boundaries--> V --cycles--> W` at `V`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub dim: usize,
    pub representatives: Vec<SparseVec>,
    ambient: usize,
    tagged: Echelon,
}

impl Subquotient {
    /// Coordinates of a cycle in the basis of representative classes.
    /// Returns `None` when `z` is not in cycles-span (boundaries + representatives).
    pub fn coordinates(&self, z: &SparseVec) -> Option<Vec<Scalar>> {
        let field = self.tagged.field();
        let r = self.tagged.reduce_full(z.clone());
        if r.iter().any(|(c, _)| c < self.ambient) {
            return None;
        }
        let mut out = vec![field.zero(); self.dim];
        for (c, x) in r.iter() {
            out[c - self.ambient] = -x;
        }
        Some(out)
    }

    pub fn is_boundary(&self, z: &SparseVec) -> bool {
        self.coordinates(z).is_some_and(|c| c.iter().all(Scalar::is_zero))
    }
}

/// `dim ker(cycles) - dim im(boundaries)` with representative cycles of a quotient basis.
pub fn subquotient_dim(cycles: &SparseMatrix, boundaries: &SparseMatrix) -> Result<Subquotient> {
    let n = cycles.ncols();
    if boundaries.nrows() != n {
        return Err(Error::Incompatible(format!(
            "boundary map lands in dimension {} but cycle map starts in {}",
            boundaries.nrows(),
            n
        )));
    }
    let field = cycles.field();
    let image = boundaries.columns();
    for col in &image {
        if !cycles.mul_vec(col).is_zero() {
            return Err(Error::NotAComplex("composite of consecutive maps is nonzero".into()));
        }
    }
    let mut tagged = Echelon::new(field);
    for i in insertion_order(&image) {
        if !image[i].is_zero() {
            tagged.insert(image[i].clone());
        }
    }
    let mut span = tagged.clone();
    let mut representatives = Vec::new();
    for k in kernel_basis(cycles) {
        if span.insert(k.clone()) {
            let tag = n + representatives.len();
            let mut pairs: Vec<(usize, Scalar)> = k.entries().to_vec();
            pairs.push((tag, field.one()));
            tagged.insert(SparseVec::from_pairs(pairs));
            representatives.push(k);
        }
    }
    Ok(Subquotient { dim: representatives.len(), representatives, ambient: n, tagged })
}

/// Dimension only; avoids kernel construction.
pub fn subquotient_dim_only(cycles: &SparseMatrix, boundaries: &SparseMatrix) -> usize {
    cycles.ncols() - rank(cycles) - rank(boundaries)
}

/// Solves `sum_i x_i cols[i] = target`, returning one solution if it exists.
pub fn solve(field: Field, cols: &[SparseVec], target: &SparseVec) -> Option<Vec<Scalar>> {
    let ambient = cols
        .iter()
        .chain(std::iter::once(target))
        .filter_map(|v| v.entries().last().map(|(c, _)| c + 1))
        .max()
        .unwrap_or(0);
    let mut e = Echelon::new(field);
    for (i, c) in cols.iter().enumerate() {
        let mut pairs = c.entries().to_vec();
        pairs.push((ambient + i, field.one()));
        e.insert(SparseVec::from_pairs(pairs));
    }
    let r = e.reduce_full(target.clone());
    if r.iter().any(|(c, _)| c < ambient) {
        return None;
    }
    let mut x = vec![field.zero(); cols.len()];
    for (c, v) in r.iter() {
        x[c - ambient] = -v;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_by_a_mixed_boundary() {
        let f = Field::Rational;
        let cycles = SparseMatrix::zero(0, 2, f);
        let boundaries = mat(f, &[&[1], &[-1]]);
        assert_eq!(subquotient_dim(&cycles, &boundaries).unwrap().dim, 1);
    }

    fn mat(field: Field, rows: &[&[i64]]) -> SparseMatrix {
        let nc = rows.first().map_or(0, |r| r.len());
        SparseMatrix::from_triplets(
            rows.len(),
            nc,
            field,
            rows.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &x)| (r, c, field.from_i64(x)))),
        )
    }

    #[test]
    fn identity_reduces_to_itself() {
        let f = Field::Rational;
        let r = row_reduce(&SparseMatrix::identity(2, f));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let r = row_reduce(&SparseMatrix::zero(3, 4, Field::Rational));
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn dependent_rows() {
        let f = Field::Rational;
        assert_eq!(row_reduce(&mat(f, &[&[1, 2], &[2, 4]])).rank, 1);
    }

    #[test]
    fn kernel_examples() {
        let f = Field::Rational;
        assert!(kernel_basis(&SparseMatrix::identity(2, f)).is_empty());
        let k = kernel_basis(&mat(f, &[&[1, 1]]));
        assert_eq!(k, vec![SparseVec::from_pairs([(0, f.from_i64(-1)), (1, f.one())])]);
        let k = kernel_basis(&mat(f, &[&[0]]));
        assert_eq!(k, vec![SparseVec::unit(0, f)]);
    }

    #[test]
    fn rref_is_reduced() {
        let f = Field::Rational;
        let r = row_reduce(&mat(f, &[&[1, 2, 3], &[2, 5, 7], &[1, 3, 4]]));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.reduced.get(0, 1), None);
    }

    #[test]
    fn subquotient_examples() {
        let f = Field::Rational;
        let zero22 = SparseMatrix::zero(0, 2, f);
        let into = SparseMatrix::zero(2, 0, f);
        assert_eq!(subquotient_dim(&zero22, &into).unwrap().dim, 2);
        let id = SparseMatrix::identity(2, f);
        assert_eq!(subquotient_dim(&id, &into).unwrap().dim, 0);
        // k --(1,0)--> k^2 --(0,1)--> k : middle cohomology vanishes.
        let d1 = mat(f, &[&[1], &[0]]);
        let d0 = mat(f, &[&[0, 1]]);
        let sq = subquotient_dim(&d0, &d1).unwrap();
        assert_eq!(sq.dim, 0);
        assert_eq!(subquotient_dim_only(&d0, &d1), 0);
    }

    #[test]
    fn non_complex_is_rejected() {
        let f = Field::Rational;
        let id = SparseMatrix::identity(2, f);
        assert!(matches!(subquotient_dim(&id, &id), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn coordinates_modulo_boundaries() {
        let f = Field::Rational;
        // Zero outgoing map on k^3, boundaries spanned by e0.
        let out = SparseMatrix::zero(0, 3, f);
        let inc = mat(f, &[&[1], &[0], &[0]]);
        let sq = subquotient_dim(&out, &inc).unwrap();
        assert_eq!(sq.dim, 2);
        let z = SparseVec::from_pairs([(0, f.from_i64(5)), (1, f.from_i64(2)), (2, f.from_i64(3))]);
        let c = sq.coordinates(&z).unwrap();
        let mut back = SparseVec::from_pairs([(0, f.from_i64(5))]);
        for (k, r) in sq.representatives.iter().enumerate() {
            back = back.add_scaled(&c[k], r);
        }
        assert_eq!(back, z);
        assert!(sq.is_boundary(&SparseVec::unit(0, f)));
    }

    #[test]
    fn solve_finds_combination() {
        let f = Field::Rational;
        let cols = vec![
            SparseVec::from_pairs([(0, f.one()), (1, f.one())]),
            SparseVec::from_pairs([(1, f.one())]),
        ];
        let t = SparseVec::from_pairs([(0, f.from_i64(2)), (1, f.from_i64(5))]);
        let x = solve(f, &cols, &t).unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(3)]);
        assert!(solve(f, &cols, &SparseVec::unit(2, f)).is_none());
    }
}
