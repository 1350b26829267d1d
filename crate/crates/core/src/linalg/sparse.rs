use std::collections::BTreeMap;

use super::scalar::{Field, Scalar};

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize, field: Field) -> SparseVec {
        SparseVec { entries: vec![(i, field.one())] }
    }

    /// Builds from arbitrary (index, value) pairs, summing duplicates and dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
        let mut acc = Accum::new();
        for (i, v) in pairs {
            acc.add(i, &v);
        }
        acc.finish()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Scalar)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    /// `self + c * other`, merging sorted entry lists.
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + &(y * c);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn dot(&self, other: &SparseVec) -> Option<Scalar> {
        let mut acc: Option<Scalar> = None;
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, x) = &self.entries[a];
            let (j, y) = &other.entries[b];
            if i < j {
                a += 1;
            } else if j < i {
                b += 1;
            } else {
                let p = x * y;
                acc = Some(match acc {
                    Some(s) => &s + &p,
                    None => p,
                });
                a += 1;
                b += 1;
            }
        }
        acc
    }

    /// Relabels indices through `f`; indices mapped to `None` are dropped.
    pub fn reindex(&self, f: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().filter_map(|(i, v)| f(*i).map(|j| (j, v.clone()))))
    }

    pub fn to_dense(&self, len: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }
}

/// Accumulator for building sparse vectors out of unordered contributions.
#[derive(Clone, Debug, Default)]
pub struct Accum {
    map: BTreeMap<usize, Scalar>,
}

impl Accum {
    pub fn new() -> Accum {
        Accum { map: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        match self.map.get_mut(&i) {
            Some(x) => *x = &*x + v,
            None => {
                self.map.insert(i, v.clone());
            }
        }
    }

    pub fn add_vec(&mut self, c: &Scalar, v: &SparseVec) {
        for (i, x) in v.iter() {
            self.add(i, &(c * x));
        }
    }

    pub fn finish(self) -> SparseVec {
        SparseVec {
            entries: self.map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }
}

/// Row-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    field: Field,
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize, field: Field) -> SparseMatrix {
        SparseMatrix { nrows, ncols, field, rows: vec![SparseVec::new(); nrows] }
    }

    pub fn identity(n: usize, field: Field) -> SparseMatrix {
        SparseMatrix {
            nrows: n,
            ncols: n,
            field,
            rows: (0..n).map(|i| SparseVec::unit(i, field)).collect(),
        }
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        field: Field,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> SparseMatrix {
        let mut acc: Vec<Accum> = vec![Accum::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "entry ({r},{c}) outside {nrows}x{ncols}");
            acc[r].add(c, &v);
        }
        SparseMatrix { nrows, ncols, field, rows: acc.into_iter().map(Accum::finish).collect() }
    }

    pub fn from_rows(ncols: usize, field: Field, rows: Vec<SparseVec>) -> SparseMatrix {
        debug_assert!(rows.iter().all(|r| r.entries().last().is_none_or(|(c, _)| *c < ncols)));
        SparseMatrix { nrows: rows.len(), ncols, field, rows }
    }

    /// Matrix whose columns are the given vectors (each of length `nrows`).
    pub fn from_columns(nrows: usize, field: Field, cols: &[SparseVec]) -> SparseMatrix {
        let trip = cols
            .iter()
            .enumerate()
            .flat_map(|(c, v)| v.iter().map(move |(r, x)| (r, c, x.clone())));
        SparseMatrix::from_triplets(nrows, cols.len(), field, trip)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(SparseVec::is_zero)
    }

    /// Entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Scalar> {
        self.rows[r].get(c)
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.ncols,
            self.nrows,
            self.field,
            self.triplets().map(|(r, c, v)| (c, r, v.clone())),
        )
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().rows
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_pairs(
            self.rows
                .iter()
                .enumerate()
                .filter_map(|(r, row)| row.dot(v).map(|x| (r, x))),
        )
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = Accum::new();
                for (k, a) in row.iter() {
                    acc.add_vec(a, &other.rows[k]);
                }
                acc.finish()
            })
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: other.ncols, field: self.field, rows }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let one = self.field.one();
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.add_scaled(&one, b)).collect();
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, field: self.field, rows }
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            field: self.field,
            rows: self.rows.iter().map(|r| r.scale(c)).collect(),
        }
    }

    /// Submatrix on the given row and column index lists (in that order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut col_pos = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            col_pos[c] = k;
        }
        let rows = rows
            .iter()
            .map(|&r| {
                self.rows[r].reindex(|c| (col_pos[c] != usize::MAX).then_some(col_pos[c]))
            })
            .collect::<Vec<_>>();
        SparseMatrix { nrows: rows.len(), ncols: cols.len(), field: self.field, rows }
    }

    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.nrows,
            self.ncols,
            self.field,
            self.triplets().map(|(r, c, v)| (row_perm[r], col_perm[c], v.clone())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_scaled_cancels() {
        let f = Field::Rational;
        let a = SparseVec::from_pairs([(0, f.one()), (3, f.from_i64(2))]);
        let b = SparseVec::from_pairs([(3, f.from_i64(1)), (5, f.one())]);
        let c = a.add_scaled(&f.from_i64(-2), &b);
        assert_eq!(c, SparseVec::from_pairs([(0, f.one()), (5, f.from_i64(-2))]));
    }

    #[test]
    fn triplets_are_row_major_and_merged() {
        let f = Field::Prime(5);
        let m = SparseMatrix::from_triplets(
            2,
            2,
            f,
            [(1, 0, f.one()), (0, 1, f.from_i64(2)), (1, 0, f.from_i64(4)), (0, 0, f.one())],
        );
        let t: Vec<_> = m.triplets().map(|(r, c, v)| (r, c, v.clone())).collect();
        assert_eq!(t, vec![(0, 0, f.one()), (0, 1, f.from_i64(2))]);
        assert_eq!(m.transpose().transpose(), m);
    }
}
