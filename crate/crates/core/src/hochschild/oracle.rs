//! Closed-form models used when one side of a pair is not computed by the brace engine.
//!
//! Polyvector fields `S(V)⊗Λ(V*)` with `x^α ∂_I` in degree `|I|` and weight `|α| − |I|`,
//! carrying the wedge product and the Schouten bracket, and the PBW filtration of the
//! center of an enveloping algebra.

use std::collections::BTreeMap;

use crate::dg::pbw::{monomials, Normalizer};
use crate::dg::LiePresentation;
use crate::graded::Bidegree;
use crate::linalg::{kernel_basis, Field, Scalar, SparseMatrix, SparseVec};

/// `x^α ∂_I`, with `I` as a bit mask.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polyvector {
    pub exponents: Vec<u32>,
    pub mask: u32,
}

impl Polyvector {
    pub fn degree(&self) -> i32 {
        self.mask.count_ones() as i32
    }

    pub fn weight(&self) -> i32 {
        self.exponents.iter().sum::<u32>() as i32 - self.degree()
    }

    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exponents.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{e}", i + 1)),
            }
        }
        for i in 0..self.exponents.len() {
            if self.mask & (1 << i) != 0 {
                parts.push(format!("d{}", i + 1));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// A finite sum of polyvector monomials in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyElem {
    pub terms: BTreeMap<Polyvector, Scalar>,
}

impl PolyElem {
    pub fn zero() -> PolyElem {
        PolyElem { terms: BTreeMap::new() }
    }

    pub fn monomial(m: Polyvector, c: Scalar) -> PolyElem {
        let mut e = PolyElem::zero();
        e.add_term(m, &c);
        e
    }

    pub fn add_term(&mut self, m: Polyvector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&m) {
            Some(x) => x + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn add(&self, other: &PolyElem, c: &Scalar) -> PolyElem {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), &(x * c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of the first term; callers keep elements homogeneous.
    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().next().map(Polyvector::degree)
    }
}

/// Sign of `∂_I ∂_J = ± ∂_{I∪J}`, or `None` when they overlap.
fn merge_sign(i: u32, j: u32) -> Option<bool> {
    if i & j != 0 {
        return None;
    }
    let mut swaps = 0;
    for b in 0..32 {
        if j & (1 << b) != 0 {
            swaps += (i >> (b + 1)).count_ones();
        }
    }
    Some(swaps % 2 == 1)
}

fn wedge_mono(a: &Polyvector, b: &Polyvector) -> Option<(Polyvector, bool)> {
    let neg = merge_sign(a.mask, b.mask)?;
    let exponents = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
    Some((Polyvector { exponents, mask: a.mask | b.mask }, neg))
}

pub fn wedge(p: &PolyElem, q: &PolyElem) -> PolyElem {
    let mut out = PolyElem::zero();
    for (a, x) in &p.terms {
        for (b, y) in &q.terms {
            if let Some((m, neg)) = wedge_mono(a, b) {
                out.add_term(m, &(x * y).neg_if(neg));
            }
        }
    }
    out
}

/// Right derivative in the odd variable `∂_i`.
fn odd_derivative(p: &PolyElem, i: usize) -> PolyElem {
    let mut out = PolyElem::zero();
    for (m, x) in &p.terms {
        if m.mask & (1 << i) == 0 {
            continue;
        }
        let after = (m.mask >> (i + 1)).count_ones();
        let reduced = Polyvector { exponents: m.exponents.clone(), mask: m.mask & !(1 << i) };
        out.add_term(reduced, &x.clone().neg_if(after % 2 == 1));
    }
    out
}

fn even_derivative(field: Field, p: &PolyElem, i: usize) -> PolyElem {
    let mut out = PolyElem::zero();
    for (m, x) in &p.terms {
        let e = m.exponents[i];
        if e == 0 {
            continue;
        }
        let mut exponents = m.exponents.clone();
        exponents[i] -= 1;
        out.add_term(Polyvector { exponents, mask: m.mask }, &(x * &field.from_i64(e as i64)));
    }
    out
}

/// Schouten bracket `[P,Q] = Σ_i (P ∂⃖_{∂_i})(∂_{x_i} Q) − (−1)^{(p−1)(q−1)} (Q ∂⃖_{∂_i})(∂_{x_i} P)`.
pub fn schouten(field: Field, n: usize, p: &PolyElem, q: &PolyElem) -> PolyElem {
    let (dp, dq) = match (p.degree(), q.degree()) {
        (Some(a), Some(b)) => (a, b),
        _ => return PolyElem::zero(),
    };
    let flip = ((dp - 1) * (dq - 1)).rem_euclid(2) == 1;
    let one = field.one();
    let mut out = PolyElem::zero();
    for i in 0..n {
        let a = wedge(&odd_derivative(p, i), &even_derivative(field, q, i));
        let b = wedge(&odd_derivative(q, i), &even_derivative(field, p, i));
        out = out.add(&a, &one).add(&b, &one.clone().neg_if(!flip));
    }
    out
}

/// Monomial basis of one bidegree `(|I|, |α| − |I|)` in `n` variables.
pub fn polyvector_basis(n: usize, b: Bidegree) -> Vec<Polyvector> {
    let w = match b.weight {
        Some(w) => w,
        None => return Vec::new(),
    };
    if b.degree < 0 || b.degree as usize > n {
        return Vec::new();
    }
    let total = w + b.degree;
    if total < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as i32 != b.degree {
            continue;
        }
        for exponents in compositions(total as u32, n) {
            out.push(Polyvector { exponents, mask });
        }
    }
    out.sort();
    out
}

/// Exponent vectors of length `n` summing to `total`.
fn compositions(total: u32, n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, n - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Dimensions `dim (Z(U g) ∩ F_N)` for `N = 0..=max`, by solving `[z, x_i] = 0` in the PBW basis.
pub fn center_filtration_dims(lie: &LiePresentation, max: u32) -> Vec<usize> {
    let field = lie.field;
    let norm = Normalizer::new(lie);
    let k = lie.dim();
    let top = monomials(k, max as usize + 1);
    let index: BTreeMap<Vec<u8>, usize> = top.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let minus = field.from_i64(-1);
    (0..=max)
        .map(|n| {
            let basis: Vec<&Vec<u8>> = top.iter().filter(|m| m.len() <= n as usize).collect();
            let mut rows = Vec::new();
            for x in 0..k as u8 {
                // the block of [−, x] as rows indexed by (generator, monomial)
                let mut cols = Vec::with_capacity(basis.len());
                for m in &basis {
                    let mut v = Vec::new();
                    for (mono, c) in norm.product(m, &[x]) {
                        v.push((index[&mono], c));
                    }
                    for (mono, c) in norm.product(&[x], m) {
                        v.push((index[&mono], &c * &minus));
                    }
                    cols.push(SparseVec::from_pairs(v));
                }
                rows.push(SparseMatrix::from_columns(top.len(), field, &cols));
            }
            let stacked = rows.iter().skip(1).fold(rows[0].clone(), |acc, m| stack(&acc, m));
            kernel_basis(&stacked).len()
        })
        .collect()
}

fn stack(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let mut rows = a.rows().to_vec();
    rows.extend(b.rows().iter().cloned());
    SparseMatrix::from_rows(a.ncols(), a.field(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn mono(e: &[u32], mask: u32) -> PolyElem {
        PolyElem::monomial(Polyvector { exponents: e.to_vec(), mask }, Q.one())
    }

    #[test]
    fn partials_pair_with_coordinates() {
        for i in 0..2 {
            for j in 0..2 {
                let mut e = [0, 0];
                e[j] = 1;
                let b = schouten(Q, 2, &mono(&[0, 0], 1 << i), &mono(&e, 0));
                let expect = if i == j { mono(&[0, 0], 0) } else { PolyElem::zero() };
                assert_eq!(b, expect);
            }
        }
    }

    #[test]
    fn schouten_is_antisymmetric_and_satisfies_jacobi() {
        let gens: Vec<PolyElem> = vec![
            mono(&[1, 0], 1),
            mono(&[0, 2], 2),
            mono(&[1, 1], 3),
            mono(&[2, 0], 0),
            mono(&[0, 1], 1).add(&mono(&[1, 0], 2), &Q.from_i64(3)),
            mono(&[1, 2], 3),
        ];
        let deg = |p: &PolyElem| p.degree().unwrap();
        for p in &gens {
            for q in &gens {
                let pq = schouten(Q, 2, p, q);
                let qp = schouten(Q, 2, q, p);
                let neg = ((deg(p) - 1) * (deg(q) - 1)).rem_euclid(2) == 1;
                assert!(pq.add(&qp, &Q.one().neg_if(neg)).is_zero());
                for r in &gens {
                    let lhs = schouten(Q, 2, p, &schouten(Q, 2, q, r));
                    let a = schouten(Q, 2, &pq, r);
                    let b = schouten(Q, 2, q, &schouten(Q, 2, p, r));
                    let rhs = a.add(&b, &Q.one().neg_if(neg));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(polyvector_basis(2, Bidegree::new(1, -1)).len(), 2);
        assert_eq!(polyvector_basis(2, Bidegree::new(1, 1)).len(), 6);
        assert_eq!(polyvector_basis(2, Bidegree::new(2, -2)).len(), 1);
        assert_eq!(polyvector_basis(1, Bidegree::new(0, 4)).len(), 1);
    }

    #[test]
    fn center_of_sl2_is_generated_by_the_casimir() {
        assert_eq!(center_filtration_dims(&LiePresentation::sl2(Q), 5), vec![1, 1, 2, 2, 3, 3]);
        assert_eq!(center_filtration_dims(&LiePresentation::abelian(2, Q), 2), vec![1, 3, 6]);
    }
}
