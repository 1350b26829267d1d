use std::collections::HashMap;
use std::sync::Arc;

use super::lie::LiePresentation;
use super::ops::dualize;
use super::pbw::{monomial_name, monomials, Monomial, Normalizer};
use super::structure::{CoTerm, DgAlgebra, DgCoalgebra, Family, Truncation};
use crate::error::{Error, Result};
use crate::graded::{BasisElem, GradedSpace};
use crate::linalg::{Field, SparseVec};

fn require_char0(field: Field, what: &str) -> Result<()> {
    match field.characteristic() {
        0 => Ok(()),
        p => Err(Error::CharacteristicUnsupported(p, format!("{what} is built in characteristic 0 only"))),
    }
}

/// The ground field as an augmented algebra.
pub fn ground_algebra(field: Field) -> DgAlgebra {
    let space = Arc::new(GradedSpace::ground(true));
    DgAlgebra::new(field, space, 0, vec![Some(SparseVec::unit(0, field))], vec![SparseVec::new()], SparseVec::unit(0, field), Truncation::Exact)
        .unwrap()
        .with_family(Family::Ground)
}

/// The ground field as a coaugmented coalgebra.
pub fn ground_coalgebra(field: Field) -> DgCoalgebra {
    let space = Arc::new(GradedSpace::ground(true));
    DgCoalgebra::new(field, space, 0, vec![vec![(0, 0, field.one())]], vec![SparseVec::new()], SparseVec::unit(0, field), Truncation::Exact)
        .unwrap()
        .with_family(Family::Ground)
}

/// `S(V)` with `dim V = n`, generators `x1..xn` in bidegree (0,1), as the quotient by weights > `max_weight`.
pub fn sym_algebra(field: Field, n: usize, max_weight: u32) -> DgAlgebra {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let monos = monomials(n, max_weight as usize);
    let index: HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let elems = monos.iter().map(|m| BasisElem::new(monomial_name(&names, m), 0, Some(m.len() as i32))).collect();
    let space = Arc::new(GradedSpace::new(elems).unwrap());
    let dim = monos.len();
    let mut mult = Vec::with_capacity(dim * dim);
    for a in &monos {
        for b in &monos {
            if a.len() + b.len() > max_weight as usize {
                mult.push(Some(SparseVec::new()));
            } else {
                let mut m = a.clone();
                m.extend_from_slice(b);
                m.sort_unstable();
                mult.push(Some(SparseVec::unit(index[&m], field)));
            }
        }
    }
    DgAlgebra::new(field, space, 0, mult, vec![SparseVec::new(); dim], SparseVec::unit(0, field), Truncation::Weight(max_weight))
        .unwrap()
        .with_family(Family::Sym { dim: n })
}

/// `k[x]/x²` with `x` in bidegree (0,1).
pub fn dual_numbers(field: Field) -> DgAlgebra {
    let space = Arc::new(
        GradedSpace::new(vec![BasisElem::new("1", 0, Some(0)), BasisElem::new("x", 0, Some(1))]).unwrap(),
    );
    let e = |i| Some(SparseVec::unit(i, field));
    let mult = vec![e(0), e(1), e(1), Some(SparseVec::new())];
    DgAlgebra::new(field, space, 0, mult, vec![SparseVec::new(); 2], SparseVec::unit(0, field), Truncation::Exact)
        .unwrap()
        .with_family(Family::DualNumbers)
}

/// Subsets of `0..n` by size, then lexicographically.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |x| x + 1);
            for x in start..n {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn wedge_name(names: &[String], s: &[usize]) -> String {
    if s.is_empty() {
        "1".into()
    } else {
        s.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join("^")
    }
}

/// Sign of sorting a sequence of odd symbols with distinct labels; `None` if a label repeats.
pub fn sort_odd(seq: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] == seq[b] {
                return None;
            }
            if seq[a] > seq[b] {
                inversions += 1;
            }
        }
    }
    let mut sorted = seq.to_vec();
    sorted.sort_unstable();
    Some((sorted, inversions % 2 == 1))
}

/// Exterior coalgebra on generators of bidegree (-1,1) with the shuffle coproduct,
/// and the Chevalley–Eilenberg differential when `lie` is nonabelian.
fn exterior_with(field: Field, names: &[String], lie: Option<&LiePresentation>) -> DgCoalgebra {
    let n = names.len();
    let sets = subsets(n);
    let index: HashMap<Vec<usize>, usize> = sets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let elems = sets
        .iter()
        .map(|s| BasisElem::new(wedge_name(names, s), -(s.len() as i32), Some(s.len() as i32)))
        .collect();
    let space = Arc::new(GradedSpace::new(elems).unwrap());
    let mut comult = Vec::with_capacity(sets.len());
    let mut d = Vec::with_capacity(sets.len());
    for s in &sets {
        let k = s.len();
        let mut terms: Vec<CoTerm> = Vec::new();
        for mask in 0..(1u32 << k) {
            let left: Vec<usize> = (0..k).filter(|p| mask >> p & 1 == 1).map(|p| s[p]).collect();
            let right: Vec<usize> = (0..k).filter(|p| mask >> p & 1 == 0).map(|p| s[p]).collect();
            let mut seq = left.clone();
            seq.extend_from_slice(&right);
            let (_, neg) = sort_odd(&seq).unwrap();
            terms.push((index[&left], index[&right], field.sign(neg)));
        }
        comult.push(terms);
        let mut acc = crate::linalg::Accum::new();
        if let Some(lie) = lie {
            for a in 0..k {
                for b in a + 1..k {
                    let rest: Vec<usize> = (0..k).filter(|&p| p != a && p != b).map(|p| s[p]).collect();
                    let outer = (a + b + 1) % 2 == 1;
                    for (m, c) in lie.bracket(s[a], s[b]).iter() {
                        let mut seq = vec![m];
                        seq.extend_from_slice(&rest);
                        if let Some((sorted, neg)) = sort_odd(&seq) {
                            acc.add(index[&sorted], &c.clone().neg_if(neg ^ outer));
                        }
                    }
                }
            }
        }
        d.push(acc.finish());
    }
    DgCoalgebra::new(field, space, 0, comult, d, SparseVec::unit(0, field), Truncation::Exact).unwrap()
}

/// `ΛV` with `dim V = n`, generators `v1..vn` in bidegree (-1,1), zero differential.
pub fn exterior_coalgebra(field: Field, n: usize) -> DgCoalgebra {
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    exterior_with(field, &names, None).with_family(Family::ExtCoalgebra { dim: n })
}

/// `Λ(V*)`: the dual of `ΛV`, generators in bidegree (1,-1).
pub fn exterior_algebra(field: Field, n: usize) -> DgAlgebra {
    dualize(&exterior_coalgebra(field, n)).unwrap().with_family(Family::ExtAlgebra { dim: n })
}

/// Chevalley–Eilenberg coalgebra: `Λ𝔤` with `𝔤` in degree -1 and `d(x∧y) = [x,y]` on two-fold wedges.
pub fn ce_coalgebra(lie: &LiePresentation) -> Result<DgCoalgebra> {
    require_char0(lie.field, "the Chevalley–Eilenberg coalgebra")?;
    Ok(exterior_with(lie.field, &lie.basis, Some(lie)).with_family(Family::Ce { lie: lie.name.clone() }))
}

/// `F_N U𝔤` in the PBW basis; weight records the filtration degree and
/// products of filtration sum above `n` are left undefined.
pub fn universal_envelope(lie: &LiePresentation, n: u32) -> Result<DgAlgebra> {
    require_char0(lie.field, "the universal envelope")?;
    let field = lie.field;
    let monos = monomials(lie.dim(), n as usize);
    let index: HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let elems = monos.iter().map(|m| BasisElem::new(monomial_name(&lie.basis, m), 0, Some(m.len() as i32))).collect();
    let space = Arc::new(GradedSpace::new(elems)?);
    let norm = Normalizer::new(lie);
    let mut mult = Vec::with_capacity(monos.len() * monos.len());
    for a in &monos {
        for b in &monos {
            if a.len() + b.len() > n as usize {
                mult.push(None);
            } else {
                let v = SparseVec::from_pairs(norm.product(a, b).into_iter().map(|(m, c)| (index[&m], c)));
                mult.push(Some(v));
            }
        }
    }
    let dim = monos.len();
    Ok(DgAlgebra::new(field, space, 0, mult, vec![SparseVec::new(); dim], SparseVec::unit(0, field), Truncation::Filtered(n))?
        .with_family(Family::Envelope { lie: lie.name.clone() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::validate::{validate_algebra, validate_coalgebra, ASSOCIATIVITY, COUNIT, DIFFERENTIAL_DEGREE};
    use crate::graded::Bidegree;

    #[test]
    fn sym_dims_by_weight() {
        let a = sym_algebra(Field::Rational, 2, 3);
        let dims: Vec<usize> = (0..=3).map(|w| a.space().dim_at(Bidegree::new(0, w))).collect();
        assert_eq!(dims, vec![1, 2, 3, 4]);
        assert!(validate_algebra(&a).passed());
        assert_eq!(sym_algebra(Field::Rational, 2, 4).dim(), 15);
    }

    #[test]
    fn sym_with_degree_zero_differential_fails() {
        let f = Field::Rational;
        let a = sym_algebra(f, 1, 4);
        let mut d = vec![SparseVec::new(); a.dim()];
        d[1] = SparseVec::unit(1, f);
        let r = validate_algebra(&a.with_differential(d));
        assert!(!r.check(DIFFERENTIAL_DEGREE).unwrap().passed);
    }

    #[test]
    fn exterior_coalgebra_is_valid_and_cocomplete() {
        let c = exterior_coalgebra(Field::Rational, 2);
        let r = validate_coalgebra(&c);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.check("cocomplete").unwrap().detail, "Δ̄^(3) = 0");
        // v1^v2 ↦ v1^v2⊗1 + v1⊗v2 - v2⊗v1 + 1⊗v1^v2
        let f = Field::Rational;
        let mut delta = c.coproduct(3).to_vec();
        delta.sort_by_key(|t| (t.0, t.1));
        assert_eq!(delta, vec![(0, 3, f.one()), (1, 2, f.one()), (2, 1, f.from_i64(-1)), (3, 0, f.one())]);
    }

    #[test]
    fn broken_counit_is_reported() {
        let f = Field::Rational;
        let c = exterior_coalgebra(f, 2);
        let bad = c.with_coproduct(1, vec![(1, 1, f.one())]);
        assert!(!validate_coalgebra(&bad).check(COUNIT).unwrap().passed);
    }

    #[test]
    fn ce_of_nonabelian_is_valid() {
        let c = ce_coalgebra(&LiePresentation::nonabelian2(Field::Rational)).unwrap();
        assert!(validate_coalgebra(&c).passed());
        assert!(!c.d(3).is_zero());
        let c = ce_coalgebra(&LiePresentation::sl2(Field::Rational)).unwrap();
        assert_eq!(c.dim(), 8);
        assert!(validate_coalgebra(&c).passed());
    }

    #[test]
    fn ce_of_abelian_is_exterior() {
        let f = Field::Rational;
        let c = ce_coalgebra(&LiePresentation::abelian(2, f)).unwrap();
        let e = exterior_coalgebra(f, 2);
        for i in 0..c.dim() {
            assert_eq!(c.coproduct(i), e.coproduct(i));
            assert!(c.d(i).is_zero());
        }
    }

    #[test]
    fn ce_perturbed_sl2_fails_square_zero() {
        let f = Field::Rational;
        let g = LiePresentation::sl2(f);
        let n = g.dim();
        let mut table = Vec::new();
        for i in 0..n {
            for j in 0..n {
                table.push(g.bracket(i, j).clone());
            }
        }
        table[n + 2] = SparseVec::unit(1, f).scale(&f.from_i64(3));
        table[2 * n + 1] = SparseVec::unit(1, f).scale(&f.from_i64(-3));
        let broken = LiePresentation::new_unchecked("broken", f, g.basis.clone(), table);
        let c = ce_coalgebra(&broken).unwrap();
        assert!(!validate_coalgebra(&c).check("d² = 0").unwrap().passed);
    }

    #[test]
    fn envelope_counts_and_characteristic() {
        let g = LiePresentation::sl2(Field::Rational);
        let u = universal_envelope(&g, 2).unwrap();
        assert_eq!(u.dim(), 10);
        assert!(validate_algebra(&u).passed());
        let gp = LiePresentation::sl2(Field::Prime(101));
        assert!(matches!(universal_envelope(&gp, 2), Err(Error::CharacteristicUnsupported(101, _))));
        assert!(matches!(ce_coalgebra(&gp), Err(Error::CharacteristicUnsupported(101, _))));
    }

    #[test]
    fn abelian_envelope_matches_sym() {
        let f = Field::Rational;
        let u = universal_envelope(&LiePresentation::abelian(2, f), 3).unwrap();
        let s = sym_algebra(f, 2, 3);
        assert_eq!(u.dim(), s.dim());
        for i in 0..u.dim() {
            assert_eq!(u.name(i), s.name(i));
            for j in 0..u.dim() {
                if let Some(p) = u.product_entry(i, j) {
                    assert_eq!(Some(p), s.product_entry(i, j));
                }
            }
        }
    }

    #[test]
    fn exterior_algebra_flipped_sign_witness() {
        let f = Field::Rational;
        let a = exterior_algebra(f, 3);
        assert!(validate_algebra(&a).passed());
        let (x1, x2) = (a.space().index_of("v1*").unwrap(), a.space().index_of("v2*").unwrap());
        let p = a.product_entry(x2, x1).unwrap().scale(&f.from_i64(-1));
        let bad = a.with_product(x2, x1, Some(p));
        let r = validate_algebra(&bad);
        let c = r.check(ASSOCIATIVITY).unwrap();
        assert!(!c.passed);
        assert_eq!(c.witness, vec!["v2*", "v1*", "v3*"]);
    }
}
