use std::sync::Arc;

use super::structure::{CoTerm, DgAlgebra, DgCoalgebra, Truncation};
use crate::error::{Error, Result};
use crate::graded::{tensor_name, BasisElem, GradedSpace};
use crate::linalg::{Accum, Field, SparseVec};
use crate::sign;

/// `"a*"` for `"a"`, and back.
pub fn dual_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

fn dual_space(space: &GradedSpace) -> Arc<GradedSpace> {
    let elems = space
        .elems()
        .iter()
        .map(|e| BasisElem::new(dual_name(&e.name), -e.bidegree.degree, e.bidegree.weight.map(|w| -w)))
        .collect();
    Arc::new(GradedSpace::new(elems).expect("dual names stay unique"))
}

/// The linear dual algebra. With the pairing `<f⊗g, x⊗y> = (-1)^{|g||x|} f(x)g(y)`,
/// `e^j e^k = Σ_i Δ_i^{jk} (-1)^{|e_j||e_k|} e^i` and `d(f) = -(-1)^{|f|} f∘d`.
pub fn dualize(c: &DgCoalgebra) -> Result<DgAlgebra> {
    if c.truncation() != Truncation::Exact {
        return Err(Error::UnboundedWindow);
    }
    let field = c.field();
    let n = c.dim();
    let mut acc: Vec<Accum> = vec![Accum::new(); n * n];
    for i in 0..n {
        for (j, k, x) in c.coproduct(i) {
            let s = sign::odd_pair(c.degree(*j), c.degree(*k));
            acc[j * n + k].add(i, &x.clone().neg_if(s));
        }
    }
    let mult = acc.into_iter().map(|a| Some(a.finish())).collect();
    let mut d: Vec<Accum> = vec![Accum::new(); n];
    for j in 0..n {
        for (i, x) in c.d(j).iter() {
            // coefficient of e_i in d(e_j) feeds d(e^i)
            let neg = !sign::odd(c.degree(i));
            d[i].add(j, &x.clone().neg_if(neg));
        }
    }
    let d = d.into_iter().map(Accum::finish).collect();
    let unit = c.coaugmentation();
    DgAlgebra::new(field, dual_space(c.space()), unit, mult, d, SparseVec::unit(unit, field), Truncation::Exact)
}

/// The linear dual coalgebra of a finite-dimensional algebra; inverse to [`dualize`].
pub fn dualize_algebra(a: &DgAlgebra) -> Result<DgCoalgebra> {
    if a.truncation() != Truncation::Exact {
        return Err(Error::UnboundedWindow);
    }
    let field = a.field();
    let n = a.dim();
    let mut comult: Vec<Vec<CoTerm>> = vec![Vec::new(); n];
    for j in 0..n {
        for k in 0..n {
            for (i, x) in a.mul(j, k)?.iter() {
                let s = sign::odd_pair(a.degree(j), a.degree(k));
                comult[i].push((j, k, x.clone().neg_if(s)));
            }
        }
    }
    let mut d: Vec<Accum> = vec![Accum::new(); n];
    for i in 0..n {
        for (j, x) in a.d(i).iter() {
            // coefficient of a_j in d(a_i) feeds d(a^j)
            let neg = !sign::odd(a.degree(i));
            d[j].add(i, &x.clone().neg_if(neg));
        }
    }
    let d = d.into_iter().map(Accum::finish).collect();
    let one = a.unit();
    DgCoalgebra::new(field, dual_space(a.space()), one, comult, d, SparseVec::unit(one, field), Truncation::Exact)
}

/// `a ·op b = (-1)^{|a||b|} b a`.
pub fn opposite(a: &DgAlgebra) -> DgAlgebra {
    let n = a.dim();
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push(
                a.product_entry(j, i)
                    .map(|p| p.scale(&a.field().sign(sign::odd_pair(a.degree(i), a.degree(j))))),
            );
        }
    }
    a.with_products(table)
}

/// `Δ^op(c) = Σ (-1)^{|c1||c2|} c2 ⊗ c1`.
pub fn coopposite(c: &DgCoalgebra) -> DgCoalgebra {
    let table = (0..c.dim())
        .map(|i| {
            c.coproduct(i)
                .iter()
                .map(|(a, b, x)| (*b, *a, x.clone().neg_if(sign::odd_pair(c.degree(*a), c.degree(*b)))))
                .collect()
        })
        .collect();
    c.with_coproducts(table)
}

/// Basis of `X ⊗ Y` as index pairs, optionally cut at total weight `bound`.
fn tensor_basis(x: &GradedSpace, y: &GradedSpace, bound: Option<u32>) -> Result<(Vec<(usize, usize)>, Arc<GradedSpace>)> {
    if bound.is_some() {
        let neg = (0..x.dim()).any(|i| x.weight(i).is_none_or(|w| w < 0)) || (0..y.dim()).any(|i| y.weight(i).is_none_or(|w| w < 0));
        if neg {
            return Err(Error::Invalid("a weight bound on a tensor product needs nonnegative weights".into()));
        }
    }
    let mut pairs = Vec::new();
    let mut elems = Vec::new();
    for i in 0..x.dim() {
        for j in 0..y.dim() {
            let b = x.bidegree(i).add(y.bidegree(j));
            if let (Some(bd), Some(w)) = (bound, b.weight) {
                if w > bd as i32 {
                    continue;
                }
            }
            pairs.push((i, j));
            elems.push(BasisElem { name: tensor_name(x.name(i), y.name(j)), bidegree: b });
        }
    }
    Ok((pairs, Arc::new(GradedSpace::new(elems)?)))
}

fn pair_lookup(pairs: &[(usize, usize)], ny: usize) -> impl Fn(usize, usize) -> Option<usize> + '_ {
    let mut table = vec![usize::MAX; pairs.iter().map(|p| p.0 + 1).max().unwrap_or(0) * ny];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        table[i * ny + j] = k;
    }
    move |i, j| table.get(i * ny + j).copied().filter(|&k| k != usize::MAX)
}

/// `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'`, `d = d⊗1 + 1⊗d`.
/// With `bound`, the basis is cut at total weight and products leaving it vanish.
pub fn tensor_algebras(a: &DgAlgebra, b: &DgAlgebra, bound: Option<u32>) -> Result<DgAlgebra> {
    let field = a.field();
    let (pairs, space) = tensor_basis(a.space(), b.space(), bound)?;
    let look = pair_lookup(&pairs, b.dim());
    let trunc = a.truncation().combine(b.truncation(), bound);
    let m = pairs.len();
    let mut mult = Vec::with_capacity(m * m);
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            let (Some(ik), Some(jl)) = (a.product_entry(i, k), b.product_entry(j, l)) else {
                mult.push(None);
                continue;
            };
            let s = field.sign(sign::odd_pair(b.degree(j), a.degree(k)));
            let mut acc = Accum::new();
            let mut overflow = false;
            for (p, x) in ik.iter() {
                for (q, y) in jl.iter() {
                    match look(p, q) {
                        Some(t) => acc.add(t, &(&(x * y) * &s)),
                        None if trunc.is_filtered() => overflow = true,
                        None => {}
                    }
                }
            }
            mult.push(if overflow { None } else { Some(acc.finish()) });
        }
    }
    let mut d = Vec::with_capacity(m);
    for &(i, j) in &pairs {
        let mut acc = Accum::new();
        for (p, x) in a.d(i).iter() {
            if let Some(t) = look(p, j) {
                acc.add(t, x);
            }
        }
        let s = field.sign(sign::odd(a.degree(i)));
        for (q, y) in b.d(j).iter() {
            if let Some(t) = look(i, q) {
                acc.add(t, &(y * &s));
            }
        }
        d.push(acc.finish());
    }
    let unit = look(a.unit(), b.unit()).expect("unit survives any weight cut");
    DgAlgebra::new(field, space, unit, mult, d, SparseVec::unit(unit, field), trunc)
}

/// `Δ(c⊗d) = Σ (-1)^{|d1||c2|} (c1⊗d1) ⊗ (c2⊗d2)`, `d = d⊗1 + 1⊗d`; `bound` cuts a sub-coalgebra.
pub fn tensor_coalgebras(c: &DgCoalgebra, e: &DgCoalgebra, bound: Option<u32>) -> Result<DgCoalgebra> {
    let field = c.field();
    let (pairs, space) = tensor_basis(c.space(), e.space(), bound)?;
    let look = pair_lookup(&pairs, e.dim());
    let mut comult = Vec::with_capacity(pairs.len());
    let mut d = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let mut terms = Vec::new();
        for (c1, c2, x) in c.coproduct(i) {
            for (d1, d2, y) in e.coproduct(j) {
                let s = sign::odd_pair(e.degree(*d1), c.degree(*c2));
                let (Some(l), Some(r)) = (look(*c1, *d1), look(*c2, *d2)) else { continue };
                terms.push((l, r, (x * y).neg_if(s)));
            }
        }
        comult.push(terms);
        let mut acc = Accum::new();
        for (p, x) in c.d(i).iter() {
            if let Some(t) = look(p, j) {
                acc.add(t, x);
            }
        }
        let s = field.sign(sign::odd(c.degree(i)));
        for (q, y) in e.d(j).iter() {
            if let Some(t) = look(i, q) {
                acc.add(t, &(y * &s));
            }
        }
        d.push(acc.finish());
    }
    let one = look(c.coaugmentation(), e.coaugmentation()).expect("coaugmentation survives any weight cut");
    let trunc = c.truncation().combine(e.truncation(), bound);
    DgCoalgebra::new(field, space, one, comult, d, SparseVec::unit(one, field), trunc)
}

/// `A^e = A ⊗ A^op`.
pub fn enveloping(a: &DgAlgebra, bound: Option<u32>) -> Result<DgAlgebra> {
    tensor_algebras(a, &opposite(a), bound)
}

/// `C^e = C ⊗ C^op` with the co-opposite coproduct on the second factor.
pub fn coenveloping(c: &DgCoalgebra, bound: Option<u32>) -> Result<DgCoalgebra> {
    tensor_coalgebras(c, &coopposite(c), bound)
}

/// Field check shared by binary constructions.
pub fn same_field(a: Field, b: Field) -> Result<()> {
    if a != b {
        return Err(Error::Incompatible(format!("structures over {a} and {b}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::builders::*;
    use crate::dg::validate::{validate_algebra, validate_coalgebra};

    #[test]
    fn dual_of_exterior_has_positive_generators() {
        let a = exterior_algebra(Field::Rational, 2);
        assert!(validate_algebra(&a).passed());
        let x = a.space().index_of("v1*").unwrap();
        assert_eq!(a.degree(x), 1);
        assert_eq!(a.weight(x), Some(-1));
    }

    #[test]
    fn round_trip_of_ce() {
        let f = Field::Rational;
        let c = ce_coalgebra(&crate::dg::LiePresentation::sl2(f)).unwrap();
        let a = dualize(&c).unwrap();
        assert!(validate_algebra(&a).passed());
        let back = dualize_algebra(&a).unwrap();
        assert!(validate_coalgebra(&back).passed());
        for i in 0..c.dim() {
            assert_eq!(back.name(i), c.name(i));
            assert_eq!(back.coproduct(i), c.coproduct(i));
            assert_eq!(back.d(i), c.d(i));
        }
    }

    #[test]
    fn ground_dualizes_to_ground() {
        let k = dualize(&ground_coalgebra(Field::Rational)).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(validate_algebra(&k).passed());
    }

    #[test]
    fn opposite_of_commutative_is_itself() {
        let a = exterior_algebra(Field::Rational, 2);
        let o = opposite(&a);
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                assert_eq!(a.product_entry(i, j), o.product_entry(i, j));
            }
        }
    }

    #[test]
    fn enveloping_dims() {
        let f = Field::Rational;
        let e = enveloping(&exterior_algebra(f, 2), None).unwrap();
        assert!(validate_algebra(&e).passed());
        assert_eq!(e.space().poincare()[&2], 6);
        let k = enveloping(&ground_algebra(f), None).unwrap();
        assert_eq!(k.dim(), 1);
        let ce = coenveloping(&exterior_coalgebra(f, 2), None).unwrap();
        assert!(validate_coalgebra(&ce).passed());
        let s = enveloping(&sym_algebra(f, 1, 3), Some(3)).unwrap();
        assert!(validate_algebra(&s).passed());
        assert_eq!(s.dim(), 10);
    }
}
