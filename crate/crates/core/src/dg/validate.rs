use std::collections::BTreeMap;

use serde::Serialize;

use super::structure::{DgAlgebra, DgCoalgebra};
use crate::linalg::{Accum, Scalar, SparseVec};
use crate::sign;

/// Outcome of one axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    /// Basis elements exhibiting the failure.
    pub witness: Vec<String>,
    pub detail: String,
}

impl AxiomCheck {
    fn pass(axiom: &str, detail: impl Into<String>) -> AxiomCheck {
        AxiomCheck { axiom: axiom.into(), passed: true, witness: vec![], detail: detail.into() }
    }

    fn fail(axiom: &str, witness: Vec<String>, detail: impl Into<String>) -> AxiomCheck {
        AxiomCheck { axiom: axiom.into(), passed: false, witness, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub kind: String,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub const DIFFERENTIAL_DEGREE: &str = "differential has degree +1";
pub const PRODUCT_DEGREE: &str = "multiplication has degree 0";
pub const UNIT: &str = "unit";
pub const ASSOCIATIVITY: &str = "associativity";
pub const SQUARE_ZERO: &str = "d² = 0";
pub const LEIBNIZ: &str = "Leibniz rule";
pub const AUGMENTATION: &str = "augmentation is a dg algebra map";
pub const COPRODUCT_DEGREE: &str = "comultiplication has degree 0";
pub const COUNIT: &str = "counit";
pub const COASSOCIATIVITY: &str = "coassociativity";
pub const CO_LEIBNIZ: &str = "co-Leibniz rule";
pub const COAUGMENTATION: &str = "coaugmentation is a dg coalgebra map";
pub const COCOMPLETE: &str = "cocomplete";

/// Checks every axiom of an augmented dg algebra on the materialized basis.
/// Products undefined because of a filtration bound are skipped.
pub fn validate_algebra(a: &DgAlgebra) -> ValidationReport {
    let n = a.dim();
    let field = a.field();
    let name = |i: usize| a.name(i).to_string();
    let mut checks = Vec::new();

    let bad_d = (0..n).find(|&i| a.d(i).iter().any(|(j, _)| a.degree(j) != a.degree(i) + 1));
    checks.push(match bad_d {
        None => AxiomCheck::pass(DIFFERENTIAL_DEGREE, ""),
        Some(i) => AxiomCheck::fail(DIFFERENTIAL_DEGREE, vec![name(i)], format!("d({}) has a term of the wrong degree", name(i))),
    });

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let bad_m = pairs.iter().find(|&&(i, j)| {
        a.product_entry(i, j).is_some_and(|p| p.iter().any(|(k, _)| a.degree(k) != a.degree(i) + a.degree(j)))
    });
    checks.push(match bad_m {
        None => AxiomCheck::pass(PRODUCT_DEGREE, ""),
        Some(&(i, j)) => AxiomCheck::fail(PRODUCT_DEGREE, vec![name(i), name(j)], "product term of the wrong degree"),
    });

    let u = a.unit();
    let bad_u = (0..n).find(|&i| {
        let e = SparseVec::unit(i, field);
        a.product_entry(u, i).is_some_and(|p| *p != e) || a.product_entry(i, u).is_some_and(|p| *p != e)
    });
    let unit_defined = (0..n).all(|i| a.product_entry(u, i).is_some() && a.product_entry(i, u).is_some());
    checks.push(match (bad_u, unit_defined) {
        (None, true) => AxiomCheck::pass(UNIT, format!("unit {}", name(u))),
        (None, false) => AxiomCheck::fail(UNIT, vec![name(u)], "products with the unit must always be defined"),
        (Some(i), _) => AxiomCheck::fail(UNIT, vec![name(i)], "1·a = a = a·1 fails"),
    });

    let mut assoc_witness = None;
    'outer: for i in 0..n {
        for j in 0..n {
            let Some(ij) = a.product_entry(i, j) else { continue };
            for k in 0..n {
                let Some(jk) = a.product_entry(j, k) else { continue };
                let (Ok(left), Ok(right)) = (a.mul_vec(ij, &SparseVec::unit(k, field)), a.mul_vec(&SparseVec::unit(i, field), jk))
                else {
                    continue;
                };
                if left != right {
                    assoc_witness = Some(vec![name(i), name(j), name(k)]);
                    break 'outer;
                }
            }
        }
    }
    checks.push(match assoc_witness {
        None => AxiomCheck::pass(ASSOCIATIVITY, ""),
        Some(w) => AxiomCheck::fail(ASSOCIATIVITY, w, "(ab)c ≠ a(bc)"),
    });

    let bad_dd = (0..n).find(|&i| !a.d_vec(a.d(i)).is_zero());
    checks.push(match bad_dd {
        None => AxiomCheck::pass(SQUARE_ZERO, ""),
        Some(i) => AxiomCheck::fail(SQUARE_ZERO, vec![name(i)], "d(d(a)) ≠ 0"),
    });

    let one = field.one();
    let bad_leibniz = pairs.iter().find(|&&(i, j)| {
        let Some(ij) = a.product_entry(i, j) else { return false };
        let lhs = a.d_vec(ij);
        let ei = SparseVec::unit(i, field);
        let ej = SparseVec::unit(j, field);
        let (Ok(t1), Ok(t2)) = (a.mul_vec(a.d(i), &ej), a.mul_vec(&ei, a.d(j))) else { return false };
        let rhs = t1.add_scaled(&field.sign(sign::odd(a.degree(i))), &t2);
        !lhs.add_scaled(&(-&one), &rhs).is_zero()
    });
    checks.push(match bad_leibniz {
        None => AxiomCheck::pass(LEIBNIZ, ""),
        Some(&(i, j)) => AxiomCheck::fail(LEIBNIZ, vec![name(i), name(j)], "d(ab) ≠ (da)b + (-1)^|a| a(db)"),
    });

    let eps = |v: &SparseVec| a.augment(v);
    let standard = (0..n).all(|i| eps(&SparseVec::unit(i, field)) == if i == u { field.one() } else { field.zero() });
    let bad_aug = if !standard {
        Some((vec![name(u)], "augmentation must be the coordinate of the unit".to_string()))
    } else if let Some(i) = (0..n).find(|&i| !eps(a.d(i)).is_zero()) {
        Some((vec![name(i)], "ε∘d ≠ 0".to_string()))
    } else {
        pairs
            .iter()
            .find(|&&(i, j)| {
                a.product_entry(i, j).is_some_and(|p| {
                    eps(p) != &eps(&SparseVec::unit(i, field)) * &eps(&SparseVec::unit(j, field))
                })
            })
            .map(|&(i, j)| (vec![name(i), name(j)], "ε(ab) ≠ ε(a)ε(b)".to_string()))
    };
    checks.push(match bad_aug {
        None => AxiomCheck::pass(AUGMENTATION, ""),
        Some((w, why)) => AxiomCheck::fail(AUGMENTATION, w, why),
    });

    ValidationReport { kind: "algebra".into(), checks }
}

type Triple = BTreeMap<(usize, usize, usize), Scalar>;

fn add_to<K: Ord + Clone>(map: &mut BTreeMap<K, Scalar>, k: K, v: Scalar) {
    if v.is_zero() {
        return;
    }
    let entry = map.remove(&k);
    let s = match entry {
        Some(x) => &x + &v,
        None => v,
    };
    if !s.is_zero() {
        map.insert(k, s);
    }
}

/// Checks every axiom of a coaugmented dg coalgebra, including conilpotence.
pub fn validate_coalgebra(c: &DgCoalgebra) -> ValidationReport {
    let n = c.dim();
    let field = c.field();
    let name = |i: usize| c.name(i).to_string();
    let mut checks = Vec::new();

    let bad_d = (0..n).find(|&i| c.d(i).iter().any(|(j, _)| c.degree(j) != c.degree(i) + 1));
    checks.push(match bad_d {
        None => AxiomCheck::pass(DIFFERENTIAL_DEGREE, ""),
        Some(i) => AxiomCheck::fail(DIFFERENTIAL_DEGREE, vec![name(i)], format!("d({}) has a term of the wrong degree", name(i))),
    });

    let bad_deg = (0..n).find(|&i| c.coproduct(i).iter().any(|(a, b, _)| c.degree(*a) + c.degree(*b) != c.degree(i)));
    checks.push(match bad_deg {
        None => AxiomCheck::pass(COPRODUCT_DEGREE, ""),
        Some(i) => AxiomCheck::fail(COPRODUCT_DEGREE, vec![name(i)], "coproduct term of the wrong degree"),
    });

    let bad_counit = (0..n).find(|&i| {
        let mut left = Accum::new();
        let mut right = Accum::new();
        for (a, b, x) in c.coproduct(i) {
            left.add(*b, &(&c.counit_of(*a) * x));
            right.add(*a, &(&c.counit_of(*b) * x));
        }
        let e = SparseVec::unit(i, field);
        left.finish() != e || right.finish() != e
    });
    checks.push(match bad_counit {
        None => AxiomCheck::pass(COUNIT, ""),
        Some(i) => AxiomCheck::fail(COUNIT, vec![name(i)], "(ε⊗1)Δ = 1 = (1⊗ε)Δ fails"),
    });

    let bad_coassoc = (0..n).find(|&i| {
        let mut left: Triple = BTreeMap::new();
        let mut right: Triple = BTreeMap::new();
        for (a, b, x) in c.coproduct(i) {
            for (p, q, y) in c.coproduct(*a) {
                add_to(&mut left, (*p, *q, *b), x * y);
            }
            for (p, q, y) in c.coproduct(*b) {
                add_to(&mut right, (*a, *p, *q), x * y);
            }
        }
        left != right
    });
    checks.push(match bad_coassoc {
        None => AxiomCheck::pass(COASSOCIATIVITY, ""),
        Some(i) => AxiomCheck::fail(COASSOCIATIVITY, vec![name(i)], "(Δ⊗1)Δ ≠ (1⊗Δ)Δ"),
    });

    let d_vec = |v: &SparseVec| {
        let mut acc = Accum::new();
        for (i, x) in v.iter() {
            acc.add_vec(x, c.d(i));
        }
        acc.finish()
    };
    let bad_dd = (0..n).find(|&i| !d_vec(c.d(i)).is_zero());
    checks.push(match bad_dd {
        None => AxiomCheck::pass(SQUARE_ZERO, ""),
        Some(i) => AxiomCheck::fail(SQUARE_ZERO, vec![name(i)], "d(d(c)) ≠ 0"),
    });

    let bad_coleibniz = (0..n).find(|&i| {
        let mut lhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (j, x) in c.d(i).iter() {
            for (a, b, y) in c.coproduct(j) {
                add_to(&mut lhs, (*a, *b), x * y);
            }
        }
        let mut rhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (a, b, x) in c.coproduct(i) {
            for (p, y) in c.d(*a).iter() {
                add_to(&mut rhs, (p, *b), x * y);
            }
            let s = field.sign(sign::odd(c.degree(*a)));
            for (q, y) in c.d(*b).iter() {
                add_to(&mut rhs, (*a, q), &(x * y) * &s);
            }
        }
        lhs != rhs
    });
    checks.push(match bad_coleibniz {
        None => AxiomCheck::pass(CO_LEIBNIZ, ""),
        Some(i) => AxiomCheck::fail(CO_LEIBNIZ, vec![name(i)], "Δd ≠ (d⊗1 + 1⊗d)Δ"),
    });

    let one = c.coaugmentation();
    let standard = (0..n).all(|i| c.counit_of(i) == if i == one { field.one() } else { field.zero() });
    let grouplike = c.coproduct(one) == [(one, one, field.one())];
    let coaug = if !grouplike {
        AxiomCheck::fail(COAUGMENTATION, vec![name(one)], "Δ(1) ≠ 1⊗1")
    } else if !c.d(one).is_zero() {
        AxiomCheck::fail(COAUGMENTATION, vec![name(one)], "d(1) ≠ 0")
    } else if !standard {
        AxiomCheck::fail(COAUGMENTATION, vec![name(one)], "counit must be the coordinate of 1")
    } else {
        AxiomCheck::pass(COAUGMENTATION, format!("1 = {}", name(one)))
    };
    checks.push(coaug);

    checks.push(match nilpotence_index(c) {
        Ok(k) => AxiomCheck::pass(COCOMPLETE, format!("Δ̄^({k}) = 0")),
        Err(i) => AxiomCheck::fail(COCOMPLETE, vec![name(i)], "iterated reduced coproducts do not vanish"),
    });

    ValidationReport { kind: "coalgebra".into(), checks }
}

/// Smallest `k` with `Δ̄^(k) = 0` on `C̄`, where `Δ̄^(1) = id` and `Δ̄^(2) = Δ̄`.
/// On failure returns a basis element whose iterates survive past `dim + 1`.
pub fn nilpotence_index(c: &DgCoalgebra) -> std::result::Result<usize, usize> {
    let reduced: Vec<Vec<(usize, usize, Scalar)>> = (0..c.dim()).map(|i| c.reduced_coproduct(i)).collect();
    let limit = c.dim() + 1;
    let mut worst = 1;
    for i in c.reduced_basis() {
        let mut words: BTreeMap<Vec<usize>, Scalar> = BTreeMap::from([(vec![i], c.field().one())]);
        let mut k = 1;
        while !words.is_empty() {
            if k > limit {
                return Err(i);
            }
            let mut next = BTreeMap::new();
            for (w, x) in &words {
                for (a, b, y) in &reduced[w[0]] {
                    let mut nw = Vec::with_capacity(w.len() + 1);
                    nw.push(*a);
                    nw.push(*b);
                    nw.extend_from_slice(&w[1..]);
                    add_to(&mut next, nw, x * y);
                }
            }
            words = next;
            k += 1;
        }
        worst = worst.max(k);
    }
    Ok(worst)
}
