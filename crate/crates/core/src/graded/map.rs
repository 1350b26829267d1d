use std::sync::Arc;

use super::bidegree::Bidegree;
use super::space::{tensor_space, GradedSpace};
use crate::error::{Error, Result};
use crate::linalg::{Accum, Field, Scalar, SparseMatrix, SparseVec};
use crate::sign;

/// A homogeneous linear map, stored as the image of each source basis vector.
///
/// `weight == None` means the map is not required to be weight-homogeneous
/// (filtered structures); degrees are always checked.
#[derive(Clone, Debug)]
pub struct GradedMap {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    degree: i32,
    weight: Option<i32>,
    field: Field,
    cols: Vec<SparseVec>,
}

impl GradedMap {
    pub fn new(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        degree: i32,
        weight: Option<i32>,
        field: Field,
        cols: Vec<SparseVec>,
    ) -> Result<GradedMap> {
        if cols.len() != source.dim() {
            return Err(Error::Incompatible(format!(
                "{} images for a source of dimension {}",
                cols.len(),
                source.dim()
            )));
        }
        for (i, col) in cols.iter().enumerate() {
            for (j, _) in col.iter() {
                if j >= target.dim() {
                    return Err(Error::Incompatible(format!("image index {j} outside target")));
                }
                let (s, t) = (source.bidegree(i), target.bidegree(j));
                if t.degree != s.degree + degree {
                    return Err(Error::Invalid(format!(
                        "{} -> {} is not of degree {degree}",
                        source.name(i),
                        target.name(j)
                    )));
                }
                if let (Some(sh), Some(ws), Some(wt)) = (weight, s.weight, t.weight) {
                    if wt != ws + sh {
                        return Err(Error::Invalid(format!(
                            "{} -> {} is not of weight {sh}",
                            source.name(i),
                            target.name(j)
                        )));
                    }
                }
            }
        }
        Ok(GradedMap { source, target, degree, weight, field, cols })
    }

    pub fn zero(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i32, weight: Option<i32>, field: Field) -> GradedMap {
        let cols = vec![SparseVec::new(); source.dim()];
        GradedMap { source, target, degree, weight, field, cols }
    }

    pub fn identity(space: Arc<GradedSpace>, field: Field) -> GradedMap {
        let cols = (0..space.dim()).map(|i| SparseVec::unit(i, field)).collect();
        GradedMap { source: space.clone(), target: space, degree: 0, weight: Some(0), field, cols }
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn weight(&self) -> Option<i32> {
        self.weight
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn column(&self, i: usize) -> &SparseVec {
        &self.cols[i]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accum::new();
        for (i, x) in v.iter() {
            acc.add_vec(x, &self.cols[i]);
        }
        acc.finish()
    }

    /// Full matrix, target × source.
    pub fn matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.target.dim(), self.field, &self.cols)
    }

    /// Block from the source cell `b` to the cell it maps into.
    pub fn block(&self, b: Bidegree) -> SparseMatrix {
        let by_weight = self.weight.is_some() && b.weight.is_some();
        let cell = |s: &GradedSpace, bd: Bidegree| -> Vec<usize> {
            (0..s.dim())
                .filter(|&i| if by_weight { s.bidegree(i) == bd } else { s.degree(i) == bd.degree })
                .collect()
        };
        let src = cell(&self.source, b);
        let tgt_b = Bidegree {
            degree: b.degree + self.degree,
            weight: b.weight.zip(self.weight).map(|(w, s)| w + s),
        };
        let tgt = cell(&self.target, tgt_b);
        self.matrix().select(&tgt, &src)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if other.target != self.source {
            return Err(Error::Incompatible("composition of maps with mismatched spaces".into()));
        }
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        Ok(GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            weight: self.weight.zip(other.weight).map(|(a, b)| a + b),
            field: self.field,
            cols,
        })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(Error::Incompatible("sum of maps with different shapes".into()));
        }
        let one = self.field.one();
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| a.add_scaled(&one, b)).collect();
        let weight = if self.weight == other.weight { self.weight } else { None };
        Ok(GradedMap { cols, weight, ..self.clone() })
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        GradedMap { cols: self.cols.iter().map(|v| v.scale(c)).collect(), ..self.clone() }
    }
}

/// `(f⊗g)(x⊗y) = (-1)^{|g||x|} f(x)⊗g(y)` on the lexicographic tensor bases.
pub fn tensor_map(f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
    if f.field != g.field {
        return Err(Error::Incompatible("maps over different fields".into()));
    }
    let source = Arc::new(tensor_space(&f.source, &g.source));
    let target = Arc::new(tensor_space(&f.target, &g.target));
    let (ns, nt) = (g.source.dim(), g.target.dim());
    let mut cols = Vec::with_capacity(source.dim());
    for x in 0..f.source.dim() {
        let neg = sign::odd_pair(g.degree, f.source.degree(x));
        for y in 0..ns {
            let mut acc = Accum::new();
            for (i, a) in f.cols[x].iter() {
                for (j, b) in g.cols[y].iter() {
                    acc.add(i * nt + j, &(a * b).neg_if(neg));
                }
            }
            cols.push(acc.finish());
        }
    }
    Ok(GradedMap {
        source,
        target,
        degree: f.degree + g.degree,
        weight: f.weight.zip(g.weight).map(|(a, b)| a + b),
        field: f.field,
        cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::space::BasisElem;

    fn line() -> Arc<GradedSpace> {
        Arc::new(
            GradedSpace::new(vec![
                BasisElem::new("a", 0, None),
                BasisElem::new("b", 1, None),
                BasisElem::new("c", 2, None),
            ])
            .unwrap(),
        )
    }

    fn shift(field: Field) -> GradedMap {
        let s = line();
        let cols = vec![SparseVec::unit(1, field), SparseVec::unit(2, field).scale(&field.from_i64(3)), SparseVec::new()];
        GradedMap::new(s.clone(), s, 1, None, field, cols).unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let f = Field::Rational;
        let id = GradedMap::identity(line(), f);
        let t = tensor_map(&id, &id).unwrap();
        assert_eq!(t.matrix(), SparseMatrix::identity(9, f));
    }

    #[test]
    fn leibniz_square_vanishes() {
        let f = Field::Rational;
        let d = shift(f);
        assert!(!d.compose(&d).unwrap().is_zero());
        // a differential: only a -> b
        let s = line();
        let cols = vec![SparseVec::unit(1, f), SparseVec::new(), SparseVec::new()];
        let d = GradedMap::new(s.clone(), s.clone(), 1, None, f, cols).unwrap();
        let id = GradedMap::identity(s, f);
        let total = tensor_map(&d, &id).unwrap().add(&tensor_map(&id, &d).unwrap()).unwrap();
        assert!(total.compose(&total).unwrap().is_zero());
    }

    #[test]
    fn degree_is_checked() {
        let s = line();
        let f = Field::Rational;
        let bad = GradedMap::new(s.clone(), s, 1, None, f, vec![SparseVec::unit(2, f), SparseVec::new(), SparseVec::new()]);
        assert!(bad.is_err());
    }
}
