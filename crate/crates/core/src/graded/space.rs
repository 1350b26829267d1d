use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use super::bidegree::{Bidegree, Window};
use crate::error::{Error, Result};

/// A named basis vector with its bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisElem {
    pub name: String,
    pub bidegree: Bidegree,
}

impl BasisElem {
    pub fn new(name: impl Into<String>, degree: i32, weight: Option<i32>) -> BasisElem {
        BasisElem { name: name.into(), bidegree: Bidegree { degree, weight } }
    }
}

/// A finite bigraded vector space with an ordered, named basis.
///
/// `window` records the region where the space is asserted to be complete:
/// outside it the represented object may be nonzero but was not materialized.
/// `None` means the basis is the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    elems: Vec<BasisElem>,
    index: HashMap<String, usize>,
    window: Option<Window>,
}

impl GradedSpace {
    pub fn new(elems: Vec<BasisElem>) -> Result<GradedSpace> {
        let mut index = HashMap::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            if index.insert(e.name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate basis name '{}'", e.name)));
            }
        }
        Ok(GradedSpace { elems, index, window: None })
    }

    /// The ground field as a graded space: one element "1" in bidegree (0,0).
    pub fn ground(weighted: bool) -> GradedSpace {
        GradedSpace::new(vec![BasisElem::new("1", 0, weighted.then_some(0))]).unwrap()
    }

    pub fn with_window(mut self, window: Option<Window>) -> GradedSpace {
        self.window = window;
        self
    }

    pub fn window(&self) -> Option<Window> {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[BasisElem] {
        &self.elems
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elems[i].name
    }

    pub fn bidegree(&self, i: usize) -> Bidegree {
        self.elems[i].bidegree
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.elems[i].bidegree.degree
    }

    pub fn weight(&self, i: usize) -> Option<i32> {
        self.elems[i].bidegree.weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// True when every basis element carries a weight.
    pub fn is_weighted(&self) -> bool {
        !self.elems.is_empty() && self.elems.iter().all(|e| e.bidegree.weight.is_some())
    }

    /// Basis indices grouped by bidegree (weights dropped when `by_weight` is false).
    pub fn cells(&self, by_weight: bool) -> BTreeMap<Bidegree, Vec<usize>> {
        let mut out: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
        for (i, e) in self.elems.iter().enumerate() {
            let b = if by_weight { e.bidegree } else { e.bidegree.forget_weight() };
            out.entry(b).or_default().push(i);
        }
        out
    }

    pub fn dim_at(&self, b: Bidegree) -> usize {
        self.elems.iter().filter(|e| e.bidegree == b).count()
    }

    /// Dimensions per degree.
    pub fn poincare(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for e in &self.elems {
            *out.entry(e.bidegree.degree).or_insert(0) += 1;
        }
        out
    }

    /// The subspace spanned by the selected basis indices, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> GradedSpace {
        GradedSpace::new(keep.iter().map(|&i| self.elems[i].clone()).collect())
            .unwrap()
            .with_window(self.window)
    }
}

/// Joins basis names into a tensor name.
pub fn tensor_name(a: &str, b: &str) -> String {
    format!("{a}⊗{b}")
}

/// Tensor product with basis ordered lexicographically by (left index, right index).
pub fn tensor_space(a: &GradedSpace, b: &GradedSpace) -> GradedSpace {
    tensor_space_filtered(a, b, |_| true)
}

/// Tensor product keeping only pairs whose combined bidegree passes `keep`.
pub fn tensor_space_filtered(a: &GradedSpace, b: &GradedSpace, keep: impl Fn(Bidegree) -> bool) -> GradedSpace {
    let mut elems = Vec::new();
    for x in a.elems() {
        for y in b.elems() {
            let bd = x.bidegree.add(y.bidegree);
            if keep(bd) {
                elems.push(BasisElem { name: tensor_name(&x.name, &y.name), bidegree: bd });
            }
        }
    }
    let window = match (a.window, b.window) {
        (None, None) => None,
        (Some(w), None) | (None, Some(w)) => Some(w),
        (Some(u), Some(v)) => Some(Window::new(
            (u.degrees.0 + v.degrees.0, u.degrees.1 + v.degrees.1),
            u.weights.zip(v.weights).map(|(p, q)| (p.0 + q.0, p.1 + q.1)),
        )),
    };
    GradedSpace::new(elems).expect("tensor names are unique").with_window(window)
}

/// Generator of basis names for one bidegree.
pub type CellGenerator = Arc<dyn Fn(Bidegree) -> Vec<String> + Send + Sync>;

/// A space given by a callback per bidegree, materialized on demand.
#[derive(Clone)]
pub struct LazySpace {
    generator: CellGenerator,
}

impl std::fmt::Debug for LazySpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("LazySpace")
    }
}

impl LazySpace {
    pub fn new(generator: CellGenerator) -> LazySpace {
        LazySpace { generator }
    }

    pub fn dim_at(&self, b: Bidegree) -> usize {
        (self.generator)(b).len()
    }

    pub fn materialize(&self, window: &Window) -> Result<GradedSpace> {
        let mut elems = Vec::new();
        for b in window.bidegrees() {
            for name in (self.generator)(b) {
                elems.push(BasisElem { name, bidegree: b });
            }
        }
        Ok(GradedSpace::new(elems)?.with_window(Some(*window)))
    }

    /// Tensor product of two lazy spaces over a window; both factors are
    /// materialized on the degree/weight ranges that can contribute.
    pub fn tensor_within(&self, other: &LazySpace, window: &Window, factor_window: &Window) -> Result<GradedSpace> {
        let a = self.materialize(factor_window)?;
        let b = other.materialize(factor_window)?;
        Ok(tensor_space_filtered(&a, &b, |bd| window.contains(bd)).with_window(Some(*window)))
    }
}

/// Materializes a possibly lazy space, refusing when no window is available.
pub fn materialize(space: &LazySpace, window: Option<&Window>) -> Result<GradedSpace> {
    match window {
        Some(w) => space.materialize(w),
        None => Err(Error::UnboundedWindow),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(n: usize) -> GradedSpace {
        let mut elems = vec![BasisElem::new("1", 0, Some(0))];
        for i in 1..=n {
            elems.push(BasisElem::new(format!("v{i}"), -1, Some(1)));
        }
        if n == 2 {
            elems.push(BasisElem::new("v1^v2", -2, Some(2)));
        }
        GradedSpace::new(elems).unwrap()
    }

    #[test]
    fn unit_tensor_renames() {
        let k = GradedSpace::ground(true);
        let s = ext(2);
        let t = tensor_space(&k, &s);
        assert_eq!(t.dim(), s.dim());
        assert_eq!(t.name(3), "1⊗v1^v2");
        assert_eq!(t.bidegree(3), s.bidegree(3));
    }

    #[test]
    fn exterior_line_squared() {
        let s = ext(1);
        let t = tensor_space(&s, &s);
        let names: Vec<_> = t.elems().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["1⊗1", "1⊗v1", "v1⊗1", "v1⊗v1"]);
        assert_eq!(t.bidegree(3), Bidegree::new(-2, 2));
    }

    #[test]
    fn exterior_plane_squared_degree_minus_two() {
        let s = ext(2);
        let t = tensor_space(&s, &s);
        assert_eq!(t.poincare()[&-2], 6);
    }

    #[test]
    fn duplicate_names_rejected() {
        let e = vec![BasisElem::new("a", 0, None), BasisElem::new("a", 1, None)];
        assert!(GradedSpace::new(e).is_err());
    }

    #[test]
    fn lazy_space_needs_window() {
        let lazy = LazySpace::new(Arc::new(|b: Bidegree| {
            if b.degree == 0 && b.weight.is_some_and(|w| w >= 0) {
                vec![format!("x^{}", b.weight.unwrap())]
            } else {
                vec![]
            }
        }));
        assert_eq!(lazy.dim_at(Bidegree::new(0, 7)), 1);
        assert!(matches!(materialize(&lazy, None), Err(Error::UnboundedWindow)));
        let w = Window::new((0, 0), Some((0, 3)));
        assert_eq!(materialize(&lazy, Some(&w)).unwrap().dim(), 4);
    }
}
