use std::sync::Arc;

use serde::Serialize;

use crate::dg::{DgAlgebra, DgCoalgebra};
use crate::error::{Error, Result};
use crate::graded::Bidegree;
use crate::linalg::{Accum, SparseVec};
use crate::sign;

/// A homogeneous linear map `C → A`, an element of the convolution algebra `Hom(C, A)`.
#[derive(Clone, Debug)]
pub struct ConvolutionElement {
    c: Arc<DgCoalgebra>,
    a: Arc<DgAlgebra>,
    degree: i32,
    values: Vec<SparseVec>,
}

impl ConvolutionElement {
    pub fn new(c: Arc<DgCoalgebra>, a: Arc<DgAlgebra>, degree: i32, values: Vec<SparseVec>) -> Result<ConvolutionElement> {
        if c.field() != a.field() {
            return Err(Error::Incompatible("coalgebra and algebra over different fields".into()));
        }
        if values.len() != c.dim() {
            return Err(Error::Incompatible("one value per coalgebra basis element is required".into()));
        }
        for (i, v) in values.iter().enumerate() {
            for (j, _) in v.iter() {
                if j >= a.dim() || a.degree(j) != c.degree(i) + degree {
                    return Err(Error::Invalid(format!(
                        "value on {} is not homogeneous of degree {degree}",
                        c.name(i)
                    )));
                }
            }
        }
        Ok(ConvolutionElement { c, a, degree, values })
    }

    pub fn zero(c: Arc<DgCoalgebra>, a: Arc<DgAlgebra>, degree: i32) -> ConvolutionElement {
        let values = vec![SparseVec::new(); c.dim()];
        ConvolutionElement { c, a, degree, values }
    }

    /// The unit `η_A ∘ ε_C`.
    pub fn unit(c: Arc<DgCoalgebra>, a: Arc<DgAlgebra>) -> ConvolutionElement {
        let field = a.field();
        let values = (0..c.dim())
            .map(|i| SparseVec::unit(a.unit(), field).scale(&c.counit_of(i)))
            .collect();
        ConvolutionElement { c, a, degree: 0, values }
    }

    pub fn coalgebra(&self) -> &Arc<DgCoalgebra> {
        &self.c
    }

    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        &self.a
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn value(&self, i: usize) -> &SparseVec {
        &self.values[i]
    }

    pub fn values(&self) -> &[SparseVec] {
        &self.values
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accum::new();
        for (i, x) in v.iter() {
            acc.add_vec(x, &self.values[i]);
        }
        acc.finish()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(SparseVec::is_zero)
    }

    fn same_pair(&self, other: &ConvolutionElement) -> Result<()> {
        if !Arc::ptr_eq(&self.c, &other.c) || !Arc::ptr_eq(&self.a, &other.a) {
            return Err(Error::Incompatible("convolution elements over different pairs".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ConvolutionElement) -> Result<ConvolutionElement> {
        self.same_pair(other)?;
        if self.degree != other.degree {
            return Err(Error::Incompatible("sum of convolution elements of different degrees".into()));
        }
        let one = self.a.field().one();
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x.add_scaled(&one, y)).collect();
        Ok(ConvolutionElement { values, ..self.clone() })
    }

    /// Largest residual-free check: true when the two elements agree.
    pub fn same_as(&self, other: &ConvolutionElement) -> bool {
        self.degree == other.degree && self.values == other.values
    }
}

/// `d(f) = d∘f − (−1)^n f∘d`.
pub fn convolution_differential(f: &ConvolutionElement) -> ConvolutionElement {
    let (c, a) = (&f.c, &f.a);
    let s = a.field().sign(!sign::odd(f.degree));
    let values = (0..c.dim())
        .map(|i| {
            let lhs = a.d_vec(&f.values[i]);
            lhs.add_scaled(&s, &f.apply(c.d(i)))
        })
        .collect();
    ConvolutionElement { values, degree: f.degree + 1, ..f.clone() }
}

/// `(f∗g)(c) = Σ (−1)^{|g||c1|} f(c1) g(c2)`.
pub fn convolution_product(f: &ConvolutionElement, g: &ConvolutionElement) -> Result<ConvolutionElement> {
    f.same_pair(g)?;
    let (c, a) = (&f.c, &f.a);
    let mut values = Vec::with_capacity(c.dim());
    for i in 0..c.dim() {
        let mut acc = Accum::new();
        for (c1, c2, x) in c.coproduct(i) {
            let (fx, gy) = (&f.values[*c1], &g.values[*c2]);
            if fx.is_zero() || gy.is_zero() {
                continue;
            }
            let p = a.mul_vec(fx, gy)?;
            acc.add_vec(&x.clone().neg_if(sign::odd_pair(g.degree, c.degree(*c1))), &p);
        }
        values.push(acc.finish());
    }
    Ok(ConvolutionElement { values, degree: f.degree + g.degree, ..f.clone() })
}

/// One nonzero residual of a twisting-cochain condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub input: String,
    pub bidegree: Bidegree,
    pub value: String,
}

/// Residuals of `ε∘τ = 0`, `τ∘η = 0` and `d(τ) + τ∗τ = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub degree_ok: bool,
    pub counit: Vec<Residual>,
    pub unit: Vec<Residual>,
    pub maurer_cartan: Vec<Residual>,
}

impl DefectReport {
    pub fn is_valid(&self) -> bool {
        self.degree_ok && self.counit.is_empty() && self.unit.is_empty() && self.maurer_cartan.is_empty()
    }
}

pub fn render(a: &DgAlgebra, v: &SparseVec) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter().map(|(i, x)| format!("{x}·{}", a.name(i))).collect::<Vec<_>>().join(" + ")
}

/// Computes every residual of the twisting-cochain conditions.
/// Errors only when a needed product lies beyond a filtration bound.
pub fn is_twisting_cochain(tau: &ConvolutionElement) -> Result<DefectReport> {
    let (c, a) = (&tau.c, &tau.a);
    let residual = |i: usize, v: &SparseVec| Residual {
        input: c.name(i).to_string(),
        bidegree: c.space().bidegree(i),
        value: render(a, v),
    };
    let counit = (0..c.dim())
        .filter_map(|i| {
            let e = a.augment(&tau.values[i]);
            (!e.is_zero()).then(|| residual(i, &SparseVec::unit(a.unit(), a.field()).scale(&e)))
        })
        .collect();
    let one = c.coaugmentation();
    let unit = if tau.values[one].is_zero() { vec![] } else { vec![residual(one, &tau.values[one])] };
    let dt = convolution_differential(tau);
    let tt = convolution_product(tau, tau)?;
    let sum = dt.add(&tt)?;
    let maurer_cartan = (0..c.dim()).filter(|&i| !sum.values[i].is_zero()).map(|i| residual(i, &sum.values[i])).collect();
    Ok(DefectReport { degree_ok: tau.degree == 1, counit, unit, maurer_cartan })
}

/// A convolution element of degree one that passed [`is_twisting_cochain`].
#[derive(Clone, Debug)]
pub struct TwistingCochain {
    tau: ConvolutionElement,
    report: DefectReport,
}

impl TwistingCochain {
    pub fn new(tau: ConvolutionElement) -> Result<TwistingCochain> {
        let report = is_twisting_cochain(&tau)?;
        if !report.is_valid() {
            let first = report
                .maurer_cartan
                .first()
                .or(report.counit.first())
                .or(report.unit.first())
                .map(|r| format!("{} ↦ {}", r.input, r.value))
                .unwrap_or_else(|| format!("degree {}", tau.degree));
            return Err(Error::NotATwistingCochain(first));
        }
        Ok(TwistingCochain { tau, report })
    }

    pub fn element(&self) -> &ConvolutionElement {
        &self.tau
    }

    pub fn report(&self) -> &DefectReport {
        &self.report
    }

    pub fn coalgebra(&self) -> &Arc<DgCoalgebra> {
        &self.tau.c
    }

    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        &self.tau.a
    }

    pub fn value(&self, i: usize) -> &SparseVec {
        &self.tau.values[i]
    }

    pub fn is_zero(&self) -> bool {
        self.tau.is_zero()
    }
}

/// Sends the weight-one basis elements of `C` to those of `A`, in basis order, and everything else to zero.
/// This is the projection onto cogenerators followed by the inclusion of generators.
pub fn projection_inclusion(c: Arc<DgCoalgebra>, a: Arc<DgAlgebra>) -> Result<ConvolutionElement> {
    let gens_c: Vec<usize> = (0..c.dim()).filter(|&i| c.weight(i) == Some(1)).collect();
    let gens_a: Vec<usize> = (0..a.dim()).filter(|&i| a.weight(i) == Some(1)).collect();
    if gens_c.len() != gens_a.len() {
        return Err(Error::Incompatible(format!(
            "{} cogenerators against {} generators",
            gens_c.len(),
            gens_a.len()
        )));
    }
    let field = a.field();
    let mut values = vec![SparseVec::new(); c.dim()];
    for (i, j) in gens_c.into_iter().zip(gens_a) {
        values[i] = SparseVec::unit(j, field);
    }
    ConvolutionElement::new(c, a, 1, values)
}
