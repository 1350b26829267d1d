//! Cup products and brackets on cohomology, and the two-sided duality comparison.

use serde::Serialize;

use super::cochain::{bracket, cup, BraceStructure, Side};
use super::complex::HochschildComplex;
use super::oracle::{center_filtration_dims, polyvector_basis, schouten, wedge, PolyElem, Polyvector};
use crate::barcobar::TwistingCochain;
use crate::dg::{Family, LiePresentation};
use crate::error::{Error, Result};
use crate::graded::{Bidegree, Certification, Window};
use crate::linalg::{rank, Field, Scalar, SparseMatrix, SparseVec};
use crate::par;
use crate::twist::{acyclicity_check, AcyclicityReport};
use crate::CONVENTIONS_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    Cup,
    Bracket,
}

impl Operation {
    pub fn target(self, l: Bidegree, r: Bidegree) -> Bidegree {
        let b = l.add(r);
        match self {
            Operation::Cup => b,
            Operation::Bracket => b.shift(-1, Some(0)),
        }
    }
}

/// Products of basis classes of two cells, re-expressed in the basis of the target cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureConstants {
    pub operation: Operation,
    pub left: Bidegree,
    pub right: Bidegree,
    pub target: Bidegree,
    /// `entries[i][j]` holds the coordinates of `e_i ∘ e_j`.
    pub entries: Vec<Vec<Vec<String>>>,
    /// Ranks of the three flattenings; invariant under base change in each cell.
    pub ranks: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyBasis {
    pub bidegree: Bidegree,
    pub dim: usize,
    pub basis: Vec<String>,
}

/// A bracket-induced bilinear form `HH^l ⊗ HH^r → HH^t` with one-dimensional target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub left: Bidegree,
    pub right: Bidegree,
    pub target: Bidegree,
    pub matrix: Vec<Vec<String>>,
    pub rank: usize,
    pub perfect: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GerstenhaberReport {
    pub source: String,
    pub window: Window,
    pub certification: Certification,
    pub cohomology: Vec<CohomologyBasis>,
    pub cup: Vec<StructureConstants>,
    pub bracket: Vec<StructureConstants>,
    pub pairings: Vec<Pairing>,
}

impl GerstenhaberReport {
    pub fn dim(&self, b: Bidegree) -> usize {
        self.cohomology.iter().find(|c| c.bidegree == b).map_or(0, |c| c.dim)
    }

    fn constants(&self, op: Operation) -> &[StructureConstants] {
        match op {
            Operation::Cup => &self.cup,
            Operation::Bracket => &self.bracket,
        }
    }
}

/// A source of cohomology cells with products computed in class coordinates.
trait Model: Sync {
    fn field(&self) -> Field;
    fn basis(&self, b: Bidegree) -> Result<Vec<String>>;
    fn product(&self, op: Operation, l: Bidegree, i: usize, r: Bidegree, j: usize) -> Result<Vec<Scalar>>;
}

impl Model for HochschildComplex {
    fn field(&self) -> Field {
        self.structure.field
    }

    fn basis(&self, b: Bidegree) -> Result<Vec<String>> {
        let cell = self.cell(b)?;
        Ok(cell.representatives.iter().map(|z| self.structure.render(z)).collect())
    }

    fn product(&self, op: Operation, l: Bidegree, i: usize, r: Bidegree, j: usize) -> Result<Vec<Scalar>> {
        let s = &self.structure;
        let (f, g) = (&self.cell(l)?.representatives[i], &self.cell(r)?.representatives[j]);
        let z = match op {
            Operation::Cup => cup(s, f, g)?,
            Operation::Bracket => bracket(s, f, g)?,
        };
        let target = self.cell(op.target(l, r))?;
        target.class_of(&z).ok_or_else(|| {
            Error::NotAComplex(format!("{op:?} of classes in {l:?} and {r:?} is not a cocycle: {}", s.render(&z)))
        })
    }
}

/// Polyvector fields in `n` variables with the monomial basis in each cell.
struct Polyvectors {
    n: usize,
    field: Field,
}

impl Polyvectors {
    fn element(&self, b: Bidegree, i: usize) -> PolyElem {
        PolyElem::monomial(polyvector_basis(self.n, b)[i].clone(), self.field.one())
    }
}

impl Model for Polyvectors {
    fn field(&self) -> Field {
        self.field
    }

    fn basis(&self, b: Bidegree) -> Result<Vec<String>> {
        Ok(polyvector_basis(self.n, b).iter().map(Polyvector::name).collect())
    }

    fn product(&self, op: Operation, l: Bidegree, i: usize, r: Bidegree, j: usize) -> Result<Vec<Scalar>> {
        let (p, q) = (self.element(l, i), self.element(r, j));
        let z = match op {
            Operation::Cup => wedge(&p, &q),
            Operation::Bracket => schouten(self.field, self.n, &p, &q),
        };
        let basis = polyvector_basis(self.n, op.target(l, r));
        let mut out = vec![self.field.zero(); basis.len()];
        for (m, c) in &z.terms {
            let k = basis.binary_search(m).map_err(|_| Error::Invalid(format!("{} outside its cell", m.name())))?;
            out[k] = c.clone();
        }
        Ok(out)
    }
}

fn flattening_rank(field: Field, rows: impl Iterator<Item = Vec<Scalar>>, ncols: usize) -> usize {
    let rows: Vec<SparseVec> =
        rows.map(|r| SparseVec::from_pairs(r.into_iter().enumerate().filter(|(_, x)| !x.is_zero()))).collect();
    rank(&SparseMatrix::from_rows(ncols, field, rows))
}

/// Ranks of `L⊗R → T`, `L → Hom(R,T)` and `R → Hom(L,T)` for `t[i][j][k]`.
fn ranks(field: Field, t: &[Vec<Vec<Scalar>>], r: usize, n: usize) -> [usize; 3] {
    let l = t.len();
    let whole = flattening_rank(field, t.iter().flat_map(|row| row.iter().cloned()), n);
    let left = flattening_rank(field, t.iter().map(|row| row.iter().flatten().cloned().collect()), r * n);
    let right = flattening_rank(field, (0..r).map(|j| (0..l).flat_map(|i| t[i][j].iter().cloned()).collect()), l * n);
    [whole, left, right]
}

fn render(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::render).collect()
}

fn structure_constants(m: &dyn Model, op: Operation, l: (Bidegree, usize), r: (Bidegree, usize), n: usize) -> Result<StructureConstants> {
    let mut t = Vec::with_capacity(l.1);
    for i in 0..l.1 {
        let mut row = Vec::with_capacity(r.1);
        for j in 0..r.1 {
            row.push(m.product(op, l.0, i, r.0, j)?);
        }
        t.push(row);
    }
    Ok(StructureConstants {
        operation: op,
        left: l.0,
        right: r.0,
        target: op.target(l.0, r.0),
        ranks: ranks(m.field(), &t, r.1, n),
        entries: t.iter().map(|row| row.iter().map(|v| render(v)).collect()).collect(),
    })
}

fn report(m: &dyn Model, source: &str, window: &Window, certification: Certification) -> Result<GerstenhaberReport> {
    if window.weights.is_none() {
        return Err(Error::WindowNotCertified("a weight range is required".into()));
    }
    let cells = window.bidegrees();
    let bases = par::map(&cells, |&b| m.basis(b));
    let mut cohomology = Vec::new();
    for (b, basis) in cells.iter().zip(bases) {
        let basis = basis?;
        cohomology.push(CohomologyBasis { bidegree: *b, dim: basis.len(), basis });
    }
    let dim = |b: Bidegree| cohomology.iter().find(|c| c.bidegree == b).map_or(0, |c| c.dim);
    let mut jobs = Vec::new();
    for op in [Operation::Cup, Operation::Bracket] {
        for l in cohomology.iter().filter(|c| c.dim > 0) {
            for r in cohomology.iter().filter(|c| c.dim > 0) {
                let t = op.target(l.bidegree, r.bidegree);
                if window.contains(t) {
                    jobs.push((op, (l.bidegree, l.dim), (r.bidegree, r.dim), dim(t)));
                }
            }
        }
    }
    let results = par::map(&jobs, |&(op, l, r, n)| structure_constants(m, op, l, r, n));
    let (mut cup, mut bracket) = (Vec::new(), Vec::new());
    for res in results {
        let sc = res?;
        match sc.operation {
            Operation::Cup => cup.push(sc),
            Operation::Bracket => bracket.push(sc),
        }
    }
    let origin = Bidegree::new(0, 0);
    let pairings = bracket
        .iter()
        .filter(|sc| sc.target == origin && sc.left.degree == 1 && dim(origin) == 1)
        .map(|sc| {
            let matrix: Vec<Vec<String>> = sc.entries.iter().map(|row| row.iter().map(|v| v[0].clone()).collect()).collect();
            let square = dim(sc.left) == dim(sc.right);
            Pairing {
                left: sc.left,
                right: sc.right,
                target: sc.target,
                rank: sc.ranks[0].max(sc.ranks[1]),
                perfect: square && sc.ranks[1] == dim(sc.left),
                matrix,
            }
        })
        .collect();
    Ok(GerstenhaberReport { source: source.into(), window: *window, certification, cohomology, cup, bracket, pairings })
}

/// Cohomology bases, cup and bracket structure constants and the pairings of a brace complex.
pub fn gerstenhaber_report(hc: &HochschildComplex, window: &Window) -> Result<GerstenhaberReport> {
    let source = match hc.structure.side {
        Side::Algebra => "algebra side",
        Side::Coalgebra => "coalgebra side",
    };
    report(hc, source, window, Certification::Exact)
}

/// The same data for polyvector fields in `n` variables.
pub fn polyvector_report(n: usize, field: Field, window: &Window) -> Result<GerstenhaberReport> {
    report(&Polyvectors { n, field }, "polyvector oracle", window, Certification::Exact)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellComparison {
    pub bidegree: Bidegree,
    pub algebra: usize,
    pub coalgebra: usize,
    pub certification: Certification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankComparison {
    pub operation: Operation,
    pub left: Bidegree,
    pub right: Bidegree,
    pub algebra: [usize; 3],
    pub coalgebra: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    Mismatch { witness: Bidegree, reason: String },
    PreconditionFailed { reason: String, witness: Option<Bidegree> },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Mismatch { .. } => "MISMATCH",
            Verdict::PreconditionFailed { .. } => "PRECONDITION FAILED",
            Verdict::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub conventions: String,
    pub algebra: String,
    pub coalgebra: String,
    pub window: Window,
    pub mode: String,
    pub acyclicity: Option<AcyclicityReport>,
    pub cells: Vec<CellComparison>,
    pub cup: Vec<RankComparison>,
    pub bracket: Vec<RankComparison>,
    pub algebra_side: Option<GerstenhaberReport>,
    pub coalgebra_side: Option<GerstenhaberReport>,
    pub verdict: Verdict,
}

fn describe(family: Option<&Family>) -> String {
    family.map_or_else(|| "custom".to_string(), |f| f.to_string())
}

/// Compares Hochschild cohomology of `A` and `C` on a window, given an acyclic `τ: C → A`.
///
/// Weight-graded pairs are compared cell by cell, together with the base-change invariant
/// ranks of the cup and bracket structure constants; filtered pairs compare `HH⁰` by filtration.
pub fn duality_report(tau: &TwistingCochain, window: &Window) -> Result<DualityReport> {
    let (a, c) = (tau.algebra(), tau.coalgebra());
    let mut out = DualityReport {
        conventions: CONVENTIONS_VERSION.into(),
        algebra: describe(a.family()),
        coalgebra: describe(c.family()),
        window: *window,
        mode: String::new(),
        acyclicity: None,
        cells: Vec::new(),
        cup: Vec::new(),
        bracket: Vec::new(),
        algebra_side: None,
        coalgebra_side: None,
        verdict: Verdict::Consistent,
    };
    let (wlo, whi) = window.weights.ok_or_else(|| Error::WindowNotCertified("a weight range is required".into()))?;
    let bound = whi.max(0) as u32;
    match acyclicity_check(tau, Some(bound)) {
        Ok(r) => {
            let failed = !r.acyclic;
            let witness = r.witness();
            out.acyclicity = Some(r);
            if failed {
                out.verdict = Verdict::PreconditionFailed { reason: "τ is not acyclic on the window".into(), witness };
                return Ok(out);
            }
        }
        Err(Error::WindowNotCertified(why)) => {
            out.verdict = Verdict::Inconclusive { reason: format!("acyclicity not certified: {why}") };
            return Ok(out);
        }
        Err(e) => return Err(e),
    }
    let cs = BraceStructure::from_coalgebra(c)?;
    if cs.weight_graded {
        out.mode = "graded".into();
        graded(&mut out, a, cs, window)?;
    } else {
        out.mode = "filtered".into();
        filtered(&mut out, a, cs, (wlo.max(0), whi))?;
    }
    Ok(out)
}

fn graded(out: &mut DualityReport, a: &crate::dg::DgAlgebra, cs: BraceStructure, window: &Window) -> Result<()> {
    let field = cs.field;
    let coalgebra = gerstenhaber_report(&HochschildComplex::new(cs), window)?;
    let as_ = BraceStructure::from_algebra(a)?;
    let algebra = if as_.complete && as_.weight_graded {
        gerstenhaber_report(&HochschildComplex::new(as_), window)?
    } else if let Some(Family::Sym { dim }) = a.family() {
        polyvector_report(*dim, field, window)?
    } else {
        out.verdict = Verdict::Inconclusive { reason: "the algebra side is neither complete nor a registered family".into() };
        out.coalgebra_side = Some(coalgebra);
        return Ok(());
    };
    let mut mismatch = None;
    for cell in &coalgebra.cohomology {
        let (x, y) = (algebra.dim(cell.bidegree), cell.dim);
        if x != y && mismatch.is_none() {
            mismatch = Some(Verdict::Mismatch { witness: cell.bidegree, reason: format!("dimensions {x} and {y}") });
        }
        out.cells.push(CellComparison { bidegree: cell.bidegree, algebra: x, coalgebra: y, certification: Certification::Exact });
    }
    for op in [Operation::Cup, Operation::Bracket] {
        let mut rows = Vec::new();
        for sc in coalgebra.constants(op) {
            let other = algebra.constants(op).iter().find(|o| o.left == sc.left && o.right == sc.right);
            let ranks = other.map_or([0; 3], |o| o.ranks);
            if ranks != sc.ranks && mismatch.is_none() {
                mismatch = Some(Verdict::Mismatch {
                    witness: sc.target,
                    reason: format!("{op:?} ranks {ranks:?} and {:?} on {:?} ⊗ {:?}", sc.ranks, sc.left, sc.right),
                });
            }
            rows.push(RankComparison { operation: op, left: sc.left, right: sc.right, algebra: ranks, coalgebra: sc.ranks });
        }
        match op {
            Operation::Cup => out.cup = rows,
            Operation::Bracket => out.bracket = rows,
        }
    }
    out.verdict = mismatch.unwrap_or(Verdict::Consistent);
    out.algebra_side = Some(algebra);
    out.coalgebra_side = Some(coalgebra);
    Ok(())
}

fn filtered(out: &mut DualityReport, a: &crate::dg::DgAlgebra, cs: BraceStructure, (lo, hi): (i32, i32)) -> Result<()> {
    let field = cs.field;
    let lie = match a.family() {
        Some(Family::Envelope { lie }) => LiePresentation::by_name(lie, field)?,
        _ => {
            out.verdict = Verdict::Inconclusive { reason: "filtered comparison needs an enveloping algebra".into() };
            return Ok(());
        }
    };
    if out.window.degrees.0 > 0 || out.window.degrees.1 < 0 {
        out.verdict = Verdict::Inconclusive { reason: "the window has no degree-0 cells".into() };
        return Ok(());
    }
    let centers = center_filtration_dims(&lie, hi.max(0) as u32);
    let hc = HochschildComplex::new(cs);
    let mut mismatch = None;
    for n in lo..=hi {
        let cell = hc.filtered_cell(0, n)?;
        let b = Bidegree::new(0, n);
        let x = centers[n as usize];
        if x != cell.dim && mismatch.is_none() {
            mismatch = Some(Verdict::Mismatch { witness: b, reason: format!("dimensions {x} and {}", cell.dim) });
        }
        if let Certification::Truncated { stabilized: false, .. } = cell.certification {
            if mismatch.is_none() {
                mismatch = Some(Verdict::Inconclusive { reason: format!("filtration {n} did not stabilize") });
            }
        }
        out.cells.push(CellComparison { bidegree: b, algebra: x, coalgebra: cell.dim, certification: cell.certification });
    }
    out.verdict = mismatch.unwrap_or(Verdict::Consistent);
    Ok(())
}
