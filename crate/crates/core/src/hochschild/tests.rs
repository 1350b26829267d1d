use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dg::*;
use crate::graded::{Bidegree, Window};
use crate::linalg::Field;
use crate::sign;

const Q: Field = Field::Rational;

fn ext(n: usize) -> BraceStructure {
    BraceStructure::from_coalgebra(&exterior_coalgebra(Q, n)).unwrap()
}

fn random_cochain(s: &BraceStructure, rng: &mut ChaCha8Rng, cells: &[Bidegree]) -> Cochain {
    loop {
        let b = cells[rng.gen_range(0..cells.len())];
        let basis = cell_basis(s, b).unwrap();
        if basis.is_empty() {
            continue;
        }
        let mut f = Cochain::zero(s.side);
        for _ in 0..rng.gen_range(1..=4) {
            let t = &basis[rng.gen_range(0..basis.len())];
            f.add_term(t.clone(), &s.field.from_i64(rng.gen_range(-3..=3)));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

#[test]
fn m_squares_to_zero() {
    let structures = vec![
        ext(1),
        ext(2),
        ext(3),
        BraceStructure::from_coalgebra(&ce_coalgebra(&LiePresentation::sl2(Q)).unwrap()).unwrap(),
        BraceStructure::from_algebra(&exterior_algebra(Q, 2)).unwrap(),
        BraceStructure::from_algebra(&dual_numbers(Q)).unwrap(),
        BraceStructure::from_algebra(&sym_algebra(Q, 2, 3)).unwrap(),
    ];
    for s in structures {
        let m = s.m();
        assert!(bracket(&s, &m, &m).unwrap().is_zero(), "{:?}", s.side);
        assert_eq!(s.degree_of(s.m1()).unwrap_or(2), 2);
        assert_eq!(s.degree_of(s.m2()), Some(2));
    }
}

#[test]
fn empty_brace_and_identity_substitution() {
    let s = ext(1);
    let f = Cochain::term(Side::Coalgebra, 0, vec![1, 1], Q.one());
    assert_eq!(brace(&s, &f, &[]).unwrap(), f);
    // g = the inclusion of the cogenerator, v ↦ [v]
    let g = Cochain::term(Side::Coalgebra, 1, vec![1], Q.one());
    assert_eq!(brace(&s, &f, &[&g]).unwrap(), f.scale(&Q.from_i64(2)));
    // 1 ↦ [v] vanishes on v, so it has nowhere to go
    let g1 = Cochain::term(Side::Coalgebra, 0, vec![1], Q.one());
    assert!(brace(&s, &f, &[&g1]).unwrap().is_zero());
}

#[test]
fn mixed_sides_are_rejected() {
    let s = ext(1);
    let f = Cochain::term(Side::Algebra, 0, vec![], Q.one());
    assert!(matches!(brace(&s, &f, &[]), Err(crate::Error::MixedSides)));
}

#[test]
fn basic_cocycles() {
    let s = ext(1);
    for n in 0..=4 {
        let f = Cochain::term(Side::Coalgebra, 0, vec![1; n], Q.one());
        assert_eq!(s.degree_of(&f), Some(0));
        assert!(differential(&s, &f).unwrap().is_zero(), "1 ↦ v^{n}");
    }
    let a = BraceStructure::from_algebra(&exterior_algebra(Q, 1)).unwrap();
    let xi = a_index(&a, "v1*");
    let f = Cochain::term(Side::Algebra, xi, vec![], Q.one());
    assert!(differential(&a, &f).unwrap().is_zero());
}

fn a_index(s: &BraceStructure, name: &str) -> usize {
    (0..s.dim()).find(|&i| s.name(i) == name).unwrap()
}

#[test]
fn unit_and_powers() {
    let s = ext(1);
    let u = unit_cochain(&s);
    let g1 = Cochain::term(Side::Coalgebra, 0, vec![1], Q.one());
    assert_eq!(cup(&s, &u, &g1).unwrap(), g1);
    assert_eq!(cup(&s, &g1, &u).unwrap(), g1);
    let mut p = u.clone();
    for w in 1..=4 {
        p = cup(&s, &p, &g1).unwrap();
        assert_eq!(p, Cochain::term(Side::Coalgebra, 0, vec![1; w], Q.one()));
    }
    let a = BraceStructure::from_algebra(&exterior_algebra(Q, 1)).unwrap();
    let x = Cochain::term(Side::Algebra, 1, vec![1], Q.one());
    assert_eq!(cup(&a, &unit_cochain(&a), &x).unwrap(), x);
}

#[test]
fn hh_of_exterior_line() {
    let s = ext(1);
    let t = hochschild_cohomology(s, &Window::new((-1, 2), Some((-1, 4)))).unwrap();
    for (b, d) in t.dims() {
        let w = b.weight.unwrap();
        let expect = match b.degree {
            0 => (w >= 0) as usize,
            1 => (w >= -1) as usize,
            _ => 0,
        };
        assert_eq!(d, expect, "{b}");
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn hh_of_exterior_plane_matches_polyvectors() {
    let s = ext(2);
    let t = hochschild_cohomology(s, &Window::new((0, 2), Some((-2, 3)))).unwrap();
    for (b, d) in t.dims() {
        let (deg, w) = (b.degree as i64, b.weight.unwrap() as i64);
        let sym = if w + deg >= 0 { (w + deg + 1) as usize } else { 0 };
        assert_eq!(d, sym * binom(2, deg as usize), "{b}");
    }
}

#[test]
fn hh_of_exterior_algebra_line() {
    let s = BraceStructure::from_algebra(&exterior_algebra(Q, 1)).unwrap();
    let t = hochschild_cohomology(s, &Window::new((0, 0), Some((0, 4)))).unwrap();
    assert!(t.dims().values().all(|&d| d == 1));
}

#[test]
fn hh_of_dual_numbers() {
    let s = BraceStructure::from_algebra(&dual_numbers(Q)).unwrap();
    let t = hochschild_cohomology(s, &Window::new((0, 4), Some((-5, 1)))).unwrap();
    let by_degree: Vec<usize> = (0..=4).map(|d| t.dims().iter().filter(|(b, _)| b.degree == d).map(|(_, &x)| x).sum()).collect();
    assert_eq!(by_degree, vec![2, 1, 1, 1, 1]);
}

fn identities(s: &BraceStructure, cells: &[Bidegree], seed: u64, rounds: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deg = |f: &Cochain| s.degree_of(f).unwrap();
    for _ in 0..rounds {
        let f = random_cochain(s, &mut rng, cells);
        let g = random_cochain(s, &mut rng, cells);
        let h = random_cochain(s, &mut rng, cells);
        let df = differential(s, &f).unwrap();
        assert!(differential(s, &df).unwrap().is_zero(), "δ² on {}", s.render(&f));
        // antisymmetry
        let fg = bracket(s, &f, &g).unwrap();
        let gf = bracket(s, &g, &f).unwrap();
        let sgn = sign::odd_pair(deg(&f) - 1, deg(&g) - 1);
        assert!(fg.add(&gf.neg_if(sgn)).unwrap().is_zero(), "antisymmetry");
        // Jacobi: [f,[g,h]] = [[f,g],h] + (−1)^{‖f‖‖g‖}[g,[f,h]]
        let lhs = bracket(s, &f, &bracket(s, &g, &h).unwrap()).unwrap();
        let r1 = bracket(s, &fg, &h).unwrap();
        let r2 = bracket(s, &g, &bracket(s, &f, &h).unwrap()).unwrap().neg_if(sgn);
        assert!(lhs.sub(&r1.add(&r2).unwrap()).unwrap().is_zero(), "Jacobi");
        let defect = homotopy_defect(s, &f, &g).unwrap();
        assert!(defect.is_zero(), "homotopy commutativity: {}", s.render(&defect));
        // brace identity for one inner and one outer argument
        let fbg = brace(s, &f, &[&g]).unwrap();
        let left = brace(s, &fbg, &[&h]).unwrap();
        let nested = brace(s, &f, &[&brace(s, &g, &[&h]).unwrap()]).unwrap();
        let a = brace(s, &f, &[&g, &h]).unwrap();
        let b = brace(s, &f, &[&h, &g]).unwrap().neg_if(sign::odd_pair(deg(&g) - 1, deg(&h) - 1));
        let right = nested.add(&a).unwrap().add(&b).unwrap();
        assert!(left.sub(&right).unwrap().is_zero(), "brace identity");
    }
}

fn small_cells(lo: i32, hi: i32, wlo: i32, whi: i32) -> Vec<Bidegree> {
    let mut v = Vec::new();
    for d in lo..=hi {
        for w in wlo..=whi {
            v.push(Bidegree::new(d, w));
        }
    }
    v
}

#[test]
fn brace_identities_on_coalgebras() {
    identities(&ext(2), &small_cells(-1, 2, -2, 2), 7, 30);
    let ce = BraceStructure::from_coalgebra(&ce_coalgebra(&LiePresentation::sl2(Q)).unwrap()).unwrap();
    identities(&ce, &small_cells(-1, 1, -1, 1), 8, 15);
}

#[test]
fn brace_identities_on_algebras() {
    identities(&BraceStructure::from_algebra(&exterior_algebra(Q, 2)).unwrap(), &small_cells(-1, 2, -1, 2), 9, 30);
    identities(&BraceStructure::from_algebra(&dual_numbers(Q)).unwrap(), &small_cells(0, 2, -2, 1), 10, 30);
}

#[test]
fn filtered_center_of_sl2() {
    let ce = BraceStructure::from_coalgebra(&ce_coalgebra(&LiePresentation::sl2(Q)).unwrap()).unwrap();
    let hc = HochschildComplex::new(ce);
    let dims: Vec<usize> = (0..=2).map(|n| hc.filtered_cell(0, n).unwrap().dim).collect();
    assert_eq!(dims, vec![1, 1, 2]);
}



fn line_pair(n: usize, w: u32) -> crate::barcobar::TwistingCochain {
    use std::sync::Arc;
    let c = Arc::new(exterior_coalgebra(Q, n));
    let a = Arc::new(sym_algebra(Q, n, w));
    crate::barcobar::TwistingCochain::new(crate::barcobar::projection_inclusion(c, a).unwrap()).unwrap()
}

#[test]
fn bracket_pairing_is_perfect_in_dim_two() {
    let hc = HochschildComplex::new(ext(2));
    let r = gerstenhaber_report(&hc, &Window::new((0, 1), Some((-1, 1)))).unwrap();
    let p = r.pairings.iter().find(|p| p.left == Bidegree::new(1, -1) && p.right == Bidegree::new(0, 1)).unwrap();
    assert!(p.perfect);
    assert_eq!(p.rank, 2);
}

#[test]
fn polyvector_report_matches_the_coalgebra_side() {
    let w = Window::new((0, 2), Some((-2, 2)));
    let oracle = polyvector_report(2, Q, &w).unwrap();
    let brace = gerstenhaber_report(&HochschildComplex::new(ext(2)), &w).unwrap();
    for cell in &brace.cohomology {
        assert_eq!(cell.dim, oracle.dim(cell.bidegree), "{:?}", cell.bidegree);
    }
    for (x, y) in brace.cup.iter().zip(&oracle.cup) {
        assert_eq!((x.left, x.right, x.ranks), (y.left, y.right, y.ranks));
    }
    for (x, y) in brace.bracket.iter().zip(&oracle.bracket) {
        assert_eq!((x.left, x.right, x.ranks), (y.left, y.right, y.ranks));
    }
}

#[test]
fn duality_of_the_line() {
    let r = duality_report(&line_pair(1, 4), &Window::new((0, 1), Some((-1, 4)))).unwrap();
    assert_eq!(r.verdict, Verdict::Consistent, "{:?}", r.verdict);
    assert_eq!(r.mode, "graded");
    assert!(r.cells.iter().all(|c| c.algebra == c.coalgebra));
}

#[test]
fn zero_twist_fails_the_precondition() {
    use std::sync::Arc;
    let c = Arc::new(exterior_coalgebra(Q, 1));
    let a = Arc::new(sym_algebra(Q, 1, 3));
    let zero = crate::barcobar::ConvolutionElement::zero(c, a, 1);
    let tau = crate::barcobar::TwistingCochain::new(zero).unwrap();
    let r = duality_report(&tau, &Window::new((0, 1), Some((0, 3)))).unwrap();
    assert!(matches!(r.verdict, Verdict::PreconditionFailed { .. }), "{:?}", r.verdict);
}

#[test]
fn duality_of_sl2_by_filtration() {
    use std::sync::Arc;
    let lie = LiePresentation::sl2(Q);
    let c = Arc::new(ce_coalgebra(&lie).unwrap());
    let a = Arc::new(universal_envelope(&lie, 3).unwrap());
    let tau = crate::barcobar::TwistingCochain::new(crate::barcobar::projection_inclusion(c, a).unwrap()).unwrap();
    let r = duality_report(&tau, &Window::new((0, 0), Some((0, 3)))).unwrap();
    assert_eq!(r.verdict, Verdict::Consistent, "{:?}", r.verdict);
    let dims: Vec<usize> = r.cells.iter().map(|c| c.coalgebra).collect();
    assert_eq!(dims, vec![1, 1, 2, 2]);
}
