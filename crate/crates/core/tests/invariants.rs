use std::collections::BTreeMap;
use std::sync::Arc;

use koszul_core::graded::{BasisElem, CochainComplex, GradedMap, GradedSpace, Window};
use koszul_core::linalg::{kernel_basis, rank, Field, SparseMatrix, SparseVec};
use proptest::prelude::*;

fn matrix(field: Field, rows: &[Vec<i64>], ncols: usize) -> SparseMatrix {
    let trip = rows
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &x)| (r, c, field.from_i64(x))));
    SparseMatrix::from_triplets(rows.len(), ncols, field, trip)
}

/// Rank over Q by fraction-free elimination on dense i128 entries.
fn bareiss_rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let n = a.len();
    let mut r = 0;
    let mut prev = 1i128;
    for c in 0..ncols {
        let Some(p) = (r..n).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in r + 1..n {
            for j in c + 1..ncols {
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
        if r == n {
            break;
        }
    }
    r
}

fn small_matrix() -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| (prop::collection::vec(prop::collection::vec(-3i64..=3, c), r), Just(c)))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_matches_bareiss_and_transpose((rows, ncols) in small_matrix()) {
        let m = matrix(Field::Rational, &rows, ncols);
        let r = rank(&m);
        prop_assert_eq!(r, bareiss_rank(&rows, ncols));
        prop_assert_eq!(r, rank(&m.transpose()));
        let p = matrix(Field::Prime(101), &rows, ncols);
        prop_assert_eq!(rank(&p), rank(&p.transpose()));
        prop_assert!(rank(&p) <= r);
    }

    #[test]
    fn kernel_vectors_are_killed_and_independent((rows, ncols) in small_matrix()) {
        for field in [Field::Rational, Field::Prime(101), Field::Prime(32003)] {
            let m = matrix(field, &rows, ncols);
            let k = kernel_basis(&m);
            prop_assert_eq!(k.len() + rank(&m), ncols);
            for v in &k {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            prop_assert_eq!(rank(&SparseMatrix::from_columns(ncols, field, &k)), k.len());
        }
    }

    #[test]
    fn rank_is_permutation_invariant(
        (rows, ncols, rp, cp) in small_matrix().prop_flat_map(|(rows, c)| {
            let r = rows.len();
            (Just(rows), Just(c), permutation(r), permutation(c))
        })
    ) {
        let m = matrix(Field::Rational, &rows, ncols);
        prop_assert_eq!(rank(&m.permute(&rp, &cp)), rank(&m));
    }

    #[test]
    fn cohomology_survives_base_change_and_shuffling(
        free in prop::collection::vec(0usize..3, 3),
        pairs in prop::collection::vec(0usize..3, 2),
        ops in prop::collection::vec((0usize..3, 0usize..8, 0usize..8, -2i64..=2), 0..12),
        seed in any::<u64>(),
    ) {
        let expected: BTreeMap<i32, usize> = (0..3).map(|d| (d as i32, free[d])).filter(|(_, n)| *n > 0).collect();
        for field in [Field::Rational, Field::Prime(101)] {
            let got = shuffled_cohomology(field, &free, &pairs, &ops, seed);
            prop_assert_eq!(&got, &expected);
        }
    }
}

/// A complex in degrees 0..2 with `free[d]` classes in degree d and `pairs[d]`
/// cancelling pairs d → d+1, hidden behind elementary base changes and a
/// shuffle of the global basis. Returns its cohomology by degree.
fn shuffled_cohomology(field: Field, free: &[usize], pairs: &[usize], ops: &[(usize, usize, usize, i64)], seed: u64) -> BTreeMap<i32, usize> {
    let dims: Vec<usize> = (0..3)
        .map(|d| free[d] + if d < 2 { pairs[d] } else { 0 } + if d > 0 { pairs[d - 1] } else { 0 })
        .collect();
    // local layout in degree d: [free | sources of pairs d→d+1 | targets of pairs d-1→d]
    let mut maps: Vec<SparseMatrix> = (0..2)
        .map(|d| {
            let trip = (0..pairs[d]).map(|i| {
                let src = free[d] + i;
                let tgt = free[d + 1] + pairs.get(d + 1).copied().unwrap_or(0) + i;
                (tgt, src, field.one())
            });
            SparseMatrix::from_triplets(dims[d + 1], dims[d], field, trip)
        })
        .collect();
    for &(d, j, k, c) in ops {
        let n = dims[d];
        if n < 2 || c == 0 {
            continue;
        }
        let (j, k) = (j % n, k % n);
        if j == k {
            continue;
        }
        let e = |x: i64| SparseMatrix::identity(n, field).add(&SparseMatrix::from_triplets(n, n, field, [(j, k, field.from_i64(x))]));
        if d < 2 {
            maps[d] = maps[d].mul(&e(-c));
        }
        if d > 0 {
            maps[d - 1] = e(c).mul(&maps[d - 1]);
        }
    }

    let total: usize = dims.iter().sum();
    let mut order: Vec<usize> = (0..total).collect();
    let mut state = seed | 1;
    for i in (1..total).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        order.swap(i, (state % (i as u64 + 1)) as usize);
    }
    // global position of local element (d, i)
    let offset = |d: usize| dims[..d].iter().sum::<usize>();
    let pos = |d: usize, i: usize| order[offset(d) + i];
    let mut elems = vec![BasisElem::new("", 0, None); total];
    for d in 0..3 {
        for i in 0..dims[d] {
            elems[pos(d, i)] = BasisElem::new(format!("e{d}_{i}"), d as i32, None);
        }
    }
    let mut cols = vec![SparseVec::new(); total];
    for d in 0..2 {
        for (r, c, x) in maps[d].triplets() {
            let col = &mut cols[pos(d, c)];
            *col = col.add_scaled(x, &SparseVec::unit(pos(d + 1, r), field));
        }
    }
    let space = Arc::new(GradedSpace::new(elems).unwrap());
    let dmap = GradedMap::new(space.clone(), space, 1, None, field, cols).unwrap();
    let cx = CochainComplex::new(dmap).unwrap();
    cx.cohomology(&Window::new((0, 2), None)).unwrap().by_degree().into_iter().filter(|(_, n)| *n > 0).collect()
}

fn scalar_field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(101)), Just(Field::Prime(32003))]
}

proptest! {
    #[test]
    fn scalars_form_a_field(field in scalar_field(), a in -50i64..50, b in -50i64..50, c in 1i64..50, d in 1i64..50) {
        prop_assume!(field.admits_inverse_of(d));
        let (x, y) = (field.from_i64(a), field.from_i64(b));
        let z = field.from_ratio(c, d).unwrap();
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !z.is_zero() {
            prop_assert!((&z * &z.inv()).is_one());
        }
        let text = z.render();
        prop_assert_eq!(koszul_core::linalg::parse_scalar(field, &text).unwrap(), z);
    }
}
