use std::cmp::Ordering;

use proptest::prelude::*;

use syzkit::gen::gen_random_commuting;
use syzkit::matrix::{left_nullspace_rref, mat_mul};
use syzkit::poly::{contract, divide, expand};
use syzkit::{DenseMatrix, FieldElem, Monomial, MonomialIndex, MonomialOrder, ModulePoly, PrimeField};

const PRIMES: [u64; 4] = [3, 97, 65521, 2_147_483_647];

fn matrix(p: u64, rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    proptest::collection::vec(0..p as u32, rows * cols)
        .prop_map(move |data| DenseMatrix::from_flat(PrimeField::new(p).unwrap(), rows, cols, data).unwrap())
}

fn any_matrix(max: usize) -> impl Strategy<Value = DenseMatrix> {
    (0..PRIMES.len(), 1..=max, 1..=max).prop_flat_map(|(i, r, c)| matrix(PRIMES[i], r, c))
}

/// Low-rank matrices show up rarely from uniform entries over large fields.
fn small_field_matrix(max: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| matrix(3, r, c))
}

fn naive_rank(a: &DenseMatrix) -> usize {
    let f = a.field();
    let mut rows: Vec<Vec<FieldElem>> = a.row_iter().map(|r| r.to_vec()).collect();
    let mut rank = 0;
    for col in 0..a.cols() {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][col]).unwrap();
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let factor = f.neg(f.mul(rows[i][col], inv));
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                    *x = f.mul_add(*x, factor, y);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn orders() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![
        Just("top:lex"),
        Just("pot:lex"),
        Just("top:deglex"),
        Just("top:degrevlex"),
        Just("pot:degrevlex"),
        Just("top:lex:vars=3,1,2"),
        Just("pot:degrevlex:vars=2,3,1"),
    ]
    .prop_map(|s| s.parse().unwrap())
}

fn monomial3() -> impl Strategy<Value = Monomial> {
    (proptest::collection::vec(0u32..4, 3), 0usize..2).prop_map(|(e, c)| Monomial::new(e, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mat_mul_agrees_with_naive_loop((a, b) in (0..PRIMES.len(), 1..=24usize, 1..=24usize, 1..=24usize)
        .prop_flat_map(|(i, r, k, c)| (matrix(PRIMES[i], r, k), matrix(PRIMES[i], k, c))))
    {
        let f = a.field();
        let prod = mat_mul(&a, &b).unwrap();
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = 0;
                for t in 0..a.cols() {
                    acc = f.mul_add(acc, a.get(i, t), b.get(t, j));
                }
                prop_assert_eq!(prod.get(i, j), acc);
            }
        }
    }

    #[test]
    fn row_rank_profile_is_greedy(a in small_field_matrix(6)) {
        let prof = a.row_rank_profile();
        prop_assert_eq!(prof.rank, naive_rank(&a));
        let mut expected = Vec::new();
        for i in 0..a.rows() {
            let before = naive_rank(&a.select_rows(&(0..i).collect::<Vec<_>>()));
            let after = naive_rank(&a.select_rows(&(0..=i).collect::<Vec<_>>()));
            if after > before {
                expected.push(i);
            }
        }
        prop_assert_eq!(prof.indices, expected);
    }

    #[test]
    fn column_profile_is_row_profile_of_transpose(a in small_field_matrix(6)) {
        prop_assert_eq!(a.column_rank_profile(), a.transpose().row_rank_profile());
    }

    #[test]
    fn invert_gives_identity(a in (0..PRIMES.len(), 1..=8usize).prop_flat_map(|(i, n)| matrix(PRIMES[i], n, n))) {
        match a.invert() {
            Ok(inv) => {
                prop_assert_eq!(a.mul(&inv).unwrap(), DenseMatrix::identity(a.field(), a.rows()));
                prop_assert_eq!(inv.mul(&a).unwrap(), DenseMatrix::identity(a.field(), a.rows()));
            }
            Err(_) => prop_assert!(naive_rank(&a) < a.rows()),
        }
    }

    #[test]
    fn left_nullspace_annihilates(a in any_matrix(7), b in small_field_matrix(7)) {
        for m in [a, b] {
            let n = left_nullspace_rref(&m);
            prop_assert_eq!(n.rows(), m.rows() - naive_rank(&m));
            if n.rows() > 0 {
                prop_assert!(n.mul(&m).unwrap().is_zero());
                prop_assert_eq!(naive_rank(&n), n.rows());
            }
        }
    }

    #[test]
    fn orders_are_total_and_multiplicative(order in orders(), a in monomial3(), b in monomial3(),
                                           t in proptest::collection::vec(0u32..3, 3)) {
        let order = order.resolved(3).unwrap();
        let ab = order.compare(&a, &b);
        prop_assert_eq!(ab, order.compare(&b, &a).reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        let at = Monomial::new(a.exps().iter().zip(&t).map(|(x, y)| x + y).collect(), a.comp());
        let bt = Monomial::new(b.exps().iter().zip(&t).map(|(x, y)| x + y).collect(), b.comp());
        prop_assert_eq!(order.compare(&at, &bt), ab);
        if !t.iter().all(|&x| x == 0) {
            prop_assert_eq!(order.compare(&at, &a), Ordering::Greater);
        }
    }

    #[test]
    fn expand_contract_round_trip(order in orders(), v in proptest::collection::vec(0u32..97, 3 * 2 * 4 * 2)) {
        let f = PrimeField::new(97).unwrap();
        let idx = MonomialIndex::build(&order.resolved(3).unwrap(), &[3, 2, 4], 2, 1000).unwrap();
        let p = contract(f, &idx, &v).unwrap();
        prop_assert_eq!(expand(&idx, &p).unwrap(), v);
        for w in idx.entries().windows(2) {
            prop_assert_eq!(idx.order().compare(&w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn division_is_linear_and_idempotent(seed in 0u64..1000, order in orders(),
                                         a in proptest::collection::vec((monomial3(), 0i64..97), 0..8),
                                         b in proptest::collection::vec((monomial3(), 0i64..97), 0..8),
                                         alpha in 0u32..97) {
        let f = PrimeField::new(97).unwrap();
        let inst = gen_random_commuting(f, 3, 5, 2, seed).unwrap();
        let gb = syzkit::syzygy_basis(&order, &inst).unwrap();
        let p = ModulePoly::from_terms(f, 3, 2, a).unwrap();
        let q = ModulePoly::from_terms(f, 3, 2, b).unwrap();
        let rp = divide(&gb.order, &p, &gb.elements).unwrap();
        let rq = divide(&gb.order, &q, &gb.elements).unwrap();
        prop_assert_eq!(divide(&gb.order, &rp, &gb.elements).unwrap(), rp.clone());
        let combo = p.add_scaled(alpha, &q).unwrap();
        prop_assert_eq!(divide(&gb.order, &combo, &gb.elements).unwrap(), rp.add_scaled(alpha, &rq).unwrap());
        // the remainder differs from p by a syzygy
        let diff = p.sub(&rp).unwrap();
        prop_assert!(inst.apply_poly(&diff).unwrap().iter().all(|&x| x == 0));
    }
}
