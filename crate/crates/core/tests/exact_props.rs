use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rephom::exact::{
    alternating_sum, snf_oracle, ChainComplex, DenseMatrix, ExactError, Field, PrimeField, Rationals, SparseMatrix,
};

fn int_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -5i64..=5], n), m)
    })
}

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

/// `C_2 -> C_1 -> C_0` with `d_1 = A`, `d_2 = K·B` where the columns of `K`
/// span `ker A`, so `d_1 d_2 = 0` by construction.
fn complex_strategy() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    (int_matrix(6), 1usize..5, any::<u64>()).prop_map(|(a, c2, seed)| {
        let q = Rationals;
        let kernel = DenseMatrix::from_i64(&q, &a).kernel(&q);
        // Integer kernel vectors: clear denominators column by column.
        let (n1, k) = (kernel.rows(), kernel.cols());
        let mut kint = vec![vec![0i64; k]; n1];
        for j in 0..k {
            let col: Vec<BigRational> = (0..n1).map(|i| kernel.get(i, j).clone()).collect();
            let l = rephom::exact::common_denominator(&col);
            for i in 0..n1 {
                let v = (&col[i] * BigRational::from_integer(l.clone())).to_integer();
                kint[i][j] = i64::try_from(v).expect("small kernel entries");
            }
        }
        let mut s = seed;
        let b: Vec<Vec<i64>> = (0..k)
            .map(|_| {
                (0..c2)
                    .map(|_| {
                        s = s.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
                        ((s >> 33) % 5) as i64 - 2
                    })
                    .collect()
            })
            .collect();
        let d2 = if k == 0 { vec![vec![0; c2]; n1] } else { mat_mul(&kint, &b) };
        (a, d2)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sparse_rank_matches_snf(rows in int_matrix(12)) {
        let q = Rationals;
        let sparse = DenseMatrix::from_i64(&q, &rows).to_sparse(&q);
        prop_assert_eq!(sparse.rank(&q), snf_oracle(&to_big(&rows)).len());
    }

    #[test]
    fn dense_and_sparse_ranks_agree(rows in int_matrix(10)) {
        let q = Rationals;
        let dense = DenseMatrix::from_i64(&q, &rows);
        prop_assert_eq!(dense.rank(&q), dense.to_sparse(&q).rank(&q));
        prop_assert_eq!(dense.rank(&q), dense.transpose().rank(&q));
    }

    #[test]
    fn kernel_basis_is_a_kernel(rows in int_matrix(10)) {
        let q = Rationals;
        let m = DenseMatrix::from_i64(&q, &rows).to_sparse(&q);
        let k = m.kernel_basis(&q);
        prop_assert_eq!(k.cols(), m.cols() - m.rank(&q));
        prop_assert!(m.mul(&q, &k).is_zero());
        prop_assert_eq!(k.rank(&q), k.cols());
    }

    #[test]
    fn snf_divisors_form_a_chain(rows in int_matrix(8)) {
        let d = snf_oracle(&to_big(&rows));
        for w in d.windows(2) {
            prop_assert!(&w[1] % &w[0] == BigInt::from(0));
        }
    }

    #[test]
    fn homology_is_basis_invariant((d1, d2) in complex_strategy(), seed in any::<u64>()) {
        let q = Rationals;
        let dims = vec![d1.len(), d1[0].len(), d2[0].len()];
        let c = ChainComplex::new(
            &q,
            dims.clone(),
            vec![DenseMatrix::from_i64(&q, &d1).to_sparse(&q), DenseMatrix::from_i64(&q, &d2).to_sparse(&q)],
        ).unwrap();
        let h = c.homology(&q);
        prop_assert_eq!(h.euler, alternating_sum(&h.betti));
        prop_assert_eq!(h.euler, alternating_sum(&dims));
        let mut s = seed;
        let bases: Vec<_> = dims.iter().map(|&n| {
            let mut a = DenseMatrix::identity(&q, n);
            let mut inv = DenseMatrix::identity(&q, n);
            for _ in 0..2 * n {
                s = s.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
                let (i, j) = ((s >> 40) as usize % n, (s >> 20) as usize % n);
                if i == j { continue; }
                let c = q.from_i64(((s >> 8) % 5) as i64 - 2);
                let mut e = DenseMatrix::identity(&q, n);
                e.set(i, j, c.clone());
                let mut e_inv = DenseMatrix::identity(&q, n);
                e_inv.set(i, j, q.neg(&c));
                a = a.mul(&q, &e);
                inv = e_inv.mul(&q, &inv);
            }
            (a.to_sparse(&q), inv.to_sparse(&q))
        }).collect();
        let moved = c.change_basis(&q, &bases).unwrap();
        prop_assert_eq!(moved.homology(&q).betti, h.betti);
    }

    #[test]
    fn modular_rank_never_exceeds_rational_rank(rows in int_matrix(10)) {
        let q = Rationals;
        let f = PrimeField::new(7).unwrap();
        let rq = DenseMatrix::from_i64(&q, &rows).rank(&q);
        let rf = DenseMatrix::from_i64(&f, &rows).to_sparse(&f).rank(&f);
        prop_assert!(rf <= rq);
    }
}

#[test]
fn nonzero_square_is_rejected() {
    let q = Rationals;
    let d = SparseMatrix::identity(&q, 2);
    assert_eq!(
        ChainComplex::new(&q, vec![2, 2, 2], vec![d.clone(), d]).unwrap_err(),
        ExactError::ComplexInvalid { degree: 2 }
    );
}
