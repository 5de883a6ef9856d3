use proptest::prelude::*;

use cullis::cullis::{det_injection_sum, det_laplace, det_minor_sum};
use cullis::linalg::{nullspace_basis, rank, rref, square_det};
use cullis::linvar::{ConstraintSystem, CoordinateSpace};
use cullis::matroid::{column_matroid, ElementSet};
use cullis::{FieldSpec, Mat, Scalar};

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::prime(2).unwrap()),
        Just(FieldSpec::prime(3).unwrap()),
        Just(FieldSpec::prime(5).unwrap()),
        Just(FieldSpec::prime(7).unwrap()),
        Just("Q".parse::<FieldSpec>().unwrap()),
    ]
}

fn mat_in(field: FieldSpec, rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(-9i64..=9, rows * cols)
        .prop_map(move |v| Mat::from_fn(field, rows, cols, |i, j| Scalar::from_i64(field, v[i * cols + j])))
}

fn any_mat() -> impl Strategy<Value = Mat> {
    (field(), 1usize..=5, 1usize..=5).prop_flat_map(|(f, r, c)| mat_in(f, r, c))
}

/// `n >= k`, small enough for the injection sum.
fn tall_mat() -> impl Strategy<Value = Mat> {
    (field(), 1usize..=6).prop_flat_map(|(f, n)| (Just(f), Just(n), 1..=n)).prop_flat_map(|(f, n, k)| mat_in(f, n, k))
}

fn square_pair() -> impl Strategy<Value = (Mat, Mat)> {
    (field(), 1usize..=4).prop_flat_map(|(f, n)| (mat_in(f, n, n), mat_in(f, n, n)))
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(a in any_mat()) {
        prop_assert_eq!(rank(&a), rank(&a.transpose()));
        prop_assert!(rank(&a) <= a.rows().min(a.cols()));
    }

    #[test]
    fn nullspace_is_a_kernel_basis(a in any_mat()) {
        let basis = nullspace_basis(&a);
        prop_assert_eq!(basis.len(), a.cols() - rank(&a));
        for v in &basis {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        if !basis.is_empty() {
            let stacked = Mat::from_rows(a.field(), a.cols(), &basis).unwrap();
            prop_assert_eq!(rank(&stacked), basis.len());
        }
    }

    #[test]
    fn rref_is_idempotent(a in any_mat()) {
        let once = rref(&a);
        let twice = rref(&once.matrix);
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.rank, rank(&a));
    }

    #[test]
    fn square_det_is_multiplicative((a, b) in square_pair()) {
        let lhs = square_det(&a.mul(&b).unwrap()).unwrap();
        let rhs = &square_det(&a).unwrap() * &square_det(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn determinant_algorithms_agree(x in tall_mat(), col_seed in 0usize..64) {
        let reference = det_injection_sum(&x).unwrap();
        prop_assert_eq!(&det_minor_sum(&x).unwrap(), &reference);
        prop_assert_eq!(&det_laplace(&x, 1 + col_seed % x.cols()).unwrap(), &reference);
        if x.is_square() {
            prop_assert_eq!(&square_det(&x).unwrap(), &reference);
        }
    }

    #[test]
    fn matroid_rank_matches_linear_rank(a in any_mat(), mask in any::<u64>()) {
        let m = column_matroid(&a).unwrap();
        let full = ElementSet::full(a.cols());
        let s = ElementSet(mask).intersection(full);
        prop_assert_eq!(m.full_rank(), rank(&a));
        let dual = m.dual();
        prop_assert_eq!(
            dual.rank(s).unwrap() + m.full_rank(),
            s.len() + m.rank(full.difference(s)).unwrap()
        );
    }

    #[test]
    fn matrix_text_round_trips(a in any_mat()) {
        let back: Mat = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn constraint_text_round_trips(a in (field(), 1usize..=3, 1usize..=3, 1usize..=3)
        .prop_flat_map(|(f, rows, n, k)| (mat_in(f, rows, n * k), Just((n, k)))))
    {
        let (a, (n, k)) = a;
        let space = CoordinateSpace::matrices(a.field(), n, k).unwrap();
        let b = a.column(1);
        let cs = ConstraintSystem::new(space, a, b).unwrap();
        let back: ConstraintSystem = cs.to_string().parse().unwrap();
        prop_assert_eq!(back.to_string(), cs.to_string());
        prop_assert_eq!(back.matrix(), cs.matrix());
    }
}
