use std::collections::HashSet;

use extricat_core::exactlin::{space_size, VectorIter};
use extricat_core::{Field, Mat};
use proptest::prelude::*;

fn mat_strategy(p: u32, max: usize) -> impl Strategy<Value = Mat> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(0..p, r * c).prop_map(move |e| Mat::new(p, r, c, e))
    })
}

fn field_and_mat() -> impl Strategy<Value = Mat> {
    prop_oneof![mat_strategy(2, 4), mat_strategy(3, 3), mat_strategy(5, 3)]
}

// rank as log_p of the number of distinct images, by enumeration
fn brute_rank(m: &Mat) -> usize {
    let p = m.p();
    let images: HashSet<Vec<u32>> = VectorIter::new(p, m.cols()).map(|v| m.mul_vec(&v)).collect();
    let mut n = images.len();
    let mut d = 0;
    while n > 1 {
        n /= p as usize;
        d += 1;
    }
    d
}

#[test]
fn field_inverses() {
    for p in [2, 3, 5, 7, 11] {
        let f = Field::new(p).unwrap();
        for a in 1..p {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.reduce(-1), p - 1);
    }
}

#[test]
fn field_rejects_composites() {
    assert!(Field::new(4).is_err());
    assert!(Field::new(1).is_err());
}

#[test]
fn vector_iter_counts() {
    assert_eq!(VectorIter::new(3, 3).count(), 27);
    assert_eq!(space_size(3, 3), 27);
    assert_eq!(VectorIter::new(2, 0).count(), 1);
}

proptest! {
    #[test]
    fn rank_matches_enumeration(m in field_and_mat()) {
        prop_assert_eq!(m.rank(), brute_rank(&m));
    }

    #[test]
    fn rank_nullity(m in field_and_mat()) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rref_is_idempotent(m in field_and_mat()) {
        let (r, pivots) = m.rref();
        let (r2, pivots2) = r.rref();
        prop_assert_eq!(r.to_rows(), r2.to_rows());
        prop_assert_eq!(pivots, pivots2);
    }

    #[test]
    fn solve_finds_a_preimage(m in field_and_mat(), seed in prop::collection::vec(0u32..5, 4)) {
        let p = m.p();
        let x: Vec<u32> = (0..m.cols()).map(|i| seed[i % seed.len()] % p).collect();
        let b = m.mul_vec(&x);
        let y = m.solve(&b).expect("b lies in the image");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn transpose_preserves_rank(m in field_and_mat()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn inverse_round_trip(m in prop_oneof![mat_strategy(2, 3), mat_strategy(3, 3)]) {
        if m.is_square() {
            match m.inverse() {
                Some(inv) => {
                    prop_assert!(m.mul(&inv).is_identity());
                    prop_assert!(inv.mul(&m).is_identity());
                }
                None => prop_assert!(m.rank() < m.rows()),
            }
        }
    }

    #[test]
    fn cokernel_kills_the_image(m in field_and_mat()) {
        let ck = m.cokernel_data();
        prop_assert_eq!(ck.dim, m.rows() - m.rank());
        prop_assert!(ck.proj.mul(&m).is_zero());
        prop_assert!(ck.proj.mul(&ck.section).is_identity());
    }
}
