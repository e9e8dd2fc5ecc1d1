mod common;

use clusterdet::detkit::{DetError, PolyMatrix};
use clusterdet::laurent::LaurentPoly;
use common::{matrix, table};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bareiss_matches_cofactor_small(m in (1usize..=4).prop_flat_map(|d| matrix(d, 2))) {
        prop_assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap());
    }

    #[test]
    fn bareiss_matches_cofactor_larger(m in (5usize..=6).prop_flat_map(|d| matrix(d, 1))) {
        prop_assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap());
    }

    #[test]
    fn transpose_invariance(m in (1usize..=5).prop_flat_map(|d| matrix(d, 2))) {
        prop_assert_eq!(m.transpose().det_bareiss().unwrap(), m.det_bareiss().unwrap());
    }

    #[test]
    fn row_swap_negates(m in (2usize..=5).prop_flat_map(|d| matrix(d, 2)), a in 0usize..5, b in 0usize..5) {
        let d = m.n_rows();
        let (a, b) = (a % d, b % d);
        prop_assume!(a != b);
        let mut s = m.clone();
        s.swap_rows(a, b);
        prop_assert_eq!(s.det_bareiss().unwrap(), -&m.det_bareiss().unwrap());
    }

    #[test]
    fn repeated_row_vanishes(m in (2usize..=5).prop_flat_map(|d| matrix(d, 2)), a in 0usize..5, b in 0usize..5) {
        let d = m.n_rows();
        let (a, b) = (a % d, b % d);
        prop_assume!(a != b);
        let mut s = m.clone();
        for j in 0..d {
            let v = s.get(a, j).clone();
            s.set(b, j, v);
        }
        prop_assert!(s.det_bareiss().unwrap().is_zero());
    }

    #[test]
    fn multiplicative_for_triangular_factor(m in (1usize..=4).prop_flat_map(|d| matrix(d, 2)), c in matrix(1, 2)) {
        let d = m.n_rows();
        let k = c.get(0, 0).clone();
        let mut scaled = m.clone();
        for j in 0..d {
            let v = &k * scaled.get(0, j);
            scaled.set(0, j, v);
        }
        prop_assert_eq!(scaled.det_bareiss().unwrap(), &k * &m.det_bareiss().unwrap());
    }
}

#[test]
fn size_guard_and_shape_errors() {
    let vars = table();
    let big = PolyMatrix::from_fn(&vars, 13, 13, |i, j| {
        if i == j { LaurentPoly::one(&vars) } else { LaurentPoly::zero(&vars) }
    });
    assert!(matches!(big.det_bareiss(), Err(DetError::DimensionTooLarge { dim: 13, .. })));
    let rect = PolyMatrix::from_fn(&vars, 2, 3, |_, _| LaurentPoly::one(&vars));
    assert!(matches!(rect.det_bareiss(), Err(DetError::NotSquare { .. })));
}
