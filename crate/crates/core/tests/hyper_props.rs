use clusterdet::hyper::{self, ExactDecoratedLine, PointConfig, NUMERIC_TOLERANCE};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exact_line_model_satisfies_ptolemy(n in 0usize..=10, seed in any::<u64>()) {
        let d = ExactDecoratedLine::random(n + 3, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(hyper::ptolemy_holds_exact(&d.table()));
    }

    #[test]
    fn float_line_model_residuals(n in 0usize..=10, seed in any::<u64>()) {
        let d = hyper::DecoratedLine::random(n + 3, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(hyper::ptolemy_max_residual(&hyper::line_model(&d)) < 1e-12);
    }

    #[test]
    fn heron_sign(p in prop::array::uniform6(-6i64..=6)) {
        let cfg = PointConfig::from_integers(&[&p[0..2], &p[2..4], &p[4..6]]).unwrap();
        let d = hyper::heron_cm_det(&cfg).unwrap();
        let cross = (p[2] - p[0]) * (p[5] - p[1]) - (p[3] - p[1]) * (p[4] - p[0]);
        prop_assert!(!d.is_positive());
        prop_assert_eq!(d.is_zero(), cross == 0);
        // -16 A^2 with 2A = |cross|.
        prop_assert_eq!(d, BigRational::from_integer(BigInt::from(-4 * cross * cross)));
    }
}

#[test]
fn numeric_determinants_up_to_n10() {
    for n in 0..=10 {
        for seed in [1, 42, 1234] {
            let bm = hyper::numeric_bm_check(n, seed);
            assert!(bm.holds(NUMERIC_TOLERANCE), "bm n = {n}, seed {seed}: {bm:?}");
            if n >= 2 {
                let cm = hyper::numeric_cm_check(n, seed);
                assert!(cm.holds(NUMERIC_TOLERANCE), "cm n = {n}, seed {seed}: {cm:?}");
            }
        }
    }
}
