mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn demazure_braid_identity(seed in any::<u64>()) {
        prop_assert!(common::demazure_braid(seed));
    }

    #[test]
    fn demazure_leibniz(seed in any::<u64>()) {
        prop_assert!(common::leibniz(seed));
    }

    #[test]
    fn normal_form_reassembles(seed in any::<u64>()) {
        prop_assert!(common::normal_form_reassembly(seed));
    }

    #[test]
    fn random_composites_are_bimodule_maps(seed in any::<u64>()) {
        prop_assert!(common::composite_is_bimodule(seed));
    }

    #[test]
    fn braid_walks_preserve_one_from_left(seed in any::<u64>()) {
        if let Some(ok) = common::one_from_left_preserved(seed) {
            prop_assert!(ok);
        }
    }

    #[test]
    fn adjunction_dimensions_agree(seed in any::<u64>()) {
        prop_assert!(common::adjunction_dimension(seed));
    }
}
