//! Randomised invariants with fixed seeds.

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(config(300, 0x5eed_0001))]

    #[test]
    fn cyclotomic_ops_match_floating_point(case in cyc_pair()) {
        check_cyclotomic(case)?;
    }

    #[test]
    fn vanishing_sums_are_zero(case in (2u32..=30, any::<u64>())) {
        check_vanishing(case)?;
    }
}

proptest! {
    #![proptest_config(config(200, 0x5eed_0002))]

    #[test]
    fn fingerprint_survives_monomial_transforms(case in (0usize..64, any::<u64>())) {
        check_fingerprint(&witness_pool(), case)?;
    }
}

proptest! {
    #![proptest_config(config(200, 0x5eed_0003))]

    #[test]
    fn hermitian_dual_dimension_and_involution(case in dual_case()) {
        check_dual(case)?;
    }

    #[test]
    fn distance_strategies_agree(case in distance_case()) {
        check_distance(case)?;
    }
}

#[test]
fn orthogonal_pairs_map_to_hermitian_orthogonal_pairs() {
    orthogonal_pairs(1000, 0x5eed_0004).unwrap();
}

#[test]
fn witnesses_with_char_dividing_weight_give_hso_codes() {
    let checked = hso_witnesses().unwrap();
    assert!(checked >= 6, "only {checked} witnesses qualified");
}

#[test]
fn lift_matches_oracle_on_all_small_supports() {
    let all = small_regular_supports();
    // n=1: 1; n=2: 2 + 1; n=3: 6 + 6 + 1
    assert_eq!(all.len(), 17);
    oracle_family(&all).unwrap();
}

#[test]
fn lift_matches_oracle_on_random_four_by_four_supports() {
    oracle_family(&random_four_by_four(100, 0x5eed_0005)).unwrap();
}
