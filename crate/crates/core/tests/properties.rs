mod common;

use proptest::prelude::*;

fn check(result: common::Check) -> Result<(), TestCaseError> {
    result.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn indicator_audits(seed in any::<u64>()) {
        check(common::h_audit(seed))?;
    }

    #[test]
    fn filtration_is_nested(seed in any::<u64>()) {
        check(common::nesting(seed))?;
    }

    #[test]
    fn cech_is_within_rips(seed in any::<u64>()) {
        check(common::cech_in_rips(seed))?;
    }

    #[test]
    fn scaling_identity(seed in any::<u64>()) {
        check(common::scaling_identity(seed))?;
    }
}

proptest! {
    // Each case samples a cloud and enumerates it twice.
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn independent_of_thread_count(seed in 0u64..1_000_000) {
        check(common::jobs_determinism(seed))?;
    }
}
