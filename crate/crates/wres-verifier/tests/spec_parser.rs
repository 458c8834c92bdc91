use proptest::prelude::*;
use wres_verifier::{parse_spec, CheckKind, SuiteSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Arbitrary input either parses or reports a position inside the text.
    #[test]
    fn errors_point_into_the_input(text in "[a-z_ =\\[\\],0-9#\n]{0,80}") {
        if let Err(e) = parse_spec(&text) {
            let lines: Vec<&str> = text.split('\n').collect();
            prop_assert!(e.line >= 1 && e.line <= lines.len(), "{:?}", e);
            prop_assert!(e.col >= 1 && e.col <= lines[e.line - 1].chars().count() + 1, "{:?}", e);
        }
    }

    #[test]
    fn check_subsets_round_trip(mask in 1u32..256, seed in 0u64..1_000_000) {
        let chosen: Vec<CheckKind> = CheckKind::ALL.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, c)| *c).collect();
        let names: Vec<&str> = chosen.iter().map(|c| c.name()).collect();
        let spec = parse_spec(&format!("checks = [{}]\nseed = {}\n", names.join(", "), seed)).unwrap();
        prop_assert_eq!(spec.checks.into_iter().collect::<Vec<_>>(), chosen);
        prop_assert_eq!(spec.seed, seed);
    }
}

#[test]
fn empty_spec_is_default() {
    assert_eq!(parse_spec("").unwrap(), SuiteSpec::default());
    assert_eq!(parse_spec("# comment only\n\n").unwrap(), SuiteSpec::default());
}
