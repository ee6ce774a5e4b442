mod support;

use csl_cli::dsl::{parse_spec, print_spec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn parse_print_parse(text in support::spec_text()) {
        let spec = parse_spec(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        let printed = print_spec(&spec);
        let again = parse_spec(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert!(spec == again, "round trip changed the spec:\n{}\n---\n{}", text, printed);
        prop_assert_eq!(print_spec(&again), printed);
    }
}
