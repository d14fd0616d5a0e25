//! Printing then parsing any expression gives back the same tree.

use proptest::prelude::*;
use qmf_cli::expr::parse;

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("E2".to_string()),
        Just("E4".to_string()),
        Just("E6".to_string()),
        Just("Delta".to_string()),
        Just("j".to_string()),
        (0u32..50).prop_map(|n| n.to_string()),
        (1u32..20, 1u32..9).prop_map(|(a, b)| format!("{a}/{b}")),
        (0u32..20, 1u32..99).prop_map(|(a, b)| format!("{a}.{b:02}")),
    ]
}

fn expr() -> impl Strategy<Value = String> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/({b})")),
            inner.clone().prop_map(|a| format!("-({a})")),
            (inner.clone(), -3i64..4).prop_map(|(a, n)| format!("({a})^{n}")),
            inner.clone().prop_map(|a| format!("D({a})")),
            (inner.clone(), 1u32..4).prop_map(|(a, n)| format!("D^{n}({a})")),
            inner.clone().prop_map(|a| format!("theta({a})")),
            (inner.clone(), inner.clone(), 0u32..4).prop_map(|(a, b, n)| format!("rc({a}, {b}, {n})")),
            (inner.clone(), inner, 0u32..4).prop_map(|(a, b, n)| format!("src({a}, {b}, {n})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(src in expr()) {
        let e = parse(&src).unwrap();
        let printed = e.to_string();
        let back = parse(&printed).unwrap();
        prop_assert_eq!(&e, &back, "{} printed as {}", src, printed);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn parse_never_panics(src in "[ -~]{0,24}") {
        let _ = parse(&src);
    }
}
