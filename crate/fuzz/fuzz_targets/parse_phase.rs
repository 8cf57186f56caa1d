#![no_main]

use gcsent::parse::{parse_phase, parse_phase_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(phi) = parse_phase(s) {
        assert!(phi.is_finite());
        // radians print and re-parse exactly
        assert_eq!(parse_phase(&phi.to_string()).unwrap(), phi);
    }
    if let Ok(list) = parse_phase_list(s) {
        assert!(!list.is_empty() && list.iter().all(|p| p.is_finite()));
    }
});
