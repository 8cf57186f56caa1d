#![no_main]

use gcsent::{Family, Variant};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = s.parse::<Family>() {
        assert_eq!(f.id().parse::<Family>().unwrap(), f);
    }
    if let Ok(v) = s.parse::<Variant>() {
        assert_eq!(v.id().parse::<Variant>().unwrap(), v);
    }
});
