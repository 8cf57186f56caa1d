#![no_main]

use gcsent::parse::parse_complex;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(z) = parse_complex(s) {
        assert!(z.re.is_finite() && z.im.is_finite());
        let back = parse_complex(&format!("{:e}{:+e}i", z.re, z.im)).unwrap();
        assert_eq!(back, z);
    }
});
