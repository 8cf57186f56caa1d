#![no_main]

use gcsent::table::{read_rows, to_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = read_rows(data) {
        // anything accepted re-encodes to a file that decodes to the same rows
        let text = to_string(&rows).unwrap();
        let again = read_rows(text.as_bytes()).unwrap();
        assert_eq!(to_string(&again).unwrap(), text);
    }
});
