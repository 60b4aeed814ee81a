#![no_main]

use libfuzzer_sys::fuzz_target;
use rb_core::harness::{from_csv_str, to_csv_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(records) = from_csv_str(text) {
        let written = to_csv_string(&records).expect("records must serialize");
        let again = from_csv_str(&written).expect("written CSV must load");
        // NaN fields compare unequal, so compare the text instead.
        assert_eq!(to_csv_string(&again).unwrap(), written);
    }
});
