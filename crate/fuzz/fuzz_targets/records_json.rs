#![no_main]

use libfuzzer_sys::fuzz_target;
use rb_core::harness::{from_json_str, to_json_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(records) = from_json_str(text) {
        let written = to_json_string(&records).expect("records must serialize");
        from_json_str(&written).expect("written JSON must load");
    }
});
