#![no_main]

use libfuzzer_sys::fuzz_target;
use rb_core::encode::{parse_dimacs_str, write_dimacs_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cnf) = parse_dimacs_str(text) {
        let again = parse_dimacs_str(&write_dimacs_string(&cnf)).expect("written CNF must parse");
        assert!(again.same_formula(&cnf));
    }
});
