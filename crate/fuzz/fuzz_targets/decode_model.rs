#![no_main]

use libfuzzer_sys::fuzz_target;
use rb_core::encode::{bits_per_var, decode_assignment, encode_assignment};
use rb_core::{derive_params_with_domain, Density};

// First byte picks d, second n; the rest are model bits.
fuzz_target!(|data: &[u8]| {
    let [d, n, bits @ ..] = data else { return };
    let d = u32::from(*d).max(2);
    let n = usize::from(*n % 32).max(2);
    let Ok(params) = derive_params_with_domain(n, d, 0.5, 2, 0, Density::Threshold) else {
        return;
    };
    let model: Vec<bool> = bits.iter().map(|b| b & 1 == 1).collect();
    if let Ok(values) = decode_assignment(&model, &params) {
        assert_eq!(model.len(), n * bits_per_var(d));
        assert!(values.iter().all(|&v| v < d));
        assert_eq!(encode_assignment(&values, d), model);
    }
});
