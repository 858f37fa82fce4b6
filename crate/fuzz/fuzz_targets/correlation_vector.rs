#![no_main]

use libfuzzer_sys::fuzz_target;
use qcorr_core::{analyze, CorrelationVector};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(c) = text.parse::<CorrelationVector>() else {
        return;
    };
    let back: CorrelationVector = c.to_string().parse().expect("rendered vector parses");
    assert_eq!(
        back.components().map(f64::to_bits),
        c.components().map(f64::to_bits),
        "{text:?}"
    );
    // A report or an unphysical-state error, never a panic.
    let _ = analyze(&c);
});
