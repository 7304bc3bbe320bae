//! Shared inputs for the kernel benchmarks.

use dirforms::{FormParams, PrecisionSpec};

/// Parameter sets used across benches: small, medium and the largest cross-check case.
pub fn form_cases() -> Vec<FormParams> {
    vec![
        FormParams::new(1, 5, 1, 3).unwrap(),
        FormParams::new(3, 6, 2, 4).unwrap(),
        FormParams::new(4, 8, 3, 6).unwrap(),
    ]
}

pub fn precision(digits: u32) -> PrecisionSpec {
    PrecisionSpec::new(digits).unwrap()
}
