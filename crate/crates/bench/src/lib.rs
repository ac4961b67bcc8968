//! Shared inputs for the criterion benches.

use cgw_core::codes::{cgw_to_code, field_for_k, LinearCode};
use cgw_core::library::witness;
use cgw_core::GwMatrix;

pub fn bundled(name: &str) -> GwMatrix {
    witness(name).expect("bundled witness").matrix
}

/// The `[12,6]` code over GF(25) from the bundled `CGW(12,10;6)`.
pub fn code_12_6() -> LinearCode {
    let m = bundled("cgw_12_10_6");
    cgw_to_code(&m, &field_for_k(6).expect("k=6 is supported")).expect("embeds")
}
