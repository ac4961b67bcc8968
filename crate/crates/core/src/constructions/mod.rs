//! Direct and recursive constructions. Every public constructor verifies its
//! output exactly before returning it.

mod berman;
mod paley;
mod recipe;
mod recursive;
mod seberry_whiteman;
mod sequences;
mod weave;

pub use berman::berman_cgw;
pub use paley::paley_cgw;
pub use recipe::{Recipe, RecipeArg};
pub use recursive::{border_pair, direct_sum, dita, kronecker};
pub use seberry_whiteman::{sw_cgw, sw_sequences};
pub use sequences::{
    alpha_circulant, find_periodic_pairs, is_complementary, is_ternary_golay, ternary_to_cgw,
    wppgp_to_cgw, PairSearch,
};
pub use weave::weave;

use crate::error::{CgwError, Result};
use crate::matrix::GwMatrix;

/// Reject anything that is not a `CGW(n, w; k)` with the stated parameters.
pub(crate) fn checked(m: GwMatrix, what: &str, n: usize, w: u32, k: u32) -> Result<GwMatrix> {
    let report = m.verify();
    if !report.ok {
        return Err(CgwError::Construction(format!(
            "{what}: {}",
            report
                .first_failure
                .map(|f| f.to_string())
                .unwrap_or_default()
        )));
    }
    if m.n() != n || report.weight != Some(w) || m.k() != k {
        return Err(CgwError::Construction(format!(
            "{what}: expected CGW({n},{w};{k}), got CGW({},{};{})",
            m.n(),
            report.weight.unwrap_or(0),
            m.k()
        )));
    }
    Ok(m)
}

pub(crate) fn weight_of(m: &GwMatrix, what: &str) -> Result<u32> {
    let r = m.verify();
    r.weight.ok_or_else(|| {
        CgwError::Precondition(format!(
            "{what} is not a CGW: {}",
            r.first_failure.map(|f| f.to_string()).unwrap_or_default()
        ))
    })
}
