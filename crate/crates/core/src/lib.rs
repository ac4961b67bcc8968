//! Complex generalized weighing matrices `CGW(n, w; k)`: exact arithmetic,
//! constructions, non-existence rules, the lifting search, and the passage to
//! Hermitian self-orthogonal codes and quantum code parameters.

pub mod codes;
pub mod constructions;
pub mod cyclotomic;
pub mod error;
pub mod format;
pub mod gf;
pub mod library;
pub mod lifting;
pub mod matrix;
pub mod nonexistence;
pub mod numtheory;
pub mod quantum;
pub mod tables;

pub use cyclotomic::{lam_leung_feasible, ppaf, CycElt, Entry};
pub use error::{CgwError, Result};
pub use format::{matrix_to_text, parse_matrix, MatrixFile};
pub use gf::{FieldCtx, FieldElt};
pub use matrix::{GwMatrix, Support, VerifyReport};
