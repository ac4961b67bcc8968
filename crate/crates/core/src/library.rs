//! Bundled data: witness matrices, support matrices and reference grids.

use crate::error::{CgwError, Result};
use crate::format::{parse_matrix, MatrixFile};
use crate::matrix::Support;

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/witnesses/", $name, ".cgw")))),*]
    };
}

static WITNESSES: &[(&str, &str)] = bundle![
    "bh_6_4",
    "bh_10_5",
    "bh_10_6",
    "cgw_12_10_6",
    "bh_18_4",
    "w_7_4",
    "w_11_4",
    "w_13_4",
    "w_15_4",
    "w_15_9",
    "bh_6_3",
    "bh_12_3",
    "bh_7_6",
    "cgw_15_7_3",
    "bh_13_6",
    "cgw_9_7_6",
    "cgw_11_9_6",
];

static GRIDS: &[(u32, &str)] = &[
    (2, include_str!("../data/grids/k2.txt")),
    (3, include_str!("../data/grids/k3.txt")),
    (4, include_str!("../data/grids/k4.txt")),
    (5, include_str!("../data/grids/k5.txt")),
    (6, include_str!("../data/grids/k6.txt")),
];

static SBIBD_11_5_2: &str = include_str!("../data/supports/sbibd_11_5_2.cgw");

/// Names of all bundled witness matrices.
pub fn witness_names() -> impl Iterator<Item = &'static str> {
    WITNESSES.iter().map(|(n, _)| *n)
}

/// Raw text of a bundled witness.
pub fn witness_text(name: &str) -> Result<&'static str> {
    WITNESSES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| CgwError::Precondition(format!("no bundled witness named `{name}`")))
}

/// A bundled witness, parsed and checked against its declared weight.
pub fn witness(name: &str) -> Result<MatrixFile> {
    let f = parse_matrix(witness_text(name)?)?;
    let r = f.matrix.verify();
    if r.weight != Some(f.declared_weight) {
        return Err(CgwError::Construction(format!(
            "bundled witness `{name}` does not verify as weight {}",
            f.declared_weight
        )));
    }
    Ok(f)
}

/// The recipe recorded in a witness's `# recipe:` comment, if any.
pub fn witness_recipe(f: &MatrixFile) -> Option<&str> {
    f.comments
        .iter()
        .find_map(|c| c.trim().strip_prefix("recipe:"))
        .map(str::trim)
}

/// Published existence grid for `k`, in the triangular text layout.
pub fn reference_grid_text(k: u32) -> Result<&'static str> {
    GRIDS
        .iter()
        .find(|(g, _)| *g == k)
        .map(|(_, t)| *t)
        .ok_or_else(|| CgwError::Precondition(format!("no reference grid for k={k}")))
}

/// Incidence matrix of the unique symmetric `(11, 5, 2)` design.
pub fn sbibd_11_5_2() -> Support {
    parse_matrix(SBIBD_11_5_2)
        .expect("bundled support parses")
        .matrix
        .support()
}
