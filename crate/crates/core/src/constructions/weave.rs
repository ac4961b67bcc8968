use crate::error::{CgwError, Result};
use crate::matrix::GwMatrix;
use crate::numtheory::lcm32;

use super::{checked, weight_of};

/// Craigen's weaving.
///
/// `mask` is an `m × n` 0/1 matrix; `a[i]` must have order equal to the sum
/// of row `i` and `b[j]` order equal to the sum of column `j`. All `a[i]`
/// share one weight and all `b[j]` another. The `(i, j)` block is the rank
/// one product `a[i][·, p] · b[j][q, ·]` where cell `(i, j)` is the `p`-th one
/// of its row and the `q`-th one of its column.
pub fn weave(mask: &[Vec<bool>], a: &[GwMatrix], b: &[GwMatrix]) -> Result<GwMatrix> {
    let m = mask.len();
    let n = mask.first().map_or(0, |r| r.len());
    if m == 0 || n == 0 || mask.iter().any(|r| r.len() != n) {
        return Err(CgwError::Precondition(
            "mask must be a nonempty rectangle".into(),
        ));
    }
    if a.len() != m || b.len() != n {
        return Err(CgwError::Precondition(format!(
            "need {m} row matrices and {n} column matrices, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let rows: Vec<usize> = mask
        .iter()
        .map(|r| r.iter().filter(|&&x| x).count())
        .collect();
    let cols: Vec<usize> = (0..n)
        .map(|j| mask.iter().filter(|r| r[j]).count())
        .collect();
    let wa = weight_of(&a[0], "A_1")?;
    let wb = weight_of(&b[0], "B_1")?;
    let mut k = 1;
    for (i, ai) in a.iter().enumerate() {
        if ai.n() != rows[i] || weight_of(ai, "A_i")? != wa {
            return Err(CgwError::Precondition(format!(
                "A_{} must be a CGW({},{wa};·)",
                i + 1,
                rows[i]
            )));
        }
        k = lcm32(k, ai.k());
    }
    for (j, bj) in b.iter().enumerate() {
        if bj.n() != cols[j] || weight_of(bj, "B_j")? != wb {
            return Err(CgwError::Precondition(format!(
                "B_{} must be a CGW({},{wb};·)",
                j + 1,
                cols[j]
            )));
        }
        k = lcm32(k, bj.k());
    }
    let a = a.iter().map(|x| x.embed(k)).collect::<Result<Vec<_>>>()?;
    let b = b.iter().map(|x| x.embed(k)).collect::<Result<Vec<_>>>()?;
    let sigma: usize = rows.iter().sum();
    let row_off: Vec<usize> = rows
        .iter()
        .scan(0, |s, &r| {
            let o = *s;
            *s += r;
            Some(o)
        })
        .collect();
    let col_off: Vec<usize> = cols
        .iter()
        .scan(0, |s, &c| {
            let o = *s;
            *s += c;
            Some(o)
        })
        .collect();
    let mut out = GwMatrix::zeros(sigma, k);
    let mut col_seen = vec![0usize; n];
    for i in 0..m {
        let mut p = 0;
        for j in 0..n {
            if !mask[i][j] {
                continue;
            }
            let q = col_seen[j];
            for r in 0..rows[i] {
                let x = a[i].get(r, p);
                for c in 0..cols[j] {
                    out.set(row_off[i] + r, col_off[j] + c, x.mul(b[j].get(q, c), k));
                }
            }
            p += 1;
            col_seen[j] += 1;
        }
    }
    checked(out, "weave", sigma, wa * wb, k)
}
