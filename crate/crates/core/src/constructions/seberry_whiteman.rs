use crate::cyclotomic::Entry;
use crate::error::{CgwError, Result};
use crate::gf::{FieldCtx, FieldElt};
use crate::matrix::GwMatrix;
use crate::numtheory::prime_power;

use super::checked;

/// First rows `(r, s)` of the circulants `R`, `S`, over `U_4`.
///
/// With `τ` the least primitive element of `GF(q²)` and `γ = τ^{(q+1)/2}`,
/// write `τ^j = α_j γ + β_j` over the subfield of order `q`; then
/// `r_j = χ(α_{8j})`, `s_j = χ(β_{8j})` where `χ(x) = ζ_8^{ind x}`. On the
/// subfield `ind` is a multiple of `q + 1`, hence even, so `χ` lands in `U_4`.
pub fn sw_sequences(q: u32) -> Result<(Vec<Entry>, Vec<Entry>)> {
    let (p, e) = prime_power(q as u64)
        .ok_or_else(|| CgwError::Precondition(format!("q={q} is not a prime power")))?;
    if q % 8 != 1 {
        return Err(CgwError::Precondition(format!("q={q} is not 1 mod 8")));
    }
    let f = FieldCtx::new(p as u32, 2 * e)?;
    let n = (q as u64).div_ceil(2);
    let gamma = f.exp(n);
    let gamma_q = f.frobenius(gamma)?;
    let denom = f.sub(gamma, gamma_q);
    let chi = |x: FieldElt| -> Result<Entry> {
        if x.is_zero() {
            return Ok(Entry::Zero);
        }
        let t = f.ind(x)?;
        debug_assert!(t % 2 == 0);
        Ok(Entry::Root((t % 8) / 2))
    };
    let mut r = Vec::with_capacity(n as usize);
    let mut s = Vec::with_capacity(n as usize);
    for j in 0..n {
        let x = f.exp(8 * j);
        let alpha = f.div(f.sub(x, f.frobenius(x)?), denom)?;
        let beta = f.sub(x, f.mul(alpha, gamma));
        r.push(chi(alpha)?);
        s.push(chi(beta)?);
    }
    Ok((r, s))
}

/// `[[R, S], [S^*, -R^*]]` in `CGW(q+1, q; 4)` for prime powers `q ≡ 1 mod 8`.
pub fn sw_cgw(q: u32) -> Result<GwMatrix> {
    if (q as u64) * (q as u64) > crate::gf::MAX_FIELD_ORDER {
        return Err(CgwError::Precondition(format!(
            "q={q} exceeds the field size bound"
        )));
    }
    let (r, s) = sw_sequences(q)?;
    let n = r.len();
    let k = 4;
    let mut w = GwMatrix::zeros(2 * n, k);
    for i in 0..n {
        for j in 0..n {
            let d = (j + n - i) % n;
            w.set(i, j, r[d]);
            w.set(i, n + j, s[d]);
            // (S^*)_{ij} = conj(S_{ji}), S_{ji} = s[(i - j) mod n]
            let t = (i + n - j) % n;
            w.set(n + i, j, s[t].conj(k));
            w.set(n + i, n + j, r[t].conj(k).neg(k));
        }
    }
    checked(w, "seberry-whiteman", 2 * n, q, k)
}
