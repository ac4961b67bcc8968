use crate::cyclotomic::Entry;
use crate::error::{CgwError, Result};
use crate::gf::{FieldCtx, FieldElt};
use crate::matrix::GwMatrix;
use crate::numtheory::is_prime;

use super::checked;

/// Largest order the affine-geometry construction will build.
pub const BERMAN_MAX_ORDER: u64 = 10_000;

/// Berman's affine-geometry matrix in `CGW((p^{tn}-1)/r, p^{(t-1)n}; d)`.
///
/// Points and hyperplanes `u·x = 1` of `GF(p^n)^t` away from the origin are
/// grouped into orbits under `x ↦ λx`, `λ` of multiplicative order `r`. Each
/// orbit is indexed by its lexicographically least member. Entry `(i, j)` is
/// `ζ_d^h` where `λ^h x_j` lies on `u_i`, or zero when no point of the orbit
/// of `x_j` does.
pub fn berman_cgw(p: u32, n: u32, t: u32, r: u32, d: u32) -> Result<GwMatrix> {
    if !is_prime(p as u64) {
        return Err(CgwError::Precondition(format!("p={p} is not prime")));
    }
    if n == 0 || t < 2 {
        return Err(CgwError::Precondition("need n >= 1 and t >= 2".into()));
    }
    let field_order = (p as u64).pow(n);
    if r == 0 || !(field_order - 1).is_multiple_of(r as u64) {
        return Err(CgwError::Precondition(format!(
            "r={r} does not divide p^n-1={}",
            field_order - 1
        )));
    }
    if d < 2 || !r.is_multiple_of(d) {
        return Err(CgwError::Precondition(format!(
            "need d > 1 dividing r, got d={d}, r={r}"
        )));
    }
    let points = field_order
        .checked_pow(t)
        .ok_or_else(|| CgwError::Precondition("size overflow".into()))?
        - 1;
    let order = points / r as u64;
    if order > BERMAN_MAX_ORDER {
        return Err(CgwError::Precondition(format!(
            "order {order} exceeds the bound {BERMAN_MAX_ORDER}"
        )));
    }
    let field = FieldCtx::new(p, n)?;
    let q = field_order as u32;
    let lambda = field.exp((field_order - 1) / r as u64);
    let coset = (field_order - 1) / r as u64;

    let decode = |mut idx: u64| -> Vec<FieldElt> {
        // first coordinate is the most significant digit
        let mut v = vec![FieldElt::ZERO; t as usize];
        for slot in v.iter_mut().rev() {
            *slot = FieldElt((idx % q as u64) as u32);
            idx /= q as u64;
        }
        v
    };
    let encode = |v: &[FieldElt]| v.iter().fold(0u64, |acc, x| acc * q as u64 + x.0 as u64);

    // orbit representatives in lexicographic order
    let mut seen = vec![false; points as usize + 1];
    let mut reps = Vec::with_capacity(order as usize);
    for idx in 1..=points {
        if seen[idx as usize] {
            continue;
        }
        let x = decode(idx);
        reps.push(x.clone());
        let mut y = x;
        for _ in 0..r {
            seen[encode(&y) as usize] = true;
            y = y.iter().map(|&c| field.mul(c, lambda)).collect();
        }
    }
    debug_assert_eq!(reps.len() as u64, order);

    let m = reps.len();
    let mut a = GwMatrix::zeros(m, d);
    for (i, u) in reps.iter().enumerate() {
        for (j, x) in reps.iter().enumerate() {
            let s = u.iter().zip(x).fold(FieldElt::ZERO, |acc, (&ui, &xi)| {
                field.add(acc, field.mul(ui, xi))
            });
            if s.is_zero() {
                continue;
            }
            let ind = field.ind(s)? as u64;
            if !ind.is_multiple_of(coset) {
                continue;
            }
            // s = λ^c, and λ^h x lies on u iff λ^h s = 1
            let c = ind / coset;
            let h = (r as u64 - c % r as u64) % r as u64;
            a.set(i, j, Entry::Root((h % d as u64) as u32));
        }
    }
    let w = (p as u64).pow((t - 1) * n) as u32;
    checked(a, "berman", m, w, d)
}
