use crate::cyclotomic::Entry;
use crate::error::{CgwError, Result};
use crate::matrix::GwMatrix;
use crate::numtheory::{is_prime, least_primitive_root};

use super::checked;

/// Generalized Paley matrix `CGW(q+1, q; p)` for primes `p | q - 1`.
///
/// The core is `circ(φ(0), …, φ(q-1))` where `φ(x^j) = ζ_p^j` for the least
/// primitive root `x` mod `q` and `φ(0) = 0`; it is bordered by a zero corner
/// and all-ones first row and column.
pub fn paley_cgw(q: u32, p: u32) -> Result<GwMatrix> {
    if !is_prime(q as u64) {
        return Err(CgwError::Precondition(format!("q={q} is not prime")));
    }
    if !is_prime(p as u64) {
        return Err(CgwError::Precondition(format!("p={p} is not prime")));
    }
    if !(q - 1).is_multiple_of(p) {
        return Err(CgwError::Precondition(format!(
            "p={p} does not divide q-1={}",
            q - 1
        )));
    }
    let x = least_primitive_root(q as u64).expect("q is prime") as u32;
    // phi[y] for y in Z_q
    let mut phi = vec![Entry::Zero; q as usize];
    let mut y = 1u32;
    for j in 0..q - 1 {
        phi[y as usize] = Entry::Root(j % p);
        y = y * x % q;
    }
    let n = q as usize + 1;
    let mut w = GwMatrix::zeros(n, p);
    for j in 1..n {
        w.set(0, j, Entry::ONE);
        w.set(j, 0, Entry::ONE);
    }
    for i in 0..q as usize {
        for j in 0..q as usize {
            let diff = (j + q as usize - i) % q as usize;
            w.set(i + 1, j + 1, phi[diff]);
        }
    }
    checked(w, "paley", n, q, p)
}
