//! Periodic complementary pairs and the 2×2 block construction built on them.

use std::collections::HashMap;

use crate::cyclotomic::{phased_shift, ppaf, ring, Entry};
use crate::error::{CgwError, Result};
use crate::matrix::GwMatrix;

use super::checked;

/// The `α`-circulant with first row `a`: row `i` is `a C_α^i`.
pub fn alpha_circulant(a: &[Entry], k: u32, alpha: Entry) -> Result<GwMatrix> {
    if alpha.is_zero() {
        return Err(CgwError::Precondition("alpha must be nonzero".into()));
    }
    let v = a.len();
    let mut rows = Vec::with_capacity(v);
    rows.push(a.to_vec());
    for s in 1..v {
        rows.push(phased_shift(a, k, alpha, s));
    }
    GwMatrix::from_rows(k, rows)
}

/// Do the `α`-phased periodic autocorrelations of `a` and `b` cancel at every
/// nonzero shift?
pub fn is_complementary(a: &[Entry], b: &[Entry], k: u32, alpha: Entry) -> Result<bool> {
    if a.len() != b.len() {
        return Err(CgwError::Precondition("sequences differ in length".into()));
    }
    for s in 1..a.len() {
        let sum = ppaf(a, k, alpha, s)?.add(&ppaf(b, k, alpha, s)?)?;
        if !sum.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_entries(seq: &[Entry], k: u32) -> Result<()> {
    match seq.iter().find(|e| e.exponent().is_some_and(|x| x >= k)) {
        Some(e) => Err(CgwError::Range(format!("entry {e:?} is not in U_{k}"))),
        None => Ok(()),
    }
}

/// `[[A, B], [-B^*, A^*]]` from a complementary pair; `CGW(2v, w_a + w_b; k)`
/// for even `k`, and over `U_{2k}` for odd `k`.
pub fn wppgp_to_cgw(a: &[Entry], b: &[Entry], k: u32, alpha: Entry) -> Result<GwMatrix> {
    check_entries(a, k)?;
    check_entries(b, k)?;
    check_entries(&[alpha], k)?;
    if !is_complementary(a, b, k, alpha)? {
        return Err(CgwError::Precondition(
            "sequences are not an alpha-phased periodic complementary pair".into(),
        ));
    }
    let (kk, f) = if k.is_multiple_of(2) {
        (k, 1)
    } else {
        (2 * k, 2)
    };
    let up = |s: &[Entry]| s.iter().map(|e| e.embed(f)).collect::<Vec<_>>();
    let alpha = alpha.embed(f);
    let am = alpha_circulant(&up(a), kk, alpha)?;
    let bm = alpha_circulant(&up(b), kk, alpha)?;
    let v = a.len();
    let mut w = GwMatrix::zeros(2 * v, kk);
    for i in 0..v {
        for j in 0..v {
            w.set(i, j, am.get(i, j));
            w.set(i, v + j, bm.get(i, j));
            w.set(v + i, j, bm.get(j, i).conj(kk).neg(kk));
            w.set(v + i, v + j, am.get(j, i).conj(kk));
        }
    }
    let weight = a.iter().chain(b).filter(|e| !e.is_zero()).count() as u32;
    checked(w, "wppgp", 2 * v, weight, kk)
}

/// Aperiodic complementarity of two `{0, ±1}` sequences.
pub fn is_ternary_golay(a: &[i8], b: &[i8]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    (1..n).all(|s| {
        let c: i64 = (0..n - s)
            .map(|j| (a[j] * a[j + s]) as i64 + (b[j] * b[j + s]) as i64)
            .sum();
        c == 0
    })
}

/// Embed a ternary Golay pair into `U_k` (`k` even) and build the block
/// matrix with phase `α`.
pub fn ternary_to_cgw(a: &[i8], b: &[i8], k: u32, alpha: Entry) -> Result<GwMatrix> {
    if !k.is_multiple_of(2) {
        return Err(CgwError::Precondition(format!("k={k} must be even")));
    }
    if a.iter().chain(b).any(|&x| !(-1..=1).contains(&x)) {
        return Err(CgwError::Precondition(
            "entries must lie in {0, 1, -1}".into(),
        ));
    }
    if !is_ternary_golay(a, b) {
        return Err(CgwError::Precondition("not a ternary Golay pair".into()));
    }
    let map = |s: &[i8]| -> Vec<Entry> {
        s.iter()
            .map(|&x| match x {
                0 => Entry::Zero,
                1 => Entry::ONE,
                _ => Entry::Root(k / 2),
            })
            .collect()
    };
    wppgp_to_cgw(&map(a), &map(b), k, alpha)
}

/// Parameters for an exhaustive meet-in-the-middle search for complementary
/// pairs of length `v` over `U_k` with total weight `weight`.
#[derive(Debug, Clone)]
pub struct PairSearch {
    pub k: u32,
    pub v: usize,
    pub alpha: Entry,
    pub weight: usize,
    /// Stop after this many pairs.
    pub limit: usize,
}

/// All normalised sequences (first nonzero entry `1`) of length `v` and
/// weight `w` over `U_k`.
fn normalized_sequences(v: usize, w: usize, k: u32) -> Vec<Vec<Entry>> {
    let mut out = Vec::new();
    if w == 0 {
        out.push(vec![Entry::Zero; v]);
        return out;
    }
    let mut support = Vec::with_capacity(w);
    fn rec(
        start: usize,
        v: usize,
        w: usize,
        k: u32,
        support: &mut Vec<usize>,
        out: &mut Vec<Vec<Entry>>,
    ) {
        if support.len() == w {
            let free = w - 1;
            let total = (k as u64).pow(free as u32);
            for mut t in 0..total {
                let mut seq = vec![Entry::Zero; v];
                seq[support[0]] = Entry::ONE;
                for &pos in &support[1..] {
                    seq[pos] = Entry::Root((t % k as u64) as u32);
                    t /= k as u64;
                }
                out.push(seq);
            }
            return;
        }
        for pos in start..v {
            if v - pos < w - support.len() {
                break;
            }
            support.push(pos);
            rec(pos + 1, v, w, k, support, out);
            support.pop();
        }
    }
    rec(0, v, w, k, &mut support, &mut out);
    out
}

fn ppaf_key(a: &[Entry], k: u32, alpha: Entry, negate: bool) -> Vec<i64> {
    let r = ring(k);
    let mut key = Vec::new();
    for s in 1..a.len() {
        let mut c = ppaf(a, k, alpha, s).expect("valid shift").coeffs().to_vec();
        if negate {
            c.iter_mut().for_each(|x| *x = -*x);
        }
        key.extend(r.reduce(&c));
    }
    key
}

/// Complementary pairs `(a, b)` with both sequences normalised so their first
/// nonzero entry is `1`, in deterministic order.
pub fn find_periodic_pairs(search: &PairSearch) -> Vec<(Vec<Entry>, Vec<Entry>)> {
    let PairSearch {
        k,
        v,
        alpha,
        weight,
        limit,
    } = *search;
    let mut found = Vec::new();
    if v < 2 || weight > 2 * v {
        return found;
    }
    for wa in weight.saturating_sub(v)..=weight.min(v) {
        let wb = weight - wa;
        let mut table: HashMap<Vec<i64>, Vec<Vec<Entry>>> = HashMap::new();
        for a in normalized_sequences(v, wa, k) {
            table
                .entry(ppaf_key(&a, k, alpha, false))
                .or_default()
                .push(a);
        }
        for b in normalized_sequences(v, wb, k) {
            if let Some(list) = table.get(&ppaf_key(&b, k, alpha, true)) {
                for a in list {
                    found.push((a.clone(), b.clone()));
                    if found.len() >= limit {
                        return found;
                    }
                }
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[Option<u32>]) -> Vec<Entry> {
        v.iter()
            .map(|e| e.map_or(Entry::Zero, Entry::Root))
            .collect()
    }

    #[test]
    fn table_example_pair() {
        let a = seq(&[Some(0), Some(1), Some(0), None, None]);
        let b = seq(&[Some(0), Some(2), Some(2), None, None]);
        let m = wppgp_to_cgw(&a, &b, 4, Entry::ONE).unwrap();
        assert_eq!((m.n(), m.verify().weight, m.k()), (10, Some(6), 4));
    }

    #[test]
    fn golay_pair_gives_hadamard() {
        let a = seq(&[Some(0), Some(0)]);
        let b = seq(&[Some(0), Some(1)]);
        let m = wppgp_to_cgw(&a, &b, 2, Entry::ONE).unwrap();
        assert_eq!((m.n(), m.verify().weight), (4, Some(4)));
        assert!(wppgp_to_cgw(&a, &a, 2, Entry::ONE).is_err());
    }

    #[test]
    fn odd_k_moves_to_2k() {
        // (1), (1) at length 1 is trivially complementary
        let a = seq(&[Some(1)]);
        let b = seq(&[Some(2)]);
        let m = wppgp_to_cgw(&a, &b, 3, Entry::ONE).unwrap();
        assert_eq!((m.n(), m.verify().weight, m.k()), (2, Some(2), 6));
    }

    #[test]
    fn ternary_pairs() {
        assert!(is_ternary_golay(&[1, 1], &[1, -1]));
        assert!(!is_ternary_golay(&[1, 1], &[1, 1]));
        let (a, b) = ([1, 1, -1], [1, 0, 1]);
        assert!(is_ternary_golay(&a, &b));
        for k in [2, 4, 6] {
            for e in 0..k {
                let m = ternary_to_cgw(&a, &b, k, Entry::Root(e)).unwrap();
                assert_eq!((m.n(), m.verify().weight), (6, Some(5)));
            }
        }
    }

    #[test]
    fn search_recovers_example_class() {
        let found = find_periodic_pairs(&PairSearch {
            k: 4,
            v: 5,
            alpha: Entry::ONE,
            weight: 6,
            limit: usize::MAX,
        });
        assert!(!found.is_empty());
        for (a, b) in &found {
            assert!(is_complementary(a, b, 4, Entry::ONE).unwrap());
        }
    }
}
