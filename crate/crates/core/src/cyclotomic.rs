//! Exact arithmetic in the cyclotomic integers `Z[ζ_k]`.
//!
//! Elements are stored as full length-`k` coefficient vectors over the powers
//! `1, ζ, …, ζ^{k-1}`. The representation is not unique (the powers are
//! linearly dependent); equality is decided by reducing modulo the cyclotomic
//! polynomial `Φ_k`, which happens only inside the zero test.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{CgwError, Result};
use crate::numtheory::{divisors, prime_divisors};

/// An element of `U_k = {0} ∪ ⟨ζ_k⟩`: zero or a power of the primitive root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Zero,
    Root(u32),
}

impl Entry {
    pub const ONE: Entry = Entry::Root(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        matches!(self, Entry::Zero)
    }

    #[inline]
    pub fn exponent(self) -> Option<u32> {
        match self {
            Entry::Zero => None,
            Entry::Root(e) => Some(e),
        }
    }

    /// Complex conjugate inside `U_k`.
    #[inline]
    pub fn conj(self, k: u32) -> Entry {
        match self {
            Entry::Zero => Entry::Zero,
            Entry::Root(e) => Entry::Root((k - e % k) % k),
        }
    }

    #[inline]
    pub fn mul(self, other: Entry, k: u32) -> Entry {
        match (self, other) {
            (Entry::Root(a), Entry::Root(b)) => Entry::Root((a + b) % k),
            _ => Entry::Zero,
        }
    }

    /// Multiply by `-1`, which must lie in `U_k` (that is, `k` even).
    #[inline]
    pub fn neg(self, k: u32) -> Entry {
        debug_assert!(k.is_multiple_of(2));
        match self {
            Entry::Zero => Entry::Zero,
            Entry::Root(e) => Entry::Root((e + k / 2) % k),
        }
    }

    /// Re-express an element of `U_k` inside `U_{k*factor}`.
    #[inline]
    pub fn embed(self, factor: u32) -> Entry {
        match self {
            Entry::Zero => Entry::Zero,
            Entry::Root(e) => Entry::Root(e * factor),
        }
    }
}

/// Exact element of `Z[ζ_k]`; `coeffs[j]` is the coefficient of `ζ_k^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycElt {
    k: u32,
    coeffs: Vec<i64>,
}

impl CycElt {
    pub fn zero(k: u32) -> Self {
        assert!(k >= 1, "root order must be positive");
        CycElt {
            k,
            coeffs: vec![0; k as usize],
        }
    }

    pub fn one(k: u32) -> Self {
        Self::root(k, 0)
    }

    /// `ζ_k^e`.
    pub fn root(k: u32, e: u32) -> Self {
        let mut z = Self::zero(k);
        z.coeffs[(e % k) as usize] = 1;
        z
    }

    pub fn from_entry(k: u32, entry: Entry) -> Self {
        match entry {
            Entry::Zero => Self::zero(k),
            Entry::Root(e) => Self::root(k, e),
        }
    }

    pub fn from_coeffs(k: u32, coeffs: Vec<i64>) -> Result<Self> {
        if k == 0 || coeffs.len() != k as usize {
            return Err(CgwError::Range(format!(
                "expected {k} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CycElt { k, coeffs })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Add `c·ζ^e` in place.
    pub fn add_term(&mut self, e: u32, c: i64) {
        let slot = &mut self.coeffs[(e % self.k) as usize];
        *slot = slot
            .checked_add(c)
            .expect("cyclotomic coefficient overflow");
    }

    fn check(&self, other: &CycElt) -> Result<()> {
        if self.k != other.k {
            Err(CgwError::OrderMismatch(self.k, other.k))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &CycElt) -> Result<CycElt> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(CgwError::Overflow("add")))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycElt { k: self.k, coeffs })
    }

    pub fn sub(&self, other: &CycElt) -> Result<CycElt> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_sub(*b).ok_or(CgwError::Overflow("sub")))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycElt { k: self.k, coeffs })
    }

    pub fn neg(&self) -> CycElt {
        CycElt {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Product in `Z[ζ_k]`: cyclic convolution of the coefficient vectors.
    pub fn mul(&self, other: &CycElt) -> Result<CycElt> {
        self.check(other)?;
        let k = self.k as usize;
        let mut out = vec![0i64; k];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let t = a.checked_mul(b).ok_or(CgwError::Overflow("mul"))?;
                let slot = &mut out[(i + j) % k];
                *slot = slot.checked_add(t).ok_or(CgwError::Overflow("mul"))?;
            }
        }
        Ok(CycElt {
            k: self.k,
            coeffs: out,
        })
    }

    /// Complex conjugation, `ζ^j ↦ ζ^{k-j}`.
    pub fn conj(&self) -> CycElt {
        let k = self.k as usize;
        let coeffs = (0..k).map(|j| self.coeffs[(k - j) % k]).collect();
        CycElt { k: self.k, coeffs }
    }

    /// True iff the element is zero in `Z[ζ_k]`.
    pub fn is_zero(&self) -> bool {
        ring(self.k).is_zero_coeffs(&self.coeffs)
    }

    /// Embed into `Z[ζ_{k·factor}]` via `ζ_k = ζ_{k·factor}^factor`.
    pub fn embed(&self, factor: u32) -> CycElt {
        let mut out = CycElt::zero(self.k * factor);
        for (j, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[j * factor as usize] = c;
        }
        out
    }
}

impl fmt::Display for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}*z{}^{j}", self.k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Precomputed data for zero tests in `Z[ζ_k]`.
#[derive(Debug)]
pub struct CyclotomicRing {
    k: u32,
    phi: Vec<i64>,
    /// `reductions[j]` = coefficients of `x^j mod Φ_k`, length `deg Φ_k`.
    reductions: Vec<Vec<i64>>,
}

impl CyclotomicRing {
    fn new(k: u32) -> Self {
        let phi = cyclotomic_polynomial(k);
        let deg = phi.len() - 1;
        let mut reductions = Vec::with_capacity(k as usize);
        // x^j mod Φ for j < deg is x^j itself; beyond that shift and reduce.
        let mut cur = vec![0i64; deg];
        cur[0] = 1;
        for _ in 0..k {
            reductions.push(cur.clone());
            // multiply by x
            let top = cur[deg - 1];
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..deg {
                    cur[i] -= top * phi[i];
                }
            }
        }
        CyclotomicRing { k, phi, reductions }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Coefficients of `Φ_k`, lowest degree first.
    pub fn phi(&self) -> &[i64] {
        &self.phi
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Canonical coordinates of a raw length-`k` vector in the power basis
    /// `1, ζ, …, ζ^{φ(k)-1}`. Equal elements give equal vectors.
    pub fn reduce(&self, coeffs: &[i64]) -> Vec<i64> {
        let deg = self.degree();
        let mut out = vec![0i64; deg];
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                for (o, &r) in out.iter_mut().zip(&self.reductions[j]) {
                    *o += c * r;
                }
            }
        }
        out
    }

    /// Zero test on a raw coefficient vector of length `k`.
    pub fn is_zero_coeffs(&self, coeffs: &[i64]) -> bool {
        debug_assert_eq!(coeffs.len(), self.k as usize);
        let deg = self.degree();
        (0..deg).all(|t| {
            let mut acc: i128 = 0;
            for (j, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    acc += c as i128 * self.reductions[j][t] as i128;
                }
            }
            acc == 0
        })
    }
}

static RINGS: OnceLock<RwLock<HashMap<u32, Arc<CyclotomicRing>>>> = OnceLock::new();

/// Memoised ring data for root order `k`.
pub fn ring(k: u32) -> Arc<CyclotomicRing> {
    assert!(k >= 1, "root order must be positive");
    let map = RINGS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(r) = map.read().expect("ring cache poisoned").get(&k) {
        return Arc::clone(r);
    }
    let r = Arc::new(CyclotomicRing::new(k));
    map.write()
        .expect("ring cache poisoned")
        .entry(k)
        .or_insert(r)
        .clone()
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    assert_eq!(*den.last().unwrap(), 1, "divisor must be monic");
    let mut rem = num.to_vec();
    if num.len() < den.len() {
        assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
        return vec![0];
    }
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] = rem[i + j]
                    .checked_sub(c.checked_mul(d).expect("overflow in Φ_k"))
                    .expect("overflow in Φ_k");
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// `Φ_k(x)` by dividing `x^k - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(k: u32) -> Vec<i64> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().expect("poisoned").get(&k) {
        return p.clone();
    }
    let mut num = vec![0i64; k as usize + 1];
    num[0] = -1;
    num[k as usize] = 1;
    for d in divisors(k as u64) {
        if d == k as u64 {
            continue;
        }
        num = poly_div_exact(&num, &cyclotomic_polynomial(d as u32));
    }
    cache.write().expect("poisoned").insert(k, num.clone());
    num
}

/// Can a vanishing sum of `k`-th roots of unity have exactly `weightsum`
/// terms? True iff `weightsum` is a nonnegative integer combination of the
/// primes dividing `k`.
pub fn lam_leung_feasible(weightsum: u64, k: u32) -> bool {
    if weightsum == 0 {
        return true;
    }
    let primes = prime_divisors(k as u64);
    if primes.is_empty() {
        return false;
    }
    let n = weightsum as usize;
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for s in 1..=n {
        reach[s] = primes
            .iter()
            .any(|&p| (p as usize) <= s && reach[s - p as usize]);
    }
    reach[n]
}

/// α-phased periodic autocorrelation `a · (a C_α^s)^*` of a `U_k` sequence.
///
/// `C_α` shifts a row vector one place to the right, multiplying the entry
/// that wraps around by `α`.
pub fn ppaf(a: &[Entry], k: u32, alpha: Entry, s: usize) -> Result<CycElt> {
    let v = a.len();
    if s == 0 || s >= v {
        return Err(CgwError::Range(format!(
            "shift {s} outside 1..{}",
            v.max(1) - 1
        )));
    }
    let alpha = match alpha {
        Entry::Zero => return Err(CgwError::Precondition("alpha must be nonzero".into())),
        Entry::Root(e) => Entry::Root(e % k),
    };
    let shifted = phased_shift(a, k, alpha, s);
    let mut acc = CycElt::zero(k);
    for (x, y) in a.iter().zip(&shifted) {
        if let Entry::Root(e) = x.mul(y.conj(k), k) {
            acc.add_term(e, 1);
        }
    }
    Ok(acc)
}

/// `a C_α^s`.
pub(crate) fn phased_shift(a: &[Entry], k: u32, alpha: Entry, s: usize) -> Vec<Entry> {
    let v = a.len();
    (0..v)
        .map(|j| {
            if j >= s {
                a[j - s]
            } else {
                a[j + v - s].mul(alpha, k)
            }
        })
        .collect()
}
