//! Finite fields `GF(p^m)` with log/antilog tables.
//!
//! Elements are indices `0..p^m`: the little-endian base-`p` digits of an
//! index are the coefficients of the polynomial-basis representative. The
//! modulus is the lexicographically least monic irreducible of degree `m`
//! (coefficients compared from the constant term upward) and the primitive
//! element is the least index of multiplicative order `p^m - 1`.

use std::fmt;

use crate::error::{CgwError, Result};
use crate::numtheory::{is_prime, prime_divisors};

/// Upper bound on field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElt(pub u32);

impl FieldElt {
    pub const ZERO: FieldElt = FieldElt(0);
    pub const ONE: FieldElt = FieldElt(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    prim: FieldElt,
    log: Vec<u32>,
    antilog: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("prim", &self.prim)
            .finish()
    }
}

fn digits(mut x: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo monic `f` over `GF(p)`, both low-degree-first.
fn poly_rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let df = f.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= df {
        return r;
    }
    for i in (df..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        for (j, &fj) in f.iter().enumerate() {
            let t = i - df + j;
            r[t] = (r[t] + p - (c * fj) % p) % p;
        }
    }
    r.truncate(df);
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, f, p);
    r.resize(f.len() - 1, 0);
    r
}

/// All tuples of `len` digits below `p` in lexicographic order (first digit slowest).
fn lex_tuples(len: u32, p: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).pow(len);
    (0..total).map(move |mut t| {
        let mut v = vec![0u32; len as usize];
        for slot in v.iter_mut().rev() {
            *slot = (t % p as u64) as u32;
            t /= p as u64;
        }
        v
    })
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = (f.len() - 1) as u32;
    for d in 1..=m / 2 {
        for lower in lex_tuples(d, p) {
            let mut g = lower;
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Build `GF(p^m)` deterministically.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(CgwError::Domain(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(CgwError::Domain(
                "extension degree must be at least 1".into(),
            ));
        }
        let order = (p as u64)
            .checked_pow(m)
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or_else(|| {
                CgwError::Domain(format!(
                    "GF({p}^{m}) exceeds the order bound {MAX_FIELD_ORDER}"
                ))
            })? as u32;

        let modulus = lex_tuples(m, p)
            .map(|mut c| {
                c.push(1);
                c
            })
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");

        let group = (order - 1) as u64;
        let qs = prime_divisors(group);
        let pow = |x: &[u32], mut e: u64| {
            let mut acc = digits(1, p, m);
            let mut base = x.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mulmod(&acc, &base, &modulus, p);
                }
                base = poly_mulmod(&base, &base, &modulus, p);
                e >>= 1;
            }
            acc
        };
        let one = digits(1, p, m);
        let prim = (1..order)
            .find(|&g| {
                let gd = digits(g, p, m);
                qs.iter().all(|&q| pow(&gd, group / q) != one)
            })
            .expect("multiplicative group is cyclic");

        let mut log = vec![u32::MAX; order as usize];
        let mut antilog = vec![0u32; group as usize];
        let gd = digits(prim, p, m);
        let mut cur = one.clone();
        for t in 0..group as u32 {
            let idx = undigits(&cur, p);
            assert_eq!(
                log[idx as usize],
                u32::MAX,
                "primitive element repeats early"
            );
            log[idx as usize] = t;
            antilog[t as usize] = idx;
            cur = poly_mulmod(&cur, &gd, &modulus, p);
        }
        assert_eq!(cur, one, "primitive element has wrong order");

        Ok(FieldCtx {
            p,
            m,
            order,
            modulus,
            prim: FieldElt(prim),
            log,
            antilog,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn prim(&self) -> FieldElt {
        self.prim
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElt> {
        (0..self.order).map(FieldElt)
    }

    pub fn elt(&self, index: u32) -> Result<FieldElt> {
        if index < self.order {
            Ok(FieldElt(index))
        } else {
            Err(CgwError::Range(format!(
                "index {index} outside GF({})",
                self.order
            )))
        }
    }

    pub fn add(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        if self.m == 1 {
            return FieldElt((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut scale = 1;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        FieldElt(out)
    }

    pub fn neg(&self, a: FieldElt) -> FieldElt {
        let mut x = a.0;
        let mut out = 0;
        let mut scale = 1;
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * scale;
            x /= self.p;
            scale *= self.p;
        }
        FieldElt(out)
    }

    pub fn sub(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        if a.0 == 0 || b.0 == 0 {
            return FieldElt::ZERO;
        }
        let g = self.order - 1;
        let t = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % g as u64;
        FieldElt(self.antilog[t as usize])
    }

    pub fn inv(&self, a: FieldElt) -> Result<FieldElt> {
        if a.is_zero() {
            return Err(CgwError::Domain("inverse of zero".into()));
        }
        let g = self.order - 1;
        Ok(FieldElt(
            self.antilog[((g - self.log[a.0 as usize]) % g) as usize],
        ))
    }

    pub fn div(&self, a: FieldElt, b: FieldElt) -> Result<FieldElt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; `0^0 = 1`.
    pub fn pow(&self, a: FieldElt, e: u64) -> FieldElt {
        if e == 0 {
            return FieldElt::ONE;
        }
        if a.is_zero() {
            return FieldElt::ZERO;
        }
        let g = (self.order - 1) as u64;
        let t = (self.log[a.0 as usize] as u64 * (e % g)) % g;
        FieldElt(self.antilog[t as usize])
    }

    /// Discrete logarithm base the primitive element.
    pub fn ind(&self, a: FieldElt) -> Result<u32> {
        if a.is_zero() {
            return Err(CgwError::Domain("index of zero".into()));
        }
        Ok(self.log[a.0 as usize])
    }

    /// `prim^t`.
    pub fn exp(&self, t: u64) -> FieldElt {
        FieldElt(self.antilog[(t % (self.order as u64 - 1)) as usize])
    }

    /// Order `q` of the subfield when this field is `GF(q^2)`.
    pub fn sqrt_order(&self) -> Result<u32> {
        if !self.m.is_multiple_of(2) {
            return Err(CgwError::Domain(format!(
                "GF({}) is not of square order",
                self.order
            )));
        }
        Ok(self.p.pow(self.m / 2))
    }

    /// `x ↦ x^q` on `GF(q^2)`.
    pub fn frobenius(&self, x: FieldElt) -> Result<FieldElt> {
        let q = self.sqrt_order()?;
        Ok(self.pow(x, q as u64))
    }

    /// The unique subfield of order `p^d` (`d | m`) as `{x : x^{p^d} = x}`.
    pub fn subfield(&self, d: u32) -> Result<Vec<FieldElt>> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(CgwError::Domain(format!(
                "GF({}^{}) has no subfield of degree {d}",
                self.p, self.m
            )));
        }
        let s = self.p.pow(d) as u64;
        Ok(self.elements().filter(|&x| self.pow(x, s) == x).collect())
    }

    /// Dense addition and multiplication tables, row-major `order × order`.
    pub fn dense_tables(&self) -> DenseTables {
        let q = self.order as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add(FieldElt(a as u32), FieldElt(b as u32)).0 as u16;
                mul[a * q + b] = self.mul(FieldElt(a as u32), FieldElt(b as u32)).0 as u16;
            }
        }
        let neg = (0..q)
            .map(|a| self.neg(FieldElt(a as u32)).0 as u16)
            .collect();
        DenseTables { q, add, mul, neg }
    }
}

/// Flat lookup tables for the enumeration kernels (order at most 65536).
#[derive(Debug, Clone)]
pub struct DenseTables {
    pub q: usize,
    pub add: Vec<u16>,
    pub mul: Vec<u16>,
    pub neg: Vec<u16>,
}

impl DenseTables {
    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }
}
