//! Square matrices over `U_k`, exact CGW verification, monomial equivalence
//! and a coarse equivalence invariant.

use std::fmt;

use crate::cyclotomic::{ring, CycElt, Entry};
use crate::error::{CgwError, Result};
use crate::numtheory::lcm32;

/// An `n × n` matrix with entries in `U_k`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GwMatrix {
    n: usize,
    k: u32,
    entries: Vec<Entry>,
}

/// Why a matrix failed verification. Only the first failure is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    RowWeight {
        row: usize,
        weight: usize,
        expected: usize,
    },
    ColumnWeight {
        col: usize,
        weight: usize,
        expected: usize,
    },
    /// Hermitian inner product of rows `i` and `j` is nonzero.
    InnerProduct { i: usize, j: usize, value: CycElt },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::RowWeight {
                row,
                weight,
                expected,
            } => {
                write!(f, "row {row} has weight {weight}, expected {expected}")
            }
            Failure::ColumnWeight {
                col,
                weight,
                expected,
            } => {
                write!(f, "column {col} has weight {weight}, expected {expected}")
            }
            Failure::InnerProduct { i, j, value } => {
                write!(f, "rows ({i},{j}) have inner product {value}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub weight: Option<u32>,
    pub first_failure: Option<Failure>,
}

impl GwMatrix {
    pub fn new(n: usize, k: u32, entries: Vec<Entry>) -> Result<Self> {
        if k == 0 {
            return Err(CgwError::Range("root order must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(CgwError::Range(format!(
                "expected {} entries for order {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(e) = entries
            .iter()
            .filter_map(|e| e.exponent())
            .find(|&e| e >= k)
        {
            return Err(CgwError::Range(format!("exponent {e} not below k={k}")));
        }
        Ok(GwMatrix { n, k, entries })
    }

    pub fn from_rows(k: u32, rows: Vec<Vec<Entry>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CgwError::Range("matrix is not square".into()));
        }
        Self::new(n, k, rows.into_iter().flatten().collect())
    }

    /// Build from exponents, with `None` for zero.
    pub fn from_exponents(k: u32, rows: &[Vec<Option<u32>>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.map_or(Entry::Zero, Entry::Root))
                    .collect()
            })
            .collect();
        Self::from_rows(k, rows)
    }

    pub fn zeros(n: usize, k: u32) -> Self {
        GwMatrix {
            n,
            k,
            entries: vec![Entry::Zero; n * n],
        }
    }

    pub fn identity(n: usize, k: u32) -> Self {
        let mut m = Self::zeros(n, k);
        for i in 0..n {
            m.set(i, i, Entry::ONE);
        }
        m
    }

    /// Fourier matrix `[ζ_n^{ij}]`, a `BH(n, n)`.
    pub fn fourier(n: usize) -> Self {
        let k = n as u32;
        let entries = (0..n * n)
            .map(|t| Entry::Root(((t / n) * (t % n)) as u32 % k))
            .collect();
        GwMatrix { n, k, entries }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Entry {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, e: Entry) {
        debug_assert!(e.exponent().is_none_or(|x| x < self.k));
        self.entries[i * self.n + j] = e;
    }

    pub fn row(&self, i: usize) -> &[Entry] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row(i).iter().filter(|e| !e.is_zero()).count()
    }

    pub fn col_weight(&self, j: usize) -> usize {
        (0..self.n).filter(|&i| !self.get(i, j).is_zero()).count()
    }

    /// The same matrix viewed over `U_{k'}` for a multiple `k'` of `k`.
    pub fn embed(&self, k_new: u32) -> Result<Self> {
        if !k_new.is_multiple_of(self.k) {
            return Err(CgwError::Precondition(format!(
                "cannot embed U_{} into U_{k_new}",
                self.k
            )));
        }
        let f = k_new / self.k;
        Ok(GwMatrix {
            n: self.n,
            k: k_new,
            entries: self.entries.iter().map(|e| e.embed(f)).collect(),
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n, self.k);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj(self.k));
            }
        }
        out
    }

    /// `-M`; requires even `k`.
    pub fn negated(&self) -> Result<Self> {
        if !self.k.is_multiple_of(2) {
            return Err(CgwError::Precondition(format!("-1 is not in U_{}", self.k)));
        }
        Ok(GwMatrix {
            n: self.n,
            k: self.k,
            entries: self.entries.iter().map(|e| e.neg(self.k)).collect(),
        })
    }

    /// Hermitian inner product of rows `i` and `j`, as `ζ`-exponent counts.
    pub fn row_inner_counts(&self, i: usize, j: usize, counts: &mut [i64]) {
        counts.iter_mut().for_each(|c| *c = 0);
        let k = self.k;
        for (a, b) in self.row(i).iter().zip(self.row(j)) {
            if let (Entry::Root(x), Entry::Root(y)) = (a, b) {
                counts[((x + k - y) % k) as usize] += 1;
            }
        }
    }

    pub fn row_inner(&self, i: usize, j: usize) -> CycElt {
        let mut counts = vec![0i64; self.k as usize];
        self.row_inner_counts(i, j, &mut counts);
        CycElt::from_coeffs(self.k, counts).expect("length k")
    }

    fn col_inner_counts(&self, i: usize, j: usize, counts: &mut [i64]) {
        counts.iter_mut().for_each(|c| *c = 0);
        let k = self.k;
        for r in 0..self.n {
            if let (Entry::Root(x), Entry::Root(y)) = (self.get(r, i), self.get(r, j)) {
                counts[((x + k - y) % k) as usize] += 1;
            }
        }
    }

    /// Exact Gram matrix `M M^*`.
    pub fn gram(&self) -> Vec<Vec<CycElt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.row_inner(i, j)).collect())
            .collect()
    }

    /// Checks `M M^* = w I` exactly and reports the first failure.
    pub fn verify(&self) -> VerifyReport {
        let n = self.n;
        let fail = |f: Failure| VerifyReport {
            ok: false,
            weight: None,
            first_failure: Some(f),
        };
        if n == 0 {
            return VerifyReport {
                ok: true,
                weight: Some(0),
                first_failure: None,
            };
        }
        let w = self.row_weight(0);
        for i in 1..n {
            let wi = self.row_weight(i);
            if wi != w {
                return fail(Failure::RowWeight {
                    row: i,
                    weight: wi,
                    expected: w,
                });
            }
        }
        let r = ring(self.k);
        let mut counts = vec![0i64; self.k as usize];
        for i in 0..n {
            for j in i + 1..n {
                self.row_inner_counts(i, j, &mut counts);
                if !r.is_zero_coeffs(&counts) {
                    return fail(Failure::InnerProduct {
                        i,
                        j,
                        value: CycElt::from_coeffs(self.k, counts).expect("length k"),
                    });
                }
            }
        }
        for j in 0..n {
            let wj = self.col_weight(j);
            if wj != w {
                return fail(Failure::ColumnWeight {
                    col: j,
                    weight: wj,
                    expected: w,
                });
            }
        }
        VerifyReport {
            ok: true,
            weight: Some(w as u32),
            first_failure: None,
        }
    }

    /// Column Gram check `M^* M = w I`.
    pub fn columns_orthogonal(&self) -> bool {
        let r = ring(self.k);
        let mut counts = vec![0i64; self.k as usize];
        for i in 0..self.n {
            for j in i + 1..self.n {
                self.col_inner_counts(i, j, &mut counts);
                if !r.is_zero_coeffs(&counts) {
                    return false;
                }
            }
        }
        true
    }

    /// `P M Q^*` for monomial `P`, `Q` given as permutations and scale exponents:
    /// `result[i][j] = ζ^{row_scales[i]} · M[row_perm[i]][col_perm[j]] · ζ^{-col_scales[j]}`.
    pub fn transform(
        &self,
        row_perm: &[usize],
        row_scales: &[u32],
        col_perm: &[usize],
        col_scales: &[u32],
    ) -> Result<Self> {
        let n = self.n;
        check_perm(row_perm, n, "row")?;
        check_perm(col_perm, n, "column")?;
        for (what, scales) in [("row", row_scales), ("column", col_scales)] {
            if scales.len() != n {
                return Err(CgwError::InvalidTransform(format!(
                    "{what} scales have length {}, expected {n}",
                    scales.len()
                )));
            }
            if let Some(s) = scales.iter().find(|&&s| s >= self.k) {
                return Err(CgwError::InvalidTransform(format!(
                    "{what} scale {s} not below k={}",
                    self.k
                )));
            }
        }
        let k = self.k;
        let mut out = Self::zeros(n, k);
        for i in 0..n {
            for j in 0..n {
                let e = self
                    .get(row_perm[i], col_perm[j])
                    .mul(Entry::Root(row_scales[i]), k)
                    .mul(Entry::Root((k - col_scales[j]) % k), k);
                out.set(i, j, e);
            }
        }
        Ok(out)
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        let id: Vec<usize> = (0..self.n).collect();
        let z = vec![0; self.n];
        self.transform(perm, &z, &id, &z)
    }

    /// Coarse equivalence invariant: `(n, w, k)` together with the sorted
    /// support-intersection sizes of all row pairs and all column pairs.
    pub fn fingerprint(&self) -> Result<Vec<u8>> {
        let report = self.verify();
        let w = report.weight.ok_or_else(|| {
            CgwError::Precondition(format!(
                "fingerprint needs a CGW: {}",
                report
                    .first_failure
                    .map(|f| f.to_string())
                    .unwrap_or_default()
            ))
        })?;
        let s = self.support();
        let rows = s.row_intersections();
        let cols = s.transpose().row_intersections();
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        Ok(format!(
            "n={};w={};k={};rows={};cols={}",
            self.n,
            w,
            self.k,
            join(&rows),
            join(&cols)
        )
        .into_bytes())
    }

    pub fn support(&self) -> Support {
        Support {
            n: self.n,
            cells: self.entries.iter().map(|e| !e.is_zero()).collect(),
        }
    }

    /// Exact product `self · other` over `Z[ζ_K]`, `K = lcm` of the two orders.
    pub fn product(&self, other: &GwMatrix) -> Result<Vec<Vec<CycElt>>> {
        if self.n != other.n {
            return Err(CgwError::Precondition("order mismatch".into()));
        }
        let kk = lcm32(self.k, other.k);
        let a = self.embed(kk)?;
        let b = other.embed(kk)?;
        let n = self.n;
        Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut z = CycElt::zero(kk);
                        for t in 0..n {
                            if let Entry::Root(e) = a.get(i, t).mul(b.get(t, j), kk) {
                                z.add_term(e, 1);
                            }
                        }
                        z
                    })
                    .collect()
            })
            .collect())
    }

    /// Does `self · other == other · self` hold exactly?
    pub fn commutes_with(&self, other: &GwMatrix) -> Result<bool> {
        let ab = self.product(other)?;
        let ba = other.product(self)?;
        for (ra, rb) in ab.iter().zip(&ba) {
            for (x, y) in ra.iter().zip(rb) {
                if !x.sub(y)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn check_perm(perm: &[usize], n: usize, what: &str) -> Result<()> {
    if perm.len() != n {
        return Err(CgwError::InvalidTransform(format!(
            "{what} permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(CgwError::InvalidTransform(format!(
                "{what} permutation is not a bijection on 0..{n}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// A square 0/1 matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Support {
    n: usize,
    cells: Vec<bool>,
}

impl Support {
    pub fn new(n: usize, cells: Vec<bool>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(CgwError::Range("support is not square".into()));
        }
        Ok(Support { n, cells })
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CgwError::Range("support is not square".into()));
        }
        Ok(Support {
            n,
            cells: rows.iter().flatten().map(|&b| b != 0).collect(),
        })
    }

    pub fn all_ones(n: usize) -> Self {
        Support {
            n,
            cells: vec![true; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn count_ones(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn row_sum(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.get(i, j)).count()
    }

    pub fn col_sum(&self, j: usize) -> usize {
        (0..self.n).filter(|&i| self.get(i, j)).count()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        Support {
            n,
            cells: (0..n * n).map(|t| self.get(t % n, t / n)).collect(),
        }
    }

    /// Sorted `|supp(r_i) ∩ supp(r_j)|` over `i < j`.
    pub fn row_intersections(&self) -> Vec<usize> {
        let n = self.n;
        let mut v = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                v.push((0..n).filter(|&c| self.get(i, c) && self.get(j, c)).count());
            }
        }
        v.sort_unstable();
        v
    }

    /// The support as a matrix over `U_1`.
    pub fn to_matrix(&self) -> GwMatrix {
        GwMatrix {
            n: self.n,
            k: 1,
            entries: self
                .cells
                .iter()
                .map(|&b| if b { Entry::ONE } else { Entry::Zero })
                .collect(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }
}

impl fmt::Display for GwMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::matrix_to_text(self, &[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fixtures::berman_example;

    fn h2() -> GwMatrix {
        GwMatrix::from_exponents(2, &[vec![Some(0), Some(0)], vec![Some(0), Some(1)]]).unwrap()
    }

    #[test]
    fn verify_examples() {
        let b = berman_example();
        let r = b.verify();
        assert!(r.ok);
        assert_eq!(r.weight, Some(4));
        assert!(r.first_failure.is_none());

        let i3 = GwMatrix::identity(3, 2);
        assert_eq!(i3.verify().weight, Some(1));

        let mut bad = b.clone();
        bad.set(0, 1, Entry::Root(1));
        let r = bad.verify();
        assert!(!r.ok);
        assert!(r.weight.is_none());
        assert!(matches!(
            r.first_failure,
            Some(Failure::InnerProduct { i: 0, .. })
        ));
    }

    #[test]
    fn weight_failures() {
        let m =
            GwMatrix::from_exponents(2, &[vec![Some(0), None], vec![Some(0), Some(0)]]).unwrap();
        assert!(matches!(
            m.verify().first_failure,
            Some(Failure::RowWeight { row: 1, .. })
        ));
    }

    #[test]
    fn transform_examples() {
        let b = berman_example();
        let id: Vec<usize> = (0..5).collect();
        let z = vec![0; 5];
        assert_eq!(b.transform(&id, &z, &id, &z).unwrap(), b);

        let h = h2();
        let t = h.transform(&[0, 1], &[1, 0], &[0, 1], &[0, 0]).unwrap();
        assert_eq!(t.verify().weight, Some(2));
        assert_ne!(t, h);

        assert!(matches!(
            h.transform(&[0, 0], &[0, 0], &[0, 1], &[0, 0]),
            Err(CgwError::InvalidTransform(_))
        ));
        assert!(matches!(
            h.transform(&[0, 1], &[2, 0], &[0, 1], &[0, 0]),
            Err(CgwError::InvalidTransform(_))
        ));
    }

    #[test]
    fn fingerprint_examples() {
        let h = h2();
        let swapped = h.permute_rows(&[1, 0]).unwrap();
        assert_eq!(h.fingerprint().unwrap(), swapped.fingerprint().unwrap());

        let b = berman_example();
        let s = b.support();
        assert_eq!(s.row_intersections(), vec![3; 10]);

        let i6 = GwMatrix::identity(6, 2);
        let conf = crate::constructions::paley_cgw(5, 2).unwrap();
        assert_ne!(i6.fingerprint().unwrap(), conf.fingerprint().unwrap());

        let mut bad = b.clone();
        bad.set(0, 1, Entry::Root(1));
        assert!(matches!(bad.fingerprint(), Err(CgwError::Precondition(_))));
    }

    #[test]
    fn support_examples() {
        assert_eq!(h2().support(), Support::all_ones(2));
        let s = berman_example().support();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(s.get(i, j), i != j);
            }
        }
        assert_eq!(GwMatrix::zeros(3, 4).support().count_ones(), 0);
    }

    #[test]
    fn commuting() {
        let h = h2();
        assert!(h.commutes_with(&GwMatrix::identity(2, 2)).unwrap());
        let d = GwMatrix::from_exponents(2, &[vec![Some(0), None], vec![None, Some(1)]]).unwrap();
        assert!(!h.commutes_with(&d).unwrap());
    }
}
