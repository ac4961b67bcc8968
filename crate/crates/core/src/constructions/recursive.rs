use crate::error::{CgwError, Result};
use crate::matrix::GwMatrix;
use crate::numtheory::lcm32;

use super::{checked, weight_of};

/// `A ⊕ B` over `U_{lcm(k_A, k_B)}`.
pub fn direct_sum(a: &GwMatrix, b: &GwMatrix) -> Result<GwMatrix> {
    let wa = weight_of(a, "A")?;
    let wb = weight_of(b, "B")?;
    if wa != wb {
        return Err(CgwError::Precondition(format!(
            "weights differ: {wa} vs {wb}"
        )));
    }
    let k = lcm32(a.k(), b.k());
    let (a, b) = (a.embed(k)?, b.embed(k)?);
    let (m, n) = (a.n(), b.n());
    let mut out = GwMatrix::zeros(m + n, k);
    for i in 0..m {
        for j in 0..m {
            out.set(i, j, a.get(i, j));
        }
    }
    for i in 0..n {
        for j in 0..n {
            out.set(m + i, m + j, b.get(i, j));
        }
    }
    checked(out, "direct sum", m + n, wa, k)
}

/// `[[A, B], [-B^*, A^*]]` for commuting `A`, `B` of equal order.
pub fn border_pair(a: &GwMatrix, b: &GwMatrix) -> Result<GwMatrix> {
    if a.n() != b.n() {
        return Err(CgwError::Precondition(format!(
            "orders differ: {} vs {}",
            a.n(),
            b.n()
        )));
    }
    let wa = weight_of(a, "A")?;
    let wb = weight_of(b, "B")?;
    if !a.commutes_with(b)? {
        return Err(CgwError::Precondition("AB != BA".into()));
    }
    let k = lcm32(lcm32(a.k(), b.k()), 2);
    let (a, b) = (a.embed(k)?, b.embed(k)?);
    let n = a.n();
    let mut out = GwMatrix::zeros(2 * n, k);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, a.get(i, j));
            out.set(i, n + j, b.get(i, j));
            out.set(n + i, j, b.get(j, i).conj(k).neg(k));
            out.set(n + i, n + j, a.get(j, i).conj(k));
        }
    }
    checked(out, "border pair", 2 * n, wa + wb, k)
}

/// `A ⊗ B` over `U_{lcm(k_A, k_B)}`.
pub fn kronecker(a: &GwMatrix, b: &GwMatrix) -> Result<GwMatrix> {
    let wa = weight_of(a, "A")?;
    let wb = weight_of(b, "B")?;
    let k = lcm32(a.k(), b.k());
    let (a, b) = (a.embed(k)?, b.embed(k)?);
    let (m, n) = (a.n(), b.n());
    let mut out = GwMatrix::zeros(m * n, k);
    for i in 0..m {
        for j in 0..m {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for r in 0..n {
                for c in 0..n {
                    out.set(i * n + r, j * n + c, x.mul(b.get(r, c), k));
                }
            }
        }
    }
    checked(out, "kronecker", m * n, wa * wb, k)
}

/// Diţă's block matrix `[a_ij B_j]`. All `B_j` must share order and weight.
pub fn dita(a: &GwMatrix, bs: &[GwMatrix]) -> Result<GwMatrix> {
    let n = a.n();
    if bs.len() != n {
        return Err(CgwError::Precondition(format!(
            "need {n} blocks, got {}",
            bs.len()
        )));
    }
    let wa = weight_of(a, "A")?;
    let m = bs[0].n();
    let wb = weight_of(&bs[0], "B_1")?;
    let mut k = a.k();
    for (idx, b) in bs.iter().enumerate() {
        if b.n() != m {
            return Err(CgwError::Precondition(format!(
                "block {} has order {}, expected {m}",
                idx + 1,
                b.n()
            )));
        }
        let w = weight_of(b, "block")?;
        if w != wb {
            return Err(CgwError::Precondition(format!(
                "block {} has weight {w}, expected {wb}",
                idx + 1
            )));
        }
        k = lcm32(k, b.k());
    }
    let a = a.embed(k)?;
    let bs = bs.iter().map(|b| b.embed(k)).collect::<Result<Vec<_>>>()?;
    let mut out = GwMatrix::zeros(n * m, k);
    for i in 0..n {
        for (j, b) in bs.iter().enumerate() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for r in 0..m {
                for c in 0..m {
                    out.set(i * m + r, j * m + c, x.mul(b.get(r, c), k));
                }
            }
        }
    }
    checked(out, "dita", n * m, wa * wb, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fixtures::{berman_example, h2};

    fn params(m: &GwMatrix) -> (usize, Option<u32>, u32) {
        (m.n(), m.verify().weight, m.k())
    }

    #[test]
    fn direct_sums() {
        let i1 = GwMatrix::identity(1, 2);
        assert_eq!(direct_sum(&i1, &i1).unwrap(), GwMatrix::identity(2, 2));
        assert_eq!(params(&direct_sum(&h2(), &h2()).unwrap()), (4, Some(2), 2));
        let b = berman_example();
        assert_eq!(params(&direct_sum(&b, &b).unwrap()), (10, Some(4), 3));
        assert!(direct_sum(&h2(), &GwMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn borders() {
        let i2 = GwMatrix::identity(2, 2);
        assert_eq!(params(&border_pair(&h2(), &i2).unwrap()), (4, Some(3), 2));
        assert_eq!(params(&border_pair(&i2, &i2).unwrap()), (4, Some(2), 2));
        let f3 = GwMatrix::fourier(3);
        let i3 = GwMatrix::identity(3, 3);
        assert_eq!(params(&border_pair(&f3, &i3).unwrap()), (6, Some(4), 6));
        let swapped = h2().permute_rows(&[1, 0]).unwrap();
        assert!(border_pair(&h2(), &swapped).is_err());
    }

    #[test]
    fn kronecker_products() {
        let h4 = kronecker(&h2(), &h2()).unwrap();
        assert_eq!(params(&h4), (4, Some(4), 2));
        let f3 = GwMatrix::fourier(3);
        assert_eq!(params(&kronecker(&f3, &f3).unwrap()), (9, Some(9), 3));
        assert_eq!(
            params(&kronecker(&berman_example(), &h2()).unwrap()),
            (10, Some(8), 6)
        );
    }

    #[test]
    fn dita_blocks() {
        let f3 = GwMatrix::fourier(3);
        let same = vec![f3.clone(), f3.clone(), f3.clone()];
        assert_eq!(dita(&f3, &same).unwrap(), kronecker(&f3, &f3).unwrap());
        let neg = h2().negated().unwrap();
        assert_eq!(params(&dita(&h2(), &[h2(), neg]).unwrap()), (4, Some(4), 2));
        let id: Vec<usize> = (0..3).collect();
        let blocks: Vec<GwMatrix> = (0..3u32)
            .map(|t| {
                f3.transform(&[1, 2, 0], &[t, 0, 1], &id, &[0, t, 2])
                    .unwrap()
            })
            .collect();
        assert_eq!(params(&dita(&f3, &blocks).unwrap()), (9, Some(9), 3));
        assert!(dita(&h2(), &[h2(), GwMatrix::identity(2, 2)]).is_err());
    }
}
