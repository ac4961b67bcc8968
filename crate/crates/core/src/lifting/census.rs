//! Exhaustive refutation of a parameter set: enumerate every candidate
//! support up to row and column permutation, and show none of them lifts.
//!
//! Supports are generated in doubly lexical form (rows and columns both
//! non-increasing as binary strings, column 0 most significant). Every 0/1
//! matrix can be brought to that form by permutations, so the enumeration is
//! complete. Two rows of a `CGW(n, w; k)` meet in a number of places that a
//! vanishing sum of `k`-th roots can have, and the same holds for columns;
//! supports violating this are discarded. For `w > n/2` the complementary
//! pattern is enumerated instead, which has far fewer ones.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::{lift_sequential, LiftInstance, LiftOutcome};
use crate::cyclotomic::lam_leung_feasible;
use crate::error::{CgwError, Result};
use crate::matrix::{GwMatrix, Support};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CensusOutcome {
    /// No admissible support lifts.
    Refuted,
    Lifted(GwMatrix),
    /// The support cap or a lift budget was hit.
    Incomplete(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub outcome: CensusOutcome,
    pub supports: usize,
    pub nodes: u64,
}

/// Limits for [`census`].
#[derive(Debug, Clone, Copy)]
pub struct CensusLimits {
    pub max_supports: usize,
    /// Row choices the support enumeration may commit.
    pub enum_budget: u64,
    /// Nodes for a single support.
    pub lift_budget: u64,
    /// Nodes across all supports.
    pub total_budget: u64,
}

impl Default for CensusLimits {
    fn default() -> Self {
        CensusLimits {
            max_supports: 2_000_000,
            enum_budget: u64::MAX,
            lift_budget: 10_000_000,
            total_budget: u64::MAX,
        }
    }
}

struct Enumerator {
    n: usize,
    v: usize,
    rows: Vec<u64>,
    colsum: Vec<usize>,
    /// Rows containing each column, as bit masks.
    colmask: Vec<u64>,
    blocks: Vec<(usize, usize)>,
    admissible: Vec<bool>,
    out: Vec<Vec<u64>>,
    cap: usize,
    nodes: u64,
    node_budget: u64,
    overflow: bool,
}

impl Enumerator {
    fn bit(&self, j: usize) -> u64 {
        1 << (self.n - 1 - j)
    }

    fn span(&self, start: usize, len: usize) -> u64 {
        (start..start + len).fold(0, |m, j| m | self.bit(j))
    }

    fn row(&mut self, i: usize) {
        if self.overflow {
            return;
        }
        if i == self.n {
            if self.out.len() >= self.cap {
                self.overflow = true;
            } else {
                self.out.push(self.rows.clone());
            }
            return;
        }
        let after = self.n - 1 - i;
        let mut lo = Vec::with_capacity(self.blocks.len());
        let mut hi = Vec::with_capacity(self.blocks.len());
        for &(s, l) in &self.blocks {
            let sum = self.colsum[s];
            let h = if sum < self.v { l } else { 0 };
            let m = if self.v - sum > after { l } else { 0 };
            if m > h {
                return;
            }
            lo.push(m);
            hi.push(h);
        }
        let mut lo_suffix = vec![0; lo.len() + 1];
        let mut hi_suffix = vec![0; hi.len() + 1];
        for b in (0..lo.len()).rev() {
            lo_suffix[b] = lo_suffix[b + 1] + lo[b];
            hi_suffix[b] = hi_suffix[b + 1] + hi[b];
        }
        if lo_suffix[0] > self.v || hi_suffix[0] < self.v {
            return;
        }
        let prev = if i == 0 { u64::MAX } else { self.rows[i - 1] };
        let mut counts = vec![0; self.blocks.len()];
        self.choose(
            i,
            0,
            0,
            0,
            true,
            prev,
            &lo,
            &hi,
            &lo_suffix,
            &hi_suffix,
            &mut counts,
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        i: usize,
        b: usize,
        used: usize,
        mask: u64,
        tight: bool,
        prev: u64,
        lo: &[usize],
        hi: &[usize],
        lo_suffix: &[usize],
        hi_suffix: &[usize],
        counts: &mut [usize],
    ) {
        if self.overflow {
            return;
        }
        if b == self.blocks.len() {
            self.commit(i, mask, counts);
            return;
        }
        let (s, l) = self.blocks[b];
        let region = self.span(s, l);
        let left = self.v - used;
        let max_c = hi[b].min(left - lo_suffix[b + 1]);
        let min_c = lo[b].max(left.saturating_sub(hi_suffix[b + 1]));
        if min_c > max_c {
            return;
        }
        for c in (min_c..=max_c).rev() {
            let part = self.span(s, c);
            let mut still_tight = false;
            if tight {
                let p = prev & region;
                if part > p {
                    continue;
                }
                still_tight = part == p;
            }
            counts[b] = c;
            self.choose(
                i,
                b + 1,
                used + c,
                mask | part,
                still_tight,
                prev,
                lo,
                hi,
                lo_suffix,
                hi_suffix,
                counts,
            );
        }
    }

    fn commit(&mut self, i: usize, mask: u64, counts: &[usize]) {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            self.overflow = true;
            return;
        }
        if !self.rows[..i]
            .iter()
            .all(|&r| self.admissible[(r & mask).count_ones() as usize])
        {
            return;
        }
        let saved = self.blocks.clone();
        let mut next = Vec::with_capacity(saved.len() + 4);
        for (&(s, l), &c) in saved.iter().zip(counts) {
            for j in s..s + c {
                self.colsum[j] += 1;
                self.colmask[j] |= 1 << i;
            }
            if c > 0 && c < l {
                next.push((s, c));
                next.push((s + c, l - c));
            } else {
                next.push((s, l));
            }
        }
        self.blocks = next;
        if self.column_pairs_ok() {
            self.rows.push(mask);
            self.row(i + 1);
            self.rows.pop();
        }
        self.blocks = saved;
        for (&(s, _), &c) in self.blocks.iter().zip(counts) {
            for j in s..s + c {
                self.colsum[j] -= 1;
                self.colmask[j] &= !(1 << i);
            }
        }
    }

    /// Every column pair can still end with an admissible intersection,
    /// given how many ones each column is still missing.
    fn column_pairs_ok(&self) -> bool {
        (0..self.n).all(|a| {
            let da = self.v - self.colsum[a];
            (a + 1..self.n).all(|b| {
                let x = (self.colmask[a] & self.colmask[b]).count_ones() as usize;
                let extra = da.min(self.v - self.colsum[b]);
                self.admissible[x..=x + extra].iter().any(|&t| t)
            })
        })
    }
}

/// All `n × n` 0/1 matrices with row and column sums `v`, in doubly lexical
/// form, whose pairwise row and column intersections satisfy `ok`. Rows are
/// bit masks with column 0 in bit `n-1`. `None` when more than `cap` exist
/// or more than `node_budget` partial rows are committed.
pub fn enumerate_supports(
    n: usize,
    v: usize,
    ok: &dyn Fn(usize) -> bool,
    cap: usize,
    node_budget: u64,
) -> Result<Option<Vec<Vec<u64>>>> {
    if n == 0 || n > 64 || v > n {
        return Err(CgwError::Range(format!(
            "need 0 < n <= 64 and v <= n, got n={n}, v={v}"
        )));
    }
    let mut e = Enumerator {
        n,
        v,
        rows: Vec::with_capacity(n),
        colsum: vec![0; n],
        colmask: vec![0; n],
        blocks: vec![(0, n)],
        admissible: (0..=n).map(ok).collect(),
        out: Vec::new(),
        cap,
        nodes: 0,
        node_budget,
        overflow: false,
    };
    e.row(0);
    Ok(if e.overflow { None } else { Some(e.out) })
}

fn to_support(n: usize, rows: &[u64], complement: bool) -> Support {
    let cells = (0..n * n)
        .map(|t| {
            let bit = rows[t / n] >> (n - 1 - t % n) & 1 == 1;
            bit != complement
        })
        .collect();
    Support::new(n, cells).expect("square by construction")
}

/// The candidate supports of a `CGW(n, w; k)` up to row and column
/// permutation.
pub fn candidate_supports(
    n: usize,
    w: usize,
    k: u32,
    cap: usize,
    node_budget: u64,
) -> Result<Option<Vec<Support>>> {
    if w == 0 || w > n {
        return Err(CgwError::Range(format!(
            "need 1 <= w <= n, got w={w}, n={n}"
        )));
    }
    let complement = 2 * w > n;
    let v = if complement { n - w } else { w };
    let ok = |c: usize| {
        let t = if complement { 2 * w + c - n } else { c };
        lam_leung_feasible(t as u64, k)
    };
    Ok(enumerate_supports(n, v, &ok, cap, node_budget)?.map(|all| {
        all.iter()
            .map(|rows| to_support(n, rows, complement))
            .collect()
    }))
}

/// Prove or disprove existence of a `CGW(n, w; k)` by lifting every
/// candidate support.
pub fn census(n: usize, w: usize, k: u32, limits: CensusLimits) -> Result<CensusReport> {
    let Some(supports) = candidate_supports(n, w, k, limits.max_supports, limits.enum_budget)?
    else {
        return Ok(CensusReport {
            outcome: CensusOutcome::Incomplete(format!(
                "support enumeration exceeded {} supports or {} steps",
                limits.max_supports, limits.enum_budget
            )),
            supports: 0,
            nodes: 0,
        });
    };
    let spent = AtomicU64::new(0);
    let reports: Vec<_> = supports
        .par_iter()
        .map(|s| {
            let left = limits
                .total_budget
                .saturating_sub(spent.load(Ordering::Relaxed));
            if left == 0 {
                return None;
            }
            let inst = LiftInstance::new(s.clone(), k).expect("regular by construction");
            let r = lift_sequential(&inst, limits.lift_budget.min(left));
            spent.fetch_add(r.nodes, Ordering::Relaxed);
            Some(r)
        })
        .collect();
    let nodes = reports.iter().flatten().map(|r| r.nodes).sum();
    let mut outcome = CensusOutcome::Refuted;
    for r in reports {
        let Some(r) = r else {
            if !matches!(outcome, CensusOutcome::Lifted(_)) {
                outcome = CensusOutcome::Incomplete("total lift budget exhausted".into());
            }
            continue;
        };
        match r.outcome {
            LiftOutcome::Lifted(m) => {
                outcome = CensusOutcome::Lifted(m);
                break;
            }
            LiftOutcome::BudgetExceeded => {
                outcome = CensusOutcome::Incomplete("lift budget exhausted on a support".into());
            }
            LiftOutcome::NoLift => {}
        }
    }
    Ok(CensusReport {
        outcome,
        supports: supports.len(),
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_matrices_collapse() {
        let all = candidate_supports(6, 1, 2, 100, u64::MAX).unwrap().unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(
            all[0],
            Support::new(6, (0..36).map(|t| t / 6 == t % 6).collect()).unwrap()
        );
    }

    #[test]
    fn weight_two_over_u4_needs_even_order() {
        let r = census(5, 2, 4, CensusLimits::default()).unwrap();
        assert_eq!(r.outcome, CensusOutcome::Refuted);
        let r = census(6, 2, 4, CensusLimits::default()).unwrap();
        let CensusOutcome::Lifted(m) = r.outcome else {
            panic!("H2 + H2 + H2 exists")
        };
        assert_eq!(m.verify().weight, Some(2));
    }

    #[test]
    fn known_cells() {
        let run = |n, w, k| census(n, w, k, CensusLimits::default()).unwrap().outcome;
        assert_eq!(run(3, 3, 2), CensusOutcome::Refuted);
        assert!(matches!(run(5, 4, 3), CensusOutcome::Lifted(_)));
        assert_eq!(run(6, 4, 3), CensusOutcome::Refuted);
        assert!(matches!(run(4, 4, 2), CensusOutcome::Lifted(_)));
    }

    #[test]
    fn caps_are_reported() {
        let r = census(
            8,
            4,
            2,
            CensusLimits {
                max_supports: 1,
                lift_budget: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(matches!(r.outcome, CensusOutcome::Incomplete(_)));
        let tight = CensusLimits {
            enum_budget: 1000,
            ..Default::default()
        };
        assert!(matches!(
            census(14, 7, 4, tight).unwrap().outcome,
            CensusOutcome::Incomplete(_)
        ));
        let starved = CensusLimits {
            total_budget: 1000,
            ..Default::default()
        };
        assert!(matches!(
            census(14, 7, 3, starved).unwrap().outcome,
            CensusOutcome::Incomplete(_)
        ));
    }
}
