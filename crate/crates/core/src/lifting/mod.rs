//! The lifting problem: assign `k`-th roots of unity to the ones of a 0/1
//! support so the result is a `CGW(n, w; k)`, or prove that no assignment
//! works.
//!
//! The search is a dephased backtrack. Row 0 is fixed to exponent 0 (column
//! scaling) and the first nonzero of every other row is fixed to 0 (row
//! scaling), which loses no solutions up to monomial equivalence. Cells are
//! assigned in row-major order with exponents ascending. Every time a cell of
//! row `i` is set, the partial Hermitian inner product with each earlier row
//! that meets it in that column is updated, and the branch dies unless the
//! remaining overlap can still cancel the partial sum exactly.
//!
//! For a full support the core (rows and columns `1..n`) may be permuted
//! freely without disturbing the dephasing, so it is kept in doubly lexical
//! form: each core row and column is lexicographically at least its
//! predecessor.

pub mod census;

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::cyclotomic::ring;
use crate::error::{CgwError, Result};
use crate::matrix::{GwMatrix, Support};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Most ones [`brute_lift_oracle`] accepts.
pub const ORACLE_CELL_CAP: usize = 12;

/// A support with constant row and column sums `w`, and a root order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftInstance {
    support: Support,
    k: u32,
    w: usize,
}

impl LiftInstance {
    pub fn new(support: Support, k: u32) -> Result<Self> {
        if k == 0 || k > u8::MAX as u32 {
            return Err(CgwError::Domain(format!("k={k} outside 1..=255")));
        }
        let n = support.n();
        if n == 0 {
            return Err(CgwError::Range("empty support".into()));
        }
        let w = support.row_sum(0);
        if (0..n).any(|i| support.row_sum(i) != w || support.col_sum(i) != w) {
            return Err(CgwError::Precondition(
                "support must have constant row and column sums".into(),
            ));
        }
        Ok(LiftInstance { support, k, w })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.support.n()
    }

    pub fn w(&self) -> usize {
        self.w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftOutcome {
    Lifted(GwMatrix),
    NoLift,
    BudgetExceeded,
}

impl LiftOutcome {
    pub fn is_lifted(&self) -> bool {
        matches!(self, LiftOutcome::Lifted(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftReport {
    pub outcome: LiftOutcome,
    /// Cell assignments tried.
    pub nodes: u64,
}

const MAX_PHI: usize = 8;
const TABLE_CAP: usize = 2_000_000;

type Coords = [i32; MAX_PHI];

/// Which sums of exactly `t` roots of unity are reachable, keyed by the
/// reduced coordinates of the sum.
struct SumTable {
    phi: usize,
    basis: Vec<Coords>,
    reachable: Option<HashMap<Coords, u64>>,
}

impl SumTable {
    fn new(k: u32, max_terms: usize) -> Self {
        let r = ring(k);
        let phi = r.degree();
        let mut basis = Vec::with_capacity(k as usize);
        let packable = phi <= MAX_PHI;
        for e in 0..k as usize {
            let mut unit = vec![0i64; k as usize];
            unit[e] = 1;
            let red = r.reduce(&unit);
            let mut c = [0i32; MAX_PHI];
            if packable {
                for (dst, &x) in c.iter_mut().zip(&red) {
                    *dst = x as i32;
                }
            }
            basis.push(c);
        }
        let reachable = if packable && max_terms < 64 {
            Self::reachable(&basis, max_terms)
        } else {
            None
        };
        SumTable {
            phi,
            basis,
            reachable,
        }
    }

    fn reachable(basis: &[Coords], max_terms: usize) -> Option<HashMap<Coords, u64>> {
        let mut map: HashMap<Coords, u64> = HashMap::new();
        let mut level = vec![[0i32; MAX_PHI]];
        map.insert([0; MAX_PHI], 1);
        for t in 1..=max_terms {
            let mut next = HashMap::new();
            for x in &level {
                for b in basis {
                    let mut y = *x;
                    for (a, c) in y.iter_mut().zip(b) {
                        *a += c;
                    }
                    next.entry(y).or_insert(());
                }
            }
            level = next.into_keys().collect();
            for y in &level {
                *map.entry(*y).or_insert(0) |= 1 << t;
            }
            if map.len() > TABLE_CAP {
                return None;
            }
        }
        Some(map)
    }

    /// Can `acc` plus exactly `left` more roots vanish?
    #[inline]
    fn completable(&self, acc: &Coords, left: usize) -> bool {
        match &self.reachable {
            Some(map) => {
                let mut neg = [0i32; MAX_PHI];
                for (d, s) in neg.iter_mut().zip(acc) {
                    *d = -s;
                }
                map.get(&neg).is_some_and(|m| m >> left & 1 == 1)
            }
            None => left > 0 || acc[..self.phi].iter().all(|&x| x == 0),
        }
    }
}

/// Static description of the search shared by all workers.
struct Plan {
    n: usize,
    k: u32,
    cells: Vec<(usize, usize)>,
    /// Fixed exponent for dephased cells.
    fixed: Vec<bool>,
    /// For each cell, the earlier rows meeting it in its column.
    checks: Vec<Vec<usize>>,
    overlap: Vec<usize>,
    table: SumTable,
    /// Full support: break core row and column symmetry.
    full: bool,
}

impl Plan {
    fn new(inst: &LiftInstance) -> Self {
        let s = &inst.support;
        let n = s.n();
        let mut cells = Vec::new();
        let mut fixed = Vec::new();
        let mut checks = Vec::new();
        for i in 0..n {
            let mut first = true;
            for j in 0..n {
                if s.get(i, j) {
                    cells.push((i, j));
                    fixed.push(i == 0 || first);
                    first = false;
                    checks.push((0..i).filter(|&r| s.get(r, j)).collect());
                }
            }
        }
        let mut overlap = vec![0; n * n];
        for i in 0..n {
            for r in 0..i {
                overlap[i * n + r] = (0..n).filter(|&j| s.get(i, j) && s.get(r, j)).count();
            }
        }
        // Lift to the full matrix needs k > 1 unless no two rows meet.
        let table = SumTable::new(inst.k.max(1), inst.w);
        Plan {
            n,
            k: inst.k,
            cells,
            fixed,
            checks,
            overlap,
            table,
            full: inst.w == n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Found,
    Exhausted,
    Stopped,
}

struct Worker<'a> {
    plan: &'a Plan,
    exps: Vec<u8>,
    acc: Vec<Coords>,
    seen: Vec<u16>,
    /// Full support only: row `i` still equals row `i-1` up to this cell,
    /// and column `j` still equals column `j-1` down to this cell.
    row_tie: Vec<bool>,
    col_tie: Vec<bool>,
    nodes: u64,
    pending: u64,
    budget: u64,
    spent: &'a AtomicU64,
    stop: &'a dyn Fn() -> bool,
}

impl<'a> Worker<'a> {
    fn new(plan: &'a Plan, budget: u64, spent: &'a AtomicU64, stop: &'a dyn Fn() -> bool) -> Self {
        let n = plan.n;
        Worker {
            plan,
            exps: vec![0; n * n],
            acc: vec![[0; MAX_PHI]; n * n],
            seen: vec![0; n * n],
            row_tie: vec![true; n * n],
            col_tie: vec![true; n * n],
            nodes: 0,
            pending: 0,
            budget,
            spent,
            stop,
        }
    }

    fn apply(&mut self, c: usize, e: u8) -> bool {
        let plan = self.plan;
        let (i, j) = plan.cells[c];
        let n = plan.n;
        let k = plan.k as usize;
        self.exps[i * n + j] = e;
        let mut ok = true;
        for &r in &plan.checks[c] {
            let p = i * n + r;
            let d = (e as usize + k - self.exps[r * n + j] as usize) % k;
            for (a, b) in self.acc[p].iter_mut().zip(&plan.table.basis[d]) {
                *a += b;
            }
            self.seen[p] += 1;
            ok = ok
                && plan
                    .table
                    .completable(&self.acc[p], plan.overlap[p] - self.seen[p] as usize);
        }
        ok
    }

    fn undo(&mut self, c: usize) {
        let plan = self.plan;
        let (i, j) = plan.cells[c];
        let n = plan.n;
        let k = plan.k as usize;
        let e = self.exps[i * n + j] as usize;
        for &r in &plan.checks[c] {
            let p = i * n + r;
            let d = (e + k - self.exps[r * n + j] as usize) % k;
            for (a, b) in self.acc[p].iter_mut().zip(&plan.table.basis[d]) {
                *a -= b;
            }
            self.seen[p] -= 1;
        }
    }

    fn choices(&self, c: usize) -> std::ops::Range<u8> {
        if self.plan.fixed[c] {
            return 0..1;
        }
        let mut lo = 0;
        if self.plan.full {
            let n = self.plan.n;
            let (i, j) = (c / n, c % n);
            if i >= 2 && (j == 1 || self.row_tie[c - 1]) {
                lo = lo.max(self.exps[c - n]);
            }
            if j >= 2 && (i == 1 || self.col_tie[c - n]) {
                lo = lo.max(self.exps[c - 1]);
            }
        }
        lo..self.plan.k as u8
    }

    /// Record the ties after cell `c` took exponent `e`.
    fn mark(&mut self, c: usize, e: u8) {
        if !self.plan.full {
            return;
        }
        let n = self.plan.n;
        let (i, j) = (c / n, c % n);
        if i >= 2 && j >= 1 {
            self.row_tie[c] = (j == 1 || self.row_tie[c - 1]) && e == self.exps[c - n];
        }
        if i >= 1 && j >= 2 {
            self.col_tie[c] = (i == 1 || self.col_tie[c - n]) && e == self.exps[c - 1];
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.pending += 1;
        if self.pending >= 4096 {
            let total = self.spent.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
            self.pending = 0;
            if total > self.budget || (self.stop)() {
                return false;
            }
        }
        true
    }

    fn flush(&mut self) {
        self.spent.fetch_add(self.pending, Ordering::Relaxed);
        self.pending = 0;
    }

    fn dfs(&mut self, c: usize) -> Step {
        if c == self.plan.cells.len() {
            return Step::Found;
        }
        for e in self.choices(c) {
            if !self.tick() {
                return Step::Stopped;
            }
            self.mark(c, e);
            if self.apply(c, e) {
                match self.dfs(c + 1) {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            self.undo(c);
        }
        Step::Exhausted
    }

    /// Replay a prefix of assignments; false if it is infeasible.
    fn replay(&mut self, prefix: &[u8]) -> bool {
        for (c, &e) in prefix.iter().enumerate() {
            self.nodes += 1;
            self.pending += 1;
            if !self.choices(c).contains(&e) {
                return false;
            }
            self.mark(c, e);
            if !self.apply(c, e) {
                return false;
            }
        }
        true
    }

    fn matrix(&self) -> GwMatrix {
        let n = self.plan.n;
        let mut m = GwMatrix::zeros(n, self.plan.k);
        for &(i, j) in &self.plan.cells {
            m.set(
                i,
                j,
                crate::cyclotomic::Entry::Root(self.exps[i * n + j] as u32),
            );
        }
        m
    }
}

/// Feasible prefixes of length `depth`, in search order.
fn frontier(plan: &Plan, target: usize, spent: &AtomicU64) -> (Vec<Vec<u8>>, usize) {
    let never = || false;
    let mut level: Vec<Vec<u8>> = vec![Vec::new()];
    let mut depth = 0;
    while level.len() < target && depth < plan.cells.len() {
        let mut next = Vec::new();
        for prefix in &level {
            let mut w = Worker::new(plan, u64::MAX, spent, &never);
            if !w.replay(prefix) {
                w.flush();
                continue;
            }
            for e in w.choices(depth) {
                w.nodes += 1;
                w.pending += 1;
                w.mark(depth, e);
                if w.apply(depth, e) {
                    let mut p = prefix.clone();
                    p.push(e);
                    next.push(p);
                }
                w.undo(depth);
            }
            w.flush();
        }
        level = next;
        depth += 1;
        if level.is_empty() {
            break;
        }
    }
    (level, depth)
}

/// Decide whether `inst` lifts, spending at most about `budget` node visits.
///
/// Subtrees are searched in parallel but the reported matrix is always the
/// first solution in sequential search order.
pub fn lift_report(inst: &LiftInstance, budget: u64) -> LiftReport {
    let plan = Plan::new(inst);
    let spent = AtomicU64::new(0);
    if plan.cells.is_empty() {
        return LiftReport {
            outcome: LiftOutcome::Lifted(GwMatrix::zeros(plan.n, plan.k)),
            nodes: 0,
        };
    }
    let target = if plan.cells.len() < 24 {
        1
    } else {
        rayon::current_num_threads() * 16
    };
    let (roots, depth) = frontier(&plan, target, &spent);
    let best = AtomicUsize::new(usize::MAX);
    let over = AtomicBool::new(false);
    let results: Vec<(Step, Option<GwMatrix>)> = roots
        .par_iter()
        .enumerate()
        .map(|(idx, prefix)| {
            if best.load(Ordering::Relaxed) < idx || over.load(Ordering::Relaxed) {
                return (Step::Stopped, None);
            }
            let stop = || best.load(Ordering::Relaxed) < idx;
            let mut w = Worker::new(&plan, budget, &spent, &stop);
            let step = if w.replay(prefix) {
                w.dfs(depth)
            } else {
                Step::Exhausted
            };
            w.flush();
            match step {
                Step::Found => {
                    best.fetch_min(idx, Ordering::Relaxed);
                    (step, Some(w.matrix()))
                }
                Step::Stopped => {
                    if best.load(Ordering::Relaxed) > idx {
                        over.store(true, Ordering::Relaxed);
                    }
                    (step, None)
                }
                Step::Exhausted => (step, None),
            }
        })
        .collect();
    let nodes = spent.load(Ordering::Relaxed);
    let mut outcome = LiftOutcome::NoLift;
    for (step, m) in results {
        match step {
            Step::Found => {
                outcome = LiftOutcome::Lifted(m.expect("found subtree carries a matrix"));
                break;
            }
            Step::Stopped => {
                outcome = LiftOutcome::BudgetExceeded;
                break;
            }
            Step::Exhausted => {}
        }
    }
    LiftReport { outcome, nodes }
}

pub fn lift(inst: &LiftInstance, budget: u64) -> LiftOutcome {
    lift_report(inst, budget).outcome
}

/// Single-threaded lift; used where the caller parallelises over instances.
pub fn lift_sequential(inst: &LiftInstance, budget: u64) -> LiftReport {
    let plan = Plan::new(inst);
    let spent = AtomicU64::new(0);
    let never = || false;
    let mut w = Worker::new(&plan, budget, &spent, &never);
    let step = w.dfs(0);
    w.flush();
    let outcome = match step {
        Step::Found => LiftOutcome::Lifted(w.matrix()),
        Step::Exhausted => LiftOutcome::NoLift,
        Step::Stopped => LiftOutcome::BudgetExceeded,
    };
    LiftReport {
        outcome,
        nodes: w.nodes,
    }
}

/// Try every assignment of roots to the ones of the support, without
/// normalisation or pruning. Returns the first solution in lexicographic
/// order of exponents.
pub fn brute_lift_oracle(inst: &LiftInstance) -> Result<LiftOutcome> {
    let s = &inst.support;
    let n = s.n();
    let cells: Vec<(usize, usize)> = (0..n * n)
        .map(|t| (t / n, t % n))
        .filter(|&(i, j)| s.get(i, j))
        .collect();
    if cells.len() > ORACLE_CELL_CAP {
        return Err(CgwError::BudgetExceeded(format!(
            "oracle handles at most {ORACLE_CELL_CAP} ones, got {}",
            cells.len()
        )));
    }
    let k = inst.k;
    let mut exps = vec![0u32; cells.len()];
    let mut m = GwMatrix::zeros(n, k);
    loop {
        for (&(i, j), &e) in cells.iter().zip(&exps) {
            m.set(i, j, crate::cyclotomic::Entry::Root(e));
        }
        if m.verify().ok {
            return Ok(LiftOutcome::Lifted(m));
        }
        let mut t = cells.len();
        loop {
            if t == 0 {
                return Ok(LiftOutcome::NoLift);
            }
            t -= 1;
            exps[t] += 1;
            if exps[t] < k {
                break;
            }
            exps[t] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::sbibd_11_5_2;

    fn inst(rows: &[&str], k: u32) -> LiftInstance {
        let rows: Vec<Vec<u8>> = rows
            .iter()
            .map(|r| r.bytes().map(|b| b - b'0').collect())
            .collect();
        LiftInstance::new(Support::from_rows(&rows).unwrap(), k).unwrap()
    }

    #[test]
    fn small_cases() {
        let j2 = inst(&["11", "11"], 2);
        let LiftOutcome::Lifted(h) = lift(&j2, DEFAULT_BUDGET) else {
            panic!("J2 lifts over k=2")
        };
        assert!(h.verify().ok);
        assert_eq!(
            lift(&inst(&["111", "111", "111"], 2), DEFAULT_BUDGET),
            LiftOutcome::NoLift
        );
        assert!(lift(&inst(&["111", "111", "111"], 3), DEFAULT_BUDGET).is_lifted());
    }

    #[test]
    fn berman_support_lifts() {
        let s = inst(&["01111", "10111", "11011", "11101", "11110"], 3);
        let LiftOutcome::Lifted(m) = lift(&s, DEFAULT_BUDGET) else {
            panic!("J5 - I5 lifts over k=3")
        };
        assert_eq!(
            (m.verify().weight, m.support()),
            (Some(4), s.support().clone())
        );
        let berman = crate::constructions::berman_cgw(2, 2, 2, 3, 3).unwrap();
        assert_eq!(m.fingerprint().unwrap(), berman.fingerprint().unwrap());
    }

    #[test]
    fn biplane_does_not_lift_over_u4() {
        let i = LiftInstance::new(sbibd_11_5_2(), 4).unwrap();
        let r = lift_report(&i, DEFAULT_BUDGET);
        assert_eq!(r.outcome, LiftOutcome::NoLift);
    }

    #[test]
    fn budget_is_reported() {
        let i = LiftInstance::new(sbibd_11_5_2(), 4).unwrap();
        assert_eq!(lift(&i, 10), LiftOutcome::BudgetExceeded);
        assert_eq!(lift_sequential(&i, 10).outcome, LiftOutcome::BudgetExceeded);
    }

    #[test]
    fn rejects_irregular_supports() {
        let rows = vec![vec![1, 1], vec![0, 1]];
        assert!(LiftInstance::new(Support::from_rows(&rows).unwrap(), 2).is_err());
    }

    #[test]
    fn oracle_agrees_on_tiny_cases() {
        for (rows, k) in [
            (vec!["11", "11"], 2),
            (vec!["11", "11"], 3),
            (vec!["110", "011", "101"], 2),
            (vec!["111", "111", "111"], 3),
        ] {
            let i = inst(&rows, k);
            let a = brute_lift_oracle(&i).unwrap().is_lifted();
            assert_eq!(a, lift(&i, DEFAULT_BUDGET).is_lifted(), "{rows:?} k={k}");
        }
        let big = LiftInstance::new(Support::all_ones(4), 2).unwrap();
        assert!(brute_lift_oracle(&big).is_err());
    }
}
