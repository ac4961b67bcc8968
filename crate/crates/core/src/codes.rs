//! Linear codes over `GF(q²)` built from CGWs, Hermitian duality, and exact
//! minimum distance.
//!
//! A `CGW(n, w; q+1)` maps to a matrix over `GF(q²)` by sending `ζ^j` to
//! `α^j`, where `α = prim^{q-1}` has multiplicative order `q + 1`. When the
//! characteristic divides `w` the rows span a Hermitian self-orthogonal code
//! under `⟨x, y⟩ = Σ x_i y_i^q`.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::cyclotomic::Entry;
use crate::error::{parse_err, CgwError, Result};
use crate::gf::{DenseTables, FieldCtx, FieldElt};
use crate::matrix::GwMatrix;
use crate::numtheory::{binomial, prime_power};

/// Largest field the distance kernels accept (dense tables are `Q²` cells).
pub const MAX_KERNEL_FIELD: u32 = 2048;

/// The field `GF(q²)` for root order `k = q + 1`.
pub fn field_for_k(k: u32) -> Result<Arc<FieldCtx>> {
    let unsupported = || CgwError::UnsupportedK {
        k,
        valid: valid_k_list(40),
    };
    let q = k
        .checked_sub(1)
        .filter(|&q| q >= 2)
        .ok_or_else(unsupported)?;
    let (p, r) = prime_power(q as u64).ok_or_else(unsupported)?;
    Ok(Arc::new(FieldCtx::new(p as u32, 2 * r)?))
}

/// Root orders `k = q + 1 <= limit` with `q` a prime power, comma separated.
pub fn valid_k_list(limit: u32) -> String {
    let mut ks: Vec<String> = (3..=limit)
        .filter(|&k| prime_power((k - 1) as u64).is_some())
        .map(|k| k.to_string())
        .collect();
    ks.push("...".into());
    ks.join(",")
}

/// Row space of a generator matrix over `GF(q²)`.
#[derive(Clone)]
pub struct LinearCode {
    ctx: Arc<FieldCtx>,
    q: u32,
    n: usize,
    gen: Vec<Vec<FieldElt>>,
    rref: Vec<Vec<FieldElt>>,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]_{} code", self.n, self.dim(), self.ctx.order())
    }
}

impl PartialEq for LinearCode {
    /// Same field and same row space.
    fn eq(&self, other: &Self) -> bool {
        self.ctx.order() == other.ctx.order() && self.n == other.n && self.rref == other.rref
    }
}

fn rref(ctx: &FieldCtx, rows: &[Vec<FieldElt>], n: usize) -> (Vec<Vec<FieldElt>>, Vec<usize>) {
    let mut m: Vec<Vec<FieldElt>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = ctx.inv(m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                let pivot = m[r].clone();
                for (x, &p) in m[i].iter_mut().zip(&pivot) {
                    *x = ctx.sub(*x, ctx.mul(f, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

impl LinearCode {
    /// The code spanned by `gen`; `ctx` must be `GF(q²)`.
    pub fn new(ctx: Arc<FieldCtx>, n: usize, gen: Vec<Vec<FieldElt>>) -> Result<Self> {
        let q = ctx.sqrt_order()?;
        if let Some(r) = gen.iter().find(|r| r.len() != n) {
            return Err(CgwError::Range(format!(
                "generator row of length {} in a length-{n} code",
                r.len()
            )));
        }
        if gen.iter().flatten().any(|x| x.0 >= ctx.order()) {
            return Err(CgwError::Range(format!(
                "field index outside GF({})",
                ctx.order()
            )));
        }
        let (rref, pivots) = rref(&ctx, &gen, n);
        Ok(LinearCode {
            ctx,
            q,
            n,
            gen,
            rref,
            pivots,
        })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Size `q` of the subfield; the code lives over `GF(q²)`.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rref.len()
    }

    pub fn generator(&self) -> &[Vec<FieldElt>] {
        &self.gen
    }

    /// Reduced row echelon basis (leftmost pivots, unit pivot entries).
    pub fn rref(&self) -> &[Vec<FieldElt>] {
        &self.rref
    }

    pub fn hermitian_inner(&self, x: &[FieldElt], y: &[FieldElt]) -> FieldElt {
        let f = &self.ctx;
        x.iter().zip(y).fold(FieldElt::ZERO, |acc, (&a, &b)| {
            f.add(acc, f.mul(a, f.pow(b, self.q as u64)))
        })
    }

    pub fn contains(&self, x: &[FieldElt]) -> bool {
        if x.len() != self.n {
            return false;
        }
        let f = &self.ctx;
        let mut v = x.to_vec();
        for (row, &p) in self.rref.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    /// Parity-check rows: a basis of `{x : Σ x_i g_i = 0}` for every generator `g`.
    fn parity_check(&self, conj: bool) -> Vec<Vec<FieldElt>> {
        let f = &self.ctx;
        let rows: Vec<Vec<FieldElt>> = if conj {
            self.rref
                .iter()
                .map(|r| r.iter().map(|&x| f.pow(x, self.q as u64)).collect())
                .collect()
        } else {
            self.rref.clone()
        };
        let (red, piv) = rref(f, &rows, self.n);
        let free: Vec<usize> = (0..self.n).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![FieldElt::ZERO; self.n];
                x[fc] = FieldElt::ONE;
                for (row, &pc) in red.iter().zip(&piv) {
                    x[pc] = f.neg(row[fc]);
                }
                x
            })
            .collect()
    }

    fn parity_matrix(&self) -> Vec<Vec<FieldElt>> {
        self.parity_check(false)
    }
}

/// Entrywise image of `w` under `ζ^j ↦ α^j`. When the characteristic divides
/// the weight the result is checked to be Hermitian self-orthogonal.
pub fn cgw_to_code(w: &GwMatrix, ctx: &Arc<FieldCtx>) -> Result<LinearCode> {
    let q = ctx.sqrt_order()?;
    if w.k() != q + 1 {
        return Err(CgwError::OrderMismatch(w.k(), q + 1));
    }
    let alpha = ctx.pow(ctx.prim(), (q - 1) as u64);
    let n = w.n();
    let gen = (0..n)
        .map(|i| {
            w.row(i)
                .iter()
                .map(|e| match e {
                    Entry::Zero => FieldElt::ZERO,
                    Entry::Root(j) => ctx.pow(alpha, *j as u64),
                })
                .collect()
        })
        .collect();
    let code = LinearCode::new(Arc::clone(ctx), n, gen)?;
    let weight = w.row_weight(0) as u32;
    if weight.is_multiple_of(ctx.p()) && !is_hso(&code) {
        return Err(CgwError::Construction(
            "image of a CGW with char | w is not Hermitian self-orthogonal".into(),
        ));
    }
    Ok(code)
}

/// Is `C ⊆ C^H`?
pub fn is_hso(c: &LinearCode) -> bool {
    let rows = c.rref();
    rows.iter()
        .enumerate()
        .all(|(i, x)| rows[i..].iter().all(|y| c.hermitian_inner(x, y).is_zero()))
}

/// `{x ∈ GF(q²)^n : ⟨x, y⟩ = 0 for all y ∈ C}`.
pub fn hermitian_dual(c: &LinearCode) -> LinearCode {
    let gen = c.parity_check(true);
    LinearCode::new(Arc::clone(&c.ctx), c.n, gen).expect("dual rows have the code length")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    Exact(usize),
    BudgetExceeded,
}

/// How a distance was found and what it cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceReport {
    pub distance: Distance,
    /// Codewords (strategy A) or candidate vectors (strategy B) examined.
    pub evaluations: u64,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Every message up to scalars.
    Projective,
    /// Every vector of weight 1, 2, ... until one lies in the code.
    LowWeightProbe,
}

fn kernel_tables(c: &LinearCode) -> Result<DenseTables> {
    if c.ctx.order() > MAX_KERNEL_FIELD {
        return Err(CgwError::Domain(format!(
            "distance kernels support fields up to order {MAX_KERNEL_FIELD}"
        )));
    }
    Ok(c.ctx.dense_tables())
}

/// Messages strategy A visits: `(Q^dim - 1) / (Q - 1)`.
pub fn projective_cost(field_order: u32, dim: usize) -> Option<u64> {
    let qq = field_order as u128;
    let total = qq.checked_pow(dim as u32)?;
    u64::try_from((total - 1) / (qq - 1)).ok()
}

/// Vectors strategy B visits at exactly weight `t`.
pub fn probe_cost(field_order: u32, n: usize, t: usize) -> Option<u64> {
    let s = (field_order as u128 - 1).checked_pow(t.saturating_sub(1) as u32)?;
    u64::try_from(binomial(n as u64, t as u64).checked_mul(s)?).ok()
}

/// Minimum weight by projective message enumeration.
pub fn min_distance_projective(c: &LinearCode, budget: u64) -> Result<DistanceReport> {
    let dim = c.dim();
    if dim == 0 {
        return Err(CgwError::Precondition(
            "the zero code has no minimum distance".into(),
        ));
    }
    let qq = c.ctx.order();
    let cost = projective_cost(qq, dim).unwrap_or(u64::MAX);
    if cost > budget {
        return Ok(DistanceReport {
            distance: Distance::BudgetExceeded,
            evaluations: 0,
            strategy: Strategy::Projective,
        });
    }
    let t = kernel_tables(c)?;
    let rows: Vec<Vec<u16>> = c
        .rref
        .iter()
        .map(|r| r.iter().map(|x| x.0 as u16).collect())
        .collect();
    // Work items: leading position `lead` (message coordinate fixed to 1)
    // and, for parallelism, the value of the next coordinate.
    let mut items = Vec::new();
    for lead in 0..dim {
        if lead + 1 < dim {
            for v in 0..qq as u16 {
                items.push((lead, Some(v)));
            }
        } else {
            items.push((lead, None));
        }
    }
    let best = AtomicUsize::new(c.n);
    let evals = AtomicU64::new(0);
    items.par_iter().for_each(|&(lead, second)| {
        let n = c.n;
        let mut cw: Vec<u16> = rows[lead].clone();
        let mut start = lead + 1;
        if let Some(v) = second {
            for (a, &b) in cw.iter_mut().zip(&rows[lead + 1]) {
                *a = t.add(*a, t.mul(v, b));
            }
            start = lead + 2;
        }
        let free = &rows[start..];
        let mut digits = vec![0u16; free.len()];
        let mut local_best = best.load(Ordering::Relaxed);
        let mut count = 0u64;
        loop {
            count += 1;
            let wt = cw.iter().filter(|&&x| x != 0).count();
            if wt < local_best {
                local_best = wt;
                best.fetch_min(wt, Ordering::Relaxed);
            }
            // odometer step; value v -> v+1 adds (v+1 - v) * row
            let mut pos = free.len();
            loop {
                if pos == 0 {
                    evals.fetch_add(count, Ordering::Relaxed);
                    return;
                }
                pos -= 1;
                let old = digits[pos];
                let new = if old as u32 + 1 == qq { 0 } else { old + 1 };
                digits[pos] = new;
                let delta = t.add(new, t.neg[old as usize]);
                for j in 0..n {
                    cw[j] = t.add(cw[j], t.mul(delta, free[pos][j]));
                }
                if new != 0 {
                    break;
                }
            }
        }
    });
    Ok(DistanceReport {
        distance: Distance::Exact(best.into_inner()),
        evaluations: evals.into_inner(),
        strategy: Strategy::Projective,
    })
}

/// Does some vector of weight exactly `wt` (first nonzero entry 1) lie in
/// the code? `h` holds the parity-check columns.
fn probe_weight(
    t: &DenseTables,
    h_cols: &[Vec<u16>],
    n: usize,
    wt: usize,
    stop: &AtomicBool,
) -> bool {
    let r = h_cols.first().map_or(0, |c| c.len());
    let qq = t.q as u16;
    let mut support: Vec<usize> = (0..wt).collect();
    let mut syn = vec![0u16; r];
    loop {
        if stop.load(Ordering::Relaxed) {
            return false;
        }
        // syndrome with all scalings 1
        syn.iter_mut().for_each(|s| *s = 0);
        for &j in &support {
            for (s, &h) in syn.iter_mut().zip(&h_cols[j]) {
                *s = t.add(*s, h);
            }
        }
        let mut scal = vec![1u16; wt];
        loop {
            if syn.iter().all(|&s| s == 0) {
                return true;
            }
            let mut pos = wt;
            let mut done = true;
            while pos > 1 {
                pos -= 1;
                let old = scal[pos];
                let new = if old + 1 == qq { 1 } else { old + 1 };
                scal[pos] = new;
                let delta = t.add(new, t.neg[old as usize]);
                for (s, &h) in syn.iter_mut().zip(&h_cols[support[pos]]) {
                    *s = t.add(*s, t.mul(delta, h));
                }
                if new != 1 {
                    done = false;
                    break;
                }
            }
            if done {
                break;
            }
        }
        // next support in lexicographic order
        let mut i = wt;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if support[i] < n - wt + i {
                support[i] += 1;
                for j in i + 1..wt {
                    support[j] = support[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Minimum weight by testing all vectors of weight 1, 2, ... for membership.
pub fn min_distance_probe(c: &LinearCode, budget: u64) -> Result<DistanceReport> {
    probe_until(c, budget, u64::MAX)
}

/// Probe upward while the next level fits in `min(budget, limit)`.
fn probe_until(c: &LinearCode, budget: u64, limit: u64) -> Result<DistanceReport> {
    if c.dim() == 0 {
        return Err(CgwError::Precondition(
            "the zero code has no minimum distance".into(),
        ));
    }
    let t = kernel_tables(c)?;
    let h = c.parity_matrix();
    let n = c.n;
    let h_cols: Vec<Vec<u16>> = (0..n)
        .map(|j| h.iter().map(|row| row[j].0 as u16).collect())
        .collect();
    let qq = c.ctx.order();
    let cap = budget.min(limit);
    let mut spent = 0u64;
    for wt in 1..=n {
        let cost = probe_cost(qq, n, wt).unwrap_or(u64::MAX);
        if spent.saturating_add(cost) > cap {
            break;
        }
        spent += cost;
        let stop = AtomicBool::new(false);
        if probe_weight(&t, &h_cols, n, wt, &stop) {
            return Ok(DistanceReport {
                distance: Distance::Exact(wt),
                evaluations: spent,
                strategy: Strategy::LowWeightProbe,
            });
        }
    }
    Ok(DistanceReport {
        distance: Distance::BudgetExceeded,
        evaluations: spent,
        strategy: Strategy::LowWeightProbe,
    })
}

/// Exact minimum distance, using whichever strategy is cheaper.
///
/// The probe runs first as long as its cumulative cost stays below both
/// the budget and the cost of full enumeration; otherwise enumeration
/// takes over if it fits.
pub fn min_distance(c: &LinearCode, budget: u64) -> Result<DistanceReport> {
    let a_cost = projective_cost(c.ctx.order(), c.dim()).unwrap_or(u64::MAX);
    let probe = probe_until(c, budget, a_cost)?;
    if probe.distance != Distance::BudgetExceeded {
        return Ok(probe);
    }
    let mut a = min_distance_projective(c, budget)?;
    a.evaluations += probe.evaluations;
    Ok(a)
}

/// Number of codewords of each weight `0..=n`, by full enumeration.
pub fn weight_distribution(c: &LinearCode, budget: u64) -> Result<Vec<u64>> {
    let qq = c.ctx.order() as u64;
    let cost = projective_cost(c.ctx.order(), c.dim()).unwrap_or(u64::MAX);
    if cost > budget {
        return Err(CgwError::BudgetExceeded(format!(
            "{cost} messages exceed the budget of {budget}"
        )));
    }
    let t = kernel_tables(c)?;
    let n = c.n;
    let mut dist = vec![0u64; n + 1];
    dist[0] = 1;
    let rows: Vec<Vec<u16>> = c
        .rref
        .iter()
        .map(|r| r.iter().map(|x| x.0 as u16).collect())
        .collect();
    for lead in 0..c.dim() {
        let mut cw = rows[lead].clone();
        let free = &rows[lead + 1..];
        let mut digits = vec![0u16; free.len()];
        'outer: loop {
            dist[cw.iter().filter(|&&x| x != 0).count()] += qq - 1;
            let mut pos = free.len();
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                let old = digits[pos];
                let new = if old as u64 + 1 == qq { 0 } else { old + 1 };
                digits[pos] = new;
                let delta = t.add(new, t.neg[old as usize]);
                for j in 0..n {
                    cw[j] = t.add(cw[j], t.mul(delta, free[pos][j]));
                }
                if new != 0 {
                    break;
                }
            }
        }
    }
    Ok(dist)
}

/// `CODE q2=<Q> n=<n> rows=<r>` followed by `r` rows of field indices.
pub fn code_to_text(c: &LinearCode) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "CODE q2={} n={} rows={}",
        c.ctx.order(),
        c.n,
        c.gen.len()
    );
    for r in &c.gen {
        let line: Vec<String> = r.iter().map(|x| x.0.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_code(text: &str) -> Result<LinearCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let Some((hl, header)) = lines.next() else {
        return Err(parse_err(1, 1, "empty code file"));
    };
    let mut fields = header.split_whitespace();
    if fields.next() != Some("CODE") {
        return Err(parse_err(
            hl + 1,
            1,
            "expected header `CODE q2=.. n=.. rows=..`",
        ));
    }
    let mut get = |key: &str| -> Result<usize> {
        let tok = fields
            .next()
            .ok_or_else(|| parse_err(hl + 1, header.len() + 1, format!("missing {key}=")))?;
        let col = header.find(tok).unwrap_or(0) + 1;
        tok.strip_prefix(key)
            .and_then(|v| v.strip_prefix('='))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| parse_err(hl + 1, col, format!("expected {key}=<integer>")))
    };
    let qq = get("q2")?;
    let n = get("n")?;
    let r = get("rows")?;
    let (p, e) = prime_power(qq as u64)
        .filter(|&(_, e)| e % 2 == 0)
        .ok_or_else(|| {
            parse_err(
                hl + 1,
                6,
                format!("q2={qq} is not an even power of a prime"),
            )
        })?;
    let ctx = Arc::new(FieldCtx::new(p as u32, e)?);
    let mut gen = Vec::with_capacity(r);
    for (ln, line) in lines {
        let mut row = Vec::with_capacity(n);
        let mut col = 1;
        for tok in line.split_whitespace() {
            col = line[col - 1..].find(tok).map_or(col, |o| o + col);
            let v: u32 = tok.parse().ok().filter(|&v| v < qq as u32).ok_or_else(|| {
                parse_err(
                    ln + 1,
                    col,
                    format!("`{tok}` is not an element of GF({qq})"),
                )
            })?;
            row.push(FieldElt(v));
        }
        if row.len() != n {
            return Err(parse_err(
                ln + 1,
                1,
                format!("expected {n} entries, got {}", row.len()),
            ));
        }
        gen.push(row);
    }
    if gen.len() != r {
        return Err(parse_err(
            hl + 1,
            1,
            format!("header says {r} rows, found {}", gen.len()),
        ));
    }
    LinearCode::new(ctx, n, gen)
}
