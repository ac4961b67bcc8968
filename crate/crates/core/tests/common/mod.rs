//! Checks shared by the property suite and the acceptance run.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cgw_core::codes::{
    cgw_to_code, field_for_k, hermitian_dual, is_hso, min_distance_probe, min_distance_projective,
    Distance, LinearCode,
};
use cgw_core::constructions::{berman_cgw, paley_cgw, sw_cgw};
use cgw_core::library::{witness, witness_names};
use cgw_core::lifting::{brute_lift_oracle, lift, LiftInstance, LiftOutcome, DEFAULT_BUDGET};
use cgw_core::{CycElt, Entry, FieldCtx, FieldElt, GwMatrix, Support};

pub type Check = std::result::Result<(), TestCaseError>;

pub fn config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn eval(x: &CycElt) -> (f64, f64) {
    let k = x.k() as f64;
    x.coeffs()
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(re, im), (j, &c)| {
            let t = 2.0 * PI * j as f64 / k;
            (re + c as f64 * t.cos(), im + c as f64 * t.sin())
        })
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    let scale = 1.0 + a.0.abs().max(a.1.abs()).max(b.0.abs()).max(b.1.abs());
    (a.0 - b.0).abs() <= 1e-9 * scale && (a.1 - b.1).abs() <= 1e-9 * scale
}

fn primes_dividing(k: u32) -> Vec<u32> {
    (2..=k)
        .filter(|p| k.is_multiple_of(*p) && (2..*p).all(|d| p % d != 0))
        .collect()
}

/// Exponents of a random vanishing sum: rotated full sets of `p`-th roots.
fn vanishing_exponents(k: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let primes = primes_dividing(k);
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(1..4) {
        let p = primes[rng.gen_range(0..primes.len())];
        let shift = rng.gen_range(0..k);
        out.extend((0..p).map(|t| (shift + t * (k / p)) % k));
    }
    out
}

pub fn cyc_pair() -> impl Strategy<Value = (u32, Vec<i64>, Vec<i64>)> {
    (1u32..=30).prop_flat_map(|k| {
        let v = prop::collection::vec(-20i64..=20, k as usize);
        (Just(k), v.clone(), v)
    })
}

pub fn check_cyclotomic((k, a, b): (u32, Vec<i64>, Vec<i64>)) -> Check {
    let x = CycElt::from_coeffs(k, a).unwrap();
    let y = CycElt::from_coeffs(k, b).unwrap();
    let (fx, fy) = (eval(&x), eval(&y));
    let sum = eval(&x.add(&y).unwrap());
    prop_assert!(close(sum, (fx.0 + fy.0, fx.1 + fy.1)));
    let diff = eval(&x.sub(&y).unwrap());
    prop_assert!(close(diff, (fx.0 - fy.0, fx.1 - fy.1)));
    let prod = eval(&x.mul(&y).unwrap());
    prop_assert!(close(
        prod,
        (fx.0 * fy.0 - fx.1 * fy.1, fx.0 * fy.1 + fx.1 * fy.0)
    ));
    prop_assert!(close(eval(&x.conj()), (fx.0, -fx.1)));
    prop_assert!(x.sub(&x).unwrap().is_zero());
    let small = fx.0.abs() < 1e-9 && fx.1.abs() < 1e-9;
    prop_assert_eq!(x.is_zero(), small);
    Ok(())
}

pub fn check_vanishing((k, seed): (u32, u64)) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = CycElt::zero(k);
    for e in vanishing_exponents(k, &mut rng) {
        x.add_term(e, 1);
    }
    prop_assert!(x.is_zero());
    let f = eval(&x);
    prop_assert!(f.0.abs() < 1e-9 && f.1.abs() < 1e-9);
    Ok(())
}

pub fn witness_pool() -> Vec<GwMatrix> {
    let mut v = vec![
        berman_cgw(2, 2, 2, 3, 3).unwrap(),
        berman_cgw(2, 2, 3, 3, 3).unwrap(),
        paley_cgw(7, 3).unwrap(),
        paley_cgw(5, 2).unwrap(),
        sw_cgw(9).unwrap(),
        GwMatrix::fourier(6),
    ];
    v.extend(witness_names().map(|n| witness(n).unwrap().matrix));
    v
}

fn shuffled(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

pub fn check_fingerprint(pool: &[GwMatrix], (pick, seed): (usize, u64)) -> Check {
    let m = &pool[pick % pool.len()];
    let (n, k) = (m.n(), m.k());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rp = shuffled(n, &mut rng);
    let cp = shuffled(n, &mut rng);
    let rs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let cs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let t = m.transform(&rp, &rs, &cp, &cs).unwrap();
    prop_assert!(t.verify().ok);
    prop_assert_eq!(t.fingerprint().unwrap(), m.fingerprint().unwrap());
    Ok(())
}

fn random_code(ctx: &Arc<FieldCtx>, n: usize, rows: usize, seed: u64) -> LinearCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = ctx.order();
    let gen = (0..rows)
        .map(|_| {
            (0..n)
                .map(|_| ctx.elt(rng.gen_range(0..order)).unwrap())
                .collect()
        })
        .collect();
    LinearCode::new(Arc::clone(ctx), n, gen).unwrap()
}

pub fn dual_case() -> impl Strategy<Value = (u32, usize, usize, u64)> {
    (
        prop::sample::select(vec![4u32, 9, 16, 25, 49]),
        1usize..12,
        0usize..8,
        any::<u64>(),
    )
}

pub fn check_dual((qq, n, rows, seed): (u32, usize, usize, u64)) -> Check {
    let ctx = field_for_k(((qq as f64).sqrt() as u32) + 1).unwrap();
    prop_assert_eq!(ctx.order(), qq);
    let c = random_code(&ctx, n, rows.min(n + 2), seed);
    let d = hermitian_dual(&c);
    prop_assert_eq!(c.dim() + d.dim(), n);
    prop_assert_eq!(hermitian_dual(&d), c.clone());
    for x in c.rref() {
        for y in d.rref() {
            prop_assert!(c.hermitian_inner(x, y).is_zero());
        }
    }
    Ok(())
}

pub fn distance_case() -> impl Strategy<Value = (u32, usize, usize, u64)> {
    (
        prop::sample::select(vec![4u32, 9]),
        2usize..10,
        1usize..=4,
        any::<u64>(),
    )
}

pub fn check_distance((qq, n, rows, seed): (u32, usize, usize, u64)) -> Check {
    let ctx = field_for_k(if qq == 4 { 3 } else { 4 }).unwrap();
    let c = random_code(&ctx, n, rows.min(n), seed);
    let a = min_distance_projective(&c, u64::MAX).unwrap().distance;
    let b = min_distance_probe(&c, u64::MAX).unwrap().distance;
    prop_assert_eq!(a, b);
    if c.dim() > 0 {
        prop_assert!(matches!(a, Distance::Exact(d) if d >= 1 && d <= n));
    }
    Ok(())
}

/// Field image of `ζ_k^j` is `α^j` with `α = prim^(q-1)`.
fn image(ctx: &FieldCtx, q: u32, e: Entry) -> FieldElt {
    match e {
        Entry::Zero => FieldElt::ZERO,
        Entry::Root(j) => ctx.pow(ctx.pow(ctx.prim(), (q - 1) as u64), j as u64),
    }
}

/// Random pairs over `U_k`, `k` in 3..=6, with exact inner product zero;
/// each must map to a Hermitian-orthogonal pair over `GF(q^2)`.
pub fn orthogonal_pairs(count: usize, seed: u64) -> std::result::Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..count {
        let k = [3u32, 4, 5, 6][trial % 4];
        let q = k - 1;
        let ctx = field_for_k(k).unwrap();
        // the products x_i conj(y_i) form a vanishing sum, padded with zeros
        let terms = vanishing_exponents(k, &mut rng);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for &s in &terms {
            let xi = rng.gen_range(0..k);
            x.push(Entry::Root(xi));
            y.push(Entry::Root((xi + k - s) % k));
        }
        for _ in 0..rng.gen_range(0..4) {
            x.push(if rng.gen_bool(0.5) {
                Entry::Root(rng.gen_range(0..k))
            } else {
                Entry::Zero
            });
            y.push(Entry::Zero);
        }
        let mut exact = CycElt::zero(k);
        for (a, b) in x.iter().zip(&y) {
            if let (Entry::Root(a), Entry::Root(b)) = (a, b) {
                exact.add_term((a + k - b) % k, 1);
            }
        }
        if !exact.is_zero() {
            return Err(format!("trial {trial}: pair is not orthogonal"));
        }
        let field = x.iter().zip(&y).fold(FieldElt::ZERO, |acc, (a, b)| {
            let fb = ctx.pow(image(&ctx, q, *b), q as u64);
            ctx.add(acc, ctx.mul(image(&ctx, q, *a), fb))
        });
        if !field.is_zero() {
            return Err(format!("trial {trial}: k={k} image is not orthogonal"));
        }
    }
    Ok(())
}

/// Every pooled witness whose weight the characteristic divides gives a
/// Hermitian self-orthogonal code. Returns how many qualified.
pub fn hso_witnesses() -> std::result::Result<usize, String> {
    let mut checked = 0;
    for m in witness_pool() {
        let Ok(ctx) = field_for_k(m.k()) else {
            continue;
        };
        let w = m.row_weight(0) as u32;
        if !w.is_multiple_of(ctx.p()) {
            continue;
        }
        let c = cgw_to_code(&m, &ctx).unwrap();
        if !is_hso(&c) {
            return Err(format!(
                "CGW({},{w};{}) is not self-orthogonal",
                m.n(),
                m.k()
            ));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Root orders whose full assignment space has at most 600k points.
pub fn oracle_orders(ones: usize) -> impl Iterator<Item = u32> {
    (2u32..=6).filter(move |&k| (k as f64).powi(ones as i32) <= 6e5)
}

/// Fast lift and brute force agree on existence; lifts are valid.
pub fn agrees_with_oracle(support: &Support, k: u32) -> std::result::Result<(), String> {
    let Ok(inst) = LiftInstance::new(support.clone(), k) else {
        return Ok(());
    };
    let fast = lift(&inst, DEFAULT_BUDGET);
    let slow = brute_lift_oracle(&inst).map_err(|e| e.to_string())?;
    if fast.is_lifted() != slow.is_lifted() {
        return Err(format!("{support:?} k={k}: lift and oracle disagree"));
    }
    if let LiftOutcome::Lifted(m) = fast {
        if !m.verify().ok || &m.support() != support {
            return Err(format!("{support:?} k={k}: invalid lift"));
        }
    }
    Ok(())
}

/// Every support of order at most 3 with constant row and column sums.
pub fn small_regular_supports() -> Vec<Support> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        for bits in 0u32..1 << (n * n) {
            let cells: Vec<bool> = (0..n * n).map(|t| bits >> t & 1 == 1).collect();
            if bits == 0 {
                continue;
            }
            let s = Support::new(n, cells).unwrap();
            if LiftInstance::new(s.clone(), 2).is_ok() {
                out.push(s);
            }
        }
    }
    out
}

/// Random regular 4x4 supports, each a union of disjoint permutation
/// matrices, so at most 12 ones.
pub fn random_four_by_four(count: usize, seed: u64) -> Vec<Support> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let w = rng.gen_range(1..=3);
            let mut cells = vec![false; 16];
            let mut placed = 0;
            while placed < w {
                let p = shuffled(4, &mut rng);
                if p.iter().enumerate().all(|(i, &j)| !cells[i * 4 + j]) {
                    for (i, &j) in p.iter().enumerate() {
                        cells[i * 4 + j] = true;
                    }
                    placed += 1;
                }
            }
            Support::new(4, cells).unwrap()
        })
        .collect()
}

/// Oracle equivalence over a family of supports.
pub fn oracle_family(supports: &[Support]) -> std::result::Result<(), String> {
    for s in supports {
        for k in oracle_orders(s.count_ones()) {
            agrees_with_oracle(s, k)?;
        }
    }
    Ok(())
}
