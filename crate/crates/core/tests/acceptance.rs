//! Acceptance run: one line per criterion.
//!
//! `cargo test -p cgw-core --test acceptance -- --nocapture`

mod common;

use std::time::{Duration, Instant};

use proptest::test_runner::TestRunner;

use cgw_core::codes::{hermitian_dual, min_distance, Distance, Strategy};
use cgw_core::constructions::Recipe;
use cgw_core::library::{sbibd_11_5_2, witness};
use cgw_core::lifting::{lift, LiftInstance, LiftOutcome};
use cgw_core::nonexistence::analytic_rules;
use cgw_core::quantum::pipeline;
use cgw_core::tables::{build_grid, compare_reference, reference_grid, Provenance, State};
use cgw_core::{GwMatrix, Support};
use common::*;

const DISTANCE_BUDGET: u64 = 1_000_000_000;
const CONSTRUCTIONS_LIMIT: Duration = Duration::from_secs(10);
const GRID_LIMIT: Duration = Duration::from_secs(300);
const SBIBD_LIMIT: Duration = Duration::from_secs(1800);
const ORACLE_LIMIT: Duration = Duration::from_secs(300);
const RULES_LIMIT: Duration = Duration::from_secs(1);
const PROPERTY_CASES: u32 = 128;

/// Cells where the published grid says N and a verified witness exists.
const MISPRINTS: &[(usize, usize, u32)] = &[(15, 3, 3), (15, 5, 5)];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the only failures are the known misprints.
    misprints_only: bool,
}

impl Outcome {
    fn from(problems: Vec<String>, ok_detail: String) -> Self {
        Outcome {
            pass: problems.is_empty(),
            detail: if problems.is_empty() {
                ok_detail
            } else {
                problems.join("; ")
            },
            misprints_only: false,
        }
    }
}

fn criterion_constructions() -> Outcome {
    let cases: &[(&str, (usize, u32, u32))] = &[
        ("paley(q=5,p=2)", (6, 5, 2)),
        ("paley(q=7,p=3)", (8, 7, 3)),
        ("paley(q=13,p=3)", (14, 13, 3)),
        ("berman(p=2,n=2,t=2,r=3,d=3)", (5, 4, 3)),
        ("berman(p=2,n=2,t=3,r=3,d=3)", (21, 16, 3)),
        ("sw(q=9)", (10, 9, 4)),
        ("sw(q=17)", (18, 17, 4)),
        ("sw(q=25)", (26, 25, 4)),
        ("wppgp(k=4,alpha=0,a=[0,1,0,.,.],b=[0,2,2,.,.])", (10, 6, 4)),
        (
            "weave(mask=[11100,01110,00111,10011,11001],a=fourier(n=3),b=fourier(n=3))",
            (15, 9, 3),
        ),
    ];
    let start = Instant::now();
    let mut problems = Vec::new();
    for &(text, (n, w, k)) in cases {
        let built = text.parse::<Recipe>().and_then(|r| r.build());
        match built {
            Ok(m) => {
                let r = m.verify();
                if !(r.ok && r.weight == Some(w) && m.n() == n && m.k() == k) {
                    problems.push(format!("{text} is not a CGW({n},{w};{k})"));
                }
            }
            Err(e) => problems.push(format!("{text}: {e}")),
        }
    }
    let t = start.elapsed();
    if t >= CONSTRUCTIONS_LIMIT {
        problems.push(format!("took {t:.2?}"));
    }
    Outcome::from(
        problems,
        format!("{} witnesses verify in {t:.2?}", cases.len()),
    )
}

struct Row {
    label: &'static str,
    matrix: GwMatrix,
    code: (usize, usize, usize),
    quantum: &'static str,
    limit: Duration,
}

fn criterion_table_rows() -> Outcome {
    let recipe = |s: &str| s.parse::<Recipe>().unwrap().build().unwrap();
    let bundled = |name: &str| witness(name).unwrap().matrix;
    let rows = vec![
        Row {
            label: "CGW(5,4;3)",
            matrix: recipe("berman(p=2,n=2,t=2,r=3,d=3)"),
            code: (5, 2, 4),
            quantum: "[[5,1,3]]_2",
            limit: Duration::from_secs(1),
        },
        Row {
            label: "BH(6,4)",
            matrix: bundled("bh_6_4"),
            code: (6, 3, 4),
            quantum: "[[6,0,4]]_3",
            limit: Duration::from_secs(1),
        },
        Row {
            label: "sw(9)",
            matrix: recipe("sw(q=9)"),
            code: (10, 5, 4),
            quantum: "[[10,0,4]]_3",
            limit: Duration::from_secs(1),
        },
        Row {
            label: "BH(10,5)",
            matrix: bundled("bh_10_5"),
            code: (10, 5, 6),
            quantum: "[[10,0,6]]_4",
            limit: Duration::from_secs(1),
        },
        Row {
            label: "BH(10,6)",
            matrix: bundled("bh_10_6"),
            code: (10, 5, 5),
            quantum: "[[10,0,5]]_5",
            limit: Duration::from_secs(10),
        },
        Row {
            label: "CGW(12,10;6)",
            matrix: bundled("cgw_12_10_6"),
            code: (12, 6, 6),
            quantum: "[[12,0,6]]_5",
            limit: Duration::from_secs(300),
        },
        Row {
            label: "BH(18,4)",
            matrix: bundled("bh_18_4"),
            code: (18, 9, 8),
            quantum: "[[18,0,8]]_3",
            limit: Duration::from_secs(600),
        },
        Row {
            label: "berman(2,2,3,3,3)",
            matrix: recipe("berman(p=2,n=2,t=3,r=3,d=3)"),
            code: (21, 3, 16),
            quantum: "[[21,15,3]]_2",
            limit: Duration::from_secs(10),
        },
    ];
    let mut problems = Vec::new();
    let mut times = Vec::new();
    for row in rows {
        let start = Instant::now();
        let r = match pipeline(&row.matrix, DISTANCE_BUDGET) {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("{}: {e}", row.label));
                continue;
            }
        };
        let got = (r.code.n(), r.code.dim(), r.code_distance.unwrap_or(0));
        if got != row.code {
            problems.push(format!("{}: code {got:?}, want {:?}", row.label, row.code));
        }
        if r.params.to_string() != row.quantum {
            problems.push(format!("{}: {}, want {}", row.label, r.params, row.quantum));
        }
        if row.code.0 == 21 {
            let d = min_distance(&hermitian_dual(&r.code), DISTANCE_BUDGET).unwrap();
            if d.strategy != Strategy::LowWeightProbe || d.distance != Distance::Exact(3) {
                problems.push("berman(2,2,3,3,3): dual distance not 3 by the probe".into());
            }
        }
        let t = start.elapsed();
        if t >= row.limit {
            problems.push(format!("{}: took {t:.2?}", row.label));
        }
        times.push(format!("{} {t:.1?}", row.quantum));
    }
    Outcome::from(problems, format!("8 rows match ({})", times.join(", ")))
}

fn criterion_grids() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut hard = Vec::new();
    for k in 2..=6u32 {
        let g = match build_grid(k, 15) {
            Ok(g) => g,
            Err(e) => {
                problems.push(format!("k={k}: {e}"));
                continue;
            }
        };
        let r = reference_grid(k).unwrap();
        for d in compare_reference(&g, &r).hard {
            hard.push((d.n, d.w, k));
        }
        for (&(n, w), &want) in &r.cells {
            let v = g.get(n, w).unwrap();
            if MISPRINTS.contains(&(n, w, k)) {
                continue;
            }
            match want {
                State::NotExists => {
                    let justified = v.state == State::NotExists
                        && matches!(
                            v.provenance,
                            Provenance::Analytic(_)
                                | Provenance::Refuted { .. }
                                | Provenance::Literature(_)
                        );
                    if !justified {
                        problems.push(format!("({n},{w};{k}) N not justified: {}", v.provenance));
                    }
                }
                State::Exists => {
                    let witnessed = v.witness.as_ref().is_some_and(|m| {
                        let r = m.verify();
                        r.ok && r.weight == Some(w as u32) && m.n() == n && m.k() == k
                    });
                    let tagged = matches!(v.provenance, Provenance::Literature(_));
                    if v.state != State::Exists || !(witnessed || tagged) {
                        problems.push(format!("({n},{w};{k}) E without witness: {}", v.provenance));
                    }
                }
                State::Unknown => {
                    if v.state == State::Exists && v.witness.is_none() {
                        problems.push(format!("({n},{w};{k}) new E without witness"));
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    if t >= GRID_LIMIT {
        problems.push(format!("took {t:.2?}"));
    }
    let unexpected: Vec<_> = hard.iter().filter(|c| !MISPRINTS.contains(c)).collect();
    for (n, w, k) in &unexpected {
        problems.push(format!("hard contradiction at ({n},{w};{k})"));
    }
    let misprints_only = problems.is_empty() && !hard.is_empty();
    if misprints_only {
        let cells: Vec<String> = hard
            .iter()
            .map(|(n, w, k)| format!("({n},{w};{k})"))
            .collect();
        problems.push(format!(
            "hard contradictions at {}: the reference marks N where a verified witness exists; every other cell is justified ({t:.1?})",
            cells.join(", ")
        ));
    }
    Outcome {
        misprints_only,
        ..Outcome::from(problems, format!("k=2..6 consistent in {t:.1?}"))
    }
}

fn criterion_lifting() -> Outcome {
    let mut problems = Vec::new();
    let j3 = LiftInstance::new(Support::all_ones(3), 2).unwrap();
    if lift(&j3, u64::MAX) != LiftOutcome::NoLift {
        problems.push("J3 over k=2 lifts".into());
    }
    let start = Instant::now();
    let biplane = LiftInstance::new(sbibd_11_5_2(), 4).unwrap();
    if lift(&biplane, u64::MAX) != LiftOutcome::NoLift {
        problems.push("SBIBD(11,5,2) over k=4 lifts".into());
    }
    let t_sbibd = start.elapsed();
    if t_sbibd >= SBIBD_LIMIT {
        problems.push(format!("SBIBD refutation took {t_sbibd:.2?}"));
    }
    let start = Instant::now();
    let mut family = small_regular_supports();
    family.extend(random_four_by_four(100, 0x5eed_0005));
    if let Err(e) = oracle_family(&family) {
        problems.push(e);
    }
    let t_oracle = start.elapsed();
    if t_oracle >= ORACLE_LIMIT {
        problems.push(format!("oracle comparison took {t_oracle:.2?}"));
    }
    Outcome::from(
        problems,
        format!(
            "refutations hold (SBIBD {t_sbibd:.2?}); oracle agrees on {} supports in {t_oracle:.1?}",
            family.len()
        ),
    )
}

fn run_property<S: proptest::strategy::Strategy>(
    name: &str,
    seed: u64,
    strategy: S,
    check: impl Fn(S::Value) -> Check,
    problems: &mut Vec<String>,
) {
    let mut runner = TestRunner::new(config(PROPERTY_CASES, seed));
    if let Err(e) = runner.run(&strategy, check) {
        problems.push(format!("{name}: {e}"));
    }
}

fn criterion_properties() -> Outcome {
    use proptest::prelude::*;
    let mut problems = Vec::new();
    run_property(
        "cyclotomic",
        0xacc_0001,
        cyc_pair(),
        check_cyclotomic,
        &mut problems,
    );
    let pool = witness_pool();
    run_property(
        "fingerprint",
        0xacc_0002,
        (0usize..64, any::<u64>()),
        |c| check_fingerprint(&pool, c),
        &mut problems,
    );
    run_property("dual", 0xacc_0003, dual_case(), check_dual, &mut problems);
    run_property(
        "distance",
        0xacc_0004,
        distance_case(),
        check_distance,
        &mut problems,
    );
    if let Err(e) = orthogonal_pairs(1000, 0xacc_0005) {
        problems.push(e);
    }
    let hso = match hso_witnesses() {
        Ok(n) => n,
        Err(e) => {
            problems.push(e);
            0
        }
    };
    Outcome::from(
        problems,
        format!("{PROPERTY_CASES} cases per suite, 1000 orthogonal pairs, {hso} self-orthogonal witnesses"),
    )
}

fn criterion_rules() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    for (n, w, k) in [(15, 15, 5), (5, 5, 6), (9, 2, 3), (15, 10, 6), (9, 6, 6)] {
        if analytic_rules(n, w, k).rules_fired.is_empty() {
            problems.push(format!("nothing fires on ({n},{w};{k})"));
        }
    }
    let mut cells = 0;
    for k in 2..=6u32 {
        let r = reference_grid(k).unwrap();
        for (&(n, w), &s) in &r.cells {
            if s == State::Exists {
                cells += 1;
                let v = analytic_rules(n as u64, w as u64, k as u64);
                if !v.rules_fired.is_empty() {
                    problems.push(format!(
                        "({n},{w};{k}) is E but {} fires",
                        v.rules_fired[0].id
                    ));
                }
            }
        }
    }
    let t = start.elapsed();
    if t >= RULES_LIMIT {
        problems.push(format!("took {t:.2?}"));
    }
    Outcome::from(
        problems,
        format!("5 firing cases, silent on {cells} E cells, {t:.2?}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 6] = [
        ("construction witnesses", criterion_constructions),
        ("quantum table rows", criterion_table_rows),
        ("grid fidelity", criterion_grids),
        ("lifting refutations", criterion_lifting),
        ("property suites", criterion_properties),
        ("rule unit tests", criterion_rules),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let mark = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {name}: {mark}: {}", i + 1, o.detail);
        if !o.pass && !o.misprints_only {
            unexpected.push(i + 1);
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
