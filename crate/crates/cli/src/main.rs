//! `cgw`: construct, verify, lift and classify complex generalized weighing
//! matrices, and turn them into codes.
//!
//! Exit status: 0 success, 1 negative result, 2 usage or input error,
//! 3 budget exceeded.

use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use cgw_core::codes::{
    cgw_to_code, code_to_text, field_for_k, min_distance, parse_code, Distance, Strategy,
};
use cgw_core::constructions::Recipe;
use cgw_core::lifting::{lift_report, LiftInstance, LiftOutcome, DEFAULT_BUDGET};
use cgw_core::nonexistence::{analytic_rules, sporadic};
use cgw_core::quantum::pipeline;
use cgw_core::tables::{build_grid_with, compare_reference, reference_grid, GridOptions};
use cgw_core::{matrix_to_text, parse_matrix, CgwError, MatrixFile};

#[derive(Parser)]
#[command(name = "cgw", version, about = "Complex generalized weighing matrices")]
struct Cli {
    /// Worker threads for lift and mindist (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a matrix from a recipe such as `paley(q=7,p=3)`.
    Construct { recipe: String },
    /// Check a matrix file (`-` for stdin).
    Verify { file: String },
    /// Search for a CGW on the support of a matrix file.
    Lift {
        file: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Non-existence rules that fire for (n, w, k).
    Rules {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        w: u64,
        #[arg(long)]
        k: u64,
    },
    /// Existence grid for one root order.
    Grid {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 15)]
        nmax: usize,
        /// Emit `n,w,k,state,provenance` rows instead of the triangle.
        #[arg(long)]
        csv: bool,
        /// Report differences from the bundled published grid.
        #[arg(long)]
        compare: bool,
        /// Skip the exhaustive support census.
        #[arg(long)]
        no_census: bool,
    },
    /// The code over GF(q^2) spanned by the rows of a matrix.
    Code {
        file: String,
        #[arg(long)]
        q: u32,
    },
    /// Minimum distance of a code file.
    Mindist {
        file: String,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u64,
    },
    /// Matrix to code to quantum code parameters.
    Quantum {
        file: String,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u64,
    },
    /// Equivalence fingerprint of a matrix file, in hex.
    Fingerprint { file: String },
}

/// A finished command: its stdout and exit status.
struct Outcome {
    out: String,
    code: u8,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { out, code: 0 }
    }
}

fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn read_matrix(path: &str) -> anyhow::Result<MatrixFile> {
    parse_matrix(&read_input(path)?).with_context(|| format!("parsing {path}"))
}

fn run(cmd: Cmd) -> anyhow::Result<Outcome> {
    match cmd {
        Cmd::Construct { recipe } => {
            let r: Recipe = recipe.parse()?;
            let m = r.build()?;
            Ok(Outcome::ok(matrix_to_text(&m, &[format!(" recipe: {r}")])))
        }
        Cmd::Verify { file } => {
            let f = read_matrix(&file)?;
            let m = &f.matrix;
            let r = m.verify();
            match (r.ok, r.weight) {
                (true, Some(w)) if w == f.declared_weight => {
                    Ok(Outcome::ok(format!("CGW({},{};{})\n", m.n(), w, m.k())))
                }
                (true, Some(w)) => Ok(Outcome {
                    out: format!(
                        "not a CGW(n={},w={};{}): rows have weight {w}\n",
                        m.n(),
                        f.declared_weight,
                        m.k()
                    ),
                    code: 1,
                }),
                _ => Ok(Outcome {
                    out: format!(
                        "not a CGW: {}\n",
                        r.first_failure
                            .map_or_else(|| "empty matrix".to_string(), |x| x.to_string())
                    ),
                    code: 1,
                }),
            }
        }
        Cmd::Lift { file, k, budget } => {
            let f = read_matrix(&file)?;
            let inst = LiftInstance::new(f.matrix.support(), k)?;
            let rep = lift_report(&inst, budget);
            let nodes = format!("# nodes: {}", rep.nodes);
            match rep.outcome {
                LiftOutcome::Lifted(m) => Ok(Outcome::ok(matrix_to_text(&m, &[nodes]))),
                LiftOutcome::NoLift => Ok(Outcome {
                    out: format!("NoLift\n{nodes}\n"),
                    code: 1,
                }),
                LiftOutcome::BudgetExceeded => Ok(Outcome {
                    out: format!("BudgetExceeded\n{nodes}\n"),
                    code: 3,
                }),
            }
        }
        Cmd::Rules { n, w, k } => {
            let mut rules = analytic_rules(n, w, k).rules_fired;
            if let Some(r) = sporadic(n, w, k) {
                if !rules.contains(&r) {
                    rules.push(r);
                }
            }
            let mut out = String::new();
            if rules.is_empty() {
                writeln!(out, "no rule excludes CGW({n},{w};{k})")?;
            }
            for r in rules {
                writeln!(out, "{r}")?;
            }
            Ok(Outcome::ok(out))
        }
        Cmd::Grid {
            k,
            nmax,
            csv,
            compare,
            no_census,
        } => {
            let mut opts = GridOptions::default();
            if no_census {
                opts.census = None;
            }
            let g = build_grid_with(k, nmax, opts)?;
            let mut out = if csv { g.to_csv() } else { g.to_pretty() };
            let mut code = 0;
            if compare {
                let d = compare_reference(&g, &reference_grid(k)?);
                if d.is_empty() {
                    out.push_str("matches the reference grid\n");
                } else {
                    out.push_str(&d.to_string());
                }
                if !d.hard.is_empty() {
                    code = 1;
                }
            }
            Ok(Outcome { out, code })
        }
        Cmd::Code { file, q } => {
            let f = read_matrix(&file)?;
            let k = q
                .checked_add(1)
                .filter(|k| k % f.matrix.k() == 0)
                .ok_or_else(|| {
                    anyhow::anyhow!("root order {} does not divide q+1", f.matrix.k())
                })?;
            let ctx = field_for_k(k)?;
            let c = cgw_to_code(&f.matrix.embed(k)?, &ctx)?;
            Ok(Outcome::ok(code_to_text(&c)))
        }
        Cmd::Mindist { file, budget } => {
            let c = parse_code(&read_input(&file)?)?;
            let r = min_distance(&c, budget)?;
            let strategy = match r.strategy {
                Strategy::Projective => "projective",
                Strategy::LowWeightProbe => "low-weight probe",
            };
            let head = format!(
                "[{},{}]_{} strategy={strategy} evaluations={}",
                c.n(),
                c.dim(),
                c.ctx().order(),
                r.evaluations
            );
            match r.distance {
                Distance::Exact(d) => Ok(Outcome::ok(format!("{head}\nd={d}\n"))),
                Distance::BudgetExceeded => Ok(Outcome {
                    out: format!("{head}\nBudgetExceeded\n"),
                    code: 3,
                }),
            }
        }
        Cmd::Quantum { file, budget } => {
            let f = read_matrix(&file)?;
            Ok(Outcome::ok(pipeline(&f.matrix, budget)?.to_text()))
        }
        Cmd::Fingerprint { file } => {
            let f = read_matrix(&file)?;
            let fp = f.matrix.fingerprint()?;
            let hex: String = fp.iter().map(|b| format!("{b:02x}")).collect();
            Ok(Outcome::ok(hex + "\n"))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CgwError>() {
        Some(CgwError::BudgetExceeded(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        let built = if t == 0 {
            Err(anyhow::anyhow!("--threads must be at least 1"))
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .map_err(anyhow::Error::from)
        };
        if let Err(e) = built {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok(o) => {
            print!("{}", o.out);
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
