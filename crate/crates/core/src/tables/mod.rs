//! Existence grids for `CGW(n, w; k)`, `1 <= w <= n <= n_max`, with the
//! reason behind every cell.

mod catalog;

use std::collections::BTreeMap;
use std::fmt;

use crate::constructions::Recipe;
use crate::error::{parse_err, CgwError, Result};
use crate::library;
use crate::lifting::census::{census, CensusLimits, CensusOutcome};
use crate::matrix::GwMatrix;
use crate::nonexistence::{analytic_rules, sporadic, Rule};

pub use catalog::{Catalog, CatalogEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    Exists,
    NotExists,
    Unknown,
}

impl State {
    pub fn symbol(self) -> char {
        match self {
            State::Exists => 'E',
            State::NotExists => 'N',
            State::Unknown => '?',
        }
    }

    fn from_symbol(c: char) -> Option<Self> {
        match c {
            'E' => Some(State::Exists),
            'N' => Some(State::NotExists),
            '?' => Some(State::Unknown),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    /// Built by a construction recipe.
    Recipe(Recipe),
    /// A bundled witness file.
    File(String),
    /// A witness found by lifting one of the candidate supports.
    Lifted {
        supports: usize,
    },
    Analytic(Vec<Rule>),
    Literature(&'static str),
    /// Every candidate support was enumerated and none lifts.
    Refuted {
        supports: usize,
        nodes: u64,
    },
    /// Nothing settled the cell; the string says what was tried last.
    Open(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Recipe(r) => write!(f, "recipe:{r}"),
            Provenance::File(name) => write!(f, "file:{name}"),
            Provenance::Lifted { supports } => {
                write!(f, "lifting:census-lift({supports} supports)")
            }
            Provenance::Analytic(rules) => {
                let ids: Vec<&str> = rules.iter().map(|r| r.id).collect();
                write!(f, "analytic:{}", ids.join("+"))
            }
            Provenance::Literature(c) => write!(f, "literature:{c}"),
            Provenance::Refuted { supports, nodes } => {
                write!(f, "lifting:census({supports} supports, {nodes} nodes)")
            }
            Provenance::Open(why) => write!(f, "open:{why}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub state: State,
    pub provenance: Provenance,
    /// The verified matrix behind an `Exists` cell, when there is one.
    pub witness: Option<GwMatrix>,
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub k: u32,
    pub n_max: usize,
    pub cells: BTreeMap<(usize, usize), Verdict>,
}

#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    /// Longest sequence tried by the complementary pair search.
    pub pair_len: usize,
    /// Limits for the support census; `None` skips it.
    pub census: Option<CensusLimits>,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            pair_len: 7,
            census: Some(CensusLimits {
                max_supports: 100_000,
                enum_budget: 150_000_000,
                lift_budget: 10_000_000,
                total_budget: 50_000_000,
            }),
        }
    }
}

const HARADA_MUNEMASA: &str =
    "Harada, Munemasa: On the classification of weighing matrices and self-orthogonal codes, J. Combin. Des. 20 (2012)";

static K2_LITERATURE: &str = include_str!("../../data/literature/weighing_k2.txt");

/// Grid with default options.
pub fn build_grid(k: u32, n_max: usize) -> Result<Grid> {
    build_grid_with(k, n_max, GridOptions::default())
}

pub fn build_grid_with(k: u32, n_max: usize, opts: GridOptions) -> Result<Grid> {
    if k < 2 || n_max == 0 || n_max > 64 {
        return Err(CgwError::Range(format!(
            "grid needs k >= 2 and 1 <= n_max <= 64, got k={k}, n_max={n_max}"
        )));
    }
    let mut catalog = Catalog::new(k, n_max);
    let mut files: BTreeMap<(usize, usize), (String, GwMatrix)> = BTreeMap::new();
    for name in library::witness_names() {
        let f = library::witness(name)?;
        let m = f.matrix;
        if m.n() <= n_max && k.is_multiple_of(m.k()) {
            let key = (m.n(), f.declared_weight as usize);
            let m = m.embed(k)?;
            files.entry(key).or_insert((name.to_string(), m));
        }
    }
    let literature = if k == 2 {
        Some(parse_grid(K2_LITERATURE)?)
    } else {
        None
    };

    let ruled_out = |n: usize, w: usize| -> Option<Vec<Rule>> {
        let mut rules = analytic_rules(n as u64, w as u64, k as u64).rules_fired;
        if let Some(r) = sporadic(n as u64, w as u64, k as u64) {
            if !rules.contains(&r) {
                rules.push(r);
            }
        }
        (!rules.is_empty()).then_some(rules)
    };

    // Pair searches for even orders the closure misses, then close again.
    let mut grew = false;
    for n in (2..=n_max).step_by(2) {
        for w in 1..=n {
            if !catalog.entries.contains_key(&(n, w))
                && !files.contains_key(&(n, w))
                && ruled_out(n, w).is_none()
            {
                grew |= catalog.try_pairs(n, w, opts.pair_len);
            }
        }
    }
    if grew {
        catalog.close();
    }

    let mut cells = BTreeMap::new();
    for n in 1..=n_max {
        for w in 1..=n {
            let v = if let Some(e) = catalog.entries.get(&(n, w)) {
                exists(Provenance::Recipe(e.recipe.clone()), Some(e.matrix.clone()))
            } else if let Some((name, m)) = files.get(&(n, w)) {
                exists(Provenance::File(name.clone()), Some(m.clone()))
            } else if let Some(rules) = ruled_out(n, w) {
                not_exists(Provenance::Analytic(rules))
            } else {
                settle(n, w, k, opts.census, literature.as_ref())?
            };
            cells.insert((n, w), v);
        }
    }
    Ok(Grid { k, n_max, cells })
}

fn exists(provenance: Provenance, witness: Option<GwMatrix>) -> Verdict {
    Verdict {
        state: State::Exists,
        provenance,
        witness,
    }
}

fn not_exists(provenance: Provenance) -> Verdict {
    Verdict {
        state: State::NotExists,
        provenance,
        witness: None,
    }
}

/// Census first, then the literature grid, then give up.
fn settle(
    n: usize,
    w: usize,
    k: u32,
    limits: Option<CensusLimits>,
    literature: Option<&ReferenceGrid>,
) -> Result<Verdict> {
    let mut why = "no construction or rule applies".to_string();
    if let Some(limits) = limits {
        let r = census(n, w, k, limits)?;
        match r.outcome {
            CensusOutcome::Lifted(m) => {
                return Ok(exists(
                    Provenance::Lifted {
                        supports: r.supports,
                    },
                    Some(m),
                ))
            }
            CensusOutcome::Refuted => {
                return Ok(not_exists(Provenance::Refuted {
                    supports: r.supports,
                    nodes: r.nodes,
                }))
            }
            CensusOutcome::Incomplete(msg) => why = format!("census incomplete: {msg}"),
        }
    }
    if let Some(state) = literature.and_then(|g| g.cells.get(&(n, w))) {
        match state {
            State::Exists => return Ok(exists(Provenance::Literature(HARADA_MUNEMASA), None)),
            State::NotExists => return Ok(not_exists(Provenance::Literature(HARADA_MUNEMASA))),
            State::Unknown => {}
        }
    }
    Ok(Verdict {
        state: State::Unknown,
        provenance: Provenance::Open(why),
        witness: None,
    })
}

impl Grid {
    pub fn get(&self, n: usize, w: usize) -> Option<&Verdict> {
        self.cells.get(&(n, w))
    }

    /// `n,w,k,state,provenance` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,w,k,state,provenance\n");
        for (&(n, w), v) in &self.cells {
            let p = v.provenance.to_string();
            let p = if p.contains([',', '"']) {
                format!("\"{}\"", p.replace('"', "\"\""))
            } else {
                p
            };
            out.push_str(&format!("{n},{w},{},{},{p}\n", self.k, v.state.symbol()));
        }
        out
    }

    /// Triangular E/N/? layout, one row per order.
    pub fn to_pretty(&self) -> String {
        let mut out = format!(
            "# existence of CGW(n,w;{}) for 1 <= w <= n <= {}\n# row n lists w = 1..n; E exists, N does not, ? open\n",
            self.k, self.n_max
        );
        for n in 1..=self.n_max {
            out.push_str(&format!("{n:>2}"));
            for w in 1..=n {
                let s = self.cells.get(&(n, w)).map_or('?', |v| v.state.symbol());
                out.push(' ');
                out.push(s);
            }
            out.push('\n');
        }
        out
    }
}

/// A grid read from the triangular text layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceGrid {
    pub k: Option<u32>,
    pub n_max: usize,
    pub cells: BTreeMap<(usize, usize), State>,
}

/// Parse the layout produced by [`Grid::to_pretty`].
pub fn parse_grid(text: &str) -> Result<ReferenceGrid> {
    let mut cells = BTreeMap::new();
    let mut k = None;
    let mut n_max = 0;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let t = line.trim();
        if let Some(c) = t.strip_prefix('#') {
            if let Some(rest) = c.split("CGW(n,w;").nth(1) {
                k = rest.split(')').next().and_then(|s| s.parse().ok());
            }
            continue;
        }
        if t.is_empty() {
            continue;
        }
        let mut tok = t.split_whitespace();
        let n: usize = tok
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(ln, 1, "expected the order n"))?;
        let syms: Vec<&str> = tok.collect();
        if syms.len() != n {
            return Err(parse_err(
                ln,
                1,
                format!("row {n} has {} entries", syms.len()),
            ));
        }
        for (j, s) in syms.iter().enumerate() {
            let st = s
                .chars()
                .next()
                .filter(|_| s.len() == 1)
                .and_then(State::from_symbol)
                .ok_or_else(|| parse_err(ln, 1, format!("bad entry `{s}`")))?;
            cells.insert((n, j + 1), st);
        }
        n_max = n_max.max(n);
    }
    Ok(ReferenceGrid { k, n_max, cells })
}

/// The bundled published grid for `k`.
pub fn reference_grid(k: u32) -> Result<ReferenceGrid> {
    parse_grid(library::reference_grid_text(k)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEntry {
    pub n: usize,
    pub w: usize,
    pub ours: State,
    pub reference: State,
}

/// Cells where a grid and a reference disagree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GridDiff {
    /// E against N.
    pub hard: Vec<DiffEntry>,
    /// Unknown here, settled there.
    pub gaps: Vec<DiffEntry>,
    /// Settled here, open there.
    pub improvements: Vec<DiffEntry>,
}

impl GridDiff {
    pub fn is_empty(&self) -> bool {
        self.hard.is_empty() && self.gaps.is_empty() && self.improvements.is_empty()
    }
}

impl fmt::Display for GridDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, list) in [
            ("hard", &self.hard),
            ("gap", &self.gaps),
            ("improvement", &self.improvements),
        ] {
            for d in list {
                writeln!(
                    f,
                    "{label} ({},{}): ours {} reference {}",
                    d.n,
                    d.w,
                    d.ours.symbol(),
                    d.reference.symbol()
                )?;
            }
        }
        Ok(())
    }
}

/// Compare cell by cell over the common domain.
pub fn compare_reference(g: &Grid, r: &ReferenceGrid) -> GridDiff {
    let mut diff = GridDiff::default();
    for (&(n, w), v) in &g.cells {
        let Some(&reference) = r.cells.get(&(n, w)) else {
            continue;
        };
        let entry = DiffEntry {
            n,
            w,
            ours: v.state,
            reference,
        };
        match (v.state, reference) {
            (a, b) if a == b => {}
            (State::Exists, State::NotExists) | (State::NotExists, State::Exists) => {
                diff.hard.push(entry)
            }
            (State::Unknown, _) => diff.gaps.push(entry),
            (_, State::Unknown) => diff.improvements.push(entry),
            _ => unreachable!(),
        }
    }
    diff
}

/// Re-check a grid's witnesses: each `Exists` cell with a matrix verifies
/// with its own `(n, w, k)`.
pub fn check_witnesses(g: &Grid) -> Result<()> {
    for (&(n, w), v) in &g.cells {
        if let Some(m) = &v.witness {
            let r = m.verify();
            if !r.ok || m.n() != n || r.weight != Some(w as u32) || m.k() != g.k {
                return Err(CgwError::Construction(format!(
                    "witness for ({n},{w};{}) does not verify",
                    g.k
                )));
            }
        }
    }
    Ok(())
}
