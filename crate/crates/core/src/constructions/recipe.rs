//! Construction recipes as `name(key=value,...)` strings.
//!
//! Values are atoms (`3`, `.`, `-1`, `11100`), bracketed lists, or nested
//! recipes. Keys not understood by the named construction are rejected.
//!
//! | name | keys |
//! |------|------|
//! | `paley` | `q`, `p` |
//! | `berman` | `p`, `n`, `t`, `r`, `d` |
//! | `sw` | `q` |
//! | `identity` | `n`, `k` |
//! | `fourier` | `n` |
//! | `wppgp` | `k`, `alpha`, `a`, `b` (exponent lists, `.` for zero) |
//! | `ternary` | `k`, `alpha`, `a`, `b` (lists over `0`, `1`, `-1`) |
//! | `direct_sum`, `border`, `kron` | `a`, `b` |
//! | `dita` | `a`, `b` (list of recipes) |
//! | `weave` | `mask` (list of bit rows), `a`, `b` (recipe or list) |
//! | `embed` | `m`, `k` |
//! | `file` | `name` (bundled witness) |

use std::fmt;

use crate::cyclotomic::Entry;
use crate::error::{parse_err, CgwError, Result};
use crate::matrix::GwMatrix;

use super::{
    berman_cgw, border_pair, direct_sum, dita, kronecker, paley_cgw, sw_cgw, ternary_to_cgw, weave,
    wppgp_to_cgw,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RecipeArg {
    Atom(String),
    List(Vec<RecipeArg>),
    Recipe(Box<Recipe>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Recipe {
    pub name: String,
    pub args: Vec<(String, RecipeArg)>,
}

impl fmt::Display for RecipeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecipeArg::Atom(s) => f.write_str(s),
            RecipeArg::Recipe(r) => write!(f, "{r}"),
            RecipeArg::List(items) => {
                f.write_str("[")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, (k, v)) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str(")")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn is_word(c: u8) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, b'_' | b'.' | b'-')
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> CgwError {
        parse_err(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && is_word(self.src[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name or value"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn recipe_after_name(&mut self, name: String) -> Result<Recipe> {
        self.expect(b'(')?;
        let mut args = Vec::new();
        if self.peek() == Some(b')') {
            self.pos += 1;
            return Ok(Recipe { name, args });
        }
        loop {
            let key = self.word()?;
            if args.iter().any(|(k, _): &(String, RecipeArg)| *k == key) {
                return Err(self.err(format!("duplicate key `{key}`")));
            }
            self.expect(b'=')?;
            let v = self.value()?;
            args.push((key, v));
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(Recipe { name, args });
                }
                _ => return Err(self.err("expected `,` or `)`")),
            }
        }
    }

    fn value(&mut self) -> Result<RecipeArg> {
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let mut items = Vec::new();
            if self.peek() == Some(b']') {
                self.pos += 1;
                return Ok(RecipeArg::List(items));
            }
            loop {
                items.push(self.value()?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b']') => {
                        self.pos += 1;
                        return Ok(RecipeArg::List(items));
                    }
                    _ => return Err(self.err("expected `,` or `]`")),
                }
            }
        }
        let w = self.word()?;
        if self.peek() == Some(b'(') {
            Ok(RecipeArg::Recipe(Box::new(self.recipe_after_name(w)?)))
        } else {
            Ok(RecipeArg::Atom(w))
        }
    }
}

impl std::str::FromStr for Recipe {
    type Err = CgwError;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let name = p.word()?;
        let r = p.recipe_after_name(name)?;
        if p.peek().is_some() {
            return Err(p.err("trailing input after recipe"));
        }
        Ok(r)
    }
}

/// Typed access to a recipe's arguments.
struct Args<'a> {
    recipe: &'a Recipe,
}

impl<'a> Args<'a> {
    fn get(&mut self, key: &str) -> Result<&'a RecipeArg> {
        self.recipe
            .args
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
            .ok_or_else(|| CgwError::Precondition(format!("{}: missing `{key}`", self.recipe.name)))
    }

    fn int(&mut self, key: &str) -> Result<u32> {
        let name = &self.recipe.name;
        match self.get(key)? {
            RecipeArg::Atom(s) => s.parse().map_err(|_| {
                CgwError::Precondition(format!("{name}: `{key}` must be a nonnegative integer"))
            }),
            _ => Err(CgwError::Precondition(format!(
                "{name}: `{key}` must be an integer"
            ))),
        }
    }

    fn matrix(&mut self, key: &str) -> Result<GwMatrix> {
        match self.get(key)? {
            RecipeArg::Recipe(r) => r.build(),
            _ => Err(CgwError::Precondition(format!(
                "{}: `{key}` must be a recipe",
                self.recipe.name
            ))),
        }
    }

    /// A list of recipes, or a single recipe repeated `count` times.
    fn matrices(&mut self, key: &str, count: usize) -> Result<Vec<GwMatrix>> {
        match self.get(key)? {
            RecipeArg::Recipe(r) => Ok(vec![r.build()?; count]),
            RecipeArg::List(items) => items
                .iter()
                .map(|x| match x {
                    RecipeArg::Recipe(r) => r.build(),
                    _ => Err(CgwError::Precondition(format!(
                        "`{key}` items must be recipes"
                    ))),
                })
                .collect(),
            _ => Err(CgwError::Precondition(format!(
                "`{key}` must be a recipe list"
            ))),
        }
    }

    fn atoms(&mut self, key: &str) -> Result<Vec<&'a str>> {
        match self.get(key)? {
            RecipeArg::List(items) => items
                .iter()
                .map(|x| match x {
                    RecipeArg::Atom(s) => Ok(s.as_str()),
                    _ => Err(CgwError::Precondition(format!(
                        "`{key}` items must be atoms"
                    ))),
                })
                .collect(),
            _ => Err(CgwError::Precondition(format!("`{key}` must be a list"))),
        }
    }
}

fn allowed_keys(name: &str) -> Option<&'static [&'static str]> {
    Some(match name {
        "paley" => &["q", "p"],
        "berman" => &["p", "n", "t", "r", "d"],
        "sw" => &["q"],
        "identity" => &["n", "k"],
        "fourier" => &["n"],
        "wppgp" | "ternary" => &["k", "alpha", "a", "b"],
        "direct_sum" | "border" | "kron" | "dita" => &["a", "b"],
        "weave" => &["mask", "a", "b"],
        "embed" => &["m", "k"],
        "file" => &["name"],
        _ => return None,
    })
}

fn exponent_seq(atoms: &[&str], k: u32) -> Result<Vec<Entry>> {
    atoms
        .iter()
        .map(|s| match *s {
            "." => Ok(Entry::Zero),
            _ => match s.parse::<u32>() {
                Ok(e) if e < k => Ok(Entry::Root(e)),
                _ => Err(CgwError::Precondition(format!(
                    "`{s}` is not an exponent below {k}"
                ))),
            },
        })
        .collect()
}

fn ternary_seq(atoms: &[&str]) -> Result<Vec<i8>> {
    atoms
        .iter()
        .map(|s| match *s {
            "0" => Ok(0),
            "1" => Ok(1),
            "-1" => Ok(-1),
            _ => Err(CgwError::Precondition(format!(
                "`{s}` is not one of 0, 1, -1"
            ))),
        })
        .collect()
}

impl Recipe {
    pub fn new(name: &str, args: Vec<(&str, RecipeArg)>) -> Self {
        Recipe {
            name: name.to_string(),
            args: args.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn int(v: u32) -> RecipeArg {
        RecipeArg::Atom(v.to_string())
    }

    /// Construct and verify the matrix this recipe describes.
    pub fn build(&self) -> Result<GwMatrix> {
        let allowed = allowed_keys(&self.name).ok_or_else(|| {
            CgwError::Precondition(format!("unknown construction `{}`", self.name))
        })?;
        if let Some((k, _)) = self
            .args
            .iter()
            .find(|(k, _)| !allowed.contains(&k.as_str()))
        {
            return Err(CgwError::Precondition(format!(
                "{}: unknown key `{k}`",
                self.name
            )));
        }
        let mut a = Args { recipe: self };
        let m = match self.name.as_str() {
            "paley" => paley_cgw(a.int("q")?, a.int("p")?)?,
            "berman" => berman_cgw(
                a.int("p")?,
                a.int("n")?,
                a.int("t")?,
                a.int("r")?,
                a.int("d")?,
            )?,
            "sw" => sw_cgw(a.int("q")?)?,
            "identity" => {
                let (n, k) = (a.int("n")?, a.int("k")?);
                if n == 0 || k == 0 {
                    return Err(CgwError::Precondition("identity needs n, k >= 1".into()));
                }
                GwMatrix::identity(n as usize, k)
            }
            "fourier" => {
                let n = a.int("n")?;
                if n == 0 {
                    return Err(CgwError::Precondition("fourier needs n >= 1".into()));
                }
                GwMatrix::fourier(n as usize)
            }
            "wppgp" => {
                let k = a.int("k")?;
                if k == 0 {
                    return Err(CgwError::Precondition("k must be positive".into()));
                }
                let alpha = a.int("alpha")?;
                let sa = exponent_seq(&a.atoms("a")?, k)?;
                let sb = exponent_seq(&a.atoms("b")?, k)?;
                wppgp_to_cgw(&sa, &sb, k, Entry::Root(alpha))?
            }
            "ternary" => {
                let k = a.int("k")?;
                let alpha = a.int("alpha")?;
                if k == 0 || alpha >= k {
                    return Err(CgwError::Precondition("need 0 <= alpha < k".into()));
                }
                let sa = ternary_seq(&a.atoms("a")?)?;
                let sb = ternary_seq(&a.atoms("b")?)?;
                ternary_to_cgw(&sa, &sb, k, Entry::Root(alpha))?
            }
            "direct_sum" => direct_sum(&a.matrix("a")?, &a.matrix("b")?)?,
            "border" => border_pair(&a.matrix("a")?, &a.matrix("b")?)?,
            "kron" => kronecker(&a.matrix("a")?, &a.matrix("b")?)?,
            "dita" => {
                let outer = a.matrix("a")?;
                let n = outer.n();
                dita(&outer, &a.matrices("b", n)?)?
            }
            "weave" => {
                let rows = a.atoms("mask")?;
                let mask: Vec<Vec<bool>> = rows
                    .iter()
                    .map(|r| {
                        r.chars()
                            .map(|c| match c {
                                '0' => Ok(false),
                                '1' => Ok(true),
                                _ => Err(CgwError::Precondition(format!("bad mask row `{r}`"))),
                            })
                            .collect()
                    })
                    .collect::<Result<_>>()?;
                let cols = mask.first().map_or(0, |r| r.len());
                let am = a.matrices("a", mask.len())?;
                let bm = a.matrices("b", cols)?;
                weave(&mask, &am, &bm)?
            }
            "embed" => {
                let inner = a.matrix("m")?;
                let k = a.int("k")?;
                inner.embed(k)?
            }
            "file" => {
                let name = match a.get("name")? {
                    RecipeArg::Atom(s) => s.clone(),
                    _ => return Err(CgwError::Precondition("file name must be an atom".into())),
                };
                crate::library::witness(&name)?.matrix
            }
            other => {
                return Err(CgwError::Precondition(format!(
                    "unknown construction `{other}`"
                )))
            }
        };
        Ok(m)
    }
}
