//! Witness catalog: every `(n, w)` reachable over `U_k` from the seed
//! constructions by the recursive ones, with the first recipe found.

use std::collections::BTreeMap;

use crate::constructions::{find_periodic_pairs, PairSearch, Recipe, RecipeArg};
use crate::cyclotomic::Entry;
use crate::matrix::GwMatrix;
use crate::numtheory::{divisors, is_prime, prime_divisors};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub recipe: Recipe,
    pub matrix: GwMatrix,
}

pub struct Catalog {
    k: u32,
    n_max: usize,
    pub entries: BTreeMap<(usize, usize), CatalogEntry>,
}

fn sub(r: &Recipe) -> RecipeArg {
    RecipeArg::Recipe(Box::new(r.clone()))
}

fn exps(seq: &[Entry]) -> RecipeArg {
    RecipeArg::List(
        seq.iter()
            .map(|e| match e {
                Entry::Zero => RecipeArg::Atom(".".into()),
                Entry::Root(x) => Recipe::int(*x),
            })
            .collect(),
    )
}

impl Catalog {
    pub fn new(k: u32, n_max: usize) -> Self {
        let mut c = Catalog {
            k,
            n_max,
            entries: BTreeMap::new(),
        };
        c.seed();
        c.close();
        c
    }

    /// Build `recipe`; keep it if it is new, fits, and lives over a divisor
    /// of `k`.
    pub fn offer(&mut self, recipe: Recipe) -> bool {
        let Ok(m) = recipe.build() else {
            return false;
        };
        self.offer_built(recipe, m)
    }

    fn offer_built(&mut self, recipe: Recipe, m: GwMatrix) -> bool {
        if m.n() > self.n_max || !self.k.is_multiple_of(m.k()) {
            return false;
        }
        let report = m.verify();
        let Some(w) = report.weight.filter(|_| report.ok) else {
            return false;
        };
        let key = (m.n(), w as usize);
        if self.entries.contains_key(&key) {
            return false;
        }
        let (recipe, matrix) = if m.k() == self.k {
            (recipe, m)
        } else {
            let inner = match (recipe.name.as_str(), recipe.args.first()) {
                ("embed", Some((_, RecipeArg::Recipe(r)))) => (**r).clone(),
                _ => recipe,
            };
            let r = Recipe::new(
                "embed",
                vec![("m", sub(&inner)), ("k", Recipe::int(self.k))],
            );
            let e = m.embed(self.k).expect("k is a multiple");
            (r, e)
        };
        self.entries.insert(key, CatalogEntry { recipe, matrix });
        true
    }

    fn seed(&mut self) {
        let k = self.k;
        let n_max = self.n_max as u32;
        // everything over a smaller root order carries over by embedding
        for d in divisors(k as u64) {
            let d = d as u32;
            if d >= 2 && d < k {
                let sub = Catalog::new(d, self.n_max);
                for e in sub.entries.into_values() {
                    self.offer_built(e.recipe, e.matrix);
                }
            }
        }
        for n in 1..=n_max {
            self.offer(Recipe::new(
                "identity",
                vec![("n", Recipe::int(n)), ("k", Recipe::int(k))],
            ));
        }
        for name in crate::library::witness_names() {
            self.offer(Recipe::new(
                "file",
                vec![("name", RecipeArg::Atom(name.into()))],
            ));
        }
        for m in divisors(k as u64) {
            if m >= 2 && m as u32 <= n_max {
                self.offer(Recipe::new("fourier", vec![("n", Recipe::int(m as u32))]));
            }
        }
        for q in 2..n_max {
            if !is_prime(q as u64) {
                continue;
            }
            for p in prime_divisors(k as u64) {
                if (q as u64 - 1).is_multiple_of(p) {
                    self.offer(Recipe::new(
                        "paley",
                        vec![("q", Recipe::int(q)), ("p", Recipe::int(p as u32))],
                    ));
                }
            }
        }
        for p in [2u32, 3, 5, 7, 11, 13] {
            for n in 1..=4u32 {
                for t in 1..=4u32 {
                    let Some(size) = (p as u64).checked_pow(n * t) else {
                        continue;
                    };
                    if size > 1 << 12 {
                        continue;
                    }
                    let field = (p as u64).pow(n) - 1;
                    for r in divisors(field) {
                        if (size - 1) / r > n_max as u64 {
                            continue;
                        }
                        for d in divisors(r) {
                            if d >= 2 && (k as u64).is_multiple_of(d) {
                                self.offer(Recipe::new(
                                    "berman",
                                    vec![
                                        ("p", Recipe::int(p)),
                                        ("n", Recipe::int(n)),
                                        ("t", Recipe::int(t)),
                                        ("r", Recipe::int(r as u32)),
                                        ("d", Recipe::int(d as u32)),
                                    ],
                                ));
                            }
                        }
                    }
                }
            }
        }
        if k.is_multiple_of(4) {
            for q in [9u32, 17, 25, 41] {
                if q < n_max {
                    self.offer(Recipe::new("sw", vec![("q", Recipe::int(q))]));
                }
            }
        }
    }

    /// Apply the recursive constructions until nothing new appears.
    pub fn close(&mut self) {
        loop {
            let snapshot: Vec<CatalogEntry> = self.entries.values().cloned().collect();
            let mut grew = false;
            let n_max = self.n_max;
            let even = self.k.is_multiple_of(2);
            for a in &snapshot {
                let (na, wa) = (a.matrix.n(), a.matrix.verify().weight.unwrap_or(0) as usize);
                if even && 2 * na <= n_max {
                    grew |= self.offer_pair("border", a, a);
                    let id = CatalogEntry {
                        recipe: Recipe::new(
                            "identity",
                            vec![("n", Recipe::int(na as u32)), ("k", Recipe::int(1))],
                        ),
                        matrix: GwMatrix::identity(na, 1),
                    };
                    grew |= self.offer_pair("border", a, &id);
                }
                for b in &snapshot {
                    let (nb, wb) = (b.matrix.n(), b.matrix.verify().weight.unwrap_or(0) as usize);
                    if wa == wb && na + nb <= n_max {
                        grew |= self.offer_pair("direct_sum", a, b);
                    }
                    if na * nb <= n_max {
                        grew |= self.offer_pair("kron", a, b);
                    }
                    // circulant masks with s ones per row: order m*s
                    if na == nb {
                        let s = na;
                        for m in s + 1..=n_max / s {
                            grew |= self.offer_weave(m, s, a, b);
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }

    fn offer_pair(&mut self, name: &str, a: &CatalogEntry, b: &CatalogEntry) -> bool {
        let key_n = match name {
            "direct_sum" => a.matrix.n() + b.matrix.n(),
            "kron" => a.matrix.n() * b.matrix.n(),
            _ => 2 * a.matrix.n(),
        };
        if key_n > self.n_max {
            return false;
        }
        self.offer(Recipe::new(
            name,
            vec![("a", sub(&a.recipe)), ("b", sub(&b.recipe))],
        ))
    }

    fn offer_weave(&mut self, m: usize, s: usize, a: &CatalogEntry, b: &CatalogEntry) -> bool {
        let wa = a.matrix.verify().weight.unwrap_or(0) as usize;
        let wb = b.matrix.verify().weight.unwrap_or(0) as usize;
        if self.entries.contains_key(&(m * s, wa * wb)) {
            return false;
        }
        let mask: Vec<RecipeArg> = (0..m)
            .map(|i| {
                RecipeArg::Atom(
                    (0..m)
                        .map(|j| if (j + m - i) % m < s { '1' } else { '0' })
                        .collect(),
                )
            })
            .collect();
        self.offer(Recipe::new(
            "weave",
            vec![
                ("mask", RecipeArg::List(mask)),
                ("a", sub(&a.recipe)),
                ("b", sub(&b.recipe)),
            ],
        ))
    }

    /// Search complementary pairs for a missing even order; true if found.
    pub fn try_pairs(&mut self, n: usize, w: usize, max_len: usize) -> bool {
        if !self.k.is_multiple_of(2) || !n.is_multiple_of(2) || n / 2 > max_len || n > self.n_max {
            return false;
        }
        let v = n / 2;
        for alpha in 0..self.k {
            let found = find_periodic_pairs(&PairSearch {
                k: self.k,
                v,
                alpha: Entry::Root(alpha),
                weight: w,
                limit: 1,
            });
            if let Some((a, b)) = found.first() {
                let r = Recipe::new(
                    "wppgp",
                    vec![
                        ("k", Recipe::int(self.k)),
                        ("alpha", Recipe::int(alpha)),
                        ("a", exps(a)),
                        ("b", exps(b)),
                    ],
                );
                if self.offer(r) {
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_catalogs() {
        let c = Catalog::new(3, 15);
        for key in [(3, 3), (5, 4), (9, 9), (15, 9), (1, 1), (6, 3), (10, 4)] {
            assert!(c.entries.contains_key(&key), "{key:?}");
        }
        for e in c.entries.values() {
            assert_eq!(e.recipe.build().unwrap(), e.matrix);
            assert_eq!(e.matrix.k(), 3);
        }
        let c = Catalog::new(4, 12);
        assert!(c.entries.contains_key(&(10, 9)));
        assert!(c.entries.contains_key(&(4, 4)));
        let two = Catalog::new(2, 12);
        assert!(two.entries.keys().all(|key| c.entries.contains_key(key)));
    }
}
