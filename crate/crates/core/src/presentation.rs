//! Finitely presented groups and words in their generators.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub gen: usize,
    pub exp: i64,
}

/// A word as a list of `(generator, exponent)` syllables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Syllable>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![Syllable { gen: g, exp: 1 }])
    }

    pub fn power(g: usize, exp: i64) -> Self {
        Word(vec![Syllable { gen: g, exp }]).freely_reduced()
    }

    /// Builds a word from signed letters `±(g+1)`.
    pub fn from_letters(letters: &[i32]) -> Self {
        Word(
            letters
                .iter()
                .map(|&l| Syllable {
                    gen: l.unsigned_abs() as usize - 1,
                    exp: l.signum() as i64,
                })
                .collect(),
        )
        .freely_reduced()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total letter count `Σ|exp|`.
    pub fn length(&self) -> u64 {
        self.0.iter().map(|s| s.exp.unsigned_abs()).sum()
    }

    /// Signed letters `±(g+1)`, one per unit of exponent.
    pub fn letters(&self) -> Vec<i32> {
        let mut out = Vec::with_capacity(self.length() as usize);
        for s in &self.0 {
            let l = (s.gen as i32 + 1) * s.exp.signum() as i32;
            out.extend(std::iter::repeat(l).take(s.exp.unsigned_abs() as usize));
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word(
            self.0
                .iter()
                .rev()
                .map(|s| Syllable {
                    gen: s.gen,
                    exp: -s.exp,
                })
                .collect(),
        )
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).freely_reduced()
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.inverse())
    }

    pub fn pow(&self, k: u32) -> Word {
        let mut v = Vec::new();
        for _ in 0..k {
            v.extend_from_slice(&self.0);
        }
        Word(v).freely_reduced()
    }

    /// Merges adjacent syllables of one generator and drops zero exponents.
    pub fn freely_reduced(&self) -> Word {
        self.reduced_with(&[])
    }

    /// Free reduction with exponents of generator `g` taken modulo `orders[g]`
    /// (into `0..order`) when that order is known.
    pub fn reduced_with(&self, orders: &[Option<u64>]) -> Word {
        let norm = |g: usize, e: i64| -> i64 {
            match orders.get(g).copied().flatten() {
                Some(k) if k > 0 => e.rem_euclid(k as i64),
                _ => e,
            }
        };
        let mut out: Vec<Syllable> = Vec::with_capacity(self.0.len());
        for s in &self.0 {
            let mut e = norm(s.gen, s.exp);
            if e == 0 {
                continue;
            }
            let g = s.gen;
            if let Some(top) = out.last() {
                if top.gen == g {
                    e = norm(g, top.exp + e);
                    out.pop();
                }
            }
            if e != 0 {
                out.push(Syllable { gen: g, exp: e });
            }
        }
        Word(out)
    }

    /// The generators that occur in the word.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.0.iter().map(|s| s.gen).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Shortlex comparison on signed letters, with `g` before `g⁻¹` before `g+1`.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        let key = |l: &i32| (l.unsigned_abs(), *l < 0);
        let (a, b) = (self.letters(), other.letters());
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().map(key).cmp(b.iter().map(key)))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }

    /// Parses whitespace-separated tokens `name`, `name^k` or `name^-k`.
    /// A token may also be a concatenation of single-character generator names.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let lookup = |s: &str| names.iter().position(|n| n == s);
        let mut syl = Vec::new();
        let text = text.trim();
        if text.is_empty() || text == "1" || text == "ε" {
            return Ok(Word::empty());
        }
        for tok in text.split_whitespace() {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?,
                ),
                None => (tok, 1),
            };
            if let Some(g) = lookup(base) {
                syl.push(Syllable { gen: g, exp });
                continue;
            }
            // juxtaposed single-character names, e.g. `abab`; the exponent binds to the last
            let chars: Vec<String> = base.chars().map(|c| c.to_string()).collect();
            let gens: Option<Vec<usize>> = chars.iter().map(|c| lookup(c)).collect();
            match gens {
                Some(gens) if !gens.is_empty() => {
                    let last = gens.len() - 1;
                    for (i, g) in gens.into_iter().enumerate() {
                        syl.push(Syllable {
                            gen: g,
                            exp: if i == last { exp } else { 1 },
                        });
                    }
                }
                _ => return Err(Error::Parse(format!("unknown generator `{base}`"))),
            }
        }
        Ok(Word(syl).freely_reduced())
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let name = self
                .names
                .get(s.gen)
                .cloned()
                .unwrap_or_else(|| format!("g{}", s.gen));
            if s.exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

/// `⟨generators | relators⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let p = GroupPresentation {
            generators,
            relators,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds a presentation from relator strings.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self> {
        let names: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let rels = relators
            .iter()
            .map(|r| Word::parse(r, &names))
            .collect::<Result<Vec<_>>>()?;
        Self::new(names, rels)
    }

    fn validate(&self) -> Result<()> {
        let mut names = self.generators.clone();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPresentation("duplicate generator names".into()));
        }
        for r in &self.relators {
            if r.0.iter().any(|s| s.gen >= self.generators.len()) {
                return Err(Error::InvalidPresentation(
                    "relator uses an undeclared generator".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.generators)
    }

    pub fn show(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }

    /// Orders implied by single-syllable relators `g^k` (the gcd when several occur).
    pub fn generator_orders(&self) -> Vec<Option<u64>> {
        let mut orders = vec![None; self.rank()];
        for r in &self.relators {
            if let [s] = r.0.as_slice() {
                let k = s.exp.unsigned_abs();
                orders[s.gen] = Some(match orders[s.gen] {
                    Some(o) => gcd(o, k),
                    None => k,
                });
            }
        }
        orders
    }

    /// Free product with generators renamed by `prefix`-free concatenation.
    pub fn free_product(&self, other: &GroupPresentation) -> Result<GroupPresentation> {
        let off = self.rank();
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        let mut rels = self.relators.clone();
        rels.extend(other.relators.iter().map(|r| shift(r, off)));
        GroupPresentation::new(gens, rels)
    }
}

pub(crate) fn shift(w: &Word, off: usize) -> Word {
    Word(
        w.0.iter()
            .map(|s| Syllable {
                gen: s.gen + off,
                exp: s.exp,
            })
            .collect(),
    )
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: Vec<String>,
    relators: Vec<String>,
}

impl Serialize for GroupPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationJson {
            generators: self.generators.clone(),
            relators: self.relators.iter().map(|r| self.show(r)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PresentationJson::deserialize(d)?;
        let rels = j
            .relators
            .iter()
            .map(|r| Word::parse(r, &j.generators))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        GroupPresentation::new(j.generators, rels).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn parse_and_show() {
        let w = Word::parse("a b^-2 a^3", &names()).unwrap();
        assert_eq!(w.display(&names()).to_string(), "a b^-2 a^3");
        assert_eq!(Word::parse("abab", &names()).unwrap().length(), 4);
        assert!(Word::parse("c", &names()).is_err());
        assert!(Word::parse("1", &names()).unwrap().is_empty());
    }

    #[test]
    fn free_reduction_cascades() {
        let w = Word::parse("a b b^-1 a^-1 b", &names()).unwrap();
        assert_eq!(w, Word::gen(1));
        let x = Word::parse("a b^2 a", &names()).unwrap();
        assert_eq!(x.reduced_with(&[Some(2), Some(2)]), Word::empty());
        let y = Word::parse("b a b^-1 a^-1", &names()).unwrap();
        assert_eq!(
            y.reduced_with(&[Some(2), Some(2)]).display(&names()).to_string(),
            "b a b a"
        );
    }

    #[test]
    fn orders_from_relators() {
        let p = GroupPresentation::parse(&["a", "b"], &["a^2", "b^3", "a b a b"]).unwrap();
        assert_eq!(p.generator_orders(), vec![Some(2), Some(3)]);
        let json = serde_json::to_string(&p).unwrap();
        let back: GroupPresentation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn shortlex() {
        let n = names();
        let abab = Word::parse("a b a b", &n).unwrap();
        let baba = Word::parse("b a b a", &n).unwrap();
        assert_eq!(abab.shortlex_cmp(&baba), std::cmp::Ordering::Less);
        assert_eq!(abab.inverse().reduced_with(&[Some(2), Some(2)]), baba);
    }
}
