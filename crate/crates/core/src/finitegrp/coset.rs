//! Coset enumeration (HLT strategy with coincidence processing).

use std::fmt::Write as _;

use super::group::FiniteGroup;
use super::perm::Perm;
use crate::error::{Error, Result};
use crate::presentation::{GroupPresentation, Word};

pub const DEFAULT_ROW_BUDGET: usize = 100_000;

const NONE: u32 = u32::MAX;

/// Column of a signed letter `±(g+1)`: `2g` for `g`, `2g+1` for `g⁻¹`.
fn col(letter: i32) -> usize {
    let g = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

fn inv(c: usize) -> usize {
    c ^ 1
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<u32>>,
    parent: Vec<u32>,
    budget: usize,
    queue: Vec<usize>,
}

impl Enumerator {
    fn new(rank: usize, budget: usize) -> Self {
        let cols = 2 * rank;
        Enumerator {
            cols,
            table: vec![vec![NONE; cols]],
            parent: vec![0],
            budget,
            queue: Vec::new(),
        }
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut x = c;
        while self.parent[x] as usize != r {
            let next = self.parent[x] as usize;
            self.parent[x] = r as u32;
            x = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize> {
        if self.table.len() >= self.budget {
            return Err(Error::Budget(format!(
                "coset enumeration exceeded {} rows",
                self.budget
            )));
        }
        let n = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(n as u32);
        self.table[c][x] = n as u32;
        self.table[n][inv(x)] = c as u32;
        Ok(n)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo as u32;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                let f = f as usize;
                if self.table[f][inv(x)] == e as u32 {
                    self.table[f][inv(x)] = NONE;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x] as usize;
                    self.merge(f1, t);
                } else if self.table[f1][inv(x)] != NONE {
                    let t = self.table[f1][inv(x)] as usize;
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = f1 as u32;
                    self.table[f1][inv(x)] = e1 as u32;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let mut i = 0isize;
        let mut j = w.len() as isize - 1;
        loop {
            while i <= j && self.table[f][w[i as usize]] != NONE {
                f = self.table[f][w[i as usize]] as usize;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.table[b][inv(w[j as usize])] != NONE {
                b = self.table[b][inv(w[j as usize])] as usize;
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.table[f][x] = b as u32;
                self.table[b][inv(x)] = f as u32;
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }
}

/// A complete coset table in standard form: coset 0 is the subgroup, and
/// `table[c][2g]` / `table[c][2g+1]` are the cosets `c·g` / `c·g⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub rank: usize,
    pub table: Vec<Vec<u32>>,
}

/// Enumerates the cosets of `⟨subgroup⟩` in the group presented by `p`.
pub fn coset_enumerate(
    p: &GroupPresentation,
    subgroup: &[Word],
    row_budget: usize,
) -> Result<CosetTable> {
    let to_cols = |w: &Word| -> Vec<usize> { w.letters().into_iter().map(col).collect() };
    let rels: Vec<Vec<usize>> = p
        .relators
        .iter()
        .map(|r| to_cols(&r.freely_reduced()))
        .filter(|r| !r.is_empty())
        .collect();
    let mut e = Enumerator::new(p.rank(), row_budget.max(1));
    for w in subgroup {
        let cw = to_cols(&w.freely_reduced());
        e.scan_and_fill(0, &cw)?;
    }
    let mut c = 0;
    while c < e.table.len() {
        for r in &rels {
            if !e.alive(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        if e.alive(c) {
            for x in 0..e.cols {
                if e.table[c][x] == NONE {
                    e.define(c, x)?;
                }
            }
        }
        c += 1;
    }
    Ok(standardize(&mut e, p.rank()))
}

fn standardize(e: &mut Enumerator, rank: usize) -> CosetTable {
    let mut order = vec![NONE; e.table.len()];
    let mut seq = vec![0usize];
    order[0] = 0;
    let mut head = 0;
    while head < seq.len() {
        let c = seq[head];
        head += 1;
        for x in 0..e.cols {
            let d = e.rep(e.table[c][x] as usize);
            if order[d] == NONE {
                order[d] = seq.len() as u32;
                seq.push(d);
            }
        }
    }
    let mut table = Vec::with_capacity(seq.len());
    for &c in &seq {
        let row: Vec<u32> = (0..e.cols)
            .map(|x| {
                let d = e.rep(e.table[c][x] as usize);
                order[d]
            })
            .collect();
        table.push(row);
    }
    CosetTable { rank, table }
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.table.len()
    }

    /// The coset `c·w`.
    pub fn trace(&self, c: usize, w: &Word) -> usize {
        w.letters()
            .into_iter()
            .fold(c, |d, l| self.table[d][col(l)] as usize)
    }

    /// Whether `w` lies in the subgroup.
    pub fn contains(&self, w: &Word) -> bool {
        self.trace(0, w) == 0
    }

    /// The right action of each generator on the cosets.
    pub fn permutations(&self) -> Result<Vec<Perm>> {
        if self.index() > u16::MAX as usize {
            return Err(Error::Budget(format!(
                "index {} too large for a permutation representation",
                self.index()
            )));
        }
        (0..self.rank)
            .map(|g| Perm::from_images(self.table.iter().map(|r| r[2 * g] as u16).collect()))
            .collect()
    }

    /// CSV with one row per coset and columns `g, g^-1` per generator.
    pub fn to_csv(&self, names: &[String]) -> String {
        let mut s = String::from("coset");
        for n in names.iter().take(self.rank) {
            let _ = write!(s, ",{n},{n}^-1");
        }
        s.push('\n');
        for (c, row) in self.table.iter().enumerate() {
            let _ = write!(s, "{c}");
            for v in row {
                let _ = write!(s, ",{v}");
            }
            s.push('\n');
        }
        s
    }
}

/// The group presented by `p` as a permutation group on its regular representation.
pub fn enumerate_group(p: &GroupPresentation, row_budget: usize, order_bound: usize) -> Result<FiniteGroup> {
    let t = coset_enumerate(p, &[], row_budget)?;
    if t.index() > order_bound {
        return Err(Error::OrderBound(order_bound));
    }
    let gens = t.permutations()?;
    FiniteGroup::generate(t.index(), &gens, order_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(g: &[&str], r: &[&str]) -> GroupPresentation {
        GroupPresentation::parse(g, r).unwrap()
    }

    #[test]
    fn cyclic_of_order_two() {
        let p = pres(&["v"], &["v^2"]);
        assert_eq!(coset_enumerate(&p, &[], 100).unwrap().index(), 2);
    }

    #[test]
    fn b3_has_48_elements() {
        let p = pres(
            &["a", "b", "c"],
            &["a^2", "b^2", "c^2", "(ab)^3", "(bc)^4", "(ac)^2"]
                .iter()
                .map(|s| expand(s))
                .collect::<Vec<_>>()
                .iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>(),
        );
        assert_eq!(coset_enumerate(&p, &[], 10_000).unwrap().index(), 48);
    }

    fn expand(s: &str) -> String {
        // `(xy)^k` → `xyxy…`
        if let Some(rest) = s.strip_prefix('(') {
            let (body, k) = rest.split_once(")^").unwrap();
            body.repeat(k.parse().unwrap())
        } else {
            s.to_string()
        }
    }

    #[test]
    fn infinite_dihedral_over_rotation() {
        let p = pres(&["a", "b"], &["a^2", "b^2"]);
        let ab = p.parse_word("ab").unwrap();
        let t = coset_enumerate(&p, &[ab], 1000).unwrap();
        assert_eq!(t.index(), 2);
        assert!(t.contains(&p.parse_word("baba").unwrap()));
        assert!(!t.contains(&p.parse_word("a").unwrap()));
        assert!(coset_enumerate(&p, &[], 1000).is_err());
    }

    #[test]
    fn coincidences_collapse() {
        // a^3 = b^2 = (ab)^2 = 1 presents S3, and adding a = 1 collapses it to C2
        let p = pres(&["a", "b"], &["a^3", "b^2", "abab", "a"]);
        assert_eq!(coset_enumerate(&p, &[], 1000).unwrap().index(), 2);
        let s3 = pres(&["a", "b"], &["a^3", "b^2", "abab"]);
        let g = enumerate_group(&s3, 1000, 100).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn csv_export() {
        let p = pres(&["v"], &["v^2"]);
        let t = coset_enumerate(&p, &[], 100).unwrap();
        assert_eq!(t.to_csv(&p.generators), "coset,v,v^-1\n0,1,1\n1,0,0\n");
    }
}
