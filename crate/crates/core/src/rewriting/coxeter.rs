//! Word problem in Coxeter groups by braid moves and `ss`-deletion.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::graphprod::{LabeledGraph, Mode};
use crate::presentation::{Syllable, Word};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

const MEMO_LIMIT: usize = 2_000_000;

/// Solves the word problem in `W_Γ`.
///
/// A word is reduced iff no word reachable from it by braid moves contains
/// two equal adjacent letters, and any two reduced words for one element
/// are connected by braid moves. Words are reduced letter by letter: `r·s`
/// shortens iff some word in the braid class of `r` ends in `s`.
pub struct CoxeterSolver {
    m: Vec<Vec<u32>>,
    budget: usize,
    classes: Mutex<HashMap<Vec<u8>, Arc<Vec<Vec<u8>>>>>,
}

impl CoxeterSolver {
    pub fn new(g: &LabeledGraph) -> Result<Self> {
        Self::with_budget(g, DEFAULT_NODE_BUDGET)
    }

    pub fn with_budget(g: &LabeledGraph, budget: usize) -> Result<Self> {
        if g.mode() != Mode::Coxeter {
            return Err(Error::ModeMismatch("coxeter"));
        }
        if g.len() > u8::MAX as usize {
            return Err(Error::OutOfRange(format!("{} generators", g.len())));
        }
        let n = g.len();
        let m = (0..n)
            .map(|u| (0..n).map(|v| if u == v { 1 } else { g.label(u, v).unwrap_or(0) }).collect())
            .collect();
        Ok(CoxeterSolver {
            m,
            budget,
            classes: Mutex::new(HashMap::new()),
        })
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    /// Letters of a word, using `v^k = v^(k mod 2)`.
    pub fn letters(&self, w: &Word) -> Vec<u8> {
        w.syllables()
            .iter()
            .filter(|s| s.exp.rem_euclid(2) == 1)
            .map(|s| s.gen as u8)
            .collect()
    }

    pub fn to_word(letters: &[u8]) -> Word {
        Word(
            letters
                .iter()
                .map(|&l| Syllable {
                    gen: l as usize,
                    exp: 1,
                })
                .collect(),
        )
        .freely_reduced()
    }

    /// All words obtained from a reduced word by braid moves, sorted.
    pub fn braid_class(&self, r: &[u8]) -> Result<Arc<Vec<Vec<u8>>>> {
        if let Some(c) = self.classes.lock().unwrap().get(r) {
            return Ok(c.clone());
        }
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(r.to_vec());
        queue.push_back(r.to_vec());
        while let Some(w) = queue.pop_front() {
            for i in 0..w.len() {
                if i + 1 >= w.len() {
                    break;
                }
                let (s, t) = (w[i], w[i + 1]);
                if s == t {
                    continue;
                }
                let m = self.m[s as usize][t as usize] as usize;
                if m == 0 || i + m > w.len() {
                    continue;
                }
                if !(0..m).all(|k| w[i + k] == if k % 2 == 0 { s } else { t }) {
                    continue;
                }
                let mut x = w.clone();
                for k in 0..m {
                    x[i + k] = if k % 2 == 0 { t } else { s };
                }
                if seen.insert(x.clone()) {
                    if seen.len() > self.budget {
                        return Err(Error::Budget(format!(
                            "braid class exceeds {} words",
                            self.budget
                        )));
                    }
                    queue.push_back(x);
                }
            }
        }
        let mut class: Vec<Vec<u8>> = seen.into_iter().collect();
        class.sort();
        let class = Arc::new(class);
        let mut memo = self.classes.lock().unwrap();
        if memo.len() > MEMO_LIMIT {
            memo.clear();
        }
        for w in class.iter() {
            memo.insert(w.clone(), class.clone());
        }
        Ok(class)
    }

    /// A reduced word for the same element.
    pub fn reduce(&self, letters: &[u8]) -> Result<Vec<u8>> {
        let mut r: Vec<u8> = Vec::new();
        for &s in letters {
            if s as usize >= self.rank() {
                return Err(Error::OutOfRange(format!("generator {s}")));
            }
            if r.last() == Some(&s) {
                r.pop();
                continue;
            }
            let class = self.braid_class(&r)?;
            match class.iter().find(|w| w.last() == Some(&s)) {
                Some(w) => r = w[..w.len() - 1].to_vec(),
                None => r.push(s),
            }
        }
        Ok(r)
    }

    /// The lexicographically least reduced word.
    pub fn normal_form_letters(&self, letters: &[u8]) -> Result<Vec<u8>> {
        let r = self.reduce(letters)?;
        Ok(self.braid_class(&r)?[0].clone())
    }

    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        Ok(Self::to_word(&self.normal_form_letters(&self.letters(w))?))
    }

    pub fn length(&self, w: &Word) -> Result<usize> {
        Ok(self.reduce(&self.letters(w))?.len())
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.reduce(&self.letters(w))?.is_empty())
    }

    /// Equality of `w1` and `w2` in `W_Γ`.
    pub fn equal(&self, w1: &Word, w2: &Word) -> Result<bool> {
        let mut l = self.letters(w1);
        let mut r = self.letters(w2);
        r.reverse();
        l.extend(r);
        Ok(self.reduce(&l)?.is_empty())
    }
}

/// Decides `w1 = w2` in the Coxeter group of `g`.
pub fn coxeter_equal(g: &LabeledGraph, w1: &Word, w2: &Word) -> Result<bool> {
    CoxeterSolver::new(g)?.equal(w1, w2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphprod::coxeter_presentation;

    #[test]
    fn relators_are_trivial() {
        for m in 2..7 {
            let g = LabeledGraph::coxeter(&["v", "w"], &[(0, 1, m)]).unwrap();
            let p = coxeter_presentation(&g).unwrap();
            let s = CoxeterSolver::new(&g).unwrap();
            for r in &p.relators {
                assert!(s.is_identity(r).unwrap());
            }
            let vw = p.parse_word("v w").unwrap();
            assert!(!s.is_identity(&vw.pow(m - 1)).unwrap());
            assert!(!s.equal(&Word::gen(0), &Word::gen(1)).unwrap());
        }
    }

    #[test]
    fn longest_element_of_a3() {
        // a non-edge means m = ∞, so the commuting pair needs an explicit 2
        let g = LabeledGraph::coxeter(&["a", "b", "c"], &[(0, 1, 3), (1, 2, 3), (0, 2, 2)]).unwrap();
        let s = CoxeterSolver::new(&g).unwrap();
        let w0 = [0u8, 1, 0, 2, 1, 0];
        assert_eq!(s.reduce(&w0).unwrap().len(), 6);
        assert_eq!(s.braid_class(&w0).unwrap().len(), 16);
        assert_eq!(s.reduce(&[0, 1, 0, 2, 1, 0, 1]).unwrap().len(), 5);
    }

    #[test]
    fn infinite_dihedral_words_stay_reduced() {
        let g = LabeledGraph::racg(2, &[]).unwrap();
        let s = CoxeterSolver::new(&g).unwrap();
        let w: Vec<u8> = (0..20).map(|i| (i % 2) as u8).collect();
        assert_eq!(s.reduce(&w).unwrap(), w);
    }
}
