//! Expressing elements of `V_n` as words in `b1..b4`.
//!
//! Depth-two permutations are factored into adjacent transpositions
//! `s_k = r^{-k} b3 r^k` where `r = b1 b2` is the `n²`-cycle. Deeper leaf
//! transpositions are obtained by conjugating with the pull-up maps. All
//! products use the right-action convention.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::address::Address;
use super::element::VnElement;
use super::gens::lex_index;
use super::words::{Gen, GenWord};
use crate::error::{Error, Result};

/// Default cap on the depth of `Sym(Lea(τ̄_k))` handled by [`Synthesizer::sym_word`].
pub const DEFAULT_MAX_DEPTH: usize = 8;

pub struct Synthesizer {
    n: u8,
    max_depth: usize,
    letters: [GenWord; 4],
    r_pos: Vec<GenWord>,
    r_neg: Vec<GenWord>,
    adjacent: Vec<GenWord>,
    up: OnceLock<GenWord>,
    up2: OnceLock<GenWord>,
    transpositions: Mutex<HashMap<(Address, Address), GenWord>>,
    d_words: Mutex<HashMap<(usize, usize), GenWord>>,
}

impl Synthesizer {
    pub fn new(n: u8) -> Result<Self> {
        Self::with_max_depth(n, DEFAULT_MAX_DEPTH)
    }

    pub fn with_max_depth(n: u8, max_depth: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::OutOfRange(format!(
                "word synthesis needs arity at least 3, got {n}"
            )));
        }
        let letters = Gen::ALL.map(|g| GenWord::letter(n, g));
        let big = n as usize * n as usize;
        let r = GenWord::concat(n, vec![letters[0].clone(), letters[1].clone()]);
        let r_inv = r.inverse();
        let r_pos: Vec<GenWord> = (0..big).map(|k| r.pow(k as i64)).collect();
        let r_neg: Vec<GenWord> = (0..big).map(|k| r_inv.pow(k as i64)).collect();
        let adjacent = (0..big - 1)
            .map(|k| {
                GenWord::concat(
                    n,
                    vec![r_neg[k].clone(), letters[2].clone(), r_pos[k].clone()],
                )
            })
            .collect();
        Ok(Synthesizer {
            n,
            max_depth,
            letters,
            r_pos,
            r_neg,
            adjacent,
            up: OnceLock::new(),
            up2: OnceLock::new(),
            transpositions: Mutex::new(HashMap::new()),
            d_words: Mutex::new(HashMap::new()),
        })
    }

    pub fn arity(&self) -> u8 {
        self.n
    }

    pub fn letter(&self, g: Gen) -> GenWord {
        self.letters[g.index() as usize - 1].clone()
    }

    fn empty(&self) -> GenWord {
        GenWord::empty(self.n)
    }

    fn cat(&self, parts: Vec<GenWord>) -> GenWord {
        GenWord::concat(self.n, parts)
    }

    /// `r^k` with `r = b1 b2`.
    pub fn rotation(&self, k: i64) -> GenWord {
        let big = self.r_pos.len() as i64;
        let k = k.rem_euclid(big) as usize;
        self.r_pos[k].clone()
    }

    /// `r^{-k}`, written with `b2 b1` rather than reduced modulo `n²`.
    pub fn rotation_inverse(&self, k: usize) -> GenWord {
        self.r_neg[k % self.r_neg.len()].clone()
    }

    /// The swap of depth-two leaves with lexicographic indices `k` and `k+1`.
    pub fn adjacent(&self, k: usize) -> GenWord {
        self.adjacent[k].clone()
    }

    fn check_depth(&self, k: usize) -> Result<()> {
        if k > self.max_depth {
            return Err(Error::Budget(format!(
                "depth {k} exceeds the synthesis bound {}",
                self.max_depth
            )));
        }
        Ok(())
    }

    /// Word for the permutation `leaf_i ↦ leaf_{perm[i]}` of `Lea(τ̄_k)`.
    pub fn sym_word(&self, k: usize, perm: &[usize]) -> Result<GenWord> {
        self.check_depth(k)?;
        let size = (self.n as usize).pow(k as u32);
        if perm.len() != size {
            return Err(Error::InvalidPermutation(format!(
                "expected {size} images, got {}",
                perm.len()
            )));
        }
        let mut seen = vec![false; size];
        for &p in perm {
            if p >= size || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation(format!("{perm:?}")));
            }
        }
        match k {
            0 => Ok(self.empty()),
            1 => {
                // b'(ij) = b(i)j
                let n = self.n as usize;
                let lifted: Vec<usize> = (0..n * n).map(|x| perm[x / n] * n + x % n).collect();
                Ok(self.bubble(&lifted))
            }
            2 => Ok(self.bubble(perm)),
            _ => {
                let leaves = super::address::complete_leaves(self.n, k);
                let mut parts = Vec::new();
                let mut done = vec![false; size];
                for start in 0..size {
                    if done[start] {
                        continue;
                    }
                    let mut x = perm[start];
                    done[start] = true;
                    while x != start {
                        parts.push(self.transposition_word(&leaves[start], &leaves[x])?);
                        done[x] = true;
                        x = perm[x];
                    }
                }
                Ok(self.cat(parts))
            }
        }
    }

    /// Bubble-sort factorization of a depth-two permutation into adjacent swaps.
    fn bubble(&self, perm: &[usize]) -> GenWord {
        // Sorting the inverse array swaps adjacent values of the image array,
        // which is right multiplication by s_k.
        let mut pos = vec![0usize; perm.len()];
        for (x, &p) in perm.iter().enumerate() {
            pos[p] = x;
        }
        let mut record = Vec::new();
        let len = pos.len();
        for pass in 0..len {
            let mut swapped = false;
            for k in 0..len - 1 - pass {
                if pos[k] > pos[k + 1] {
                    pos.swap(k, k + 1);
                    record.push(k);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        let parts = record.iter().rev().map(|&k| self.adjacent(k)).collect();
        self.cat(parts)
    }

    /// Word for the transposition of two incomparable addresses.
    pub fn transposition_word(&self, a: &Address, b: &Address) -> Result<GenWord> {
        if a.comparable(b) {
            return Err(Error::PrefixViolation(a.to_string(), b.to_string()));
        }
        for x in [a, b] {
            if x.digits().iter().any(|&d| d >= self.n) {
                return Err(Error::InvalidAddress(x.to_string(), self.n));
            }
        }
        let key = if a < b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        if let Some(w) = self.transpositions.lock().unwrap().get(&key) {
            return Ok(w.clone());
        }
        let w = if a.len() == b.len() {
            self.level_transposition(&key.0, &key.1)?
        } else {
            self.mixed_transposition(a, b)?
        };
        self.transpositions
            .lock()
            .unwrap()
            .insert(key, w.clone());
        Ok(w)
    }

    /// Transposition in `Sym(Lea(τ̄_D))`, `D = |a| = |b|`.
    fn level_transposition(&self, a: &Address, b: &Address) -> Result<GenWord> {
        let depth = a.len();
        self.check_depth(depth)?;
        match depth {
            1 => {
                let mut perm: Vec<usize> = (0..self.n as usize).collect();
                perm.swap(a.digits()[0] as usize, b.digits()[0] as usize);
                self.sym_word(1, &perm)
            }
            2 => {
                let (i, j) = {
                    let (x, y) = (lex_index(self.n, a), lex_index(self.n, b));
                    (x.min(y), x.max(y))
                };
                let mut parts: Vec<GenWord> = (i..j).map(|k| self.adjacent(k)).collect();
                parts.extend((i..j - 1).rev().map(|k| self.adjacent(k)));
                Ok(self.cat(parts))
            }
            _ => self.deep_transposition(a, b),
        }
    }

    /// Induction step from depth `k` to `k + 1 >= 3`.
    fn deep_transposition(&self, a: &Address, b: &Address) -> Result<GenWord> {
        let k = a.len() - 1;
        let (ap, i) = (a.parent().unwrap(), a.last().unwrap());
        let (bp, j) = (b.parent().unwrap(), b.last().unwrap());
        let zk = Address::zeros(k);
        let zk1 = Address::zeros(k - 1);
        let up = self.up_word()?;
        if ap == bp {
            // c = (0^k α'), c' = (0^{k-1}i 0^{k-1}j)
            let c = self.swap_or_identity(&zk, &ap)?;
            let c_prime = self.transposition_word(&zk1.child(i), &zk1.child(j))?;
            return Ok(self.cat(vec![
                c.clone(),
                up.clone(),
                c_prime,
                up.inverse(),
                c.inverse(),
            ]));
        }
        let target_b = zk1.child(1);
        let c = self.move_pair(&ap, &zk, &bp, &target_b)?;
        if k >= 3 {
            // α ↦ 0^{k-1}i and β ↦ 0^{k-2}1j, both of length k
            let alpha_img = zk1.child(i);
            let beta_img = Address::zeros(k - 2).child(1).child(j);
            let c_prime = self.transposition_word(&alpha_img, &beta_img)?;
            return Ok(self.cat(vec![
                c.clone(),
                up.clone(),
                c_prime,
                up.inverse(),
                c.inverse(),
            ]));
        }
        // k = 2: b↑ sends 01j to 10j, which is still of length 3, so pull up twice.
        // c2 sends 10 ↦ 00 and 0i ↦ 20; afterwards α ↦ 20 and β ↦ 0j.
        let a10 = Address::new(&[1, 0]);
        let a00 = Address::new(&[0, 0]);
        let a20 = Address::new(&[2, 0]);
        let a0i = Address::new(&[0, i]);
        let c2 = if i == 0 {
            self.cat(vec![
                self.transposition_word(&a10, &a00)?,
                self.transposition_word(&a10, &a20)?,
            ])
        } else {
            self.cat(vec![
                self.transposition_word(&a10, &a00)?,
                self.transposition_word(&a0i, &a20)?,
            ])
        };
        let h = self.cat(vec![c, up.clone(), c2, up]);
        let inner = self.transposition_word(&a20, &Address::new(&[0, j]))?;
        Ok(h.conjugate(&inner))
    }

    fn swap_or_identity(&self, x: &Address, y: &Address) -> Result<GenWord> {
        if x == y {
            Ok(self.empty())
        } else {
            self.transposition_word(x, y)
        }
    }

    /// A product of at most two same-level transpositions sending `a ↦ ta` and `b ↦ tb`.
    fn move_pair(&self, a: &Address, ta: &Address, b: &Address, tb: &Address) -> Result<GenWord> {
        let first = self.swap_or_identity(a, ta)?;
        let b_now = if b == ta {
            a.clone()
        } else {
            b.clone()
        };
        let second = self.swap_or_identity(&b_now, tb)?;
        Ok(self.cat(vec![first, second]))
    }

    /// `b4 · (0 1) · (10 11)`.
    pub fn up_word(&self) -> Result<GenWord> {
        if let Some(w) = self.up.get() {
            return Ok(w.clone());
        }
        let w = self.cat(vec![
            self.letter(Gen::B4),
            self.level_transposition(&Address::new(&[0]), &Address::new(&[1]))?,
            self.level_transposition(&Address::new(&[1, 0]), &Address::new(&[1, 1]))?,
        ]);
        Ok(self.up.get_or_init(|| w).clone())
    }

    /// `(c b4 c) · (0 2) · (20 22)` with `c = (1 2)`.
    pub fn up2_word(&self) -> Result<GenWord> {
        if let Some(w) = self.up2.get() {
            return Ok(w.clone());
        }
        let c = self.level_transposition(&Address::new(&[1]), &Address::new(&[2]))?;
        let w = self.cat(vec![
            c.conjugate(&self.letter(Gen::B4)),
            self.level_transposition(&Address::new(&[0]), &Address::new(&[2]))?,
            self.level_transposition(&Address::new(&[2, 0]), &Address::new(&[2, 2]))?,
        ]);
        Ok(self.up2.get_or_init(|| w).clone())
    }

    /// Word for the transposition of `0^{p+m}` and `0^p 1`.
    pub fn d_word(&self, m: usize, p: usize) -> Result<GenWord> {
        if m < 1 {
            return Err(Error::OutOfRange(format!("m = {m} must be at least 1")));
        }
        self.check_depth(p + m + 1)?;
        if let Some(w) = self.d_words.lock().unwrap().get(&(m, p)) {
            return Ok(w.clone());
        }
        let w = if p == 0 {
            match m {
                1 => self.level_transposition(&Address::new(&[0]), &Address::new(&[1]))?,
                2 => self.letter(Gen::B4),
                _ => self
                    .up2_word()?
                    .pow(m as i64 - 2)
                    .conjugate(&self.letter(Gen::B4)),
            }
        } else {
            // g sends 0^{p+m} ↦ 0^{m+1} and 0^p1 ↦ 1 by prefix replacement
            let up = self.up_word()?;
            let g = self.cat(vec![
                up.pow(p as i64),
                self.level_transposition(&Address::new(&[1, 0]), &Address::new(&[1, 1]))?,
                up.inverse(),
            ]);
            g.conjugate(&self.d_word(m + 1, 0)?)
        };
        self.d_words.lock().unwrap().insert((m, p), w.clone());
        Ok(w)
    }

    /// `(b↑)^p · d_m · (b↑)^{-p}` taken literally; differs from `d_{m,p}` when `p >= 1`.
    pub fn d_word_literal(&self, m: usize, p: usize) -> Result<GenWord> {
        Ok(self.up_word()?.pow(p as i64).conjugate(&self.d_word(m, 0)?))
    }

    /// Word for a general leaf transposition: conjugate `d_{m,p}` by `c1 c2`.
    fn mixed_transposition(&self, a: &Address, b: &Address) -> Result<GenWord> {
        let (alpha, beta) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let (la, lb) = (alpha.len(), beta.len());
        let slot = Address::zeros(lb - 1).child(1);
        let c1 = self.swap_or_identity(&slot, beta)?;
        let alpha_c1 = if slot.is_prefix_of(alpha) {
            alpha.replace_prefix(lb, beta)
        } else if beta.is_prefix_of(alpha) {
            alpha.replace_prefix(lb, &slot)
        } else {
            alpha.clone()
        };
        let c2 = self.swap_or_identity(&Address::zeros(la), &alpha_c1)?;
        let d = self.d_word(la - lb + 1, lb - 1)?;
        let h = self.cat(vec![c1, c2]);
        Ok(h.conjugate(&d))
    }

    /// Splits a canonical involution into commuting leaf transpositions.
    pub fn involution_word(&self, x: &VnElement) -> Result<GenWord> {
        if x.arity() != self.n {
            return Err(Error::ArityMismatch(x.arity(), self.n));
        }
        if !x.is_involution() {
            return Err(Error::NotAnInvolution);
        }
        let c = x.canonicalize();
        let mut parts = Vec::new();
        for (d, r) in c.pairs() {
            if d < r {
                parts.push(self.transposition_word(d, r)?);
            }
        }
        Ok(self.cat(parts))
    }

    /// Parses whitespace-separated tokens `b1 b2 b3 b4 up up2 d(m,p) t(a,b)`,
    /// each optionally followed by `^k`.
    pub fn parse_word(&self, text: &str) -> Result<GenWord> {
        let mut parts = Vec::new();
        for tok in text.split_whitespace() {
            let (base, exp) = match tok.rsplit_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?,
                ),
                None => (tok, 1),
            };
            let w = match base {
                "b1" => self.letter(Gen::B1),
                "b2" => self.letter(Gen::B2),
                "b3" => self.letter(Gen::B3),
                "b4" => self.letter(Gen::B4),
                "up" => self.up_word()?,
                "up2" => self.up2_word()?,
                _ => {
                    let (name, args) = base
                        .strip_suffix(')')
                        .and_then(|s| s.split_once('('))
                        .ok_or_else(|| Error::Parse(format!("unknown token `{tok}`")))?;
                    let (x, y) = args
                        .split_once(',')
                        .ok_or_else(|| Error::Parse(format!("expected two arguments in `{tok}`")))?;
                    match name {
                        "d" => {
                            let m = x.trim().parse().map_err(|_| Error::Parse(tok.into()))?;
                            let p = y.trim().parse().map_err(|_| Error::Parse(tok.into()))?;
                            self.d_word(m, p)?
                        }
                        "t" => self.transposition_word(
                            &Address::parse(self.n, x)?,
                            &Address::parse(self.n, y)?,
                        )?,
                        _ => return Err(Error::Parse(format!("unknown token `{tok}`"))),
                    }
                }
            };
            parts.push(w.pow(exp));
        }
        Ok(self.cat(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::super::gens::{d_element, generator, pull_up, pull_up2};
    use super::*;

    fn a(n: u8, s: &str) -> Address {
        Address::parse(n, s).unwrap()
    }

    #[test]
    fn adjacent_swaps() {
        let s = Synthesizer::new(3).unwrap();
        for k in 0..8 {
            let mut perm: Vec<usize> = (0..9).collect();
            perm.swap(k, k + 1);
            assert_eq!(
                s.adjacent(k).evaluate().unwrap(),
                VnElement::sym(3, 2, &perm).unwrap()
            );
        }
    }

    #[test]
    fn bubble_sort_realizes_b1() {
        let s = Synthesizer::new(3).unwrap();
        let perm: Vec<usize> = (0..9).rev().collect();
        let w = s.sym_word(2, &perm).unwrap();
        assert_eq!(w.evaluate().unwrap(), generator(3, 1).unwrap());
        assert!(s.sym_word(2, &(0..9).collect::<Vec<_>>()).unwrap().is_empty());
    }

    #[test]
    fn pull_up_words() {
        for n in 3..=5 {
            let s = Synthesizer::new(n).unwrap();
            assert_eq!(s.up_word().unwrap().evaluate().unwrap(), pull_up(n).unwrap());
            assert_eq!(s.up2_word().unwrap().evaluate().unwrap(), pull_up2(n).unwrap());
        }
    }

    #[test]
    fn literal_conjugation_misses_d_m_p() {
        let s = Synthesizer::new(3).unwrap();
        let lit = s.d_word_literal(1, 1).unwrap().evaluate().unwrap();
        assert_ne!(lit, d_element(3, 1, 1).unwrap());
        assert_eq!(
            s.d_word(1, 1).unwrap().evaluate().unwrap(),
            generator(3, 3).unwrap()
        );
    }

    #[test]
    fn depth_three_cross_parent() {
        let s = Synthesizer::new(3).unwrap();
        for (x, y) in [("000", "010"), ("012", "120"), ("221", "220"), ("100", "011")] {
            let w = s.transposition_word(&a(3, x), &a(3, y)).unwrap();
            assert_eq!(
                w.evaluate().unwrap(),
                VnElement::transposition(3, &a(3, x), &a(3, y)).unwrap(),
                "{x} {y}"
            );
        }
    }

    #[test]
    fn mixed_lengths() {
        let s = Synthesizer::new(3).unwrap();
        let w = s.transposition_word(&a(3, "012"), &a(3, "20")).unwrap();
        assert_eq!(
            w.evaluate().unwrap(),
            VnElement::transposition(3, &a(3, "012"), &a(3, "20")).unwrap()
        );
        assert!(s.transposition_word(&a(3, "0"), &a(3, "01")).is_err());
    }

    #[test]
    fn parse_tokens() {
        let s = Synthesizer::new(3).unwrap();
        let w = s.parse_word("b1 b2").unwrap();
        assert_eq!(w.evaluate().unwrap().order(20), super::super::element::Order::Finite(9));
        let w = s.parse_word("d(2,0) b4").unwrap();
        assert!(w.evaluate().unwrap().is_identity());
        let w = s.parse_word("t(00,01)").unwrap();
        assert_eq!(w.evaluate().unwrap(), generator(3, 3).unwrap());
        let w = s.parse_word("up^2 up^-2").unwrap();
        assert!(w.evaluate().unwrap().is_identity());
        assert!(s.parse_word("b5").is_err());
    }

    #[test]
    fn shared_evaluation_matches_flat() {
        let s = Synthesizer::new(3).unwrap();
        let w = s.transposition_word(&a(3, "00"), &a(3, "1")).unwrap();
        assert_eq!(w.evaluate().unwrap(), w.evaluate_flat(1 << 20).unwrap());
    }
}
