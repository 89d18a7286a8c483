//! Words over the involutions `b1..b4`, stored as shared ropes.
//!
//! Synthesized words reuse large sub-words many times, so a word is a DAG of
//! concatenations and formal inverses. Each node caches its value once it has
//! been evaluated.

use std::fmt;
use std::sync::{Arc, OnceLock};

use super::element::VnElement;
use super::gens::generator;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    B1,
    B2,
    B3,
    B4,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::B1, Gen::B2, Gen::B3, Gen::B4];

    pub fn index(self) -> u8 {
        match self {
            Gen::B1 => 1,
            Gen::B2 => 2,
            Gen::B3 => 3,
            Gen::B4 => 4,
        }
    }

    pub fn from_index(i: u8) -> Option<Gen> {
        Gen::ALL.get(i.checked_sub(1)? as usize).copied()
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.index())
    }
}

enum Kind {
    Letter(Gen),
    Concat(Vec<GenWord>),
    Inverse(GenWord),
}

struct Node {
    kind: Kind,
    len: u64,
    value: OnceLock<VnElement>,
}

#[derive(Clone)]
pub struct GenWord {
    n: u8,
    node: Arc<Node>,
}

impl GenWord {
    fn make(n: u8, kind: Kind, len: u64) -> Self {
        GenWord {
            n,
            node: Arc::new(Node {
                kind,
                len,
                value: OnceLock::new(),
            }),
        }
    }

    pub fn empty(n: u8) -> Self {
        Self::make(n, Kind::Concat(Vec::new()), 0)
    }

    pub fn letter(n: u8, g: Gen) -> Self {
        Self::make(n, Kind::Letter(g), 1)
    }

    pub fn from_letters(n: u8, letters: &[Gen]) -> Self {
        Self::concat(n, letters.iter().map(|&g| Self::letter(n, g)).collect())
    }

    /// Concatenation; empty parts are dropped and single parts are returned as is.
    pub fn concat(n: u8, parts: Vec<GenWord>) -> Self {
        let mut parts: Vec<GenWord> = parts.into_iter().filter(|p| p.len() > 0).collect();
        match parts.len() {
            0 => Self::empty(n),
            1 => parts.pop().unwrap(),
            _ => {
                debug_assert!(parts.iter().all(|p| p.n == n));
                let len = parts.iter().fold(0u64, |acc, p| acc.saturating_add(p.len()));
                Self::make(n, Kind::Concat(parts), len)
            }
        }
    }

    pub fn then(&self, other: &GenWord) -> GenWord {
        Self::concat(self.n, vec![self.clone(), other.clone()])
    }

    /// The formal inverse: reversed letters, since every letter is an involution.
    pub fn inverse(&self) -> GenWord {
        match &self.node.kind {
            Kind::Letter(_) => self.clone(),
            Kind::Inverse(w) => w.clone(),
            Kind::Concat(v) if v.is_empty() => self.clone(),
            _ => Self::make(self.n, Kind::Inverse(self.clone()), self.len()),
        }
    }

    /// `w^k`, negative powers through the inverse.
    pub fn pow(&self, k: i64) -> GenWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        Self::concat(self.n, vec![base; k.unsigned_abs() as usize])
    }

    /// `self · inner · self⁻¹`.
    pub fn conjugate(&self, inner: &GenWord) -> GenWord {
        Self::concat(self.n, vec![self.clone(), inner.clone(), self.inverse()])
    }

    pub fn arity(&self) -> u8 {
        self.n
    }

    /// Letter count, saturating at `u64::MAX`.
    pub fn len(&self) -> u64 {
        self.node.len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Evaluates the word, memoizing every sub-word.
    pub fn evaluate(&self) -> Result<VnElement> {
        if let Some(v) = self.node.value.get() {
            return Ok(v.clone());
        }
        let v = match &self.node.kind {
            Kind::Letter(g) => generator(self.n, g.index())?,
            Kind::Concat(parts) => {
                let mut acc = VnElement::identity(self.n);
                for p in parts {
                    acc = acc.compose_raw(&p.evaluate()?).canonicalize_owned();
                }
                acc
            }
            Kind::Inverse(w) => w.evaluate()?.invert(),
        };
        Ok(self.node.value.get_or_init(|| v).clone())
    }

    /// Expands the rope into a flat letter sequence, if it has at most `limit` letters.
    pub fn flatten(&self, limit: u64) -> Result<Vec<Gen>> {
        if self.len() > limit {
            return Err(Error::Budget(format!(
                "word has {} letters, limit {limit}",
                self.len()
            )));
        }
        let mut out = Vec::with_capacity(self.len() as usize);
        self.push_letters(false, &mut out);
        Ok(out)
    }

    fn push_letters(&self, reversed: bool, out: &mut Vec<Gen>) {
        match &self.node.kind {
            Kind::Letter(g) => out.push(*g),
            Kind::Concat(parts) => {
                if reversed {
                    for p in parts.iter().rev() {
                        p.push_letters(true, out);
                    }
                } else {
                    for p in parts {
                        p.push_letters(false, out);
                    }
                }
            }
            Kind::Inverse(w) => w.push_letters(!reversed, out),
        }
    }

    /// Letter-by-letter evaluation with no sharing; used to cross-check [`evaluate`](Self::evaluate).
    pub fn evaluate_flat(&self, limit: u64) -> Result<VnElement> {
        let letters = self.flatten(limit)?;
        let gens: Vec<VnElement> = (1..=4)
            .map(|i| generator(self.n, i))
            .collect::<Result<_>>()?;
        let mut acc = VnElement::identity(self.n);
        for g in letters {
            acc = acc
                .compose_raw(&gens[g.index() as usize - 1])
                .canonicalize_owned();
        }
        Ok(acc)
    }

    /// Space-separated letters, or a length summary when longer than `limit`.
    pub fn render(&self, limit: u64) -> String {
        match self.flatten(limit) {
            Ok(letters) => letters
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            Err(_) => format!("<word of length {}>", self.len()),
        }
    }
}

impl fmt::Debug for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenWord(n={}, len={})", self.n, self.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involutions_cancel() {
        let w = GenWord::from_letters(3, &[Gen::B1, Gen::B2, Gen::B2, Gen::B1]);
        assert!(w.evaluate().unwrap().is_identity());
        assert!(GenWord::empty(3).evaluate().unwrap().is_identity());
    }

    #[test]
    fn inverse_reverses_letters() {
        let w = GenWord::from_letters(3, &[Gen::B1, Gen::B2, Gen::B3]);
        assert_eq!(w.inverse().flatten(10).unwrap(), vec![Gen::B3, Gen::B2, Gen::B1]);
        let x = w.then(&w.inverse());
        assert!(x.evaluate().unwrap().is_identity());
        assert_eq!(x.len(), 6);
    }

    #[test]
    fn shared_and_flat_evaluation_agree() {
        let r = GenWord::from_letters(4, &[Gen::B1, Gen::B2]);
        let w = r.pow(3).conjugate(&GenWord::letter(4, Gen::B4)).then(&r.pow(-2));
        assert_eq!(w.evaluate().unwrap(), w.evaluate_flat(1000).unwrap());
    }

    #[test]
    fn nine_cycle_order() {
        let r = GenWord::from_letters(3, &[Gen::B1, Gen::B2]);
        assert_eq!(
            r.evaluate().unwrap().order(20),
            super::super::element::Order::Finite(9)
        );
        assert_eq!(r.render(10), "b1 b2");
    }
}
