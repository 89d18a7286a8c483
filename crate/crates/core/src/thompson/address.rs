//! Addresses in the rooted `n`-ary tree and the finite complete subtrees built from them.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A finite sequence over `{0, ..., n-1}`; the empty sequence is the root.
///
/// The derived ordering is lexicographic with a prefix sorting before its
/// extensions, which is the order used for parity and serialization.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(SmallVec<[u8; 14]>);

impl Address {
    pub fn root() -> Self {
        Address(SmallVec::new())
    }

    pub fn new(digits: &[u8]) -> Self {
        Address(SmallVec::from_slice(digits))
    }

    /// `0^k`.
    pub fn zeros(k: usize) -> Self {
        Address(SmallVec::from_elem(0, k))
    }

    /// Builds an address and checks every digit against the arity.
    pub fn checked(n: u8, digits: &[u8]) -> Result<Self> {
        if digits.iter().any(|&d| d >= n) {
            return Err(Error::InvalidAddress(Self::new(digits).to_string(), n));
        }
        Ok(Self::new(digits))
    }

    /// Parses a digit string (`0-9` then `a-z`); `ε`, `e` or the empty string is the root.
    pub fn parse(n: u8, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" {
            return Ok(Self::root());
        }
        let mut digits = SmallVec::new();
        for c in s.chars() {
            let d = c
                .to_digit(36)
                .ok_or_else(|| Error::InvalidAddress(s.to_string(), n))? as u8;
            if d >= n {
                return Err(Error::InvalidAddress(s.to_string(), n));
            }
            digits.push(d);
        }
        Ok(Address(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn comparable(&self, other: &Address) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn child(&self, digit: u8) -> Address {
        let mut d = self.0.clone();
        d.push(digit);
        Address(d)
    }

    pub fn parent(&self) -> Option<Address> {
        if self.0.is_empty() {
            None
        } else {
            Some(Address(SmallVec::from_slice(&self.0[..self.0.len() - 1])))
        }
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn concat(&self, suffix: &[u8]) -> Address {
        let mut d = self.0.clone();
        d.extend_from_slice(suffix);
        Address(d)
    }

    /// Replaces the prefix `from` by `to`. Caller guarantees `from ⪯ self`.
    pub(crate) fn replace_prefix(&self, from_len: usize, to: &Address) -> Address {
        to.concat(&self.0[from_len..])
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &d in &self.0 {
            let c = std::char::from_digit(d as u32, 36).unwrap_or('?');
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Checks that a sorted, duplicate-free list of addresses is exactly the
/// leaf set of a finite complete `n`-ary rooted subtree.
pub fn is_leaf_set(n: u8, leaves: &[Address]) -> bool {
    fn check(n: u8, prefix_len: usize, leaves: &[Address]) -> bool {
        if leaves.is_empty() {
            return false;
        }
        if leaves.len() == 1 && leaves[0].len() == prefix_len {
            return true;
        }
        // Every leaf here must be strictly deeper than the prefix.
        if leaves.iter().any(|l| l.len() <= prefix_len) {
            return false;
        }
        let mut start = 0;
        for digit in 0..n {
            let end = start + leaves[start..].partition_point(|l| l.0[prefix_len] == digit);
            if end == start || !check(n, prefix_len + 1, &leaves[start..end]) {
                return false;
            }
            start = end;
        }
        start == leaves.len()
    }
    leaves.windows(2).all(|w| w[0] < w[1])
        && leaves.iter().all(|l| l.0.iter().all(|&d| d < n))
        && check(n, 0, leaves)
}

/// Leaves of the complete tree of depth `k` (all sequences of length `k`), in lexicographic order.
pub fn complete_leaves(n: u8, k: usize) -> Vec<Address> {
    let mut out = vec![Address::root()];
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|a| (0..n).map(move |d| a.child(d)))
            .collect();
    }
    out
}

/// Leaves of the tree `{0i}_{i<n} ∪ {j}_{0<j<n}`.
pub fn underlined_leaves(n: u8) -> Vec<Address> {
    let mut out: Vec<Address> = (0..n).map(|i| Address::new(&[0, i])).collect();
    out.extend((1..n).map(|j| Address::new(&[j])));
    out
}

/// Leaves of the minimal complete subtree containing every given address.
pub fn minimal_tree_leaves(n: u8, addrs: &[&Address]) -> Vec<Address> {
    let mut internal: Vec<Address> = Vec::new();
    for a in addrs {
        for k in 0..a.len() {
            internal.push(Address::new(&a.0[..k]));
        }
    }
    internal.sort();
    internal.dedup();
    if internal.is_empty() {
        return vec![Address::root()];
    }
    let mut leaves: Vec<Address> = internal
        .iter()
        .flat_map(|p| (0..n).map(move |d| p.child(d)))
        .filter(|c| internal.binary_search(c).is_err())
        .collect();
    leaves.sort();
    leaves
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let a = Address::parse(3, "0120").unwrap();
        assert_eq!(a.digits(), &[0, 1, 2, 0]);
        assert_eq!(a.to_string(), "0120");
        assert_eq!(Address::parse(3, "ε").unwrap(), Address::root());
        assert!(Address::parse(3, "03").is_err());
        assert_eq!(Address::parse(12, "b").unwrap().digits(), &[11]);
    }

    #[test]
    fn prefix_order() {
        let a = Address::new(&[1, 0, 1]);
        let b = Address::new(&[1, 0, 1, 0, 0]);
        assert!(a.is_prefix_of(&b));
        assert!(!b.is_prefix_of(&a));
        assert!(Address::root().is_prefix_of(&a));
        assert!(a < b);
        assert!(Address::new(&[0, 2]) < Address::new(&[1]));
    }

    #[test]
    fn leaf_set_validation() {
        let ok = vec![
            Address::new(&[0, 0]),
            Address::new(&[0, 1]),
            Address::new(&[1]),
        ];
        assert!(is_leaf_set(2, &ok));
        let missing = vec![Address::new(&[0, 0]), Address::new(&[1])];
        assert!(!is_leaf_set(2, &missing));
        assert!(is_leaf_set(3, &[Address::root()]));
        assert!(is_leaf_set(3, &underlined_leaves(3)));
        assert!(!is_leaf_set(3, &[Address::root(), Address::new(&[0])]));
        assert_eq!(complete_leaves(3, 2).len(), 9);
    }

    #[test]
    fn minimal_tree() {
        let a = Address::new(&[0, 0, 0]);
        let b = Address::new(&[2, 1]);
        let leaves = minimal_tree_leaves(3, &[&a, &b]);
        assert!(is_leaf_set(3, &leaves));
        assert!(leaves.contains(&a) && leaves.contains(&b));
        // root, 0, 00, 2 are internal: 4 carets of arity 3 give 9 leaves
        assert_eq!(leaves.len(), 9);
    }
}
