//! Tree-pair diagrams for elements of the Higman–Thompson group `V_n`.
//!
//! An element is stored as the sorted leaf list of its domain tree together
//! with a parallel list of images. Products use the right-action convention:
//! `x.compose(y)` applies `x` first, then `y`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::address::{complete_leaves, is_leaf_set, minimal_tree_leaves, Address};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn from_count(c: usize) -> Self {
        if c % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Result of a bounded order computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    Finite(usize),
    ExceedsBound,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VnElement {
    n: u8,
    domain: Vec<Address>,
    images: Vec<Address>,
    canonical: bool,
}

impl VnElement {
    /// Validates a tree pair. The result is not reduced; call
    /// [`canonicalize`](Self::canonicalize) for the canonical representative.
    pub fn from_pairs(n: u8, mut pairs: Vec<(Address, Address)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArity(n as usize, "arity must be at least 2"));
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (domain, images): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        if !is_leaf_set(n, &domain) {
            return Err(Error::InvalidTreePair("domain is not a complete leaf set".into()));
        }
        let mut range = images.clone();
        range.sort();
        if !is_leaf_set(n, &range) {
            return Err(Error::InvalidTreePair(
                "images do not form a complete leaf set bijectively".into(),
            ));
        }
        Ok(VnElement {
            n,
            domain,
            images,
            canonical: false,
        })
    }

    pub fn identity(n: u8) -> Self {
        VnElement {
            n,
            domain: vec![Address::root()],
            images: vec![Address::root()],
            canonical: true,
        }
    }

    /// The permutation `leaves[i] ↦ leaves[perm[i]]` of a leaf set, canonicalized.
    pub fn from_leaf_permutation(n: u8, leaves: &[Address], perm: &[usize]) -> Result<Self> {
        if leaves.len() != perm.len() {
            return Err(Error::InvalidPermutation("length differs from leaf count".into()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation(format!("{perm:?}")));
            }
        }
        let pairs = leaves
            .iter()
            .zip(perm)
            .map(|(l, &p)| (l.clone(), leaves[p].clone()))
            .collect();
        Ok(Self::from_pairs(n, pairs)?.canonicalize())
    }

    /// A permutation of `Lea(τ̄_k)` given on lexicographic indices.
    pub fn sym(n: u8, k: usize, perm: &[usize]) -> Result<Self> {
        Self::from_leaf_permutation(n, &complete_leaves(n, k), perm)
    }

    /// The transposition of two incomparable addresses on the minimal tree containing both.
    pub fn transposition(n: u8, a: &Address, b: &Address) -> Result<Self> {
        if a.comparable(b) {
            return Err(Error::PrefixViolation(a.to_string(), b.to_string()));
        }
        for x in [a, b] {
            if x.digits().iter().any(|&d| d >= n) {
                return Err(Error::InvalidAddress(x.to_string(), n));
            }
        }
        let leaves = minimal_tree_leaves(n, &[a, b]);
        let pairs = leaves
            .iter()
            .map(|l| {
                let img = if l == a {
                    b.clone()
                } else if l == b {
                    a.clone()
                } else {
                    l.clone()
                };
                (l.clone(), img)
            })
            .collect();
        Ok(Self::from_pairs(n, pairs)?.canonicalize())
    }

    pub fn arity(&self) -> u8 {
        self.n
    }

    pub fn domain(&self) -> &[Address] {
        &self.domain
    }

    pub fn images(&self) -> &[Address] {
        &self.images
    }

    /// Range leaves in lexicographic order.
    pub fn range(&self) -> Vec<Address> {
        let mut r = self.images.clone();
        r.sort();
        r
    }

    pub fn leaf_count(&self) -> usize {
        self.domain.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Address, &Address)> {
        self.domain.iter().zip(&self.images)
    }

    pub fn is_identity(&self) -> bool {
        let c = self.canonicalize();
        c.domain.len() == 1
    }

    /// Image of an address, if the address lies below some domain leaf.
    pub fn apply(&self, a: &Address) -> Option<Address> {
        let idx = self.domain.partition_point(|l| l <= a);
        if idx == 0 {
            return None;
        }
        let leaf = &self.domain[idx - 1];
        leaf.is_prefix_of(a)
            .then(|| a.replace_prefix(leaf.len(), &self.images[idx - 1]))
    }

    fn check_arity(&self, other: &VnElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ArityMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// `self` then `other`, reduced to canonical form.
    pub fn compose(&self, other: &VnElement) -> Result<VnElement> {
        self.check_arity(other)?;
        Ok(self.compose_raw(other).canonicalize_owned())
    }

    /// Product on the common refinement of `range(self)` and `domain(other)`, unreduced.
    pub(crate) fn compose_raw(&self, other: &VnElement) -> VnElement {
        let mut pairs: Vec<(Address, Address)> = Vec::with_capacity(self.domain.len());
        for (d, r) in self.pairs() {
            let idx = other.domain.partition_point(|l| l <= r);
            if idx > 0 && other.domain[idx - 1].is_prefix_of(r) {
                let leaf = &other.domain[idx - 1];
                pairs.push((d.clone(), r.replace_prefix(leaf.len(), &other.images[idx - 1])));
            } else {
                // r is an interior vertex of other's domain tree: refine d accordingly
                let mut j = idx;
                while j < other.domain.len() && r.is_prefix_of(&other.domain[j]) {
                    let leaf = &other.domain[j];
                    pairs.push((d.concat(&leaf.digits()[r.len()..]), other.images[j].clone()));
                    j += 1;
                }
            }
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (domain, images) = pairs.into_iter().unzip();
        VnElement {
            n: self.n,
            domain,
            images,
            canonical: false,
        }
    }

    pub fn invert(&self) -> VnElement {
        let mut pairs: Vec<(Address, Address)> = self
            .pairs()
            .map(|(d, r)| (r.clone(), d.clone()))
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (domain, images) = pairs.into_iter().unzip();
        let inv = VnElement {
            n: self.n,
            domain,
            images,
            canonical: self.canonical,
        };
        if inv.canonical {
            inv
        } else {
            inv.canonicalize_owned()
        }
    }

    /// Collapses reducible carets until none remain.
    ///
    /// A sibling set `α0, …, α(n-1)` of domain leaves is reducible when its
    /// images are `β0, …, β(n-1)` for a single `β`.
    pub fn canonicalize(&self) -> VnElement {
        if self.canonical {
            return self.clone();
        }
        self.clone().canonicalize_owned()
    }

    pub(crate) fn canonicalize_owned(self) -> VnElement {
        if self.canonical {
            return self;
        }
        let n = self.n as usize;
        let mut stack: Vec<(Address, Address)> = Vec::with_capacity(self.domain.len());
        for pair in self.domain.into_iter().zip(self.images) {
            stack.push(pair);
            // a completed sibling run always sits on top of the stack
            while stack.len() >= n {
                let top = &stack[stack.len() - n..];
                let (d0, r0) = &top[0];
                let (Some(dp), Some(rp)) = (d0.parent(), r0.parent()) else {
                    break;
                };
                let reducible = top.iter().enumerate().all(|(i, (d, r))| {
                    d.len() == d0.len()
                        && d.last() == Some(i as u8)
                        && dp.is_prefix_of(d)
                        && r.len() == r0.len()
                        && r.last() == Some(i as u8)
                        && rp.is_prefix_of(r)
                });
                if !reducible {
                    break;
                }
                stack.truncate(stack.len() - n);
                stack.push((dp, rp));
            }
        }
        let (domain, images) = stack.into_iter().unzip();
        VnElement {
            n: self.n,
            domain,
            images,
            canonical: true,
        }
    }

    /// Replaces a domain leaf by its children (and its image by the image's children).
    pub fn expand(&self, leaf: &Address) -> Result<VnElement> {
        let idx = self
            .domain
            .binary_search(leaf)
            .map_err(|_| Error::LeafNotPresent(leaf.to_string()))?;
        let img = self.images[idx].clone();
        let mut domain = Vec::with_capacity(self.domain.len() + self.n as usize - 1);
        let mut images = Vec::with_capacity(domain.capacity());
        domain.extend_from_slice(&self.domain[..idx]);
        images.extend_from_slice(&self.images[..idx]);
        for d in 0..self.n {
            domain.push(leaf.child(d));
            images.push(img.child(d));
        }
        domain.extend_from_slice(&self.domain[idx + 1..]);
        images.extend_from_slice(&self.images[idx + 1..]);
        Ok(VnElement {
            n: self.n,
            domain,
            images,
            canonical: false,
        })
    }

    /// Class equality, decided on canonical forms.
    pub fn equals(&self, other: &VnElement) -> Result<bool> {
        self.check_arity(other)?;
        let a = self.canonicalize();
        let b = other.canonicalize();
        Ok(a.domain == b.domain && a.images == b.images)
    }

    /// Parity of the number of lexicographic inversions of this representative.
    pub fn parity(&self) -> Parity {
        let mut inversions = 0usize;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    inversions += 1;
                }
            }
        }
        Parity::from_count(inversions)
    }

    /// Parity of the element of `V_n`; defined only for odd arity.
    pub fn class_parity(&self) -> Result<Parity> {
        if self.n % 2 == 0 {
            return Err(Error::EvenArityParity(self.n));
        }
        Ok(self.canonicalize().parity())
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).map(|s| s.is_identity()).unwrap_or(false)
    }

    pub fn pow(&self, k: i64) -> VnElement {
        let base = if k < 0 { self.invert() } else { self.canonicalize() };
        let mut acc = VnElement::identity(self.n);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose_raw(&base).canonicalize_owned();
        }
        acc
    }

    /// Least `k ≤ bound` with `self^k = 1`.
    pub fn order(&self, bound: usize) -> Order {
        let base = self.canonicalize();
        let mut acc = base.clone();
        for k in 1..=bound {
            if acc.domain.len() == 1 {
                return Order::Finite(k);
            }
            acc = acc.compose_raw(&base).canonicalize_owned();
        }
        Order::ExceedsBound
    }

    /// `n=<arity>; dom=[leaf,…]; map=[image,…]`.
    pub fn to_text(&self) -> String {
        let join = |v: &[Address]| {
            v.iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "n={}; dom=[{}]; map=[{}]",
            self.n,
            join(&self.domain),
            join(&self.images)
        )
    }
}

impl fmt::Display for VnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for VnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for VnElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut dom = None;
        let mut map = None;
        for field in s.split(';') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("missing `=` in `{field}`")))?;
            let value = value.trim();
            match key.trim() {
                "n" => {
                    n = Some(
                        value
                            .parse::<u8>()
                            .map_err(|e| Error::Parse(format!("arity: {e}")))?,
                    )
                }
                "dom" => dom = Some(value.to_string()),
                "map" => map = Some(value.to_string()),
                other => return Err(Error::Parse(format!("unknown field `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing n".into()))?;
        let list = |v: Option<String>, name: &str| -> Result<Vec<Address>> {
            let v = v.ok_or_else(|| Error::Parse(format!("missing {name}")))?;
            let inner = v
                .strip_prefix('[')
                .and_then(|v| v.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("{name} must be bracketed")))?;
            inner.split(',').map(|t| Address::parse(n, t)).collect()
        };
        let dom = list(dom, "dom")?;
        let map = list(map, "map")?;
        if dom.len() != map.len() {
            return Err(Error::Parse("dom and map lengths differ".into()));
        }
        VnElement::from_pairs(n, dom.into_iter().zip(map).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Address {
        Address::parse(5, s).unwrap()
    }

    fn swap01(n: u8) -> VnElement {
        let mut perm: Vec<usize> = (0..n as usize).collect();
        perm.swap(0, 1);
        VnElement::sym(n, 1, &perm).unwrap()
    }

    #[test]
    fn identity_expansion_collapses() {
        let id = VnElement::identity(3);
        let e = id.expand(&Address::root()).unwrap();
        assert_eq!(e.leaf_count(), 3);
        assert!(!e.is_canonical());
        let e2 = e.expand(&a("1")).unwrap();
        assert_eq!(e2.canonicalize(), id);
    }

    #[test]
    fn expand_rejects_missing_leaf() {
        let id = VnElement::identity(3);
        assert!(matches!(id.expand(&a("0")), Err(Error::LeafNotPresent(_))));
    }

    #[test]
    fn lifted_permutation_collapses() {
        // b'(ij) = b(i)j collapses to b
        let b = swap01(3);
        let lifted: Vec<usize> = (0..9).map(|x| [1usize, 0, 2][x / 3] * 3 + x % 3).collect();
        let leaves = complete_leaves(3, 2);
        let pairs = leaves
            .iter()
            .zip(&lifted)
            .map(|(l, &p)| (l.clone(), leaves[p].clone()))
            .collect();
        let raw = VnElement::from_pairs(3, pairs).unwrap();
        assert_eq!(raw.canonicalize(), b);
    }

    #[test]
    fn inverse_law() {
        let t = VnElement::transposition(3, &a("000"), &a("21")).unwrap();
        let b = swap01(3);
        let x = t.compose(&b).unwrap();
        assert!(x.compose(&x.invert()).unwrap().is_identity());
        assert!(x.invert().compose(&x).unwrap().is_identity());
    }

    #[test]
    fn swap_is_odd_and_expansion_parity() {
        let s = swap01(3);
        assert_eq!(s.parity(), Parity::Odd);
        assert_eq!(VnElement::identity(3).parity(), Parity::Even);
        assert_eq!(s.expand(&a("0")).unwrap().parity(), Parity::Odd);
        // even arity: expanding changes the representative parity
        let s4 = swap01(4);
        assert_eq!(s4.parity(), Parity::Odd);
        assert_eq!(s4.expand(&Address::new(&[0])).unwrap().parity(), Parity::Even);
        assert!(matches!(s4.class_parity(), Err(Error::EvenArityParity(4))));
    }

    #[test]
    fn transposition_rejects_prefixes() {
        assert!(matches!(
            VnElement::transposition(3, &a("0"), &a("01")),
            Err(Error::PrefixViolation(..))
        ));
        assert!(VnElement::transposition(3, &a("00"), &a("00")).is_err());
    }

    #[test]
    fn transposition_fixes_everything_else() {
        let t = VnElement::transposition(3, &a("000"), &a("21")).unwrap();
        for leaf in t.domain() {
            let img = t.apply(leaf).unwrap();
            if *leaf == a("000") {
                assert_eq!(img, a("21"));
            } else if *leaf == a("21") {
                assert_eq!(img, a("000"));
            } else {
                assert_eq!(&img, leaf);
            }
        }
        assert_eq!(t.order(5), Order::Finite(2));
    }

    #[test]
    fn text_round_trip() {
        let t = VnElement::transposition(3, &a("00"), &a("1")).unwrap();
        let s = t.to_text();
        assert_eq!(s, "n=3; dom=[00,01,02,1,2]; map=[1,01,02,00,2]");
        let back: VnElement = s.parse().unwrap();
        assert!(back.equals(&t).unwrap());
        let id: VnElement = "n=3; dom=[ε]; map=[ε]".parse().unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let x = VnElement::identity(3);
        let y = VnElement::identity(4);
        assert_eq!(x.compose(&y), Err(Error::ArityMismatch(3, 4)));
        assert!(x.equals(&y).is_err());
    }
}
