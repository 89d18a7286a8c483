//! Finite permutation groups with explicitly stored elements.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use super::perm::Perm;
use crate::error::{Error, Result};

/// Default cap on the number of stored elements.
pub const DEFAULT_ORDER_BOUND: usize = 10_000;

/// Multiplication tables are kept for groups up to this order.
const TABLE_LIMIT: usize = 2048;

/// A finite group given by permutation generators, with every element listed.
///
/// Element `0` is the identity. Elements are numbered in breadth-first order
/// of the Cayley graph with respect to the generators, so numbering is
/// deterministic.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    gen_perms: Vec<Perm>,
    gens: Vec<usize>,
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
    /// `parent[x] * gens[parent_gen[x]] = x` along the BFS tree.
    parent: Vec<u32>,
    parent_gen: Vec<u32>,
    cayley: Vec<u32>,
    table: Option<Vec<u32>>,
    inv: Vec<u32>,
    orders: Vec<u32>,
}

impl FiniteGroup {
    pub fn generate(degree: usize, gens: &[Perm], bound: usize) -> Result<Self> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator {g} has degree {} instead of {degree}",
                    g.degree()
                )));
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        let mut parent = vec![0u32];
        let mut parent_gen = vec![u32::MAX];
        let ng = gens.len();
        let mut cayley: Vec<u32> = Vec::new();
        let mut head = 0;
        while head < elements.len() {
            for (s, g) in gens.iter().enumerate() {
                let y = elements[head].mul(g);
                let idx = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= bound {
                            return Err(Error::OrderBound(bound));
                        }
                        let i = elements.len() as u32;
                        index.insert(y.clone(), i);
                        elements.push(y);
                        parent.push(head as u32);
                        parent_gen.push(s as u32);
                        i
                    }
                };
                cayley.push(idx);
            }
            head += 1;
        }
        let n = elements.len();
        debug_assert_eq!(cayley.len(), n * ng);
        let gen_idx: Vec<usize> = gens.iter().map(|g| index[g] as usize).collect();
        let mut grp = FiniteGroup {
            degree,
            gen_perms: gens.to_vec(),
            gens: gen_idx,
            elements,
            index,
            parent,
            parent_gen,
            cayley,
            table: None,
            inv: Vec::new(),
            orders: Vec::new(),
        };
        if n <= TABLE_LIMIT {
            grp.build_table();
        }
        grp.inv = (0..n)
            .map(|x| grp.index[&grp.elements[x].inverse()])
            .collect();
        grp.orders = (0..n).map(|x| grp.elements[x].order() as u32).collect();
        Ok(grp)
    }

    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> Self {
        Self::generate(degree, &[], 1).expect("trivial group")
    }

    fn build_table(&mut self) {
        let n = self.elements.len();
        let ng = self.gens.len();
        let mut t = vec![0u32; n * n];
        // a * b = (a * parent(b)) * s, filled in BFS order of b
        for a in 0..n {
            t[a * n] = a as u32;
        }
        for b in 1..n {
            let pb = self.parent[b] as usize;
            let s = self.parent_gen[b] as usize;
            for a in 0..n {
                let ap = t[a * n + pb] as usize;
                t[a * n + b] = self.cayley[ap * ng + s];
            }
        }
        self.table = Some(t);
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn generator_perms(&self) -> &[Perm] {
        &self.gen_perms
    }

    pub fn element(&self, x: usize) -> &Perm {
        &self.elements[x]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.index[&self.elements[a].mul(&self.elements[b])] as usize,
        }
    }

    /// `a · s` for the `s`-th generator.
    #[inline]
    pub fn mul_gen(&self, a: usize, s: usize) -> usize {
        self.cayley[a * self.gens.len() + s] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `y⁻¹ x y`.
    #[inline]
    pub fn conj(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(y), x), y)
    }

    pub fn pow(&self, x: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(x) } else { x };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() % self.order_of(x) as u64 {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn order_of(&self, x: usize) -> usize {
        self.orders[x] as usize
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gens;
        g.iter()
            .all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The subgroup generated by `gens`, or `None` if it exceeds `cap` elements.
    pub fn closure(&self, gens: &[usize], cap: usize) -> Option<Subgroup> {
        let n = self.order();
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert(0);
        let mut list = vec![0usize];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !bits.contains(y) {
                    if list.len() >= cap {
                        return None;
                    }
                    bits.insert(y);
                    list.push(y);
                }
            }
        }
        let mut gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        gens.dedup();
        Some(Subgroup {
            order: list.len(),
            bits,
            gens,
        })
    }

    pub fn whole(&self) -> Subgroup {
        self.closure(&self.gens, usize::MAX).unwrap()
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.closure(&[], 1).unwrap()
    }

    /// Conjugacy classes of elements, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![x];
            class_of[x] = id;
            let mut head = 0;
            while head < members.len() {
                let y = members[head];
                head += 1;
                for &s in &self.gens {
                    let z = self.conj(y, s);
                    if class_of[z] == usize::MAX {
                        class_of[z] = id;
                        members.push(z);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// The BFS word for element `x` as generator indices.
    pub fn word_of(&self, mut x: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while x != 0 {
            w.push(self.parent_gen[x] as usize);
            x = self.parent[x] as usize;
        }
        w.reverse();
        w
    }

    /// The subgroup `y⁻¹ H y`.
    pub fn conjugate_subgroup(&self, h: &Subgroup, y: usize) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for x in h.bits.ones() {
            bits.insert(self.conj(x, y));
        }
        Subgroup {
            order: h.order,
            bits,
            gens: h.gens.iter().map(|&g| self.conj(g, y)).collect(),
        }
    }

    /// Is some conjugate `y⁻¹ A y` contained in `B`?
    pub fn conjugate_into(&self, a: &Subgroup, b: &Subgroup) -> Option<usize> {
        if b.order % a.order != 0 {
            return None;
        }
        (0..self.order()).find(|&y| a.gens.iter().all(|&g| b.bits.contains(self.conj(g, y))))
    }

    /// `∃ y: y⁻¹ A y = B`.
    pub fn conjugate_subgroups(&self, a: &Subgroup, b: &Subgroup) -> bool {
        a.order == b.order && self.conjugate_into(a, b).is_some()
    }

    /// The normal closure of a set of elements.
    pub fn normal_closure(&self, elems: &[usize]) -> Subgroup {
        let mut gens: Vec<usize> = elems.iter().copied().filter(|&e| e != 0).collect();
        loop {
            let h = self.closure(&gens, usize::MAX).unwrap();
            let mut extra = None;
            'outer: for &k in &h.gens {
                for &s in &self.gens {
                    let c = self.conj(k, s);
                    if !h.bits.contains(c) {
                        extra = Some(c);
                        break 'outer;
                    }
                }
            }
            match extra {
                Some(c) => gens.push(c),
                None => return h,
            }
        }
    }

    /// The commutator subgroup of a subgroup `h`.
    pub fn derived_subgroup(&self, h: &Subgroup) -> Subgroup {
        // normal closure in h of the generator commutators
        let comms: Vec<usize> = h
            .gens
            .iter()
            .flat_map(|&a| {
                h.gens.iter().map(move |&b| (a, b))
            })
            .map(|(a, b)| self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b)))
            .filter(|&c| c != 0)
            .collect();
        let mut gens = comms;
        loop {
            let k = self.closure(&gens, usize::MAX).unwrap();
            let mut extra = None;
            'outer: for &x in &k.gens {
                for &s in &h.gens {
                    let c = self.conj(x, s);
                    if !k.bits.contains(c) {
                        extra = Some(c);
                        break 'outer;
                    }
                }
            }
            match extra {
                Some(c) => gens.push(c),
                None => return k,
            }
        }
    }

    /// Builds the subgroup as a standalone permutation group.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<FiniteGroup> {
        let gens: Vec<Perm> = h.gens.iter().map(|&g| self.elements[g].clone()).collect();
        FiniteGroup::generate(self.degree, &gens, h.order.max(1))
    }

    /// Direct product acting on the disjoint union of the point sets.
    pub fn direct_product(factors: &[&FiniteGroup], bound: usize) -> Result<FiniteGroup> {
        let degree: usize = factors.iter().map(|f| f.degree()).sum();
        let mut gens = Vec::new();
        let mut off = 0;
        for f in factors {
            for g in f.generator_perms() {
                gens.push(g.shifted(off, degree));
            }
            off += f.degree();
        }
        FiniteGroup::generate(degree, &gens, bound)
    }

    /// Right regular action of the elements on themselves.
    pub fn regular_perm(&self, x: usize) -> Perm {
        let img: Vec<u16> = (0..self.order()).map(|y| self.mul(y, x) as u16).collect();
        Perm::from_images(img).expect("regular action is a permutation")
    }
}

/// A subgroup stored as a bitset over the element numbering of its parent group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    pub bits: FixedBitSet,
    pub order: usize,
    pub gens: Vec<usize>,
}

impl Subgroup {
    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &Subgroup, g: &FiniteGroup) -> Subgroup {
        let elems: Vec<usize> = self.bits.intersection(&other.bits).collect();
        g.closure(&elems, usize::MAX).unwrap()
    }
}

/// Orbit of a point under the group generators, in BFS order.
pub fn orbit(gens: &[Perm], start: usize) -> Vec<usize> {
    let mut seen = vec![start];
    let mut q = VecDeque::from([start]);
    while let Some(x) = q.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if !seen.contains(&y) {
                seen.push(y);
                q.push_back(y);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        let a = Perm::from_cycles(3, "(1,2)").unwrap();
        let b = Perm::from_cycles(3, "(1,2,3)").unwrap();
        FiniteGroup::generate(3, &[a, b], 100).unwrap()
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(FiniteGroup::trivial(4).order(), 1);
        assert_eq!(s3().order(), 6);
        let v4 = FiniteGroup::generate(
            4,
            &[
                Perm::from_cycles(4, "(1,2)").unwrap(),
                Perm::from_cycles(4, "(3,4)").unwrap(),
            ],
            100,
        )
        .unwrap();
        assert_eq!(v4.order(), 4);
        assert!(v4.is_abelian());
        assert!(!s3().is_abelian());
    }

    #[test]
    fn bound_is_enforced() {
        let a = Perm::from_cycles(5, "(1,2,3,4,5)").unwrap();
        let b = Perm::from_cycles(5, "(1,2)").unwrap();
        assert_eq!(
            FiniteGroup::generate(5, &[a, b], 50).unwrap_err(),
            Error::OrderBound(50)
        );
    }

    #[test]
    fn table_matches_perm_product() {
        let g = s3();
        for a in 0..6 {
            for b in 0..6 {
                let p = g.element(a).mul(g.element(b));
                assert_eq!(g.index_of(&p), Some(g.mul(a, b)));
            }
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
        let words: Vec<_> = (0..6).map(|x| g.word_of(x)).collect();
        for (x, w) in words.iter().enumerate() {
            let y = w.iter().fold(0, |acc, &s| g.mul_gen(acc, s));
            assert_eq!(x, y);
        }
    }

    #[test]
    fn classes_and_derived() {
        let g = s3();
        let mut sizes: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(g.derived_subgroup(&g.whole()).order, 3);
    }
}
