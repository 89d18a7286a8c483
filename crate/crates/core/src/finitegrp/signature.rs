//! Isomorphism invariants of finite groups and a brute-force isomorphism test.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::group::{FiniteGroup, Subgroup};
use super::subgroups::subgroup_classes;
use crate::error::Result;

/// Subgroups are counted by order up to this size.
pub const DEFAULT_SUBGROUP_CAP: usize = 16;

/// Groups with equal signatures below this order are compared by brute force.
pub const DEFAULT_ISO_CONFIRM: usize = 128;

/// A tuple of isomorphism invariants. Different signatures imply
/// non-isomorphic groups; equal signatures are only evidence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsoSignature {
    pub order: usize,
    /// Prime-power cyclic factors of the abelianization, ascending.
    pub abelian_invariants: Vec<u64>,
    /// `(element order, count)`.
    pub element_orders: Vec<(usize, usize)>,
    /// `(class size, number of classes)`.
    pub class_sizes: Vec<(usize, usize)>,
    /// `(subgroup order, number of subgroups)` for orders up to the cap.
    pub subgroup_orders: Vec<(usize, usize)>,
    /// Orders along the derived series, ending at the perfect core.
    pub derived_series: Vec<usize>,
}

impl IsoSignature {
    /// A short human-readable label such as `6:[2,3]`.
    pub fn short(&self) -> String {
        let inv: Vec<String> = self
            .abelian_invariants
            .iter()
            .map(|x| x.to_string())
            .collect();
        format!("{}:[{}]", self.order, inv.join(","))
    }
}

fn histogram<I: IntoIterator<Item = usize>>(it: I) -> Vec<(usize, usize)> {
    let mut m = BTreeMap::new();
    for x in it {
        *m.entry(x).or_insert(0usize) += 1;
    }
    m.into_iter().collect()
}

pub fn iso_signature(g: &FiniteGroup) -> Result<IsoSignature> {
    iso_signature_with(g, DEFAULT_SUBGROUP_CAP)
}

pub fn iso_signature_with(g: &FiniteGroup, subgroup_cap: usize) -> Result<IsoSignature> {
    let whole = g.whole();
    let element_orders = histogram((0..g.order()).map(|x| g.order_of(x)));
    let class_sizes = histogram(g.conjugacy_classes().iter().map(|c| c.len()));
    let derived = g.derived_subgroup(&whole);
    let abelian_invariants = abelian_invariants(g, &derived);
    let mut derived_series = vec![g.order()];
    let mut cur = derived;
    loop {
        derived_series.push(cur.order);
        if cur.order == *derived_series.iter().rev().nth(1).unwrap() {
            derived_series.pop();
            break;
        }
        if cur.order == 1 {
            break;
        }
        cur = g.derived_subgroup(&cur);
    }
    let classes = subgroup_classes(g, subgroup_cap.min(g.order()), usize::MAX)?;
    let mut sub: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &classes {
        *sub.entry(c.order()).or_insert(0) += c.size;
    }
    Ok(IsoSignature {
        order: g.order(),
        abelian_invariants,
        element_orders,
        class_sizes,
        subgroup_orders: sub.into_iter().collect(),
        derived_series,
    })
}

/// Invariants of `G / N` for a normal subgroup `N` with abelian quotient.
fn abelian_invariants(g: &FiniteGroup, n: &Subgroup) -> Vec<u64> {
    // label cosets xN
    let size = g.order();
    let mut coset = vec![usize::MAX; size];
    let mut reps = Vec::new();
    let nelems = n.elements();
    for x in 0..size {
        if coset[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &k in &nelems {
            coset[g.mul(x, k)] = id;
        }
    }
    let q = reps.len();
    if q == 1 {
        return Vec::new();
    }
    let qmul = |a: usize, b: usize| coset[g.mul(reps[a], reps[b])];
    let qorder = |a: usize| {
        let mut k = 1;
        let mut x = a;
        while x != coset[0] {
            x = qmul(x, a);
            k += 1;
        }
        k
    };
    let orders: Vec<u64> = (0..q).map(|a| qorder(a) as u64).collect();
    let mut out = Vec::new();
    for p in prime_factors(q as u64) {
        // c_k = log_p #{x : x^{p^k} = 1}
        let mut logs = vec![0u32];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let l = ilog(count, p);
            if l == *logs.last().unwrap() {
                break;
            }
            logs.push(l);
        }
        // d_k = number of cyclic factors of order ≥ p^k
        let d: Vec<u32> = (1..logs.len()).map(|k| logs[k] - logs[k - 1]).collect();
        for k in 0..d.len() {
            let next = d.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(d[k] - next) {
                out.push(p.pow(k as u32 + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

fn ilog(mut x: u64, p: u64) -> u32 {
    let mut l = 0;
    while x > 1 {
        x /= p;
        l += 1;
    }
    l
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Searches for an isomorphism `g → h` by backtracking over generator images.
///
/// Returns the images of a generating set of `g` (as element indices of `h`)
/// together with those generators, or `None` when the groups are not isomorphic.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<(Vec<usize>, Vec<usize>)> {
    if g.order() != h.order() {
        return None;
    }
    let gens = small_generating_set(g);
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            (0..h.order())
                .filter(|&y| h.order_of(y) == g.order_of(x))
                .collect()
        })
        .collect();
    let mut images = Vec::new();
    if backtrack_iso(g, h, &gens, &cands, &mut images) {
        Some((gens, images))
    } else {
        None
    }
}

fn backtrack_iso(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    cands: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> bool {
    let depth = images.len();
    if depth == gens.len() {
        return extend_map(g, h, gens, images, true);
    }
    for &y in &cands[depth] {
        images.push(y);
        if extend_map(g, h, &gens[..=depth], images, false)
            && backtrack_iso(g, h, gens, cands, images)
        {
            return true;
        }
        images.pop();
    }
    false
}

/// Checks that `gens[i] ↦ images[i]` extends to an injective homomorphism on
/// `⟨gens⟩`; with `full`, additionally that it is a bijection onto `h`.
fn extend_map(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], images: &[usize], full: bool) -> bool {
    let mut map = vec![usize::MAX; g.order()];
    let mut used = vec![false; h.order()];
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (i, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            let img = h.mul(map[x], images[i]);
            if map[y] == usize::MAX {
                if used[img] {
                    return false;
                }
                used[img] = true;
                map[y] = img;
                queue.push(y);
            } else if map[y] != img {
                return false;
            }
        }
    }
    !full || queue.len() == h.order()
}

/// A greedy generating set: repeatedly adjoin an element of largest order outside the current subgroup.
pub fn small_generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut by_order: Vec<usize> = (1..g.order()).collect();
    by_order.sort_by_key(|&x| std::cmp::Reverse(g.order_of(x)));
    let mut gens = Vec::new();
    let mut cur = g.trivial_subgroup();
    while cur.order < g.order() {
        let x = *by_order.iter().find(|&&x| !cur.contains(x)).unwrap();
        gens.push(x);
        cur = g.closure(&gens, usize::MAX).unwrap();
    }
    gens
}

/// Isomorphism verdict: `Some(true/false)` when decided, `None` when the
/// signatures agree but the order is at or above the confirmation bound.
pub fn isomorphic(g: &FiniteGroup, h: &FiniteGroup, confirm_below: usize) -> Result<Option<bool>> {
    if iso_signature(g)? != iso_signature(h)? {
        return Ok(Some(false));
    }
    if g.order() >= confirm_below {
        return Ok(None);
    }
    Ok(Some(find_isomorphism(g, h).is_some()))
}

#[cfg(test)]
mod tests {
    use super::super::perm::Perm;
    use super::*;

    fn group(deg: usize, gens: &[&str]) -> FiniteGroup {
        let g: Vec<Perm> = gens
            .iter()
            .map(|c| Perm::from_cycles(deg, c).unwrap())
            .collect();
        FiniteGroup::generate(deg, &g, 10_000).unwrap()
    }

    #[test]
    fn cyclic_versus_klein() {
        let c4 = group(4, &["(1,2,3,4)"]);
        let v4 = group(4, &["(1,2)", "(3,4)"]);
        let (a, b) = (iso_signature(&c4).unwrap(), iso_signature(&v4).unwrap());
        assert_ne!(a, b);
        assert_eq!(a.abelian_invariants, vec![4]);
        assert_eq!(b.abelian_invariants, vec![2, 2]);
    }

    #[test]
    fn d4_versus_q8() {
        let d4 = group(4, &["(1,2,3,4)", "(1,3)"]);
        let q8 = group(
            8,
            &["(1,2,4,7)(3,6,8,5)", "(1,3,4,8)(2,5,7,6)"],
        );
        assert_eq!(q8.order(), 8);
        let (a, b) = (iso_signature(&d4).unwrap(), iso_signature(&q8).unwrap());
        assert_ne!(a.element_orders, b.element_orders);
        assert_eq!(b.element_orders, vec![(1, 1), (2, 1), (4, 6)]);
    }

    #[test]
    fn s3_versus_c6() {
        let s3 = group(3, &["(1,2)", "(1,2,3)"]);
        let c6 = group(5, &["(1,2)(3,4,5)"]);
        let (a, b) = (iso_signature(&s3).unwrap(), iso_signature(&c6).unwrap());
        assert_eq!(a.abelian_invariants, vec![2]);
        assert_eq!(b.abelian_invariants, vec![2, 3]);
        assert_eq!(a.derived_series, vec![6, 3, 1]);
    }

    #[test]
    fn brute_force_finds_isomorphism() {
        let s3a = group(3, &["(1,2)", "(1,2,3)"]);
        let s3b = group(6, &["(1,2)(3,6)(4,5)", "(1,3,5)(2,4,6)"]);
        assert_eq!(isomorphic(&s3a, &s3b, 128).unwrap(), Some(true));
        let c6 = group(5, &["(1,2)(3,4,5)"]);
        assert_eq!(isomorphic(&s3a, &c6, 128).unwrap(), Some(false));
    }
}
