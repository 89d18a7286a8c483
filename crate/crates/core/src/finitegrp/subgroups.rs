//! Subgroups up to conjugacy and the containment-up-to-conjugacy order.

use std::collections::HashMap;
use std::sync::Mutex;

use fixedbitset::FixedBitSet;

use super::group::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// The conjugate with the lexicographically smallest element set.
    pub rep: Subgroup,
    /// Number of conjugates.
    pub size: usize,
}

impl SubgroupClass {
    pub fn order(&self) -> usize {
        self.rep.order
    }
}

/// Conjugacy classes of subgroups of order at most `max_order`, sorted by
/// order and then by representative.
///
/// Every subgroup is reached from a class representative by adjoining one
/// cyclic subgroup at a time; since a subgroup chain below a subgroup of order
/// at most `max_order` stays within that bound, pruning by order is exact.
/// `class_limit` caps the number of classes (a budget error is returned past it).
pub fn subgroup_classes(
    g: &FiniteGroup,
    max_order: usize,
    class_limit: usize,
) -> Result<Vec<SubgroupClass>> {
    let n = g.order();
    let abelian = g.is_abelian();

    // cyclic subgroups, one generator each
    let mut cyclic: Vec<Subgroup> = Vec::new();
    let mut seen_cyclic: HashMap<FixedBitSet, ()> = HashMap::new();
    for x in 1..n {
        if g.order_of(x) > max_order {
            continue;
        }
        let c = g.closure(&[x], usize::MAX).unwrap();
        if seen_cyclic.insert(c.bits.clone(), ()).is_none() {
            cyclic.push(c);
        }
    }

    let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut classes: Vec<SubgroupClass> = Vec::new();
    let mut register = |k: Subgroup, classes: &mut Vec<SubgroupClass>| -> Result<()> {
        if seen.contains_key(&k.bits) {
            return Ok(());
        }
        if classes.len() >= class_limit {
            return Err(Error::Budget(format!(
                "more than {class_limit} subgroup classes"
            )));
        }
        let id = classes.len();
        let mut best = k.clone();
        let mut size = 1;
        seen.insert(k.bits.clone(), id);
        if !abelian {
            for y in 1..n {
                let c = g.conjugate_subgroup(&k, y);
                if seen.contains_key(&c.bits) {
                    continue;
                }
                size += 1;
                if bit_key_less(&c.bits, &best.bits) {
                    best = c.clone();
                }
                seen.insert(c.bits, id);
            }
        }
        classes.push(SubgroupClass { rep: best, size });
        Ok(())
    };

    register(g.trivial_subgroup(), &mut classes)?;
    let mut head = 0;
    while head < classes.len() {
        let h = classes[head].rep.clone();
        head += 1;
        for c in &cyclic {
            let x = c.gens[0];
            if h.contains(x) {
                continue;
            }
            let mut gens = h.gens.clone();
            gens.push(x);
            if let Some(k) = g.closure(&gens, max_order) {
                register(k, &mut classes)?;
            }
        }
    }

    classes.sort_by(|a, b| {
        a.rep
            .order
            .cmp(&b.rep.order)
            .then_with(|| bit_key_cmp(&a.rep.bits, &b.rep.bits))
    });
    Ok(classes)
}

fn bit_key_cmp(a: &FixedBitSet, b: &FixedBitSet) -> std::cmp::Ordering {
    a.ones().cmp(b.ones())
}

fn bit_key_less(a: &FixedBitSet, b: &FixedBitSet) -> bool {
    bit_key_cmp(a, b) == std::cmp::Ordering::Less
}

/// Conjugacy classes of subgroups with `[A] ≤ [B]` iff some conjugate of `A` lies in `B`.
///
/// The relation is computed on demand and memoized.
pub struct ClassPoset<'g> {
    group: &'g FiniteGroup,
    classes: Vec<SubgroupClass>,
    memo: Mutex<HashMap<(usize, usize), bool>>,
}

impl<'g> ClassPoset<'g> {
    pub fn new(group: &'g FiniteGroup, classes: Vec<SubgroupClass>) -> Self {
        ClassPoset {
            group,
            classes,
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// All classes of the group.
    pub fn build(group: &'g FiniteGroup, class_limit: usize) -> Result<Self> {
        let classes = subgroup_classes(group, group.order(), class_limit)?;
        Ok(Self::new(group, classes))
    }

    pub fn group(&self) -> &FiniteGroup {
        self.group
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &SubgroupClass {
        &self.classes[i]
    }

    /// The class containing a given subgroup.
    pub fn class_of(&self, h: &Subgroup) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| self.group.conjugate_subgroups(&c.rep, h))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let (oa, ob) = (self.classes[a].order(), self.classes[b].order());
        if ob % oa != 0 || oa == ob {
            return false;
        }
        if let Some(&v) = self.memo.lock().unwrap().get(&(a, b)) {
            return v;
        }
        let v = self
            .group
            .conjugate_into(&self.classes[a].rep, &self.classes[b].rep)
            .is_some();
        self.memo.lock().unwrap().insert((a, b), v);
        v
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len())
            .filter(|&x| self.leq(x, a) && self.leq(x, b))
            .collect();
        let top = lower.iter().map(|&x| self.classes[x].order()).max()?;
        let cands: Vec<usize> = lower
            .iter()
            .copied()
            .filter(|&x| self.classes[x].order() == top)
            .collect();
        match cands.as_slice() {
            [m] if lower.iter().all(|&x| self.leq(x, *m)) => Some(*m),
            _ => None,
        }
    }

    /// Least upper bound, if it exists.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.len())
            .filter(|&x| self.leq(a, x) && self.leq(b, x))
            .collect();
        let bottom = upper.iter().map(|&x| self.classes[x].order()).min()?;
        let cands: Vec<usize> = upper
            .iter()
            .copied()
            .filter(|&x| self.classes[x].order() == bottom)
            .collect();
        match cands.as_slice() {
            [m] if upper.iter().all(|&x| self.leq(*m, x)) => Some(*m),
            _ => None,
        }
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for b in 0..n {
            let below: Vec<usize> = (0..n).filter(|&a| a != b && self.leq(a, b)).collect();
            for &a in &below {
                if !below.iter().any(|&c| c != a && self.leq(a, c)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
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
    fn small_class_counts() {
        let c2 = group(2, &["(1,2)"]);
        assert_eq!(subgroup_classes(&c2, 2, 100).unwrap().len(), 2);
        let s3 = group(3, &["(1,2)", "(1,2,3)"]);
        let orders: Vec<usize> = subgroup_classes(&s3, 6, 100)
            .unwrap()
            .iter()
            .map(|c| c.order())
            .collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        let d4 = group(4, &["(1,2,3,4)", "(1,3)"]);
        assert_eq!(subgroup_classes(&d4, 8, 100).unwrap().len(), 8);
        let s4 = group(4, &["(1,2)", "(1,2,3,4)"]);
        assert_eq!(subgroup_classes(&s4, 24, 100).unwrap().len(), 11);
    }

    #[test]
    fn order_cap_prunes() {
        let s4 = group(4, &["(1,2)", "(1,2,3,4)"]);
        let small = subgroup_classes(&s4, 4, 100).unwrap();
        assert!(small.iter().all(|c| c.order() <= 4));
        // 1, C2 (two classes), C3, C4, V4 (two classes)
        assert_eq!(small.len(), 7);
    }

    #[test]
    fn reflection_classes_in_d4() {
        let d4 = group(4, &["(1,2,3,4)", "(1,3)"]);
        let p = ClassPoset::build(&d4, 100).unwrap();
        let c2: Vec<usize> = (0..p.len()).filter(|&i| p.class(i).order() == 2).collect();
        assert_eq!(c2.len(), 3);
        for (i, &a) in c2.iter().enumerate() {
            for &b in &c2[i + 1..] {
                assert!(!d4.conjugate_subgroups(&p.class(a).rep, &p.class(b).rep));
            }
        }
    }

    #[test]
    fn meet_and_join_in_v4() {
        let v4 = group(4, &["(1,2)", "(3,4)"]);
        let p = ClassPoset::build(&v4, 100).unwrap();
        let a = p.class_of(&v4.closure(&[1], 4).unwrap()).unwrap();
        let b = p.class_of(&v4.closure(&[2], 4).unwrap()).unwrap();
        assert_eq!(p.meet(a, b), Some(0));
        assert_eq!(p.join(a, b), Some(p.len() - 1));
        assert_eq!(p.meet(a, a), Some(a));
    }
}
