//! Finite quotients up to a bound, found as images in symmetric groups.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::finitegrp::{check_homomorphism, iso_signature, subgroup_classes, FiniteGroup, IsoSignature, Perm};
use crate::presentation::{GroupPresentation, Word};

/// Search nodes allowed per target subgroup before the run is flagged incomplete.
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

const CLASS_LIMIT: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientEntry {
    pub order: usize,
    pub signature: IsoSignature,
    /// Images of the presentation generators in `S_K`; they generate the quotient.
    pub images: Vec<Perm>,
}

/// The finite quotients of order at most `bound` that act faithfully on `degree` points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub bound: usize,
    pub degree: usize,
    pub complete: bool,
    pub quotients: Vec<QuotientEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<BTreeMap<String, u64>>,
}

impl Fingerprint {
    pub fn signatures(&self) -> BTreeSet<&IsoSignature> {
        self.quotients.iter().map(|q| &q.signature).collect()
    }

    pub fn contains(&self, sig: &IsoSignature) -> bool {
        self.quotients.iter().any(|q| &q.signature == sig)
    }

    /// The fingerprint at a smaller bound and the same degree.
    pub fn truncate(&self, bound: usize) -> Fingerprint {
        Fingerprint {
            bound: bound.min(self.bound),
            degree: self.degree,
            complete: self.complete,
            quotients: self.quotients.iter().filter(|q| q.order <= bound).cloned().collect(),
            counts: None,
        }
    }

    /// Attaches epimorphism counts onto each catalog group of order at most the bound.
    pub fn with_counts(mut self, p: &GroupPresentation, cat: &Catalog, node_budget: u64) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for name in cat.names() {
            let g = cat.group(name)?;
            if g.order() <= self.bound {
                counts.insert(name.to_string(), count_epimorphisms(p, &g, node_budget)?);
            }
        }
        self.counts = Some(counts);
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Comparison {
    Equal,
    /// `witness` is a quotient of the fingerprint numbered `present_in` (1 or 2) only.
    Differ { witness: IsoSignature, present_in: u8 },
}

/// Set comparison of two complete fingerprints with equal parameters.
pub fn compare(f1: &Fingerprint, f2: &Fingerprint) -> Result<Comparison> {
    if f1.bound != f2.bound || f1.degree != f2.degree {
        return Err(Error::Incomparable(format!(
            "(B,K) = ({},{}) vs ({},{})",
            f1.bound, f1.degree, f2.bound, f2.degree
        )));
    }
    if !f1.complete || !f2.complete {
        return Err(Error::Incomparable("fingerprint is incomplete".into()));
    }
    let (s1, s2) = (f1.signatures(), f2.signatures());
    let only1 = s1.difference(&s2).min_by_key(|s| (s.order, *s));
    let only2 = s2.difference(&s1).min_by_key(|s| (s.order, *s));
    Ok(match (only1, only2) {
        (None, None) => Comparison::Equal,
        (Some(a), Some(b)) if (b.order, *b) < (a.order, *a) => Comparison::Differ {
            witness: (*b).clone(),
            present_in: 2,
        },
        (Some(a), _) => Comparison::Differ {
            witness: (*a).clone(),
            present_in: 1,
        },
        (None, Some(b)) => Comparison::Differ {
            witness: (*b).clone(),
            present_in: 2,
        },
    })
}

/// The least bound at which the two fingerprints differ, if they differ at all.
pub fn minimal_separating_bound(f1: &Fingerprint, f2: &Fingerprint) -> Result<Option<usize>> {
    compare(f1, f2)?;
    let (s1, s2) = (f1.signatures(), f2.signatures());
    Ok(s1.symmetric_difference(&s2).map(|s| s.order).min())
}

/// Checks every witness: relators map to the identity and the images generate
/// a group with the recorded signature.
pub fn verify_fingerprint(p: &GroupPresentation, f: &Fingerprint) -> Result<()> {
    for q in &f.quotients {
        check_homomorphism(p, &q.images)?;
        let g = FiniteGroup::generate(f.degree, &q.images, q.order + 1)?;
        if g.order() != q.order || iso_signature(&g)? != q.signature {
            return Err(Error::Precondition(format!(
                "witness for {} generates a different group",
                q.signature.short()
            )));
        }
    }
    Ok(())
}

/// The symmetric group `S_K` with its subgroup classes of order at most `B`, grouped by signature.
pub struct QuotientTargets {
    degree: usize,
    bound: usize,
    targets: Vec<(IsoSignature, Vec<FiniteGroup>)>,
}

impl QuotientTargets {
    pub fn new(degree: usize, bound: usize) -> Result<Self> {
        if degree == 0 || bound == 0 {
            return Err(Error::OutOfRange("B and K must be positive".into()));
        }
        let sym = symmetric_group(degree)?;
        let classes = subgroup_classes(&sym, bound, CLASS_LIMIT)?;
        let groups = classes
            .iter()
            .map(|c| sym.subgroup_as_group(&c.rep))
            .collect::<Result<Vec<_>>>()?;
        let sigs = groups
            .par_iter()
            .map(iso_signature)
            .collect::<Result<Vec<_>>>()?;
        let mut by_sig: BTreeMap<IsoSignature, Vec<FiniteGroup>> = BTreeMap::new();
        for (s, g) in sigs.into_iter().zip(groups) {
            by_sig.entry(s).or_default().push(g);
        }
        Ok(QuotientTargets {
            degree,
            bound,
            targets: by_sig.into_iter().collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number of distinct signatures among subgroups of `S_K` of order at most `B`.
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn fingerprint(&self, p: &GroupPresentation, node_budget: u64) -> Result<Fingerprint> {
        let results: Vec<(Option<QuotientEntry>, bool)> = self
            .targets
            .par_iter()
            .map(|(sig, groups)| {
                let mut incomplete = false;
                for h in groups {
                    let out = EpiSearch::new(p, h, node_budget).run(false);
                    if let Some(img) = out.first {
                        let entry = QuotientEntry {
                            order: h.order(),
                            signature: sig.clone(),
                            images: img.iter().map(|&x| h.element(x).clone()).collect(),
                        };
                        return (Some(entry), false);
                    }
                    incomplete |= out.exhausted;
                }
                (None, incomplete)
            })
            .collect();
        let complete = results.iter().all(|r| !r.1);
        let mut quotients: Vec<QuotientEntry> = results.into_iter().filter_map(|r| r.0).collect();
        quotients.sort_by(|a, b| (a.order, &a.signature).cmp(&(b.order, &b.signature)));
        Ok(Fingerprint {
            bound: self.bound,
            degree: self.degree,
            complete,
            quotients,
            counts: None,
        })
    }
}

pub fn symmetric_group(k: usize) -> Result<FiniteGroup> {
    let gens = if k < 2 {
        Vec::new()
    } else {
        let mut t: Vec<u16> = (0..k as u16).collect();
        t.swap(0, 1);
        let c: Vec<u16> = (0..k as u16).map(|x| (x + 1) % k as u16).collect();
        vec![Perm::from_images(t)?, Perm::from_images(c)?]
    };
    let order: usize = (1..=k).product();
    FiniteGroup::generate(k.max(1), &gens, order)
}

/// `ℱ_{≤B}` restricted to quotients embedding in `S_K`; `jobs = 0` uses every core.
pub fn quotients_up_to(p: &GroupPresentation, bound: usize, degree: usize, jobs: usize) -> Result<Fingerprint> {
    with_jobs(jobs, || QuotientTargets::new(degree, bound)?.fingerprint(p, DEFAULT_NODE_BUDGET))
}

/// Runs `f` on a pool of `jobs` threads (the global pool when `jobs = 0`).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
        .install(f)
}

/// Number of surjective homomorphisms onto `h`.
pub fn count_epimorphisms(p: &GroupPresentation, h: &FiniteGroup, node_budget: u64) -> Result<u64> {
    let out = EpiSearch::new(p, h, node_budget).run(true);
    if out.exhausted {
        return Err(Error::Budget(format!("{node_budget} search nodes")));
    }
    Ok(out.count)
}

struct SearchOutcome {
    first: Option<Vec<usize>>,
    count: u64,
    exhausted: bool,
}

/// Backtracking over generator images, checking each relator once its last generator is set.
struct EpiSearch<'a> {
    h: &'a FiniteGroup,
    cands: Vec<Vec<usize>>,
    /// Conjugacy class representatives for the first generator, with class sizes.
    first: Vec<(usize, u64)>,
    rels_at: Vec<Vec<&'a Word>>,
    budget: u64,
    nodes: u64,
}

impl<'a> EpiSearch<'a> {
    fn new(p: &'a GroupPresentation, h: &'a FiniteGroup, budget: u64) -> Self {
        let rank = p.rank();
        let orders = p.generator_orders();
        let cands: Vec<Vec<usize>> = (0..rank)
            .map(|i| {
                (0..h.order())
                    .filter(|&x| orders[i].map_or(true, |m| m % h.order_of(x) as u64 == 0))
                    .collect()
            })
            .collect();
        let first = if rank == 0 {
            Vec::new()
        } else {
            h.conjugacy_classes()
                .into_iter()
                .filter(|c| cands[0].binary_search(&c[0]).is_ok())
                .map(|c| (c[0], c.len() as u64))
                .collect()
        };
        let mut rels_at: Vec<Vec<&Word>> = vec![Vec::new(); rank];
        for r in &p.relators {
            if let Some(last) = r.syllables().iter().map(|s| s.gen).max() {
                rels_at[last].push(r);
            }
        }
        EpiSearch {
            h,
            cands,
            first,
            rels_at,
            budget,
            nodes: 0,
        }
    }

    fn eval(&self, img: &[usize], w: &Word) -> usize {
        w.syllables()
            .iter()
            .fold(0, |acc, s| self.h.mul(acc, self.h.pow(img[s.gen], s.exp)))
    }

    fn run(mut self, count_all: bool) -> SearchOutcome {
        let mut out = SearchOutcome {
            first: None,
            count: 0,
            exhausted: false,
        };
        let rank = self.cands.len();
        if rank == 0 {
            if self.h.order() == 1 {
                out.first = Some(Vec::new());
                out.count = 1;
            }
            return out;
        }
        let mut img = vec![0usize; rank];
        for (rep, weight) in self.first.clone() {
            img[0] = rep;
            if !self.rels_ok(&img, 0) {
                continue;
            }
            let before = out.count;
            if self.go(1, &mut img, count_all, &mut out) {
                return out;
            }
            out.count = before + (out.count - before) * weight;
        }
        out
    }

    fn rels_ok(&self, img: &[usize], k: usize) -> bool {
        self.rels_at[k].iter().all(|r| self.eval(img, r) == 0)
    }

    /// Returns true to stop the whole search.
    fn go(&mut self, k: usize, img: &mut [usize], count_all: bool, out: &mut SearchOutcome) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            out.exhausted = true;
            return true;
        }
        if k == img.len() {
            if self.h.closure(img, usize::MAX).map(|s| s.order) == Some(self.h.order()) {
                out.count += 1;
                if out.first.is_none() {
                    out.first = Some(img.to_vec());
                }
                return !count_all;
            }
            return false;
        }
        for i in 0..self.cands[k].len() {
            img[k] = self.cands[k][i];
            if self.rels_ok(img, k) && self.go(k + 1, img, count_all, out) {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphprod::{presentation, LabeledGraph};

    fn names(f: &Fingerprint) -> Vec<(usize, String)> {
        f.quotients.iter().map(|q| (q.order, q.signature.short())).collect()
    }

    #[test]
    fn cyclic_of_order_two() {
        let p = GroupPresentation::parse(&["v"], &["v^2"]).unwrap();
        let f = quotients_up_to(&p, 24, 4, 1).unwrap();
        assert!(f.complete);
        assert_eq!(f.quotients.len(), 2, "{:?}", names(&f));
        assert_eq!(f.quotients[0].order, 1);
        assert_eq!(f.quotients[1].order, 2);
        verify_fingerprint(&p, &f).unwrap();
    }

    #[test]
    fn infinite_dihedral_quotients() {
        let cat = Catalog::builtin();
        let p = GroupPresentation::parse(&["a", "b"], &["a^2", "b^2"]).unwrap();
        let f = quotients_up_to(&p, 8, 4, 2).unwrap();
        verify_fingerprint(&p, &f).unwrap();
        for name in ["C2", "C2xC2", "S3", "D4"] {
            assert!(f.contains(&cat.signature(name).unwrap()), "{name} missing");
        }
        assert!(!f.contains(&cat.signature("C4").unwrap()));
        assert!(!f.contains(&cat.signature("Q8").unwrap()));
    }

    #[test]
    fn free_involutions_onto_c2() {
        let cat = Catalog::builtin();
        let c2 = cat.group("C2").unwrap();
        for k in 1..=4 {
            let g = LabeledGraph::racg(k, &[]).unwrap();
            let p = presentation(&g, &cat).unwrap();
            assert_eq!(count_epimorphisms(&p, &c2, 1000).unwrap(), (1 << k) - 1);
        }
        let s3 = cat.group("S3").unwrap();
        let p = GroupPresentation::parse(&["a", "b"], &["a^2", "b^2"]).unwrap();
        // ordered pairs of distinct transpositions
        assert_eq!(count_epimorphisms(&p, &s3, 1000).unwrap(), 6);
    }

    #[test]
    fn comparison() {
        let c2 = GroupPresentation::parse(&["v"], &["v^2"]).unwrap();
        let c3 = GroupPresentation::parse(&["v"], &["v^3"]).unwrap();
        let f2 = quotients_up_to(&c2, 6, 3, 1).unwrap();
        let f3 = quotients_up_to(&c3, 6, 3, 1).unwrap();
        assert_eq!(compare(&f2, &f2).unwrap(), Comparison::Equal);
        match compare(&f2, &f3).unwrap() {
            Comparison::Differ { witness, present_in } => {
                assert_eq!(witness.order, 2);
                assert_eq!(present_in, 1);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(minimal_separating_bound(&f2, &f3).unwrap(), Some(2));
        let g = quotients_up_to(&c2, 5, 3, 1).unwrap();
        assert!(matches!(compare(&f2, &g), Err(Error::Incomparable(_))));
    }

    #[test]
    fn job_count_does_not_change_output() {
        let p = GroupPresentation::parse(&["a", "b", "c"], &["a^2", "b^2", "c^2", "a b a^-1 b^-1"]).unwrap();
        let a = quotients_up_to(&p, 48, 4, 1).unwrap();
        let b = quotients_up_to(&p, 48, 4, 3).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
