//! Separating non-conjugate finite subgroups in a finite quotient via retractions.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::finitegrp::{enumerate_group, evaluate, FiniteGroup, Perm, Subgroup, DEFAULT_ORDER_BOUND, DEFAULT_ROW_BUDGET};
use crate::graphprod::{coxeter_presentation, is_even, is_right_angled, presentation_blocks, BlockPresentation, LabeledGraph, Mode};
use crate::presentation::{GroupPresentation, Word};
use crate::rewriting::{CoxeterSolver, ProductSolver};

pub const DEFAULT_CONJUGATOR_LENGTH: usize = 8;

const NODE_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationCase {
    /// `J ⊆ I`: the retraction fixes both subgroups.
    Contained,
    /// `J ⊄ I`: the image of the smaller side lands in `G_{I∩J}`.
    NotContained,
    /// Neither case applied with the conjugators found; another retraction separated.
    Fallback,
}

/// A retraction `p_I` onto a finite special subgroup whose images of `A` and `B` are not conjugate.
#[derive(Clone, Debug, Serialize)]
pub struct Separation {
    pub retraction: Vec<String>,
    pub quotient_order: usize,
    pub case: SeparationCase,
    /// True when `B` had the larger support and the roles were exchanged.
    pub swapped: bool,
    pub conjugator_a: String,
    pub conjugator_b: String,
    pub support_a: Vec<String>,
    pub support_b: Vec<String>,
    /// Image of every presentation generator in the quotient.
    pub generator_images: Vec<Perm>,
    pub images_a: Vec<Perm>,
    pub images_b: Vec<Perm>,
}

enum Solver {
    Product(ProductSolver),
    Coxeter(CoxeterSolver),
}

struct Context<'a> {
    graph: LabeledGraph,
    blocks: BlockPresentation,
    solver: Solver,
    cat: &'a Catalog,
    finite: HashMap<Vec<usize>, bool>,
}

impl<'a> Context<'a> {
    fn new(g: &LabeledGraph, cat: &'a Catalog) -> Result<Self> {
        let solver = match g.mode() {
            Mode::Product => Solver::Product(ProductSolver::new(g, cat)?),
            Mode::Coxeter if is_right_angled(g)? => Solver::Product(ProductSolver::new(g, cat)?),
            Mode::Coxeter if is_even(g)? => Solver::Coxeter(CoxeterSolver::new(g)?),
            Mode::Coxeter => {
                return Err(Error::Precondition(
                    "Coxeter graph has odd labels; retractions are not defined".into(),
                ))
            }
        };
        Ok(Context {
            graph: g.clone(),
            blocks: presentation_blocks(g, cat)?,
            solver,
            cat,
            finite: HashMap::new(),
        })
    }

    fn presentation(&self) -> &GroupPresentation {
        &self.blocks.presentation
    }

    fn normal_form(&self, w: &Word) -> Result<Word> {
        match &self.solver {
            Solver::Product(s) => Ok(s.normal_form(w)),
            Solver::Coxeter(s) => s.normal_form(w),
        }
    }

    fn support(&self, w: &Word) -> Result<Vec<usize>> {
        match &self.solver {
            Solver::Product(s) => Ok(s.support(w)),
            Solver::Coxeter(s) => {
                let mut l: Vec<usize> = s.reduce(&s.letters(w))?.into_iter().map(|x| x as usize).collect();
                l.sort_unstable();
                l.dedup();
                Ok(l)
            }
        }
    }

    /// `G_I` is finite: a clique, and for Coxeter labels a spherical one.
    fn is_finite_type(&mut self, set: &[usize]) -> bool {
        if !self.graph.is_clique(set) {
            return false;
        }
        if matches!(self.solver, Solver::Product(_)) {
            return true;
        }
        if let Some(&f) = self.finite.get(set) {
            return f;
        }
        let f = self.special_group(set).is_ok();
        self.finite.insert(set.to_vec(), f);
        f
    }

    /// `G_I` as a permutation group, with the image of every presentation generator under `p_I`.
    fn special_group(&self, set: &[usize]) -> Result<(FiniteGroup, Vec<Perm>)> {
        let rank = self.presentation().rank();
        let (degree, local): (usize, Vec<(usize, Perm)>) = match &self.solver {
            Solver::Product(_) => {
                let g = self.graph.to_product()?;
                let groups = set
                    .iter()
                    .map(|&v| self.cat.group(g.group_label(v)))
                    .collect::<Result<Vec<_>>>()?;
                let degree: usize = groups.iter().map(|x| x.degree()).sum();
                let mut local = Vec::new();
                let mut off = 0;
                for (&v, grp) in set.iter().zip(&groups) {
                    let start = self.blocks.blocks[v].start;
                    for (k, p) in grp.generator_perms().iter().enumerate() {
                        local.push((start + k, p.shifted(off, degree)));
                    }
                    off += grp.degree();
                }
                (degree, local)
            }
            Solver::Coxeter(_) => {
                let sub = self.graph.induced(set);
                let w = enumerate_group(&coxeter_presentation(&sub)?, DEFAULT_ROW_BUDGET, DEFAULT_ORDER_BOUND)?;
                let local = set
                    .iter()
                    .zip(w.generator_perms())
                    .map(|(&v, p)| (v, p.clone()))
                    .collect();
                (w.degree(), local)
            }
        };
        let mut images = vec![Perm::identity(degree.max(1)); rank];
        for (gen, p) in local {
            images[gen] = p;
        }
        let gens: Vec<Perm> = set
            .iter()
            .flat_map(|&v| self.blocks.blocks[v].clone())
            .map(|gen| images[gen].clone())
            .collect();
        let group = FiniteGroup::generate(degree.max(1), &gens, DEFAULT_ORDER_BOUND)?;
        Ok((group, images))
    }

    /// A conjugator `c` minimizing the support of `c A c⁻¹` among finite-type supports.
    fn conjugate_into_clique(&mut self, a: &[Word], max_len: usize) -> Result<(Word, Vec<usize>)> {
        let p = self.presentation().clone();
        let orders = p.generator_orders();
        let mut steps = Vec::new();
        for (i, o) in orders.iter().enumerate() {
            steps.push(Word::gen(i));
            if *o != Some(2) {
                steps.push(Word::power(i, -1));
            }
        }
        let mut seen: HashSet<Word> = HashSet::new();
        let mut layer = vec![Word::empty()];
        seen.insert(Word::empty());
        let mut best: Option<(usize, Word, Vec<usize>)> = None;
        for len in 0..=max_len {
            for c in &layer {
                let mut support: Vec<usize> = Vec::new();
                for w in a {
                    support.extend(self.support(&c.concat(w).concat(&c.inverse()))?);
                }
                support.sort_unstable();
                support.dedup();
                if best.as_ref().map_or(true, |b| support.len() < b.0) && self.is_finite_type(&support) {
                    best = Some((support.len(), c.clone(), support));
                }
            }
            if best.as_ref().is_some_and(|b| b.0 == 0) || len == max_len || seen.len() > NODE_CAP {
                break;
            }
            let mut next = Vec::new();
            for c in &layer {
                for s in &steps {
                    let d = self.normal_form(&c.concat(s))?;
                    if seen.insert(d.clone()) {
                        next.push(d);
                    }
                }
            }
            layer = next;
        }
        best.map(|b| (b.1, b.2)).ok_or_else(|| {
            Error::SearchExhausted(format!(
                "no conjugate of length ≤ {max_len} lies in a finite special subgroup"
            ))
        })
    }

    fn ids(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&v| self.graph.id(v).to_string()).collect()
    }
}

fn image_subgroup(g: &FiniteGroup, images: &[Perm], degree: usize, words: &[Word]) -> (Subgroup, Vec<Perm>) {
    let perms: Vec<Perm> = words.iter().map(|w| evaluate(w, images, degree)).collect();
    let idx: Vec<usize> = perms
        .iter()
        .map(|p| g.index_of(p).expect("retraction lands in G_I"))
        .collect();
    (g.closure(&idx, usize::MAX).expect("uncapped"), perms)
}

/// Finds a finite quotient in which `⟨A⟩` and `⟨B⟩` have non-conjugate images.
///
/// Each subgroup is conjugated into a finite special subgroup of least support
/// (`I` for `A`, `J` for `B`, exchanged so that `|J| ≤ |I|`) and the retraction
/// `p_I` onto the finite group `G_I` is applied.
pub fn separating_quotient(
    g: &LabeledGraph,
    a: &[Word],
    b: &[Word],
    cat: &Catalog,
    max_len: usize,
) -> Result<Separation> {
    let mut ctx = Context::new(g, cat)?;
    let (ca, ia) = ctx.conjugate_into_clique(a, max_len)?;
    let (cb, ib) = ctx.conjugate_into_clique(b, max_len)?;
    let swapped = ib.len() > ia.len();
    let (i, j) = if swapped { (&ib, &ia) } else { (&ia, &ib) };
    let contained = j.iter().all(|v| i.contains(v));
    let mut cliques: Vec<Vec<usize>> = ctx.graph.cliques().into_iter().filter(|c| !c.is_empty()).collect();
    cliques.retain(|c| ctx.is_finite_type(c));
    cliques.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let ctx = &ctx;
    let show = |w: &Word| ctx.presentation().show(w);
    let try_target = |set: &[usize]| -> Result<Option<(FiniteGroup, Vec<Perm>, Vec<Perm>, Vec<Perm>)>> {
        let (gi, images) = ctx.special_group(set)?;
        let deg = gi.degree();
        let (sa, pa) = image_subgroup(&gi, &images, deg, a);
        let (sb, pb) = image_subgroup(&gi, &images, deg, b);
        if gi.conjugate_subgroups(&sa, &sb) {
            Ok(None)
        } else {
            Ok(Some((gi, images, pa, pb)))
        }
    };
    let build = |set: &[usize], case, (gi, images, pa, pb): (FiniteGroup, Vec<Perm>, Vec<Perm>, Vec<Perm>)| Separation {
        retraction: ctx.ids(set),
        quotient_order: gi.order(),
        case,
        swapped,
        conjugator_a: show(&ca),
        conjugator_b: show(&cb),
        support_a: ctx.ids(&ia),
        support_b: ctx.ids(&ib),
        generator_images: images,
        images_a: pa,
        images_b: pb,
    };
    if let Some(found) = try_target(i)? {
        let case = if contained {
            SeparationCase::Contained
        } else {
            SeparationCase::NotContained
        };
        return Ok(build(i, case, found));
    }
    if contained {
        return Err(Error::Precondition(
            "the subgroups are conjugate: both conjugate into G_I where their images are conjugate".into(),
        ));
    }
    for c in cliques {
        if let Some(found) = try_target(&c)? {
            return Ok(build(&c, SeparationCase::Fallback, found));
        }
    }
    Err(Error::SearchExhausted("no retraction onto a finite special subgroup separates".into()))
}
