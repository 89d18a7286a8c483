//! Presentations and structural operations on labeled graphs.

use std::ops::Range;

use serde::Serialize;

use super::graph::{LabeledGraph, Mode, Vertex};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::presentation::{shift, GroupPresentation, Syllable, Word};

/// A presentation of `W_Γ` or `G_Γ` together with the generator range of each vertex.
#[derive(Clone, Debug)]
pub struct BlockPresentation {
    pub presentation: GroupPresentation,
    pub blocks: Vec<Range<usize>>,
}

impl BlockPresentation {
    /// The vertex owning generator `gen`.
    pub fn vertex_of(&self, gen: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&gen))
            .expect("generator belongs to a block")
    }
}

pub fn coxeter_presentation(g: &LabeledGraph) -> Result<GroupPresentation> {
    if g.mode() != Mode::Coxeter {
        return Err(Error::ModeMismatch("coxeter"));
    }
    let names: Vec<String> = g.vertices().iter().map(|v| v.id.clone()).collect();
    let mut rels: Vec<Word> = (0..g.len()).map(|v| Word::power(v, 2)).collect();
    for (u, v, m) in g.edges() {
        let mut letters = Vec::with_capacity(2 * m as usize);
        for _ in 0..m {
            letters.push(u as i32 + 1);
            letters.push(v as i32 + 1);
        }
        rels.push(Word::from_letters(&letters));
    }
    GroupPresentation::new(names, rels)
}

/// The presentation of a single vertex group, with generators named after the vertex.
pub fn vertex_presentation(g: &LabeledGraph, v: usize, cat: &Catalog) -> Result<GroupPresentation> {
    let vx = g.vertex(v);
    if let Some(p) = &vx.presentation {
        return Ok(p.clone());
    }
    let label = g.group_label(v);
    let base = cat.presentation(label)?;
    let names: Vec<String> = if base.rank() == 1 {
        vec![vx.id.clone()]
    } else {
        (1..=base.rank()).map(|i| format!("{}_{i}", vx.id)).collect()
    };
    GroupPresentation::new(names, base.relators.clone())
}

pub fn graph_product_presentation(g: &LabeledGraph, cat: &Catalog) -> Result<GroupPresentation> {
    if g.mode() != Mode::Product {
        return Err(Error::ModeMismatch("product"));
    }
    Ok(product_blocks(g, cat)?.presentation)
}

fn product_blocks(g: &LabeledGraph, cat: &Catalog) -> Result<BlockPresentation> {
    let mut names = Vec::new();
    let mut rels = Vec::new();
    let mut blocks = Vec::with_capacity(g.len());
    for v in 0..g.len() {
        let p = vertex_presentation(g, v, cat)?;
        let off = names.len();
        names.extend(p.generators.iter().cloned());
        rels.extend(p.relators.iter().map(|r| shift(r, off)));
        blocks.push(off..names.len());
    }
    for (u, v, _) in g.edges() {
        for a in blocks[u].clone() {
            for b in blocks[v].clone() {
                rels.push(Word(vec![
                    Syllable { gen: a, exp: 1 },
                    Syllable { gen: b, exp: 1 },
                    Syllable { gen: a, exp: -1 },
                    Syllable { gen: b, exp: -1 },
                ]));
            }
        }
    }
    Ok(BlockPresentation {
        presentation: GroupPresentation::new(names, rels)?,
        blocks,
    })
}

/// The presentation matching the graph's mode, with vertex blocks.
pub fn presentation_blocks(g: &LabeledGraph, cat: &Catalog) -> Result<BlockPresentation> {
    match g.mode() {
        Mode::Coxeter => Ok(BlockPresentation {
            presentation: coxeter_presentation(g)?,
            blocks: (0..g.len()).map(|v| v..v + 1).collect(),
        }),
        Mode::Product => product_blocks(g, cat),
    }
}

pub fn presentation(g: &LabeledGraph, cat: &Catalog) -> Result<GroupPresentation> {
    Ok(presentation_blocks(g, cat)?.presentation)
}

pub fn is_even(g: &LabeledGraph) -> Result<bool> {
    if g.mode() != Mode::Coxeter {
        return Err(Error::ModeMismatch("coxeter"));
    }
    Ok(g.edges().iter().all(|e| e.2 % 2 == 0))
}

pub fn is_right_angled(g: &LabeledGraph) -> Result<bool> {
    if g.mode() != Mode::Coxeter {
        return Err(Error::ModeMismatch("coxeter"));
    }
    Ok(g.edges().iter().all(|e| e.2 == 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "verdict")]
pub enum JoinDecomposition {
    Irreducible,
    Split { left: Vec<usize>, right: Vec<usize> },
}

/// Connected components of the complement of the label-2 subgraph.
///
/// The graph is the join of any union of components with the rest.
pub fn join_components(g: &LabeledGraph) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut stack = vec![s];
        let mut members = vec![s];
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if v != u && comp[v] == usize::MAX && g.label(u, v) != Some(2) {
                    comp[v] = id;
                    stack.push(v);
                    members.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub fn join_decomposition(g: &LabeledGraph) -> JoinDecomposition {
    let comps = join_components(g);
    if comps.len() < 2 {
        return JoinDecomposition::Irreducible;
    }
    let left = comps[0].clone();
    let mut right: Vec<usize> = comps[1..].iter().flatten().copied().collect();
    right.sort_unstable();
    JoinDecomposition::Split { left, right }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmalgamSplit {
    pub star: Vec<usize>,
    pub link: Vec<usize>,
    pub rest: Vec<usize>,
}

/// `G_Γ = G_{st(v)} *_{G_{lk(v)}} G_{V−{v}}`.
pub fn amalgam_split(g: &LabeledGraph, v: usize) -> Result<AmalgamSplit> {
    if v >= g.len() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    if (0..g.len()).all(|w| w == v || g.adjacent(v, w)) {
        return Err(Error::IsClique);
    }
    let link = g.neighbors(v);
    let mut star = link.clone();
    star.push(v);
    star.sort_unstable();
    let rest = (0..g.len()).filter(|&w| w != v).collect();
    Ok(AmalgamSplit { star, link, rest })
}

/// Whether every vertex outside `set` is adjacent to all of `set` or to none of it.
pub fn is_module(g: &LabeledGraph, set: &[usize]) -> bool {
    let n = g.len();
    if set.len() < 2 || set.len() >= n {
        return false;
    }
    (0..n).filter(|v| !set.contains(v)).all(|v| {
        let k = set.iter().filter(|&&u| g.adjacent(u, v)).count();
        k == 0 || k == set.len()
    })
}

/// All modules `Ω` with `2 ≤ |Ω| < |V|`, by exhaustive search over subsets.
pub fn find_modules(g: &LabeledGraph) -> Vec<Vec<usize>> {
    let n = g.len();
    assert!(n < 32, "module search is exhaustive over subsets");
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut out = Vec::new();
    for mask in 1..full {
        if mask.count_ones() < 2 {
            continue;
        }
        let ok = (0..n)
            .filter(|v| mask & (1 << v) == 0)
            .all(|v| {
                let hit = adj[v] & mask;
                hit == 0 || hit == mask
            });
        if ok {
            out.push((0..n).filter(|v| mask & (1 << v) != 0).collect());
        }
    }
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn fresh_id(g: &LabeledGraph, base: &str) -> String {
    let taken = |s: &str| g.vertices().iter().any(|v| v.id == s);
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|s| !taken(s))
        .expect("some id is free")
}

/// Shrinks the module `Ω` to a single vertex `*` carrying `G_Ω`.
///
/// Right-angled Coxeter graphs are first rewritten as graph products of `C2`s.
pub fn collapse(g: &LabeledGraph, module: &[usize], cat: &Catalog) -> Result<LabeledGraph> {
    let mut set = module.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.iter().any(|&v| v >= g.len()) || !is_module(g, &set) {
        return Err(Error::NotAModule);
    }
    let g = g.to_product()?;
    let sub = g.induced(&set);
    let pres = graph_product_presentation(&sub, cat)?;
    let ids: Vec<&str> = set.iter().map(|&v| g.id(v)).collect();
    let star = Vertex {
        id: fresh_id(&g, "*"),
        group: Some(format!("G_{{{}}}", ids.join(","))),
        presentation: Some(pres),
    };
    let anchor = set[0];
    let rep = set[0];
    let mut order: Vec<Option<usize>> = Vec::new();
    for v in 0..g.len() {
        if v == anchor {
            order.push(None);
        } else if !set.contains(&v) {
            order.push(Some(v));
        }
    }
    let vertices: Vec<Vertex> = order
        .iter()
        .map(|o| o.map_or_else(|| star.clone(), |v| g.vertex(v).clone()))
        .collect();
    let labels: Vec<Vec<u32>> = order
        .iter()
        .map(|a| {
            order
                .iter()
                .map(|b| match (a, b) {
                    (Some(x), Some(y)) => g.labels()[*x][*y],
                    (None, Some(y)) | (Some(y), None) => g.labels()[rep][*y],
                    (None, None) => 0,
                })
                .collect()
        })
        .collect();
    Ok(LabeledGraph::from_parts(Mode::Product, vertices, labels))
}

/// Replaces vertex `v` by the graph `h`, joining every vertex of `h` to the neighbours of `v`.
pub fn splice(g: &LabeledGraph, v: usize, h: &LabeledGraph) -> Result<LabeledGraph> {
    if v >= g.len() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    let (g, h) = if g.mode() == h.mode() {
        (g.clone(), h.clone())
    } else {
        (g.to_product()?, h.to_product()?)
    };
    for w in h.vertices() {
        if g.vertices().iter().enumerate().any(|(i, x)| i != v && x.id == w.id) {
            return Err(Error::InvalidGraph(format!("id `{}` occurs in both graphs", w.id)));
        }
    }
    // positions: old vertices with v replaced by the block of h
    #[derive(Clone, Copy)]
    enum Src {
        Old(usize),
        New(usize),
    }
    let mut order = Vec::new();
    for u in 0..g.len() {
        if u == v {
            order.extend((0..h.len()).map(Src::New));
        } else {
            order.push(Src::Old(u));
        }
    }
    let vertices = order
        .iter()
        .map(|s| match *s {
            Src::Old(u) => g.vertex(u).clone(),
            Src::New(k) => h.vertex(k).clone(),
        })
        .collect();
    let labels = order
        .iter()
        .map(|a| {
            order
                .iter()
                .map(|b| match (*a, *b) {
                    (Src::Old(x), Src::Old(y)) => g.labels()[x][y],
                    (Src::New(x), Src::New(y)) => h.labels()[x][y],
                    (Src::Old(x), Src::New(_)) | (Src::New(_), Src::Old(x)) => g.labels()[v][x],
                })
                .collect()
        })
        .collect();
    Ok(LabeledGraph::from_parts(g.mode(), vertices, labels))
}

/// Replaces every vertex whose group is a direct product by a clique of its
/// indecomposable factors; vertices with trivial group disappear.
pub fn split_indecomposable(g: &LabeledGraph, cat: &Catalog) -> Result<LabeledGraph> {
    if g.mode() != Mode::Product {
        return Err(Error::ModeMismatch("product"));
    }
    let mut cur = g.clone();
    loop {
        let mut changed = false;
        let mut v = 0;
        while v < cur.len() {
            let vx = cur.vertex(v).clone();
            if vx.presentation.is_some() {
                v += 1;
                continue;
            }
            let label = cur.group_label(v).to_string();
            let factors = cat.factors(&label)?.to_vec();
            if factors == [label.clone()] {
                v += 1;
                continue;
            }
            let ids: Vec<String> = (1..=factors.len())
                .map(|i| format!("{}_{i}", vx.id))
                .collect();
            let vs = ids
                .iter()
                .zip(&factors)
                .map(|(i, f)| Vertex::with_group(i, f))
                .collect();
            let k = factors.len();
            let edges: Vec<(usize, usize, u32)> = (0..k)
                .flat_map(|a| (a + 1..k).map(move |b| (a, b, 2)))
                .collect();
            let clique = LabeledGraph::new(Mode::Product, vs, &edges)?;
            cur = splice(&cur, v, &clique)?;
            changed = true;
            v += k;
        }
        if !changed {
            return Ok(cur);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitegrp::coset_enumerate;
    use crate::graphprod::graph::graph_isomorphic;

    #[test]
    fn coxeter_presentations() {
        let one = LabeledGraph::racg(1, &[]).unwrap();
        let p = coxeter_presentation(&one).unwrap();
        assert_eq!(coset_enumerate(&p, &[], 100).unwrap().index(), 2);
        let d4 = LabeledGraph::coxeter(&["s", "t"], &[(0, 1, 4)]).unwrap();
        let p = coxeter_presentation(&d4).unwrap();
        assert_eq!(coset_enumerate(&p, &[], 1000).unwrap().index(), 8);
        let dinf = LabeledGraph::racg(2, &[]).unwrap();
        assert!(coset_enumerate(&coxeter_presentation(&dinf).unwrap(), &[], 1000).is_err());
    }

    #[test]
    fn product_presentations() {
        let cat = Catalog::builtin();
        let g = LabeledGraph::product(&["C2", "C3"], &[(0, 1)]).unwrap();
        let p = graph_product_presentation(&g, &cat).unwrap();
        let grp = crate::finitegrp::enumerate_group(&p, 10_000, 1000).unwrap();
        assert_eq!(grp.order(), 6);
        assert!(grp.is_abelian());
        let s3 = LabeledGraph::product(&["S3"], &[]).unwrap();
        let p = graph_product_presentation(&s3, &cat).unwrap();
        assert_eq!(p.generators, vec!["a_1", "a_2"]);
        assert_eq!(coset_enumerate(&p, &[], 1000).unwrap().index(), 6);
        assert!(coxeter_presentation(&s3).is_err());
    }

    #[test]
    fn evenness() {
        let b2 = LabeledGraph::coxeter(&["a", "b", "c"], &[(0, 1, 4), (0, 2, 4), (1, 2, 2)]).unwrap();
        assert!(is_even(&b2).unwrap());
        assert!(!is_right_angled(&b2).unwrap());
        let empty = LabeledGraph::racg(3, &[]).unwrap();
        assert!(is_even(&empty).unwrap() && is_right_angled(&empty).unwrap());
        let a2 = LabeledGraph::coxeter(&["a", "b"], &[(0, 1, 3)]).unwrap();
        assert!(!is_even(&a2).unwrap());
    }

    #[test]
    fn joins() {
        let square = LabeledGraph::racg(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(
            join_decomposition(&square),
            JoinDecomposition::Split {
                left: vec![0, 2],
                right: vec![1, 3]
            }
        );
        let one = LabeledGraph::racg(1, &[]).unwrap();
        assert_eq!(join_decomposition(&one), JoinDecomposition::Irreducible);
        // the complement of a 3-path is an edge plus the middle vertex
        let path = LabeledGraph::racg(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            join_decomposition(&path),
            JoinDecomposition::Split {
                left: vec![0, 2],
                right: vec![1]
            }
        );
        let p4 = LabeledGraph::racg(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(join_decomposition(&p4), JoinDecomposition::Irreducible);
    }

    #[test]
    fn amalgams() {
        let path = LabeledGraph::racg(3, &[(0, 1), (1, 2)]).unwrap();
        let s = amalgam_split(&path, 0).unwrap();
        assert_eq!((s.star, s.link, s.rest), (vec![0, 1], vec![1], vec![1, 2]));
        let tri = LabeledGraph::racg(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(amalgam_split(&tri, 0).unwrap_err(), Error::IsClique);
        let square = LabeledGraph::racg(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        for v in 0..4 {
            let s = amalgam_split(&square, v).unwrap();
            assert_eq!((s.star.len(), s.link.len()), (3, 2));
        }
    }

    #[test]
    fn modules_match_brute_force() {
        let p4 = LabeledGraph::racg(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(find_modules(&p4).is_empty());
        let k4 = LabeledGraph::racg(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(find_modules(&k4).len(), 6 + 4);
    }

    #[test]
    fn collapse_then_splice() {
        let cat = Catalog::builtin();
        // a 4-cycle a,b,c,d joined to e, plus a pendant f on e
        let g = LabeledGraph::racg(
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4), (2, 4), (3, 4), (4, 5)],
        )
        .unwrap();
        let k = vec![0, 1, 2, 3];
        assert!(find_modules(&g).contains(&k));
        let c = collapse(&g, &k, &cat).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.id(0), "*");
        assert!(c.adjacent(0, 1) && !c.adjacent(0, 2));
        let back = splice(&c, 0, &g.induced(&k).to_product().unwrap()).unwrap();
        assert!(graph_isomorphic(&back, &g.to_product().unwrap()));
        assert_eq!(collapse(&g, &[0, 4], &cat).unwrap_err(), Error::NotAModule);
        assert_eq!(collapse(&g, &[0, 1, 2, 3, 4, 5], &cat).unwrap_err(), Error::NotAModule);
    }

    #[test]
    fn splitting_direct_products() {
        let cat = Catalog::builtin();
        let g = LabeledGraph::product(&["C2xC2", "C6", "S3"], &[(0, 2)]).unwrap();
        let s = split_indecomposable(&g, &cat).unwrap();
        let labels: Vec<&str> = (0..s.len()).map(|v| s.group_label(v)).collect();
        assert_eq!(labels, vec!["C2", "C2", "C2", "C3", "S3"]);
        assert!(s.adjacent(0, 1) && s.adjacent(2, 3) && s.adjacent(0, 4) && s.adjacent(1, 4));
        assert!(!s.adjacent(2, 4));
        assert_eq!(split_indecomposable(&s, &cat).unwrap(), s);
        let plain = LabeledGraph::product(&["C2", "S3"], &[]).unwrap();
        assert_eq!(split_indecomposable(&plain, &cat).unwrap(), plain);
    }
}
