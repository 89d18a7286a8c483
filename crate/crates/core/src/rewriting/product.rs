//! Normal forms in graph products of finite groups.

use std::sync::Arc;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::finitegrp::FiniteGroup;
use crate::graphprod::{presentation_blocks, BlockPresentation, LabeledGraph};
use crate::presentation::{GroupPresentation, Syllable, Word};

/// A syllable: a vertex and a non-identity element of its group.
pub type GSyllable = (usize, usize);

/// Reduces words in `G_Γ` to a canonical syllable sequence.
///
/// Syllables are appended one at a time; a new syllable merges with the
/// nearest earlier syllable of the same vertex when everything in between
/// commutes with it. The reduced sequence is unique up to swapping adjacent
/// commuting syllables, and the output picks the linear extension that is
/// least in vertex order.
pub struct ProductSolver {
    graph: LabeledGraph,
    blocks: BlockPresentation,
    groups: Vec<Arc<FiniteGroup>>,
    /// `(vertex, element)` for each presentation generator.
    gen_elem: Vec<GSyllable>,
}

impl ProductSolver {
    pub fn new(g: &LabeledGraph, cat: &Catalog) -> Result<Self> {
        let graph = g.to_product()?;
        let blocks = presentation_blocks(&graph, cat)?;
        let mut groups = Vec::with_capacity(graph.len());
        let mut gen_elem = Vec::new();
        for v in 0..graph.len() {
            if graph.vertex(v).presentation.is_some() {
                return Err(Error::UnknownGroup(graph.group_label(v).to_string()));
            }
            let grp = cat.group(graph.group_label(v))?;
            for &x in grp.generators() {
                gen_elem.push((v, x));
            }
            groups.push(grp);
        }
        debug_assert_eq!(gen_elem.len(), blocks.presentation.rank());
        Ok(ProductSolver {
            graph,
            blocks,
            groups,
            gen_elem,
        })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.blocks.presentation
    }

    pub fn blocks(&self) -> &BlockPresentation {
        &self.blocks
    }

    pub fn vertex_group(&self, v: usize) -> &FiniteGroup {
        &self.groups[v]
    }

    fn commute(&self, u: usize, v: usize) -> bool {
        u != v && self.graph.adjacent(u, v)
    }

    /// Appends a syllable to a reduced sequence, keeping it reduced.
    pub fn push(&self, seq: &mut Vec<GSyllable>, (v, x): GSyllable) {
        if x == 0 {
            return;
        }
        for i in (0..seq.len()).rev() {
            let (u, y) = seq[i];
            if u == v {
                let z = self.groups[v].mul(y, x);
                if z == 0 {
                    seq.remove(i);
                } else {
                    seq[i].1 = z;
                }
                return;
            }
            if !self.commute(u, v) {
                break;
            }
        }
        seq.push((v, x));
    }

    /// A reduced syllable sequence for `w`.
    pub fn reduced_syllables(&self, w: &Word) -> Vec<GSyllable> {
        let mut seq = Vec::new();
        for s in w.syllables() {
            let (v, x) = self.gen_elem[s.gen];
            let y = self.groups[v].pow(x, s.exp);
            self.push(&mut seq, (v, y));
        }
        seq
    }

    /// The canonical ordering of a reduced sequence.
    pub fn canonical_order(&self, seq: &[GSyllable]) -> Vec<GSyllable> {
        let n = seq.len();
        // preds[j]: earlier syllables that must stay before j
        let mut blockers = vec![0usize; n];
        for j in 0..n {
            blockers[j] = (0..j).filter(|&i| !self.commute(seq[i].0, seq[j].0)).count();
        }
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let k = (0..n)
                .filter(|&j| !placed[j] && blockers[j] == 0)
                .min_by_key(|&j| (seq[j].0, j))
                .expect("dependency order is acyclic");
            placed[k] = true;
            out.push(seq[k]);
            for j in k + 1..n {
                if !placed[j] && !self.commute(seq[k].0, seq[j].0) {
                    blockers[j] -= 1;
                }
            }
        }
        out
    }

    pub fn normal_syllables(&self, w: &Word) -> Vec<GSyllable> {
        self.canonical_order(&self.reduced_syllables(w))
    }

    /// Spells a syllable sequence with the breadth-first word of each element.
    pub fn spell(&self, seq: &[GSyllable]) -> Word {
        let mut syl = Vec::new();
        for &(v, x) in seq {
            let start = self.blocks.blocks[v].start;
            for k in self.groups[v].word_of(x) {
                syl.push(Syllable {
                    gen: start + k,
                    exp: 1,
                });
            }
        }
        Word(syl).freely_reduced()
    }

    pub fn normal_form(&self, w: &Word) -> Word {
        self.spell(&self.normal_syllables(w))
    }

    pub fn equal(&self, w1: &Word, w2: &Word) -> bool {
        self.normal_syllables(w1) == self.normal_syllables(w2)
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        self.reduced_syllables(w).is_empty()
    }

    /// The vertices occurring in the reduced form.
    pub fn support(&self, w: &Word) -> Vec<usize> {
        let mut s: Vec<usize> = self.reduced_syllables(w).iter().map(|x| x.0).collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// The normal form of `w` in the graph product `g`.
pub fn product_normal_form(g: &LabeledGraph, cat: &Catalog, w: &Word) -> Result<Word> {
    Ok(ProductSolver::new(g, cat)?.normal_form(w))
}
