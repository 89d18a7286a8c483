//! Retractions `p_X` onto special subgroups.

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::graphprod::{presentation_blocks, LabeledGraph, Mode};
use crate::presentation::Word;

use super::coxeter::CoxeterSolver;
use super::product::ProductSolver;

fn check_subset(g: &LabeledGraph, x: &[usize]) -> Result<()> {
    match x.iter().find(|&&v| v >= g.len()) {
        Some(v) => Err(Error::UnknownVertex(v.to_string())),
        None => Ok(()),
    }
}

/// Edges with exactly one endpoint in `X` and an odd label.
///
/// `p_X` is well defined on `W_Γ` iff there are none: `(vw)^m` with `v ∈ X`,
/// `w ∉ X` maps to `v^m`.
pub fn retraction_obstructions(g: &LabeledGraph, x: &[usize]) -> Vec<(usize, usize, u32)> {
    g.edges()
        .into_iter()
        .filter(|&(u, v, m)| x.contains(&u) != x.contains(&v) && m % 2 == 1)
        .collect()
}

/// Deletes the generators of vertices outside `x`.
pub fn restrict_word(g: &LabeledGraph, x: &[usize], w: &Word, cat: &Catalog) -> Result<Word> {
    check_subset(g, x)?;
    let blocks = presentation_blocks(g, cat)?;
    Ok(Word(
        w.syllables()
            .iter()
            .copied()
            .filter(|s| x.contains(&blocks.vertex_of(s.gen)))
            .collect(),
    )
    .freely_reduced())
}

/// The image of `w` under `p_X`, in normal form.
pub fn retraction(g: &LabeledGraph, x: &[usize], w: &Word, cat: &Catalog) -> Result<Word> {
    check_subset(g, x)?;
    match g.mode() {
        Mode::Coxeter => {
            let bad = retraction_obstructions(g, x);
            if let Some((u, v, m)) = bad.first() {
                return Err(Error::Precondition(format!(
                    "edge {}-{} has odd label {m} across the retraction",
                    g.id(*u),
                    g.id(*v)
                )));
            }
            let r = restrict_word(g, x, w, cat)?;
            CoxeterSolver::new(g)?.normal_form(&r)
        }
        Mode::Product => {
            let r = restrict_word(g, x, w, cat)?;
            Ok(ProductSolver::new(g, cat)?.normal_form(&r))
        }
    }
}

/// Indices of defining relators whose image under `p_X` is nontrivial.
pub fn retraction_failures(g: &LabeledGraph, x: &[usize], cat: &Catalog) -> Result<Vec<usize>> {
    check_subset(g, x)?;
    let p = presentation_blocks(g, cat)?.presentation;
    let mut out = Vec::new();
    for (i, r) in p.relators.iter().enumerate() {
        let img = restrict_word(g, x, r, cat)?;
        let trivial = match g.mode() {
            Mode::Coxeter => CoxeterSolver::new(g)?.is_identity(&img)?,
            Mode::Product => ProductSolver::new(g, cat)?.is_identity(&img),
        };
        if !trivial {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixes_words_in_x_and_kills_the_rest() {
        let cat = Catalog::builtin();
        let g = LabeledGraph::coxeter(&["a", "b", "c"], &[(0, 1, 4), (1, 2, 2)]).unwrap();
        let p = crate::graphprod::coxeter_presentation(&g).unwrap();
        let w = p.parse_word("a b a").unwrap();
        assert_eq!(retraction(&g, &[0, 1], &w, &cat).unwrap(), w);
        assert!(retraction(&g, &[], &w, &cat).unwrap().is_empty());
        assert_eq!(
            retraction(&g, &[0], &w, &cat).unwrap(),
            Word::empty(),
            "a b a ↦ a a = 1"
        );
    }

    #[test]
    fn odd_labels_across_the_cut_break_the_relators() {
        let cat = Catalog::builtin();
        let g = LabeledGraph::coxeter(&["a", "b"], &[(0, 1, 3)]).unwrap();
        assert_eq!(retraction_failures(&g, &[0], &cat).unwrap(), vec![2]);
        assert!(retraction(&g, &[0], &Word::gen(0), &cat).is_err());
        assert!(retraction_failures(&g, &[0, 1], &cat).unwrap().is_empty());
        let even = LabeledGraph::coxeter(&["a", "b", "c"], &[(0, 1, 4), (0, 2, 4), (1, 2, 2)]).unwrap();
        for x in [vec![], vec![0], vec![1, 2], vec![0, 2]] {
            assert!(retraction_failures(&even, &x, &cat).unwrap().is_empty());
        }
    }

    #[test]
    fn product_retraction() {
        let cat = Catalog::builtin();
        let g = LabeledGraph::product(&["S3", "C2"], &[]).unwrap();
        let s = ProductSolver::new(&g, &cat).unwrap();
        let w = s.presentation().parse_word("a_1 b a_2 b").unwrap();
        let r = retraction(&g, &[0], &w, &cat).unwrap();
        assert!(s.equal(&r, &s.presentation().parse_word("a_1 a_2").unwrap()));
        assert!(retraction_failures(&g, &[1], &cat).unwrap().is_empty());
        assert!(retraction(&g, &[7], &w, &cat).is_err());
    }
}
