//! Schreier generators for kernels of maps onto finite permutation groups.

use std::collections::HashMap;

use super::coset::coset_enumerate;
use super::group::FiniteGroup;
use super::perm::Perm;
use crate::error::{Error, Result};
use crate::presentation::{GroupPresentation, Word};

/// Evaluates a word under generator images.
pub fn evaluate(w: &Word, images: &[Perm], degree: usize) -> Perm {
    let mut acc = Perm::identity(degree);
    for s in w.syllables() {
        acc = acc.mul(&images[s.gen].pow(s.exp));
    }
    acc
}

/// Checks that every relator of `p` maps to the identity.
pub fn check_homomorphism(p: &GroupPresentation, images: &[Perm]) -> Result<()> {
    if images.len() != p.rank() {
        return Err(Error::Precondition(format!(
            "{} images for {} generators",
            images.len(),
            p.rank()
        )));
    }
    let degree = images.first().map_or(0, |x| x.degree());
    if images.iter().any(|x| x.degree() != degree) {
        return Err(Error::Precondition("images of different degrees".into()));
    }
    for (i, r) in p.relators.iter().enumerate() {
        if !evaluate(r, images, degree).is_identity() {
            return Err(Error::NotAHomomorphism(i));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct KernelData {
    /// The image group.
    pub image: FiniteGroup,
    /// Transversal words, indexed by image element.
    pub transversal: Vec<Word>,
    /// Nontrivial Schreier generators, reduced and deduplicated up to inversion.
    pub generators: Vec<Word>,
}

/// Reidemeister–Schreier generators of the kernel of `gen_i ↦ images[i]`.
///
/// The transversal is a breadth-first spanning tree of the Cayley graph of
/// the image with respect to positive generators.
pub fn kernel_generators(
    p: &GroupPresentation,
    images: &[Perm],
    order_bound: usize,
) -> Result<KernelData> {
    check_homomorphism(p, images)?;
    let degree = images.first().map_or(0, |x| x.degree());
    let image = FiniteGroup::generate(degree, images, order_bound)?;
    let n = image.order();
    let gen_idx: Vec<usize> = images
        .iter()
        .map(|x| image.index_of(x).expect("generator lies in its closure"))
        .collect();

    let mut transversal: Vec<Option<Word>> = vec![None; n];
    transversal[0] = Some(Word::empty());
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (s, &gs) in gen_idx.iter().enumerate() {
            let y = image.mul(x, gs);
            if transversal[y].is_none() {
                transversal[y] = Some(transversal[x].as_ref().unwrap().concat(&Word::gen(s)));
                queue.push(y);
            }
        }
    }
    let transversal: Vec<Word> = transversal.into_iter().map(|w| w.unwrap()).collect();

    let orders = p.generator_orders();
    let mut gens: Vec<Word> = Vec::new();
    let mut seen: HashMap<Word, ()> = HashMap::new();
    for &x in &queue {
        for (s, &gs) in gen_idx.iter().enumerate() {
            let y = image.mul(x, gs);
            let w = transversal[x]
                .concat(&Word::gen(s))
                .concat(&transversal[y].inverse())
                .reduced_with(&orders);
            if w.is_empty() {
                continue;
            }
            let wi = w.inverse().reduced_with(&orders);
            let key = if wi.shortlex_cmp(&w).is_lt() { wi } else { w };
            if seen.insert(key.clone(), ()).is_none() {
                gens.push(key);
            }
        }
    }
    Ok(KernelData {
        image,
        transversal,
        generators: gens,
    })
}

/// A presentation of a finite group on its stored generators.
///
/// Relators are the generator orders followed by Schreier generators of the
/// kernel of the free group onto `g`, added until coset enumeration returns
/// the group order; redundant relators are then removed greedily.
pub fn finite_presentation(g: &FiniteGroup, names: Vec<String>) -> Result<GroupPresentation> {
    let k = g.generator_perms().len();
    if names.len() != k {
        return Err(Error::Precondition(format!(
            "{} names for {k} generators",
            names.len()
        )));
    }
    let free = GroupPresentation::new(names.clone(), Vec::new())?;
    let mut cands: Vec<Word> = g
        .generator_perms()
        .iter()
        .enumerate()
        .map(|(i, x)| Word::power(i, x.order() as i64))
        .collect();
    let mut schreier = kernel_generators(&free, g.generator_perms(), g.order().max(1))?.generators;
    schreier.sort_by(|a, b| a.shortlex_cmp(b));
    cands.extend(schreier);

    let presents = |rels: &[Word]| -> bool {
        let p = GroupPresentation {
            generators: names.clone(),
            relators: rels.to_vec(),
        };
        matches!(coset_enumerate(&p, &[], PRESENTATION_BUDGET), Ok(t) if t.index() == g.order())
    };
    let mut rels: Vec<Word> = Vec::new();
    for c in cands {
        if !rels.is_empty() && presents(&rels) {
            break;
        }
        if !c.is_empty() && !rels.contains(&c) {
            rels.push(c);
        }
    }
    if !presents(&rels) {
        return Err(Error::Budget("no presentation found within budget".into()));
    }
    let mut i = rels.len();
    while i > k.min(rels.len()) {
        i -= 1;
        let mut trial = rels.clone();
        trial.remove(i);
        if presents(&trial) {
            rels = trial;
        }
    }
    GroupPresentation::new(names, rels)
}

const PRESENTATION_BUDGET: usize = 20_000;

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(g: &[&str], r: &[&str]) -> GroupPresentation {
        GroupPresentation::parse(g, r).unwrap()
    }

    #[test]
    fn identity_on_c2_has_trivial_kernel() {
        let p = pres(&["a"], &["a^2"]);
        let k = kernel_generators(&p, &[Perm::from_cycles(2, "(1,2)").unwrap()], 100).unwrap();
        assert!(k.generators.is_empty());
        assert_eq!(k.image.order(), 2);
    }

    #[test]
    fn infinite_dihedral_onto_klein() {
        let p = pres(&["a", "b"], &["a^2", "b^2"]);
        let imgs = [
            Perm::from_cycles(4, "(1,2)").unwrap(),
            Perm::from_cycles(4, "(3,4)").unwrap(),
        ];
        let k = kernel_generators(&p, &imgs, 100).unwrap();
        let shown: Vec<String> = k.generators.iter().map(|w| p.show(w)).collect();
        assert_eq!(shown, vec!["a b a b"]);
        let t = coset_enumerate(&p, &k.generators, 1000).unwrap();
        assert_eq!(t.index(), 4);
    }

    #[test]
    fn infinite_dihedral_onto_c2() {
        let p = pres(&["a", "b"], &["a^2", "b^2"]);
        let t = Perm::from_cycles(2, "(1,2)").unwrap();
        let k = kernel_generators(&p, &[t.clone(), t], 100).unwrap();
        let shown: Vec<String> = k.generators.iter().map(|w| p.show(w)).collect();
        assert!(shown.contains(&"a b".to_string()));
        assert_eq!(coset_enumerate(&p, &k.generators, 1000).unwrap().index(), 2);
    }

    #[test]
    fn presentations_of_small_groups() {
        for (deg, gens, order) in [
            (3, vec!["(1,2)", "(1,2,3)"], 6),
            (4, vec!["(1,2,3,4)", "(1,3)"], 8),
            (4, vec!["(1,2)", "(3,4)"], 4),
            (4, vec!["(1,2,3)", "(2,3,4)"], 12),
        ] {
            let perms: Vec<Perm> = gens.iter().map(|c| Perm::from_cycles(deg, c).unwrap()).collect();
            let g = FiniteGroup::generate(deg, &perms, 100).unwrap();
            let names = (0..perms.len()).map(|i| format!("x{i}")).collect();
            let p = finite_presentation(&g, names).unwrap();
            assert_eq!(coset_enumerate(&p, &[], 10_000).unwrap().index(), order);
            check_homomorphism(&p, &perms).unwrap();
        }
    }

    #[test]
    fn rejects_non_homomorphism() {
        let p = pres(&["a"], &["a^2"]);
        let c3 = Perm::from_cycles(3, "(1,2,3)").unwrap();
        assert_eq!(
            kernel_generators(&p, &[c3], 100).unwrap_err(),
            Error::NotAHomomorphism(0)
        );
    }
}
