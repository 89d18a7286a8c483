use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use grpkit::catalog::Catalog;
use grpkit::fibre::{fibre_generators, FibreSpec, Target};
use grpkit::finitegrp::{enumerate_group, evaluate, finite_presentation, FiniteGroup, Perm, DEFAULT_ORDER_BOUND, DEFAULT_ROW_BUDGET};
use grpkit::fingerprint::{compare, Comparison, QuotientTargets, DEFAULT_NODE_BUDGET};
use grpkit::graphprod::{coxeter_presentation, graph_isomorphic, presentation, presentation_blocks, LabeledGraph};
use grpkit::presentation::{GroupPresentation, Word};
use grpkit::reconstruct::{clique_poset, reconstruct_graph};
use grpkit::rewriting::{CoxeterSolver, ProductSolver};
use grpkit::thompson::{random_element, Address, VnElement};

fn vn(n: u8, seed: u64) -> VnElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element(n, 4, &mut rng).unwrap()
}

fn letters_word(rank: usize, raw: &[(usize, bool)]) -> Word {
    let l: Vec<i32> = raw
        .iter()
        .map(|&(g, inv)| {
            let x = (g % rank) as i32 + 1;
            if inv {
                -x
            } else {
                x
            }
        })
        .collect();
    Word::from_letters(&l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vn_group_axioms(n in 2u8..6, s1: u64, s2: u64, s3: u64) {
        let (a, b, c) = (vn(n, s1), vn(n, s2), vn(n, s3));
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert!(ab_c.equals(&a_bc).unwrap());
        let e = VnElement::identity(n);
        prop_assert!(a.compose(&e).unwrap().equals(&a).unwrap());
        prop_assert!(a.compose(&a.invert()).unwrap().is_identity());
    }

    #[test]
    fn canonical_form_ignores_expansions(n in 2u8..6, seed: u64, pick: usize) {
        let a = vn(n, seed);
        let leaf = a.domain()[pick % a.domain().len()].clone();
        let big = a.expand(&leaf).unwrap();
        prop_assert_eq!(big.canonicalize(), a.canonicalize());
    }

    #[test]
    fn odd_arity_parity_is_a_class_invariant(n in prop::sample::select(vec![3u8, 5]), seed: u64, pick: usize) {
        let a = vn(n, seed);
        let leaf = a.domain()[pick % a.domain().len()].clone();
        prop_assert_eq!(a.expand(&leaf).unwrap().parity(), a.parity());
    }

    #[test]
    fn product_normal_forms_match_direct_products(
        labels in prop::collection::vec(prop::sample::select(vec!["C2", "C3", "C4", "S3"]), 1..4),
        raw in prop::collection::vec((0usize..16, any::<bool>()), 0..12),
    ) {
        let cat = Catalog::builtin();
        let n = labels.len();
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let g = LabeledGraph::product(&labels, &edges).unwrap();
        let s = ProductSolver::new(&g, &cat).unwrap();
        let blocks = presentation_blocks(&g, &cat).unwrap();
        let w = letters_word(blocks.presentation.rank(), &raw);
        // images of the generators in the direct product
        let groups: Vec<_> = labels.iter().map(|l| cat.group(l).unwrap()).collect();
        let degree: usize = groups.iter().map(|x| x.degree()).sum();
        let mut images = Vec::new();
        let mut off = 0;
        for grp in &groups {
            for p in grp.generator_perms() {
                images.push(p.shifted(off, degree));
            }
            off += grp.degree();
        }
        let nf = s.normal_form(&w);
        prop_assert_eq!(evaluate(&nf, &images, degree), evaluate(&w, &images, degree));
        prop_assert_eq!(s.normal_form(&nf), nf.clone());
        prop_assert_eq!(s.is_identity(&w), evaluate(&w, &images, degree).is_identity());
    }

    #[test]
    fn coxeter_equality_matches_a_faithful_permutation_action(
        raw1 in prop::collection::vec(0usize..3, 0..8),
        raw2 in prop::collection::vec(0usize..3, 0..8),
    ) {
        let g = LabeledGraph::coxeter(&["a", "b", "c"], &[(0, 1, 4), (1, 2, 3), (0, 2, 2)]).unwrap();
        let w = enumerate_group(&coxeter_presentation(&g).unwrap(), DEFAULT_ROW_BUDGET, DEFAULT_ORDER_BOUND).unwrap();
        prop_assert_eq!(w.order(), 48);
        let s = CoxeterSolver::new(&g).unwrap();
        let to_word = |r: &[usize]| Word::from_letters(&r.iter().map(|&x| x as i32 + 1).collect::<Vec<_>>());
        let (w1, w2) = (to_word(&raw1), to_word(&raw2));
        let imgs = w.generator_perms().to_vec();
        let same = evaluate(&w1, &imgs, w.degree()) == evaluate(&w2, &imgs, w.degree());
        prop_assert_eq!(s.equal(&w1, &w2).unwrap(), same);
        let nf = s.normal_form(&w1).unwrap();
        prop_assert_eq!(s.normal_form(&nf).unwrap(), nf);
    }

    #[test]
    fn clique_posets_round_trip(
        labels in prop::collection::vec(prop::sample::select(vec!["C2", "C3", "C4", "S3"]), 1..5),
        mask: u16,
    ) {
        let cat = Catalog::builtin();
        let n = labels.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, e)| *e).collect();
        let g = LabeledGraph::product(&labels, &edges).unwrap();
        let back = reconstruct_graph(&clique_poset(&g, &cat).unwrap()).unwrap();
        prop_assert!(graph_isomorphic(&back, &g));
    }

    #[test]
    fn finite_presentations_enumerate_to_the_group_order(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::seq::SliceRandom;
        let deg = 5;
        let gens: Vec<Perm> = (0..2)
            .map(|_| {
                let mut v: Vec<u16> = (0..deg as u16).collect();
                v.shuffle(&mut rng);
                Perm::from_images(v).unwrap()
            })
            .collect();
        let g = FiniteGroup::generate(deg, &gens, 200).unwrap();
        let p = finite_presentation(&g, vec!["x".into(), "y".into()]).unwrap();
        let e = enumerate_group(&p, DEFAULT_ROW_BUDGET, 1000).unwrap();
        prop_assert_eq!(e.order(), g.order());
    }

    #[test]
    fn fibre_products_stay_in_the_fibre(choice in prop::collection::vec(0usize..64, 1..10)) {
        let x = Perm::from_cycles(4, "(1,2)").unwrap();
        let y = Perm::from_cycles(4, "(3,4)").unwrap();
        let dinf = GroupPresentation::parse(&["a", "b"], &["a^2", "b^2"]).unwrap();
        let s = FibreSpec::power(dinf, Target::Permutation { degree: 4, generators: vec![x.clone(), y.clone()] }, vec![x, y], 3);
        let gens = fibre_generators(&s).unwrap();
        let mut coords = vec![Word::empty(); 3];
        for c in choice {
            let t = &gens[c % gens.len()];
            for i in 0..3 {
                coords[i] = coords[i].concat(&t.words[i]);
            }
        }
        let imgs: Vec<Perm> = (0..3).map(|i| evaluate(&coords[i], &s.images[i], 4)).collect();
        prop_assert!(imgs.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn even_arity_parity_is_not_a_class_invariant() {
    let a = VnElement::identity(4);
    let leaf = a.domain()[0].clone();
    let e = a.expand(&leaf).unwrap();
    assert_eq!(e.parity(), a.parity(), "identity stays even");
    let t = VnElement::transposition(4, &Address::parse(4, "0").unwrap(), &Address::parse(4, "1").unwrap()).unwrap();
    let big = t.expand(&Address::parse(4, "2").unwrap()).unwrap().expand(&Address::parse(4, "0").unwrap()).unwrap();
    assert!(big.equals(&t).unwrap());
    assert_ne!(big.parity(), t.parity());
}

fn racg_targets() -> QuotientTargets {
    QuotientTargets::new(4, 48).unwrap()
}

#[test]
fn fingerprints_grow_with_the_bound_and_ignore_relabeling() {
    let cat = Catalog::builtin();
    let t = racg_targets();
    let small = QuotientTargets::new(4, 12).unwrap();
    let g = LabeledGraph::racg(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let h = g.permuted(&[2, 0, 3, 1]);
    let fg = t.fingerprint(&presentation(&g, &cat).unwrap(), DEFAULT_NODE_BUDGET).unwrap();
    let fh = t.fingerprint(&presentation(&h, &cat).unwrap(), DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(compare(&fg, &fh).unwrap(), Comparison::Equal);
    let fs = small.fingerprint(&presentation(&g, &cat).unwrap(), DEFAULT_NODE_BUDGET).unwrap();
    assert!(fs.signatures().is_subset(&fg.signatures()));
    assert_eq!(fg.truncate(12).signatures(), fs.signatures());
}
