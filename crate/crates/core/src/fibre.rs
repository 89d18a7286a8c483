//! Fibre products of epimorphisms onto a common group.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finitegrp::{
    coset_enumerate, evaluate, finite_presentation, kernel_generators, FiniteGroup, KernelData, Perm,
    DEFAULT_ORDER_BOUND, DEFAULT_ROW_BUDGET,
};
use crate::presentation::{shift, GroupPresentation, Word};
use crate::thompson::{generator, transposition_element, Address, Synthesizer};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Target {
    /// A finite permutation group given by generators.
    Permutation { degree: usize, generators: Vec<Perm> },
    /// A group known only through cited facts, such as `V_n`.
    Symbolic { name: String, n: u8 },
}

/// Epimorphisms `φ_i: G_i → Q` given by generator images.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FibreSpec {
    pub factors: Vec<GroupPresentation>,
    pub target: Target,
    #[serde(default)]
    pub images: Vec<Vec<Perm>>,
}

impl FibreSpec {
    /// `d` copies of one epimorphism.
    pub fn power(factor: GroupPresentation, q: Target, images: Vec<Perm>, d: usize) -> Self {
        FibreSpec {
            factors: vec![factor; d],
            target: q,
            images: vec![images; d],
        }
    }

    pub fn d(&self) -> usize {
        self.factors.len()
    }

    /// The target as a permutation group; symbolic targets are rejected.
    pub fn target_group(&self) -> Result<FiniteGroup> {
        match &self.target {
            Target::Permutation { degree, generators } => {
                FiniteGroup::generate((*degree).max(1), generators, DEFAULT_ORDER_BOUND)
            }
            Target::Symbolic { name, .. } => Err(Error::Precondition(format!(
                "symbolic target {name} has no computable branch"
            ))),
        }
    }

    /// Checks that every `φ_i` respects relators and is onto `Q`.
    pub fn validate(&self) -> Result<FiniteGroup> {
        let q = self.target_group()?;
        if self.factors.is_empty() {
            return Err(Error::Precondition("no factors".into()));
        }
        if self.images.len() != self.factors.len() {
            return Err(Error::Precondition(format!(
                "{} factors but {} image lists",
                self.factors.len(),
                self.images.len()
            )));
        }
        for (p, im) in self.factors.iter().zip(&self.images) {
            if im.len() != p.rank() {
                return Err(Error::Precondition("image list length differs from rank".into()));
            }
            if im.iter().any(|x| x.degree() != q.degree() || q.index_of(x).is_none()) {
                return Err(Error::Precondition("generator image lies outside Q".into()));
            }
            crate::finitegrp::check_homomorphism(p, im)?;
            let img = FiniteGroup::generate(q.degree(), im, DEFAULT_ORDER_BOUND)?;
            if img.order() != q.order() {
                return Err(Error::NotSurjective {
                    image: img.order(),
                    target: q.order(),
                });
            }
        }
        Ok(q)
    }

    fn kernel(&self, i: usize) -> Result<KernelData> {
        kernel_generators(&self.factors[i], &self.images[i], DEFAULT_ORDER_BOUND)
    }

    /// `G_1 × … × G_d` with generators renamed `name_i` and commutators between factors.
    pub fn product_presentation(&self) -> Result<GroupPresentation> {
        let mut gens = Vec::new();
        let mut rels = Vec::new();
        let mut offsets = Vec::new();
        for (i, p) in self.factors.iter().enumerate() {
            let off = gens.len();
            offsets.push(off);
            gens.extend(p.generators.iter().map(|g| format!("{g}_{}", i + 1)));
            rels.extend(p.relators.iter().map(|r| shift(r, off)));
        }
        for i in 0..self.d() {
            for j in i + 1..self.d() {
                for x in 0..self.factors[i].rank() {
                    for y in 0..self.factors[j].rank() {
                        let (a, b) = (offsets[i] + x, offsets[j] + y);
                        rels.push(Word::from_letters(&[a as i32 + 1, b as i32 + 1, -(a as i32 + 1), -(b as i32 + 1)]));
                    }
                }
            }
        }
        GroupPresentation::new(gens, rels)
    }

    fn offsets(&self) -> Vec<usize> {
        self.factors
            .iter()
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += p.rank();
                Some(o)
            })
            .collect()
    }

    /// A tuple as one word in the product presentation.
    pub fn tuple_word(&self, t: &[Word]) -> Word {
        let offs = self.offsets();
        let mut w = Word::empty();
        for (c, off) in t.iter().zip(offs) {
            w = w.concat(&shift(c, off));
        }
        w
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TupleKind {
    Diagonal,
    Kernel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibreTuple {
    pub kind: TupleKind,
    /// For kernel tuples, the coordinate holding the word.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinate: Option<usize>,
    #[serde(skip)]
    pub words: Vec<Word>,
    /// Coordinates rendered in their factor's generators.
    pub coordinates: Vec<String>,
}

/// Generators of `P_d = {(g_1,…,g_d) : φ_i(g_i) = φ_j(g_j)}`.
///
/// A lift of each generator of each factor to all coordinates, plus
/// Schreier generators of `ker φ_i` in coordinate `i`.
pub fn fibre_generators(s: &FibreSpec) -> Result<Vec<FibreTuple>> {
    let q = s.validate()?;
    let d = s.d();
    let kernels = (0..d).map(|i| s.kernel(i)).collect::<Result<Vec<_>>>()?;
    // transversal word in factor i for each element of Q
    let lift = |i: usize, x: &Perm| -> Word {
        let k = &kernels[i];
        k.transversal[k.image.index_of(x).expect("φ_i is onto Q")].clone()
    };
    let mut out: Vec<FibreTuple> = Vec::new();
    let mut push = |s: &FibreSpec, kind, coordinate, words: Vec<Word>| {
        if out.iter().any(|t| t.words == words) || words.iter().all(Word::is_empty) {
            return;
        }
        let coordinates = words.iter().zip(&s.factors).map(|(w, p)| p.show(w)).collect();
        out.push(FibreTuple {
            kind,
            coordinate,
            words,
            coordinates,
        });
    };
    for k in 0..d {
        for (x, img) in s.images[k].iter().enumerate() {
            let words: Vec<Word> = (0..d)
                .map(|i| {
                    if i == k || (s.factors[i] == s.factors[k] && s.images[i] == s.images[k]) {
                        Word::gen(x)
                    } else {
                        lift(i, img)
                    }
                })
                .collect();
            push(s, TupleKind::Diagonal, None, words);
        }
    }
    for (i, ker) in kernels.iter().enumerate() {
        for w in &ker.generators {
            let mut words = vec![Word::empty(); d];
            words[i] = w.clone();
            push(s, TupleKind::Kernel, Some(i), words);
        }
    }
    debug_assert!(q.order() > 0);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FibreReport {
    pub d: usize,
    pub target_order: usize,
    /// Every tuple satisfies `φ_i(g_i) = φ_j(g_j)`.
    pub fibre_condition: bool,
    /// Per coordinate: the projection of the generated subgroup is the whole factor.
    pub projections_onto: Vec<bool>,
    pub index: Option<usize>,
    pub expected_index: usize,
    /// `ker φ_1 × 1 × … × 1` lies in the generated subgroup.
    pub kernel_contained: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// Checks the fibre condition, surjective projections, the index `|Q|^{d-1}`
/// and containment of the first kernel, the last two by coset enumeration.
pub fn verify_fibre(s: &FibreSpec, gens: &[FibreTuple]) -> Result<FibreReport> {
    let q = s.validate()?;
    let d = s.d();
    let deg = q.degree();
    let mut counterexample = None;

    let mut fibre_condition = true;
    for t in gens {
        let imgs: Vec<Perm> = (0..d).map(|i| evaluate(&t.words[i], &s.images[i], deg)).collect();
        if imgs.windows(2).any(|w| w[0] != w[1]) {
            fibre_condition = false;
            counterexample.get_or_insert_with(|| format!("({}) leaves the fibre", t.coordinates.join(", ")));
        }
    }

    let mut projections_onto = Vec::with_capacity(d);
    for i in 0..d {
        let words: Vec<Word> = gens.iter().map(|t| t.words[i].clone()).collect();
        let onto = coset_enumerate(&s.factors[i], &words, DEFAULT_ROW_BUDGET).map(|t| t.index() == 1);
        let onto = onto.unwrap_or(false);
        if !onto {
            counterexample.get_or_insert_with(|| format!("projection to coordinate {} is not onto", i + 1));
        }
        projections_onto.push(onto);
    }

    let prod = s.product_presentation()?;
    let sub: Vec<Word> = gens.iter().map(|t| s.tuple_word(&t.words)).collect();
    let expected_index = q.order().pow(d as u32 - 1);
    let table = coset_enumerate(&prod, &sub, DEFAULT_ROW_BUDGET.max(64 * expected_index)).ok();
    let index = table.as_ref().map(|t| t.index());
    if index != Some(expected_index) {
        counterexample.get_or_insert_with(|| match index {
            Some(i) => format!("index {i} instead of {expected_index}"),
            None => "coset enumeration exceeded its budget".into(),
        });
    }

    let ker = s.kernel(0)?;
    let mut kernel_contained = table.is_some();
    if let Some(t) = &table {
        for w in &ker.generators {
            let mut tuple = vec![Word::empty(); d];
            tuple[0] = w.clone();
            if !t.contains(&s.tuple_word(&tuple)) {
                kernel_contained = false;
                counterexample.get_or_insert_with(|| {
                    format!("kernel word ({}, 1, …) is missing", s.factors[0].show(w))
                });
            }
        }
    }

    let passed = fibre_condition
        && projections_onto.iter().all(|&b| b)
        && index == Some(expected_index)
        && kernel_contained;
    Ok(FibreReport {
        d,
        target_order: q.order(),
        fibre_condition,
        projections_onto,
        index,
        expected_index,
        kernel_contained,
        passed,
        counterexample,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotEvaluated,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypothesis {
    pub name: &'static str,
    pub status: Status,
    pub source: String,
}

/// The hypotheses under which `P_d ↪ G_1 × … × G_d` induces an isomorphism of profinite completions.
#[derive(Clone, Debug, Serialize)]
pub struct Checklist {
    pub target: String,
    pub hypotheses: Vec<Hypothesis>,
    /// All hypotheses hold only because `Q` is trivial, so `P_d` is the whole product.
    pub degenerate: bool,
    pub passed: bool,
}

const FP: &str = "Q is finitely presented";
const NO_QUOTIENTS: &str = "Q has no nontrivial finite quotients";
const H2: &str = "H_2(Q; Z) = 0";

pub fn theorem54_checklist(target: &Target) -> Result<Checklist> {
    let (name, hypotheses, degenerate) = match target {
        Target::Permutation { degree, generators } => {
            let q = FiniteGroup::generate((*degree).max(1), generators, DEFAULT_ORDER_BOUND)?;
            let names = (0..generators.len()).map(|i| format!("x{i}")).collect();
            let pres = finite_presentation(&q, names)?;
            let trivial = q.order() == 1;
            let hyp = vec![
                Hypothesis {
                    name: FP,
                    status: Status::Pass,
                    source: format!(
                        "computed: {} generators, {} relators",
                        pres.rank(),
                        pres.relators.len()
                    ),
                },
                if trivial {
                    Hypothesis {
                        name: NO_QUOTIENTS,
                        status: Status::Pass,
                        source: "Q is trivial".into(),
                    }
                } else {
                    Hypothesis {
                        name: NO_QUOTIENTS,
                        status: Status::Fail,
                        source: format!("computed: Q itself is a finite quotient of order {}", q.order()),
                    }
                },
                if trivial {
                    Hypothesis {
                        name: H2,
                        status: Status::Pass,
                        source: "Q is trivial".into(),
                    }
                } else {
                    Hypothesis {
                        name: H2,
                        status: Status::NotEvaluated,
                        source: "not computed: the finite-quotient hypothesis already fails".into(),
                    }
                },
            ];
            (format!("permutation group of order {}", q.order()), hyp, trivial)
        }
        Target::Symbolic { name, n } => {
            if name != "V_n" {
                return Err(Error::UnknownGroup(name.clone()));
            }
            let n = *n;
            if n < 2 {
                return Err(Error::InvalidArity(n as usize, "V_n needs n ≥ 2"));
            }
            let quotients = if n % 2 == 0 {
                Hypothesis {
                    name: NO_QUOTIENTS,
                    status: Status::Pass,
                    source: "cited: V_n is simple for even n [Higman, Finitely presented infinite simple groups, 1974]; an infinite simple group has no nontrivial finite quotients".into(),
                }
            } else {
                Hypothesis {
                    name: NO_QUOTIENTS,
                    status: Status::Fail,
                    source: "cited: for odd n the even elements V_n^+ form a simple subgroup of index 2 [Higman, Finitely presented infinite simple groups, 1974], so V_n maps onto C2".into(),
                }
            };
            let hyp = vec![
                Hypothesis {
                    name: FP,
                    status: Status::Pass,
                    source: "cited: V_n is finitely presented [Higman]".into(),
                },
                quotients,
                Hypothesis {
                    name: H2,
                    status: Status::Pass,
                    source: "cited: H_2(V_n; Z) = 0 [Kapoudjian, Virasoro-type extensions for the Higman-Thompson and Neretin groups, 2002]".into(),
                },
            ];
            (format!("V_{n}"), hyp, false)
        }
    };
    let passed = hypotheses.iter().all(|h| h.status == Status::Pass);
    Ok(Checklist {
        target: name,
        hypotheses,
        degenerate,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorImage {
    /// Free-product factor `C2` number `i` (1-based).
    pub factor: usize,
    pub image: String,
    pub involution: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TranspositionEvidence {
    pub a: String,
    pub b: String,
    pub word_length: u64,
    pub matches: bool,
}

/// The map `C2 * C2 * C2 * C2 → V_n` sending the factors to `b1…b4`.
#[derive(Clone, Debug, Serialize)]
pub struct VnEpimorphismData {
    pub n: u8,
    pub depth: usize,
    pub images: Vec<GeneratorImage>,
    pub well_defined: bool,
    pub transpositions: Vec<TranspositionEvidence>,
    pub generation_verified: bool,
}

/// Images of the four involutions, checked to square to the identity, and every
/// transposition of leaves of the complete depth-`depth` tree as a word in them.
pub fn vn_epimorphism_data(n: u8, depth: usize) -> Result<VnEpimorphismData> {
    if n < 3 {
        return Err(Error::InvalidArity(n as usize, "the four-involution map needs n ≥ 3"));
    }
    let mut images = Vec::new();
    for i in 1..=4u8 {
        let b = generator(n, i)?;
        let sq = b.compose(&b)?;
        images.push(GeneratorImage {
            factor: i as usize,
            image: b.to_text(),
            involution: sq.equals(&crate::thompson::VnElement::identity(n))?,
        });
    }
    let well_defined = images.iter().all(|g| g.involution);
    let synth = Synthesizer::new(n)?;
    let leaves = crate::thompson::address::complete_leaves(n, depth);
    let mut transpositions = Vec::new();
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            let (a, b) = (&leaves[i], &leaves[j]);
            let w = synth.transposition_word(a, b)?;
            let matches = w.evaluate()?.equals(&transposition_element(n, a, b)?)?;
            transpositions.push(TranspositionEvidence {
                a: show_address(a),
                b: show_address(b),
                word_length: w.len(),
                matches,
            });
        }
    }
    let generation_verified = transpositions.iter().all(|t| t.matches);
    Ok(VnEpimorphismData {
        n,
        depth,
        images,
        well_defined,
        transpositions,
        generation_verified,
    })
}

fn show_address(a: &Address) -> String {
    if a.is_root() {
        "ε".into()
    } else {
        a.digits().iter().map(|d| d.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dinf() -> GroupPresentation {
        GroupPresentation::parse(&["a", "b"], &["a^2", "b^2"]).unwrap()
    }

    fn klein() -> (Target, Vec<Perm>) {
        let x = Perm::from_cycles(4, "(1,2)").unwrap();
        let y = Perm::from_cycles(4, "(3,4)").unwrap();
        (
            Target::Permutation {
                degree: 4,
                generators: vec![x.clone(), y.clone()],
            },
            vec![x, y],
        )
    }

    #[test]
    fn dihedral_onto_klein() {
        let (q, im) = klein();
        let s = FibreSpec::power(dinf(), q, im, 2);
        let gens = fibre_generators(&s).unwrap();
        let shown: Vec<Vec<String>> = gens.iter().map(|t| t.coordinates.clone()).collect();
        assert_eq!(
            shown,
            vec![
                vec!["a".to_string(), "a".into()],
                vec!["b".into(), "b".into()],
                vec!["a b a b".into(), "1".into()],
                vec!["1".into(), "a b a b".into()],
            ]
        );
        let r = verify_fibre(&s, &gens).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.index, Some(4));
    }

    #[test]
    fn dropping_the_kernel_is_detected() {
        let (q, im) = klein();
        let s = FibreSpec::power(dinf(), q, im, 2);
        let gens: Vec<FibreTuple> = fibre_generators(&s)
            .unwrap()
            .into_iter()
            .filter(|t| t.kind == TupleKind::Diagonal)
            .collect();
        let r = verify_fibre(&s, &gens).unwrap();
        assert!(!r.passed);
        assert!(r.index.map_or(true, |i| i > 4));
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn trivial_target_gives_the_whole_product() {
        let p = GroupPresentation::parse(&["v"], &["v^2"]).unwrap();
        let q = Target::Permutation {
            degree: 1,
            generators: vec![],
        };
        let s = FibreSpec::power(p, q.clone(), vec![Perm::identity(1)], 2);
        let gens = fibre_generators(&s).unwrap();
        let r = verify_fibre(&s, &gens).unwrap();
        assert!(r.passed);
        assert_eq!(r.index, Some(1));
        let c = theorem54_checklist(&q).unwrap();
        assert!(c.passed && c.degenerate);
    }

    #[test]
    fn non_surjective_maps_are_rejected() {
        let (q, _) = klein();
        let x = Perm::from_cycles(4, "(1,2)").unwrap();
        let s = FibreSpec::power(dinf(), q, vec![x.clone(), x], 2);
        assert!(matches!(fibre_generators(&s), Err(Error::NotSurjective { .. })));
    }

    #[test]
    fn checklists() {
        let c2 = Target::Permutation {
            degree: 2,
            generators: vec![Perm::from_cycles(2, "(1,2)").unwrap()],
        };
        let c = theorem54_checklist(&c2).unwrap();
        assert!(!c.passed);
        assert_eq!(c.hypotheses[1].status, Status::Fail);
        let v4 = theorem54_checklist(&Target::Symbolic { name: "V_n".into(), n: 4 }).unwrap();
        assert!(v4.passed);
        let v3 = theorem54_checklist(&Target::Symbolic { name: "V_n".into(), n: 3 }).unwrap();
        assert_eq!(v3.hypotheses[1].status, Status::Fail);
    }

    #[test]
    fn four_involutions_onto_v3() {
        let data = vn_epimorphism_data(3, 2).unwrap();
        assert!(data.well_defined);
        assert_eq!(data.transpositions.len(), 36);
        assert!(data.generation_verified);
        assert!(vn_epimorphism_data(2, 1).is_err());
    }
}
