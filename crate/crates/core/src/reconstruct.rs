//! Clique posets of graph products and reconstruction of the graph from them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::finitegrp::{find_isomorphism, ClassPoset, FiniteGroup, IsoSignature, Subgroup, DEFAULT_ORDER_BOUND};
use crate::graphprod::{letter_ids, LabeledGraph, Mode, Vertex};

/// Isomorphism type of a directly indecomposable vertex group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorLabel {
    /// First catalog name of a group isomorphic to this one.
    pub name: String,
    pub signature: IsoSignature,
}

/// Isomorphism type of `G_Δ` for a clique `Δ`.
///
/// For directly indecomposable factors the multiset of factor types
/// determines the direct product up to isomorphism (Krull–Schmidt).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CliqueLabel {
    pub order: usize,
    pub factors: Vec<FactorLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueNode {
    /// Vertex ids of the clique, for reference only.
    pub clique: Vec<String>,
    pub label: CliqueLabel,
}

/// A finite labeled poset given by its nodes and covering pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PosetJson", into = "PosetJson")]
pub struct CliquePoset {
    nodes: Vec<CliqueNode>,
    covers: Vec<(usize, usize)>,
    leq: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    nodes: Vec<CliqueNode>,
    covers: Vec<(usize, usize)>,
}

impl TryFrom<PosetJson> for CliquePoset {
    type Error = Error;

    fn try_from(j: PosetJson) -> Result<Self> {
        CliquePoset::from_covers(j.nodes, j.covers)
    }
}

impl From<CliquePoset> for PosetJson {
    fn from(p: CliquePoset) -> PosetJson {
        PosetJson {
            nodes: p.nodes,
            covers: p.covers,
        }
    }
}

impl CliquePoset {
    /// Builds the order as the reflexive-transitive closure of `covers`.
    pub fn from_covers(nodes: Vec<CliqueNode>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let n = nodes.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &covers {
            if a >= n || b >= n || a == b {
                return Err(Error::Parse(format!("bad cover ({a},{b})")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::Parse("cover relation has a cycle".into()));
                }
            }
        }
        let mut covers = covers;
        covers.sort_unstable();
        covers.dedup();
        Ok(CliquePoset { nodes, covers, leq })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[CliqueNode] {
        &self.nodes
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|x| self.leq[b][x]))
    }

    /// Nodes covering the bottom.
    pub fn atoms(&self) -> Vec<usize> {
        match self.bottom() {
            None => Vec::new(),
            Some(b) => self
                .covers
                .iter()
                .filter(|c| c.0 == b)
                .map(|c| c.1)
                .collect(),
        }
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.join_all(&[a, b])
    }

    /// Least upper bound of a set of nodes.
    pub fn join_all(&self, set: &[usize]) -> Option<usize> {
        let upper: Vec<usize> = (0..self.len())
            .filter(|&x| set.iter().all(|&a| self.leq[a][x]))
            .collect();
        upper
            .iter()
            .copied()
            .find(|&m| upper.iter().all(|&x| self.leq[m][x]))
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len())
            .filter(|&x| self.leq[x][a] && self.leq[x][b])
            .collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&x| self.leq[x][m]))
    }

    /// Checks that a bottom exists and every node is the join of the atoms below it.
    pub fn check_atomistic(&self) -> Result<()> {
        let b = self
            .bottom()
            .ok_or_else(|| Error::NotAtomistic("no bottom element".into()))?;
        let atoms = self.atoms();
        for x in 0..self.len() {
            if x == b {
                continue;
            }
            let below: Vec<usize> = atoms.iter().copied().filter(|&a| self.leq[a][x]).collect();
            if below.is_empty() || self.join_all(&below) != Some(x) {
                return Err(Error::NotAtomistic(format!(
                    "node {x} is not the join of its atoms"
                )));
            }
        }
        Ok(())
    }
}

/// The canonical catalog name for a vertex group, resolving signature ties by brute force.
fn factor_label(cat: &Catalog, name: &str, memo: &mut BTreeMap<String, FactorLabel>) -> Result<FactorLabel> {
    if let Some(l) = memo.get(name) {
        return Ok(l.clone());
    }
    let sig = cat.signature(name)?;
    let g = cat.group(name)?;
    let mut canon = name.to_string();
    for other in cat.names_with_signature(&sig)? {
        if other == name {
            break;
        }
        let h = cat.group(&other)?;
        if g.order() < crate::finitegrp::signature::DEFAULT_ISO_CONFIRM
            && find_isomorphism(&g, &h).is_some()
        {
            canon = other;
            break;
        }
    }
    let l = FactorLabel {
        name: canon,
        signature: sig,
    };
    memo.insert(name.to_string(), l.clone());
    Ok(l)
}

/// All cliques of `g` ordered by inclusion, labeled by the isomorphism type of `G_Δ`.
pub fn clique_poset(g: &LabeledGraph, cat: &Catalog) -> Result<CliquePoset> {
    let g = g.to_product()?;
    let mut memo = BTreeMap::new();
    let mut vlabels = Vec::with_capacity(g.len());
    for v in 0..g.len() {
        if g.vertex(v).presentation.is_some() {
            return Err(Error::UnknownGroup(g.group_label(v).to_string()));
        }
        vlabels.push(factor_label(cat, g.group_label(v), &mut memo)?);
    }
    let cliques = g.cliques();
    let nodes: Vec<CliqueNode> = cliques
        .iter()
        .map(|c| {
            let mut factors: Vec<FactorLabel> = c.iter().map(|&v| vlabels[v].clone()).collect();
            factors.sort();
            CliqueNode {
                clique: c.iter().map(|&v| g.id(v).to_string()).collect(),
                label: CliqueLabel {
                    order: factors.iter().map(|f| f.signature.order).product(),
                    factors,
                },
            }
        })
        .collect();
    let index: BTreeMap<&Vec<usize>, usize> = cliques.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut covers = Vec::new();
    for (j, c) in cliques.iter().enumerate() {
        for k in 0..c.len() {
            let mut d = c.clone();
            d.remove(k);
            covers.push((index[&d], j));
        }
    }
    CliquePoset::from_covers(nodes, covers)
}

/// Every pair of vertices is separated by a maximal clique containing exactly one of them.
pub fn is_t0(g: &LabeledGraph) -> bool {
    let maxes = g.maximal_cliques();
    (0..g.len()).all(|u| {
        (u + 1..g.len()).all(|v| maxes.iter().any(|c| c.contains(&u) != c.contains(&v)))
    })
}

/// Rebuilds the graph: atoms become vertices, and two atoms span an edge iff their join exists.
pub fn reconstruct_graph(p: &CliquePoset) -> Result<LabeledGraph> {
    p.check_atomistic()?;
    let atoms = p.atoms();
    let ids = letter_ids(atoms.len());
    let mut vertices = Vec::with_capacity(atoms.len());
    for (i, &a) in atoms.iter().enumerate() {
        let f = match p.nodes[a].label.factors.as_slice() {
            [f] => f,
            _ => {
                return Err(Error::NotAtomistic(format!(
                    "atom {a} is not labeled by a single factor"
                )))
            }
        };
        vertices.push(Vertex::with_group(&ids[i], &f.name));
    }
    let mut edges = Vec::new();
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            if p.join(atoms[i], atoms[j]).is_some() {
                edges.push((i, j, 2));
            }
        }
    }
    LabeledGraph::new(Mode::Product, vertices, &edges)
}

/// A label- and order-preserving bijection between two atomistic posets, as node images.
pub fn poset_isomorphism(p: &CliquePoset, q: &CliquePoset) -> Option<Vec<usize>> {
    if p.len() != q.len() || p.check_atomistic().is_err() || q.check_atomistic().is_err() {
        return None;
    }
    let mut lp: Vec<&CliqueLabel> = p.nodes.iter().map(|n| &n.label).collect();
    let mut lq: Vec<&CliqueLabel> = q.nodes.iter().map(|n| &n.label).collect();
    lp.sort();
    lq.sort();
    if lp != lq {
        return None;
    }
    let (ap, aq) = (p.atoms(), q.atoms());
    if ap.len() != aq.len() {
        return None;
    }
    let mut map = vec![usize::MAX; ap.len()];
    let mut used = vec![false; aq.len()];
    fn extend(p: &CliquePoset, q: &CliquePoset, ap: &[usize], aq: &[usize], map: &[usize]) -> Option<Vec<usize>> {
        let mut img = vec![usize::MAX; p.len()];
        let bp = p.bottom()?;
        img[bp] = q.bottom()?;
        for x in 0..p.len() {
            if x == bp {
                continue;
            }
            let below: Vec<usize> = (0..ap.len())
                .filter(|&i| p.leq(ap[i], x))
                .map(|i| aq[map[i]])
                .collect();
            img[x] = q.join_all(&below)?;
        }
        let mut hit = vec![false; q.len()];
        for x in 0..p.len() {
            if std::mem::replace(&mut hit[img[x]], true) || p.nodes[x].label != q.nodes[img[x]].label {
                return None;
            }
            for y in 0..p.len() {
                if p.leq(x, y) != q.leq(img[x], img[y]) {
                    return None;
                }
            }
        }
        Some(img)
    }
    fn go(
        k: usize,
        p: &CliquePoset,
        q: &CliquePoset,
        ap: &[usize],
        aq: &[usize],
        map: &mut [usize],
        used: &mut [bool],
    ) -> Option<Vec<usize>> {
        if k == ap.len() {
            return extend(p, q, ap, aq, map);
        }
        for j in 0..aq.len() {
            if used[j] || p.nodes[ap[k]].label != q.nodes[aq[j]].label {
                continue;
            }
            // joins among already placed atoms must agree
            let ok = (0..k).all(|i| p.join(ap[i], ap[k]).is_some() == q.join(aq[map[i]], aq[j]).is_some());
            if !ok {
                continue;
            }
            map[k] = j;
            used[j] = true;
            if let Some(r) = go(k + 1, p, q, ap, aq, map, used) {
                return Some(r);
            }
            used[j] = false;
        }
        None
    }
    go(0, p, q, &ap, &aq, &mut map, &mut used)
}

pub fn poset_isomorphic(p: &CliquePoset, q: &CliquePoset) -> bool {
    poset_isomorphism(p, q).is_some()
}

/// Outcome of checking `[G_{X∩Y}] = [G_X] ∧ [G_Y]` and `[G_{X∪Y}] = [G_X] ∨ [G_Y]`
/// for all special subgroups of a finite graph product.
#[derive(Clone, Debug, Serialize)]
pub struct RadcliffeReport {
    pub group_order: usize,
    pub classes: usize,
    pub pairs: usize,
    pub meet_failures: Vec<(Vec<usize>, Vec<usize>)>,
    pub join_failures: Vec<(Vec<usize>, Vec<usize>)>,
}

impl RadcliffeReport {
    pub fn holds(&self) -> bool {
        self.meet_failures.is_empty() && self.join_failures.is_empty()
    }
}

/// Checks the meet and join laws in the full subgroup-class poset of a clique graph product.
pub fn radcliffe_laws(g: &LabeledGraph, cat: &Catalog, class_limit: usize) -> Result<RadcliffeReport> {
    let g = g.to_product()?;
    let n = g.len();
    if !g.is_clique(&(0..n).collect::<Vec<_>>()) {
        return Err(Error::Precondition("graph is not a clique".into()));
    }
    let groups = (0..n)
        .map(|v| cat.group(g.group_label(v)))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&FiniteGroup> = groups.iter().map(|x| x.as_ref()).collect();
    let big = FiniteGroup::direct_product(&refs, DEFAULT_ORDER_BOUND)?;
    // generator indices of each vertex inside the product
    let mut vgens: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut k = 0;
    for grp in &groups {
        let c = grp.generator_perms().len();
        vgens.push(big.generators()[k..k + c].to_vec());
        k += c;
    }
    let special = |mask: usize| -> Subgroup {
        let gens: Vec<usize> = (0..n)
            .filter(|v| mask & (1 << v) != 0)
            .flat_map(|v| vgens[v].iter().copied())
            .collect();
        big.closure(&gens, usize::MAX).expect("no cap")
    };
    let poset = ClassPoset::build(&big, class_limit)?;
    let classes: Vec<usize> = (0..1usize << n)
        .map(|m| poset.class_of(&special(m)).expect("every subgroup has a class"))
        .collect();
    let mut meet_failures = Vec::new();
    let mut join_failures = Vec::new();
    let bits = |m: usize| (0..n).filter(|v| m & (1 << v) != 0).collect::<Vec<_>>();
    let mut pairs = 0;
    for x in 0..1usize << n {
        for y in x..1usize << n {
            pairs += 1;
            if poset.meet(classes[x], classes[y]) != Some(classes[x & y]) {
                meet_failures.push((bits(x), bits(y)));
            }
            if poset.join(classes[x], classes[y]) != Some(classes[x | y]) {
                join_failures.push((bits(x), bits(y)));
            }
        }
    }
    Ok(RadcliffeReport {
        group_order: big.order(),
        classes: poset.len(),
        pairs,
        meet_failures,
        join_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphprod::graph_isomorphic;

    #[test]
    fn small_posets() {
        let cat = Catalog::builtin();
        let one = LabeledGraph::product(&["C2"], &[]).unwrap();
        let p = clique_poset(&one, &cat).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.nodes()[0].label.order, 1);
        assert_eq!(p.nodes()[1].label.factors[0].name, "C2");
        let edge = LabeledGraph::racg(2, &[(0, 1)]).unwrap();
        let p = clique_poset(&edge, &cat).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.nodes()[3].label.order, 4);
        let path = LabeledGraph::racg(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(clique_poset(&path, &cat).unwrap().len(), 6);
    }

    #[test]
    fn t0() {
        assert!(is_t0(&LabeledGraph::racg(3, &[(0, 1), (1, 2)]).unwrap()));
        assert!(is_t0(&LabeledGraph::racg(2, &[]).unwrap()));
        assert!(!is_t0(&LabeledGraph::racg(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()));
    }

    #[test]
    fn round_trips() {
        let cat = Catalog::builtin();
        for g in [
            LabeledGraph::product(&["C2", "C3"], &[(0, 1)]).unwrap(),
            LabeledGraph::product(&["C2", "C2", "C2"], &[(0, 1), (1, 2)]).unwrap(),
            LabeledGraph::product(&["S3", "C4", "C2", "C3"], &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap(),
        ] {
            let p = clique_poset(&g, &cat).unwrap();
            let back = reconstruct_graph(&p).unwrap();
            assert!(graph_isomorphic(&back, &g));
            let json = serde_json::to_string(&p).unwrap();
            let q: CliquePoset = serde_json::from_str(&json).unwrap();
            assert_eq!(q, p);
        }
    }

    #[test]
    fn non_atomistic_input_is_rejected() {
        let cat = Catalog::builtin();
        let edge = LabeledGraph::racg(2, &[(0, 1)]).unwrap();
        let p = clique_poset(&edge, &cat).unwrap();
        // drop the atom {b}: the top is no longer the join of its atoms
        let nodes = p.nodes().to_vec();
        let covers = vec![(0, 1), (1, 3), (0, 2)];
        let q = CliquePoset::from_covers(nodes, covers).unwrap();
        assert!(matches!(reconstruct_graph(&q), Err(Error::NotAtomistic(_))));
    }

    #[test]
    fn poset_isomorphism_tracks_graph_isomorphism() {
        let cat = Catalog::builtin();
        let a = LabeledGraph::racg(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = a.permuted(&[3, 1, 0, 2]);
        let star = LabeledGraph::racg(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let (pa, pb, ps) = (
            clique_poset(&a, &cat).unwrap(),
            clique_poset(&b, &cat).unwrap(),
            clique_poset(&star, &cat).unwrap(),
        );
        assert!(poset_isomorphic(&pa, &pb));
        assert!(!poset_isomorphic(&pa, &ps));
    }

    #[test]
    fn meet_and_join_laws_on_an_edge() {
        let cat = Catalog::builtin();
        let edge = LabeledGraph::racg(2, &[(0, 1)]).unwrap();
        let r = radcliffe_laws(&edge, &cat, 1000).unwrap();
        assert_eq!(r.group_order, 4);
        assert!(r.holds());
        let g = LabeledGraph::product(&["S3", "C2"], &[(0, 1)]).unwrap();
        assert!(radcliffe_laws(&g, &cat, 1000).unwrap().holds());
    }
}
