//! Labeled simplicial graphs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::GroupPresentation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Edge labels `m ≥ 2`, every vertex an involution.
    Coxeter,
    /// Vertex labels naming finite groups; edges are commutation.
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Presentation of a vertex group that is not in the catalog.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<GroupPresentation>,
}

impl Vertex {
    pub fn plain(id: &str) -> Self {
        Vertex {
            id: id.to_string(),
            group: None,
            presentation: None,
        }
    }

    pub fn with_group(id: &str, group: &str) -> Self {
        Vertex {
            id: id.to_string(),
            group: Some(group.to_string()),
            presentation: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GraphJson {
    mode: Mode,
    vertices: Vec<Vertex>,
    #[serde(default)]
    edges: Vec<EdgeJson>,
}

/// A finite simplicial graph with either Coxeter edge labels or group vertex labels.
///
/// `labels[i][j]` is `0` for a non-edge and the edge label otherwise (always
/// `2` in product mode).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct LabeledGraph {
    mode: Mode,
    vertices: Vec<Vertex>,
    labels: Vec<Vec<u32>>,
}

impl TryFrom<GraphJson> for LabeledGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(j.edges.len());
        let index: BTreeMap<&str, usize> = j
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        for e in &j.edges {
            let u = *index
                .get(e.u.as_str())
                .ok_or_else(|| Error::UnknownVertex(e.u.clone()))?;
            let v = *index
                .get(e.v.as_str())
                .ok_or_else(|| Error::UnknownVertex(e.v.clone()))?;
            let m = match (j.mode, e.m) {
                (Mode::Coxeter, m) => m.unwrap_or(2),
                (Mode::Product, None) => 2,
                (Mode::Product, Some(_)) => {
                    return Err(Error::InvalidGraph(format!(
                        "edge {}-{} carries a Coxeter label in product mode",
                        e.u, e.v
                    )))
                }
            };
            edges.push((u, v, m));
        }
        LabeledGraph::new(j.mode, j.vertices, &edges)
    }
}

impl From<LabeledGraph> for GraphJson {
    fn from(g: LabeledGraph) -> GraphJson {
        let edges = g
            .edges()
            .into_iter()
            .map(|(u, v, m)| EdgeJson {
                u: g.vertices[u].id.clone(),
                v: g.vertices[v].id.clone(),
                m: (g.mode == Mode::Coxeter).then_some(m),
            })
            .collect();
        GraphJson {
            mode: g.mode,
            vertices: g.vertices,
            edges,
        }
    }
}

impl LabeledGraph {
    pub fn new(mode: Mode, vertices: Vec<Vertex>, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let n = vertices.len();
        let mut ids: Vec<&str> = vertices.iter().map(|v| v.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate vertex id `{}`", w[0])));
        }
        for v in &vertices {
            if v.id.is_empty() || v.id.chars().any(char::is_whitespace) || v.id.contains('^') {
                return Err(Error::InvalidGraph(format!("bad vertex id `{}`", v.id)));
            }
            match mode {
                Mode::Coxeter if v.group.is_some() || v.presentation.is_some() => {
                    return Err(Error::InvalidGraph(format!(
                        "vertex `{}` has a group label in Coxeter mode",
                        v.id
                    )))
                }
                Mode::Product if v.group.is_none() => {
                    return Err(Error::InvalidGraph(format!(
                        "vertex `{}` has no group label",
                        v.id
                    )))
                }
                _ => {}
            }
        }
        let mut labels = vec![vec![0u32; n]; n];
        for &(u, v, m) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at `{}`", vertices[u].id)));
            }
            if m < 2 {
                return Err(Error::InvalidGraph(format!("edge label {m} < 2")));
            }
            if mode == Mode::Product && m != 2 {
                return Err(Error::InvalidGraph("edge label in product mode".into()));
            }
            if labels[u][v] != 0 {
                return Err(Error::InvalidGraph(format!(
                    "multiple edges {}-{}",
                    vertices[u].id, vertices[v].id
                )));
            }
            labels[u][v] = m;
            labels[v][u] = m;
        }
        Ok(LabeledGraph {
            mode,
            vertices,
            labels,
        })
    }

    /// A Coxeter graph on the given ids with labeled edges `(u, v, m)`.
    pub fn coxeter(ids: &[&str], edges: &[(usize, usize, u32)]) -> Result<Self> {
        let vs = ids.iter().map(|i| Vertex::plain(i)).collect();
        Self::new(Mode::Coxeter, vs, edges)
    }

    /// A right-angled Coxeter graph on vertices `a, b, c, …`.
    pub fn racg(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let ids = letter_ids(n);
        let refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
        let e: Vec<(usize, usize, u32)> = edges.iter().map(|&(u, v)| (u, v, 2)).collect();
        Self::coxeter(&refs, &e)
    }

    /// A graph product on vertices `a, b, c, …` labeled by catalog names.
    pub fn product(groups: &[&str], edges: &[(usize, usize)]) -> Result<Self> {
        let ids = letter_ids(groups.len());
        let vs = ids
            .iter()
            .zip(groups)
            .map(|(i, g)| Vertex::with_group(i, g))
            .collect();
        let e: Vec<(usize, usize, u32)> = edges.iter().map(|&(u, v)| (u, v, 2)).collect();
        Self::new(Mode::Product, vs, &e)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graphs serialize")
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn id(&self, i: usize) -> &str {
        &self.vertices[i].id
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Parses a comma- or whitespace-separated list of vertex ids.
    pub fn parse_subset(&self, text: &str) -> Result<Vec<usize>> {
        let mut out = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| self.index_of(s))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// The group label of a vertex, for both modes (`C2` in Coxeter mode).
    pub fn group_label(&self, i: usize) -> &str {
        self.vertices[i].group.as_deref().unwrap_or("C2")
    }

    /// Edge label, `None` for a non-edge.
    pub fn label(&self, u: usize, v: usize) -> Option<u32> {
        match self.labels[u][v] {
            0 => None,
            m => Some(m),
        }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.labels[u][v] != 0
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.adjacent(u, v)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.labels[v].iter().filter(|&&m| m != 0).count()
    }

    /// Edges `(u, v, m)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            for v in u + 1..self.len() {
                if self.labels[u][v] != 0 {
                    out.push((u, v, self.labels[u][v]));
                }
            }
        }
        out
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.adjacent(u, v)))
    }

    /// All cliques, the empty one included, each sorted; ordered by size then lexicographically.
    pub fn cliques(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for c in &frontier {
                let start = c.last().map_or(0, |&l| l + 1);
                for v in start..self.len() {
                    if c.iter().all(|&u| self.adjacent(u, v)) {
                        let mut d = c.clone();
                        d.push(v);
                        next.push(d);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let all = self.cliques();
        all.iter()
            .filter(|c| (0..self.len()).all(|v| c.contains(&v) || !c.iter().all(|&u| self.adjacent(u, v))))
            .cloned()
            .collect()
    }

    /// The full subgraph on `set`, keeping vertex order.
    pub fn induced(&self, set: &[usize]) -> LabeledGraph {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        let vertices = s.iter().map(|&i| self.vertices[i].clone()).collect();
        let labels = s
            .iter()
            .map(|&i| s.iter().map(|&j| self.labels[i][j]).collect())
            .collect();
        LabeledGraph {
            mode: self.mode,
            vertices,
            labels,
        }
    }

    /// The same graph with vertices reordered: new vertex `k` is old vertex `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> LabeledGraph {
        let vertices = order.iter().map(|&i| self.vertices[i].clone()).collect();
        let labels = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.labels[i][j]).collect())
            .collect();
        LabeledGraph {
            mode: self.mode,
            vertices,
            labels,
        }
    }

    /// A right-angled Coxeter graph rewritten as a graph product of `C2`s.
    pub fn to_product(&self) -> Result<LabeledGraph> {
        match self.mode {
            Mode::Product => Ok(self.clone()),
            Mode::Coxeter => {
                if self.edges().iter().any(|e| e.2 != 2) {
                    return Err(Error::ModeMismatch("right-angled Coxeter graph"));
                }
                let vertices = self
                    .vertices
                    .iter()
                    .map(|v| Vertex::with_group(&v.id, "C2"))
                    .collect();
                Ok(LabeledGraph {
                    mode: Mode::Product,
                    vertices,
                    labels: self.labels.clone(),
                })
            }
        }
    }

    pub(crate) fn from_parts(mode: Mode, vertices: Vec<Vertex>, labels: Vec<Vec<u32>>) -> Self {
        LabeledGraph {
            mode,
            vertices,
            labels,
        }
    }

    pub(crate) fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }
}

/// Ids `a, b, …, z, v26, v27, …`.
pub fn letter_ids(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("v{i}")
            }
        })
        .collect()
}

/// Vertex label used for isomorphism testing.
fn vertex_key(g: &LabeledGraph, i: usize) -> (String, Option<String>) {
    let v = &g.vertices[i];
    (
        g.group_label(i).to_string(),
        v.presentation
            .as_ref()
            .map(|p| serde_json::to_string(p).expect("presentations serialize")),
    )
}

/// A label-preserving isomorphism `g1 → g2` as the image of each vertex of `g1`.
pub fn graph_isomorphism(g1: &LabeledGraph, g2: &LabeledGraph) -> Option<Vec<usize>> {
    if g1.mode != g2.mode || g1.len() != g2.len() {
        return None;
    }
    let n = g1.len();
    let sig = |g: &LabeledGraph, i: usize| {
        let mut ls: Vec<u32> = g.labels[i].iter().copied().filter(|&m| m != 0).collect();
        ls.sort_unstable();
        (vertex_key(g, i), ls)
    };
    let s1: Vec<_> = (0..n).map(|i| sig(g1, i)).collect();
    let s2: Vec<_> = (0..n).map(|i| sig(g2, i)).collect();
    let mut a = s1.clone();
    let mut b = s2.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    // most constrained vertices first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(g1.degree(i)));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go<T: PartialEq>(
        k: usize,
        order: &[usize],
        g1: &LabeledGraph,
        g2: &LabeledGraph,
        s1: &[T],
        s2: &[T],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let u = order[k];
        for w in 0..g2.len() {
            if used[w] || s1[u] != s2[w] {
                continue;
            }
            let ok = order[..k]
                .iter()
                .all(|&p| g1.labels[u][p] == g2.labels[w][map[p]]);
            if !ok {
                continue;
            }
            map[u] = w;
            used[w] = true;
            if go(k + 1, order, g1, g2, s1, s2, map, used) {
                return true;
            }
            used[w] = false;
        }
        map[u] = usize::MAX;
        false
    }
    if go(0, &order, g1, g2, &s1, &s2, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

pub fn graph_isomorphic(g1: &LabeledGraph, g2: &LabeledGraph) -> bool {
    graph_isomorphism(g1, g2).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"mode":"coxeter","vertices":[{"id":"a"},{"id":"b"},{"id":"c"}],
            "edges":[{"u":"a","v":"b","m":4},{"u":"b","v":"c","m":2},{"u":"a","v":"c","m":4}]}"#;
        let g = LabeledGraph::from_json(text).unwrap();
        assert_eq!(g.label(0, 1), Some(4));
        let back = LabeledGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(LabeledGraph::coxeter(&["a", "a"], &[]).is_err());
        assert!(LabeledGraph::coxeter(&["a", "b"], &[(0, 0, 2)]).is_err());
        assert!(LabeledGraph::coxeter(&["a", "b"], &[(0, 1, 2), (1, 0, 3)]).is_err());
        assert!(LabeledGraph::coxeter(&["a", "b"], &[(0, 1, 1)]).is_err());
        let text = r#"{"mode":"product","vertices":[{"id":"a","group":"C2"},{"id":"b","group":"C2"}],
            "edges":[{"u":"a","v":"b","m":3}]}"#;
        assert!(LabeledGraph::from_json(text).is_err());
        let text = r#"{"mode":"product","vertices":[{"id":"a"}],"edges":[]}"#;
        assert!(LabeledGraph::from_json(text).is_err());
    }

    #[test]
    fn cliques_of_a_path() {
        let p = LabeledGraph::racg(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.cliques().len(), 6);
        assert_eq!(p.maximal_cliques(), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn isomorphism_respects_labels() {
        let p = LabeledGraph::racg(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let star = LabeledGraph::racg(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!graph_isomorphic(&p, &star));
        let q = p.permuted(&[2, 0, 3, 1]);
        let m = graph_isomorphism(&p, &q).unwrap();
        for (u, v, _) in p.edges() {
            assert!(q.adjacent(m[u], m[v]));
        }
        let x = LabeledGraph::product(&["C2", "C3"], &[(0, 1)]).unwrap();
        let y = LabeledGraph::product(&["C3", "C2"], &[(0, 1)]).unwrap();
        let z = LabeledGraph::product(&["C2", "C2"], &[(0, 1)]).unwrap();
        assert!(graph_isomorphic(&x, &y));
        assert!(!graph_isomorphic(&x, &z));
    }
}
