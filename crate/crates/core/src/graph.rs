//! Finite simple graphs with named vertices, optional linear order, and the
//! pre-dimension `δ_α(G) = α·|V| − |E|`.

use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::cmp::Reverse;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Immutable simple graph. Vertices are addressed internally by their index in
/// declaration order; names are the stable external identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    /// `rank[v]` is the position of `v` in the linear order.
    rank: Option<Vec<usize>>,
}

/// JSON wire form: `{"vertices": [...], "edges": [[u, v], ...], "order": [...]?}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph, rejecting duplicate vertices, duplicate edges,
    /// self-loops and edges with undeclared endpoints.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Graph> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{name}`")));
            }
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let ui = *index
                .get(u)
                .ok_or_else(|| Error::InvalidGraph(format!("edge endpoint `{u}` is not a vertex")))?;
            let vi = *index
                .get(v)
                .ok_or_else(|| Error::InvalidGraph(format!("edge endpoint `{v}` is not a vertex")))?;
            pairs.push((ui, vi));
        }
        Self::from_index_edges_checked(names, index, &pairs)
    }

    /// Builds from index pairs; names must be distinct.
    pub fn from_indexed(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{name}`")));
            }
        }
        for &(u, v) in edges {
            if u >= names.len() || v >= names.len() {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
        }
        Self::from_index_edges_checked(names, index, edges)
    }

    fn from_index_edges_checked(
        names: Vec<String>,
        index: HashMap<String, usize>,
        edges: &[(usize, usize)],
    ) -> Result<Graph> {
        let mut adj = vec![Vec::new(); names.len()];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on `{}`", names[u])));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge `{}`-`{}`",
                    names[key.0], names[key.1]
                )));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            names,
            index,
            adj,
            edge_count: seen.len(),
            rank: None,
        })
    }

    /// Graph on vertices `0..n` named by their decimal index.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        Graph::from_indexed((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_edges(n, &edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least three vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path is simple")
    }

    pub fn empty() -> Graph {
        Graph::from_edges(0, &[]).expect("empty graph")
    }

    pub fn from_json(json: &GraphJson) -> Result<Graph> {
        let edges: Vec<(&str, &str)> = json.edges.iter().map(|[u, v]| (u.as_str(), v.as_str())).collect();
        let vertices: Vec<&str> = json.vertices.iter().map(String::as_str).collect();
        let g = Graph::new(&vertices, &edges)?;
        match &json.order {
            Some(seq) => g.with_order_names(seq),
            None => Ok(g),
        }
    }

    pub fn parse_json(text: &str) -> Result<Graph> {
        let json: GraphJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidGraph(format!("malformed graph JSON: {e}")))?;
        Graph::from_json(&json)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.names.clone(),
            edges: self
                .edges()
                .map(|(u, v)| [self.names[u].clone(), self.names[v].clone()])
                .collect(),
            order: self.order_sequence().map(|seq| seq.iter().map(|&v| self.names[v].clone()).collect()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_ordered(&self) -> bool {
        self.rank.is_some()
    }

    pub fn rank(&self, v: usize) -> Option<usize> {
        self.rank.as_ref().map(|r| r[v])
    }

    /// The linear order as a vertex sequence, if present.
    pub fn order_sequence(&self) -> Option<Vec<usize>> {
        self.rank.as_ref().map(|rank| {
            let mut seq = vec![0; rank.len()];
            for (v, &r) in rank.iter().enumerate() {
                seq[r] = v;
            }
            seq
        })
    }

    /// Attaches a linear order given as a permutation of the vertex indices.
    pub fn with_order(&self, seq: &[usize]) -> Result<Graph> {
        let n = self.vertex_count();
        if seq.len() != n {
            return Err(Error::InvalidGraph(format!(
                "order lists {} vertices but the graph has {n}",
                seq.len()
            )));
        }
        let mut rank = vec![usize::MAX; n];
        for (pos, &v) in seq.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(Error::InvalidGraph("order is not a permutation of the vertices".into()));
            }
            rank[v] = pos;
        }
        let mut g = self.clone();
        g.rank = Some(rank);
        Ok(g)
    }

    pub fn with_order_names<S: AsRef<str>>(&self, seq: &[S]) -> Result<Graph> {
        let idx = seq
            .iter()
            .map(|s| {
                self.index_of(s.as_ref())
                    .map_err(|_| Error::InvalidGraph(format!("order names unknown vertex `{}`", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        self.with_order(&idx)
    }

    /// The underlying unordered graph.
    pub fn reduct(&self) -> Graph {
        let mut g = self.clone();
        g.rank = None;
        g
    }

    /// Renames every vertex with `prefix` prepended.
    pub fn prefixed(&self, prefix: &str) -> Graph {
        let names: Vec<String> = self.names.iter().map(|n| format!("{prefix}{n}")).collect();
        let edges: Vec<_> = self.edges().collect();
        let mut g = Graph::from_indexed(names, &edges).expect("renaming preserves simplicity");
        g.rank = self.rank.clone();
        g
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet((0..self.vertex_count()).collect())
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }

    /// Membership mask for a vertex subset.
    pub fn mask(&self, set: &VertexSet) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count()];
        for &v in set.iter() {
            mask[v] = true;
        }
        mask
    }

    /// Number of edges with both endpoints in `set`.
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        let mask = self.mask(set);
        set.iter()
            .map(|&u| self.adj[u].iter().filter(|&&v| v > u && mask[v]).count())
            .sum()
    }

    /// Number of edges with both endpoints flagged in `mask`.
    pub fn edges_within_mask(&self, mask: &[bool]) -> usize {
        (0..self.vertex_count())
            .filter(|&u| mask[u])
            .map(|u| self.adj[u].iter().filter(|&&v| v > u && mask[v]).count())
            .sum()
    }
}

/// A subset of a host graph's vertices, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut v: Vec<usize> = it.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn from_names<S: AsRef<str>>(host: &Graph, names: &[S]) -> Result<Self> {
        names
            .iter()
            .map(|s| host.index_of(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(VertexSet::from_indices)
    }

    /// Parses a comma-separated list of vertex names.
    pub fn parse_list(host: &Graph, list: &str) -> Result<Self> {
        let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        VertexSet::from_names(host, &names)
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
    }

    pub fn names(&self, host: &Graph) -> Vec<String> {
        self.0.iter().map(|&v| host.name(v).to_string()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_indices(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| !other.contains(v))
    }

    pub fn with(&self, v: usize) -> VertexSet {
        let mut s = self.clone();
        if let Err(pos) = s.0.binary_search(&v) {
            s.0.insert(pos, v);
        }
        s
    }

    pub fn without(&self, v: usize) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    pub(crate) fn check_in(&self, host: &Graph) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= host.vertex_count() => Err(Error::UnknownVertex(format!("#{v}"))),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_indices(iter)
    }
}

/// An induced copy of a source graph inside a target: `map[i]` is the image
/// of source vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub image: VertexSet,
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn from_map(map: Vec<usize>) -> Self {
        Embedding {
            image: VertexSet::from_indices(map.iter().copied()),
            map,
        }
    }

    /// Image of a source-side vertex set.
    pub fn apply(&self, set: &VertexSet) -> VertexSet {
        set.iter().map(|&v| self.map[v]).collect()
    }

    /// `self ∘ inner`: first `inner` (into this embedding's source), then `self`.
    pub fn compose(&self, inner: &Embedding) -> Embedding {
        Embedding::from_map(inner.map.iter().map(|&v| self.map[v]).collect())
    }
}

pub fn delta(g: &Graph, alpha: &Rational) -> Rational {
    alpha * int(g.vertex_count() as i64) - int(g.edge_count() as i64)
}

/// `δ_α` of the subgraph induced on `set`.
pub fn delta_of(host: &Graph, set: &VertexSet, alpha: &Rational) -> Rational {
    alpha * int(set.len() as i64) - int(host.edges_within(set) as i64)
}

/// `δ(X / base) = δ(X ∪ base) − δ(base)` over induced subgraphs of `host`.
pub fn relative_delta(x: &VertexSet, base: &VertexSet, host: &Graph, alpha: &Rational) -> Result<Rational> {
    x.check_in(host)?;
    base.check_in(host)?;
    Ok(delta_of(host, &x.union(base), alpha) - delta_of(host, base, alpha))
}

/// Subgraph induced on `set`, vertices in increasing host index. The linear
/// order, if any, is restricted.
pub fn induced(g: &Graph, set: &VertexSet) -> Result<Graph> {
    set.check_in(g)?;
    let pos: HashMap<usize, usize> = set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let names = set.iter().map(|&v| g.name(v).to_string()).collect();
    let mut edges = Vec::new();
    for (i, &u) in set.iter().enumerate() {
        for v in g.neighbors(u) {
            if let Some(&j) = pos.get(v) {
                if j > i {
                    edges.push((i, j));
                }
            }
        }
    }
    let sub = Graph::from_indexed(names, &edges)?;
    match &g.rank {
        Some(rank) => {
            let mut seq: Vec<usize> = (0..set.len()).collect();
            seq.sort_by_key(|&i| rank[set.as_slice()[i]]);
            sub.with_order(&seq)
        }
        None => Ok(sub),
    }
}

pub fn order_expand<S: AsRef<str>>(g: &Graph, seq: &[S]) -> Result<Graph> {
    g.with_order_names(seq)
}

/// Identification of part of `C` with part of `B`: pairs `(c_vertex, b_vertex)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Glue {
    pub pairs: Vec<(String, String)>,
}

impl Glue {
    pub fn new<S: Into<String>>(pairs: impl IntoIterator<Item = (S, S)>) -> Self {
        Glue {
            pairs: pairs.into_iter().map(|(c, b)| (c.into(), b.into())).collect(),
        }
    }
}

/// Result of a free amalgam `B ⊗_A C`.
#[derive(Debug, Clone)]
pub struct Amalgam {
    pub graph: Graph,
    /// Index in `graph` of each vertex of `B`.
    pub b_map: Vec<usize>,
    /// Index in `graph` of each vertex of `C`.
    pub c_map: Vec<usize>,
}

impl Amalgam {
    pub fn b_embedding(&self) -> Embedding {
        Embedding::from_map(self.b_map.clone())
    }

    pub fn c_embedding(&self) -> Embedding {
        Embedding::from_map(self.c_map.clone())
    }
}

/// Free amalgam of `b` and `c` over the part identified by `glue`. Vertices of
/// `c` outside the glue are renamed to `prefix + name`. The result has exactly
/// the edges of `b` and of `c`. When both inputs are ordered, the glue must
/// respect both orders and the result carries a linear order extending both.
pub fn free_amalgam(b: &Graph, c: &Graph, glue: &Glue, prefix: &str) -> Result<Amalgam> {
    let mut c_to_b: HashMap<usize, usize> = HashMap::new();
    let mut b_used = BTreeSet::new();
    for (cn, bn) in &glue.pairs {
        let ci = c.index_of(cn)?;
        let bi = b.index_of(bn)?;
        if c_to_b.insert(ci, bi).is_some() || !b_used.insert(bi) {
            return Err(Error::Precondition("glue is not injective".into()));
        }
    }
    for (&c1, &b1) in &c_to_b {
        for (&c2, &b2) in &c_to_b {
            if c1 < c2 && c.has_edge(c1, c2) != b.has_edge(b1, b2) {
                return Err(Error::Precondition(format!(
                    "glue is not an isomorphism: `{}`-`{}` vs `{}`-`{}`",
                    c.name(c1),
                    c.name(c2),
                    b.name(b1),
                    b.name(b2)
                )));
            }
            if c1 != c2 {
                if let (Some(rc1), Some(rc2), Some(rb1), Some(rb2)) = (c.rank(c1), c.rank(c2), b.rank(b1), b.rank(b2)) {
                    if (rc1 < rc2) != (rb1 < rb2) {
                        return Err(Error::Precondition("glue does not preserve the vertex order".into()));
                    }
                }
            }
        }
    }
    if b.is_ordered() != c.is_ordered() {
        return Err(Error::Precondition("cannot amalgamate an ordered with an unordered graph".into()));
    }

    let mut names: Vec<String> = b.names().to_vec();
    let mut c_map = vec![usize::MAX; c.vertex_count()];
    for ci in 0..c.vertex_count() {
        c_map[ci] = match c_to_b.get(&ci) {
            Some(&bi) => bi,
            None => {
                names.push(format!("{prefix}{}", c.name(ci)));
                names.len() - 1
            }
        };
    }
    let mut edges: Vec<(usize, usize)> = b.edges().collect();
    for (u, v) in c.edges() {
        let (x, y) = (c_map[u], c_map[v]);
        if !(c_to_b.contains_key(&u) && c_to_b.contains_key(&v)) {
            edges.push((x, y));
        }
    }
    let graph = Graph::from_indexed(names, &edges).map_err(|e| match e {
        Error::InvalidGraph(msg) => Error::Precondition(format!("amalgam renaming clash: {msg}")),
        other => other,
    })?;
    let graph = if b.is_ordered() {
        let seq = merge_orders(graph.vertex_count(), b, c, &c_map)?;
        graph.with_order(&seq)?
    } else {
        graph
    };
    Ok(Amalgam {
        graph,
        b_map: (0..b.vertex_count()).collect(),
        c_map,
    })
}

/// Linear extension of the union of two chains agreeing on their overlap;
/// ties go to the smaller result index.
fn merge_orders(n: usize, b: &Graph, c: &Graph, c_map: &[usize]) -> Result<Vec<usize>> {
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    let mut add_chain = |seq: Vec<usize>| {
        for w in seq.windows(2) {
            succ[w[0]].push(w[1]);
            indeg[w[1]] += 1;
        }
    };
    add_chain(b.order_sequence().expect("ordered"));
    add_chain(c.order_sequence().expect("ordered").into_iter().map(|v| c_map[v]).collect());
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(Reverse(v)) = heap.pop() {
        out.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                heap.push(Reverse(w));
            }
        }
    }
    if out.len() != n {
        return Err(Error::Precondition("vertex orders are inconsistent on the glued part".into()));
    }
    Ok(out)
}
