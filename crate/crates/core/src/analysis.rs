//! Closed embeddings over `A`, the intersection structure of `B`-copies, and
//! the inductive colouring of tree-pair windows.
//!
//! Two `B`-copies are adjacent when their images share a closed `A`-copy. An
//! `m`-cycle with distinct connecting `A`-copies is the same thing as a cycle
//! of length `2m` in the bipartite incidence graph between `B`-copies and the
//! closed `A`-copies they contain, so cycles are found there.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::budget::Budget;
use crate::convex::BinaryMatrix;
use crate::error::{Error, Result};
use crate::graph::{delta_of, Embedding, Graph, VertexSet};
use crate::iso::{enumerate_copies, enumerate_copies_budgeted};
use crate::rational::Rational;
use crate::smooth::is_closed;

/// Induced copies of a pattern whose images are closed in the window.
#[derive(Debug, Clone)]
pub struct ClosedEmbeddingSet {
    pub copies: Vec<Embedding>,
    /// Induced copies examined, closed or not.
    pub examined: usize,
}

pub fn closed_embeddings(p: &Graph, window: &Graph, alpha: &Rational, budget: &mut Budget) -> Result<ClosedEmbeddingSet> {
    let all = enumerate_copies_budgeted(p, window, budget)?;
    let examined = all.len();
    let everything = window.all_vertices();
    let mut copies = Vec::new();
    for e in all {
        budget.tick("closedness test")?;
        if is_closed(&e.image, &everything, window, alpha)?.closed {
            copies.push(e);
        }
    }
    Ok(ClosedEmbeddingSet { copies, examined })
}

/// Adjacency of `B`-copies through shared closed `A`-copies.
#[derive(Debug, Clone)]
pub struct ComponentGraph {
    pub b_images: Vec<VertexSet>,
    /// Closed `A`-copies of the window lying inside at least one `B`-copy.
    pub a_copies: Vec<VertexSet>,
    /// `contains[i]`: indices into `a_copies` inside `b_images[i]`.
    pub contains: Vec<Vec<usize>>,
    /// `(i, j) ↦` shared `A`-copy indices, for `i < j` with a non-empty share.
    pub shared: BTreeMap<(usize, usize), Vec<usize>>,
    /// Component label of each `B`-copy (labels in order of first node).
    pub component: Vec<usize>,
    /// `distance[i][j]`, `None` across components.
    pub distance: Vec<Vec<Option<usize>>>,
}

impl ComponentGraph {
    pub fn node_count(&self) -> usize {
        self.b_images.len()
    }

    pub fn component_count(&self) -> usize {
        self.component.iter().max().map_or(0, |m| m + 1)
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&j| j != i && self.shared.contains_key(&(i.min(j), i.max(j))))
            .collect()
    }

    pub fn shared_between(&self, i: usize, j: usize) -> &[usize] {
        self.shared.get(&(i.min(j), i.max(j))).map_or(&[], |v| v.as_slice())
    }

    pub fn edge_count(&self) -> usize {
        self.shared.len()
    }
}

/// `b_images`: closed `B`-copies; `a_closed`: closed `A`-copies of the
/// window.
pub fn build_component_graph(b_images: &[VertexSet], a_closed: &[VertexSet]) -> ComponentGraph {
    let n = b_images.len();
    let mut a_copies = Vec::new();
    let mut a_index = BTreeMap::new();
    let mut contains = vec![Vec::new(); n];
    for a in a_closed {
        let holders: Vec<usize> = (0..n).filter(|&i| a.is_subset(&b_images[i])).collect();
        if holders.is_empty() {
            continue;
        }
        let idx = *a_index.entry(a.clone()).or_insert_with(|| {
            a_copies.push(a.clone());
            a_copies.len() - 1
        });
        for i in holders {
            contains[i].push(idx);
        }
    }
    let mut shared: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let common: Vec<usize> = contains[i].iter().copied().filter(|a| contains[j].contains(a)).collect();
            if !common.is_empty() {
                shared.insert((i, j), common);
            }
        }
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && shared.contains_key(&(i.min(j), i.max(j)))).collect())
        .collect();
    let mut distance = vec![vec![None; n]; n];
    let mut component = vec![usize::MAX; n];
    let mut label = 0;
    for s in 0..n {
        let mut queue = VecDeque::from([s]);
        distance[s][s] = Some(0);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if distance[s][v].is_none() {
                    distance[s][v] = Some(distance[s][u].expect("set") + 1);
                    queue.push_back(v);
                }
            }
        }
        if component[s] == usize::MAX {
            for t in 0..n {
                if distance[s][t].is_some() {
                    component[t] = label;
                }
            }
            label += 1;
        }
    }
    ComponentGraph {
        b_images: b_images.to_vec(),
        a_copies,
        contains,
        shared,
        component,
        distance,
    }
}

/// Distinct `B`-copies `copies[0..m]` with `connectors[k]` a closed `A`-copy
/// shared by `copies[k]` and `copies[k+1 mod m]`, all connectors distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub copies: Vec<usize>,
    pub connectors: Vec<VertexSet>,
}

impl CycleWitness {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// Consecutive copies share their connector; connectors and copies are
    /// distinct.
    pub fn replays(&self, cg: &ComponentGraph) -> bool {
        let m = self.copies.len();
        if m < 2 || self.connectors.len() != m {
            return false;
        }
        let distinct_copies: BTreeSet<usize> = self.copies.iter().copied().collect();
        let distinct_conn: BTreeSet<&VertexSet> = self.connectors.iter().collect();
        if distinct_copies.len() != m || distinct_conn.len() != m {
            return false;
        }
        (0..m).all(|k| {
            let (x, y) = (self.copies[k], self.copies[(k + 1) % m]);
            let c = &self.connectors[k];
            cg.a_copies.iter().any(|a| a == c)
                && c.is_subset(&cg.b_images[x])
                && c.is_subset(&cg.b_images[y])
        })
    }

    /// No two non-consecutive copies share a closed `A`-copy.
    pub fn chordless(&self, cg: &ComponentGraph) -> bool {
        let m = self.copies.len();
        (0..m).all(|i| {
            (i + 1..m).all(|j| {
                let consecutive = j == i + 1 || (i == 0 && j == m - 1);
                consecutive || cg.shared_between(self.copies[i], self.copies[j]).is_empty()
            })
        })
    }
}

/// A shortest cycle in the incidence graph, as an `m`-cycle of copies.
pub fn find_cycle(cg: &ComponentGraph) -> Option<CycleWitness> {
    let nb = cg.node_count();
    let na = cg.a_copies.len();
    let total = nb + na;
    let mut adj = vec![Vec::new(); total];
    for (i, list) in cg.contains.iter().enumerate() {
        for &a in list {
            adj[i].push(nb + a);
            adj[nb + a].push(i);
        }
    }
    let mut best: Option<Vec<usize>> = None;
    for root in 0..nb {
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if let Some(b) = &best {
                if 2 * dist[u] + 1 >= b.len() {
                    break;
                }
            }
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let len = dist[u] + dist[v] + 1;
                    if best.as_ref().map_or(true, |b| len < b.len()) {
                        let path = |mut x: usize| {
                            let mut p = vec![x];
                            while x != root {
                                x = parent[x];
                                p.push(x);
                            }
                            p
                        };
                        let pu = path(u);
                        let pv = path(v);
                        let mut cycle: Vec<usize> = pu.iter().rev().copied().collect();
                        cycle.extend(pv.iter().take(pv.len() - 1));
                        let distinct: BTreeSet<usize> = cycle.iter().copied().collect();
                        if distinct.len() == cycle.len() {
                            best = Some(cycle);
                        }
                    }
                }
            }
        }
    }
    let cycle = best?;
    // Rotate so the cycle starts at a copy node.
    let start = cycle.iter().position(|&x| x < nb).expect("bipartite cycle has copy nodes");
    let rotated: Vec<usize> = cycle[start..].iter().chain(&cycle[..start]).copied().collect();
    let copies = rotated.iter().step_by(2).copied().collect();
    let connectors = rotated
        .iter()
        .skip(1)
        .step_by(2)
        .map(|&x| cg.a_copies[x - nb].clone())
        .collect();
    Some(CycleWitness { copies, connectors })
}

#[derive(Debug, Clone)]
pub enum TreePairViolation {
    /// Two copies sharing more than one closed `A`-copy.
    SharedTwice { copies: (usize, usize), shared: Vec<VertexSet> },
    Cycle(CycleWitness),
}

#[derive(Debug, Clone)]
pub struct TreePairVerdict {
    pub tree_pair: bool,
    pub violation: Option<TreePairViolation>,
    pub b_copies: Vec<Embedding>,
    pub a_copies: Vec<Embedding>,
    pub graph: ComponentGraph,
    /// `δ` of the union of each component's copies.
    pub component_deltas: Vec<Rational>,
}

/// Closed copies of `A` and `B` in the window and their component graph.
pub fn analyse_window(a: &Graph, b: &Graph, window: &Graph, alpha: &Rational, budget: &mut Budget) -> Result<(ClosedEmbeddingSet, ClosedEmbeddingSet, ComponentGraph)> {
    let bs = closed_embeddings(b, window, alpha, budget)?;
    let as_ = closed_embeddings(a, window, alpha, budget)?;
    let images: Vec<VertexSet> = bs.copies.iter().map(|e| e.image.clone()).collect();
    let a_images: Vec<VertexSet> = as_.copies.iter().map(|e| e.image.clone()).collect();
    let cg = build_component_graph(&images, &a_images);
    Ok((bs, as_, cg))
}

/// Clause (a): pairs share at most one closed `A`-copy; clause (b): no
/// `m`-cycles.
pub fn is_tree_pair_window(a: &Graph, b: &Graph, window: &Graph, alpha: &Rational, budget: &mut Budget) -> Result<TreePairVerdict> {
    let in_b = enumerate_copies(a, b)?;
    let mut some_closed = false;
    for e in &in_b {
        if is_closed(&e.image, &b.all_vertices(), b, alpha)?.closed {
            some_closed = true;
            break;
        }
    }
    if !some_closed {
        return Err(Error::Precondition("A has no closed copy in B".into()));
    }
    let (bs, as_, cg) = analyse_window(a, b, window, alpha, budget)?;
    let mut violation = cg
        .shared
        .iter()
        .find(|(_, s)| s.len() > 1)
        .map(|(&(i, j), s)| TreePairViolation::SharedTwice {
            copies: (i, j),
            shared: s.iter().map(|&k| cg.a_copies[k].clone()).collect(),
        });
    if violation.is_none() {
        violation = find_cycle(&cg).map(TreePairViolation::Cycle);
    }
    let component_deltas = (0..cg.component_count())
        .map(|c| {
            let union = (0..cg.node_count())
                .filter(|&i| cg.component[i] == c)
                .fold(VertexSet::new(), |acc, i| acc.union(&cg.b_images[i]));
            delta_of(window, &union, alpha)
        })
        .collect();
    Ok(TreePairVerdict {
        tree_pair: violation.is_none(),
        violation,
        b_copies: bs.copies,
        a_copies: as_.copies,
        graph: cg,
        component_deltas,
    })
}

/// Colour of each closed `A`-copy of the window.
pub type Coloring = BTreeMap<VertexSet, u8>;

/// The `A`-copies of one `B`-copy in the fixed enumeration `row_enum`
/// (vertex sets of `B`).
fn positions(copy: &Embedding, row_enum: &[VertexSet]) -> Vec<VertexSet> {
    row_enum.iter().map(|s| copy.apply(s)).collect()
}

/// Breadth-first colouring: each component's first copy gets row
/// `root_row`; every further copy gets the least-index row of `y` agreeing
/// with the colour already fixed on the single `A`-copy it shares with its
/// parent.
pub fn build_coloring(y: &BinaryMatrix, cg: &ComponentGraph, b_copies: &[Embedding], row_enum: &[VertexSet], root_row: usize) -> Result<Coloring> {
    if row_enum.len() != y.col_count() {
        return Err(Error::DimensionMismatch {
            expected: y.col_count(),
            got: row_enum.len(),
        });
    }
    if root_row >= y.row_count() {
        return Err(Error::InvalidInput(format!("root row {} out of range", root_row + 1)));
    }
    if b_copies.len() != cg.node_count() {
        return Err(Error::DimensionMismatch {
            expected: cg.node_count(),
            got: b_copies.len(),
        });
    }
    if cg.shared.values().any(|s| s.len() > 1) || find_cycle(cg).is_some() {
        return Err(Error::Precondition("component graph has a cycle; not a tree-pair window".into()));
    }
    let mut f: Coloring = BTreeMap::new();
    let mut assigned = vec![false; cg.node_count()];
    let apply_row = |f: &mut Coloring, copy: usize, row: usize| -> Result<()> {
        for (p, set) in positions(&b_copies[copy], row_enum).into_iter().enumerate() {
            let c = y.get(row, p);
            if let Some(&old) = f.get(&set) {
                if old != c {
                    return Err(Error::Precondition(format!("conflicting colours at position {} of copy {copy}", p + 1)));
                }
            }
            f.insert(set, c);
        }
        Ok(())
    };
    for root in 0..cg.node_count() {
        if assigned[root] {
            continue;
        }
        apply_row(&mut f, root, root_row)?;
        assigned[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in cg.neighbors(u) {
                if assigned[v] {
                    continue;
                }
                let shared = &cg.a_copies[cg.shared_between(u, v)[0]];
                let pos = positions(&b_copies[v], row_enum)
                    .iter()
                    .position(|s| s == shared)
                    .ok_or_else(|| Error::Precondition(format!("shared copy is not in the enumeration of copy {v}")))?;
                let colour = f[shared];
                let row = (0..y.row_count()).find(|&r| y.get(r, pos) == colour).ok_or_else(|| {
                    Error::Precondition(format!("no row of Y has colour {colour} at position {}", pos + 1))
                })?;
                apply_row(&mut f, v, row)?;
                assigned[v] = true;
                queue.push_back(v);
            }
        }
    }
    Ok(f)
}

/// Distinct colouring vectors of the copies, in order of first appearance.
pub fn full_coloring_matrix(f: &Coloring, b_copies: &[Embedding], row_enum: &[VertexSet]) -> Result<BinaryMatrix> {
    let mut rows = Vec::new();
    for (i, copy) in b_copies.iter().enumerate() {
        let row = positions(copy, row_enum)
            .iter()
            .map(|s| {
                f.get(s)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput(format!("coloring undefined on an A-copy of B-copy {i}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        rows.push(row);
    }
    BinaryMatrix::dedup(rows)
}
