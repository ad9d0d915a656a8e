//! Induced-subgraph embedding search by backtracking.
//!
//! Pattern vertices are matched in a connectivity-first order so that every
//! vertex after the first of its component has an already-mapped neighbour;
//! candidates are then drawn from that neighbour's image adjacency only.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{Embedding, Graph, VertexSet};

const UNMAPPED: usize = usize::MAX;

/// Backtracking search for induced embeddings of `pattern` into `target`.
/// Order preservation is enforced when both graphs are ordered.
pub struct Matcher<'a> {
    pattern: &'a Graph,
    target: &'a Graph,
    ordered: bool,
    fixed: Vec<usize>,
    forbidden: Vec<bool>,
}

impl<'a> Matcher<'a> {
    pub fn new(pattern: &'a Graph, target: &'a Graph) -> Self {
        Matcher {
            pattern,
            target,
            ordered: pattern.is_ordered() && target.is_ordered(),
            fixed: vec![UNMAPPED; pattern.vertex_count()],
            forbidden: vec![false; target.vertex_count()],
        }
    }

    /// Pins pattern vertex `p` to target vertex `t`.
    pub fn fix(mut self, p: usize, t: usize) -> Self {
        self.fixed[p] = t;
        self
    }

    /// Target vertices that may only be used by pinned pattern vertices.
    pub fn forbid(mut self, set: &VertexSet) -> Self {
        for &v in set.iter() {
            self.forbidden[v] = true;
        }
        self
    }

    pub fn ignore_order(mut self) -> Self {
        self.ordered = false;
        self
    }

    fn matching_order(&self) -> (Vec<usize>, Vec<usize>) {
        let k = self.pattern.vertex_count();
        let mut placed = vec![false; k];
        let mut placed_nbrs = vec![0usize; k];
        let mut order = Vec::with_capacity(k);
        let mut parent = vec![UNMAPPED; k];
        for (p, &t) in self.fixed.iter().enumerate() {
            if t != UNMAPPED {
                placed[p] = true;
                order.push(p);
                for &w in self.pattern.neighbors(p) {
                    placed_nbrs[w] += 1;
                    if parent[w] == UNMAPPED {
                        parent[w] = p;
                    }
                }
            }
        }
        while order.len() < k {
            let next = (0..k)
                .filter(|&p| !placed[p])
                .max_by_key(|&p| (placed_nbrs[p], self.pattern.degree(p), std::cmp::Reverse(p)))
                .expect("unplaced vertex exists");
            placed[next] = true;
            order.push(next);
            for &w in self.pattern.neighbors(next) {
                placed_nbrs[w] += 1;
                if parent[w] == UNMAPPED {
                    parent[w] = next;
                }
            }
        }
        (order, parent)
    }

    /// Calls `visit` with every pattern→target map. Stops early on `Break`.
    pub fn for_each<F>(&self, budget: &mut Budget, mut visit: F) -> Result<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let k = self.pattern.vertex_count();
        if k > self.target.vertex_count() {
            return Ok(());
        }
        for (p, &t) in self.fixed.iter().enumerate() {
            if t != UNMAPPED && t >= self.target.vertex_count() {
                return Err(Error::UnknownVertex(format!("#{t}")));
            }
            if t != UNMAPPED && self.target.degree(t) < self.pattern.degree(p) {
                return Ok(());
            }
        }
        let (order, parent) = self.matching_order();
        let mut state = State {
            map: vec![UNMAPPED; k],
            inverse: vec![UNMAPPED; self.target.vertex_count()],
        };
        let _ = self.extend(0, &order, &parent, &mut state, budget, &mut visit)?;
        Ok(())
    }

    fn extend<F>(
        &self,
        depth: usize,
        order: &[usize],
        parent: &[usize],
        st: &mut State,
        budget: &mut Budget,
        visit: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if depth == order.len() {
            return Ok(visit(&st.map));
        }
        budget.tick("embedding search")?;
        let p = order[depth];
        let pinned = self.fixed[p];
        let all: Vec<usize>;
        let candidates: &[usize] = if pinned != UNMAPPED {
            std::slice::from_ref(&self.fixed[p])
        } else if parent[p] != UNMAPPED && st.map[parent[p]] != UNMAPPED {
            self.target.neighbors(st.map[parent[p]])
        } else {
            all = (0..self.target.vertex_count()).collect();
            &all
        };
        for &t in candidates {
            if st.inverse[t] != UNMAPPED || (pinned == UNMAPPED && self.forbidden[t]) {
                continue;
            }
            if !self.feasible(p, t, st) {
                continue;
            }
            st.map[p] = t;
            st.inverse[t] = p;
            let flow = self.extend(depth + 1, order, parent, st, budget, visit)?;
            st.map[p] = UNMAPPED;
            st.inverse[t] = UNMAPPED;
            if flow.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn feasible(&self, p: usize, t: usize, st: &State) -> bool {
        if self.target.degree(t) < self.pattern.degree(p) {
            return false;
        }
        let mut mapped_pattern_nbrs = 0;
        for &w in self.pattern.neighbors(p) {
            let img = st.map[w];
            if img != UNMAPPED {
                if !self.target.has_edge(t, img) {
                    return false;
                }
                mapped_pattern_nbrs += 1;
            }
        }
        let used_target_nbrs = self
            .target
            .neighbors(t)
            .iter()
            .filter(|&&x| st.inverse[x] != UNMAPPED)
            .count();
        if used_target_nbrs != mapped_pattern_nbrs {
            return false;
        }
        if self.ordered {
            let rp = self.pattern.rank(p).expect("ordered");
            let rt = self.target.rank(t).expect("ordered");
            for (w, &img) in st.map.iter().enumerate() {
                if img != UNMAPPED {
                    let pw = self.pattern.rank(w).expect("ordered");
                    let tw = self.target.rank(img).expect("ordered");
                    if (rp < pw) != (rt < tw) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

struct State {
    map: Vec<usize>,
    inverse: Vec<usize>,
}

/// Every induced copy of `pattern` in `target`, one per image set, each with
/// the lexicographically least vertex map; sorted by image.
pub fn enumerate_copies(pattern: &Graph, target: &Graph) -> Result<Vec<Embedding>> {
    enumerate_copies_budgeted(pattern, target, &mut Budget::unlimited())
}

pub fn enumerate_copies_budgeted(pattern: &Graph, target: &Graph, budget: &mut Budget) -> Result<Vec<Embedding>> {
    if pattern.is_empty() {
        return Err(Error::Precondition("pattern graph must be non-empty".into()));
    }
    let mut best: BTreeMap<VertexSet, Vec<usize>> = BTreeMap::new();
    Matcher::new(pattern, target).for_each(budget, |map| {
        let image = VertexSet::from_indices(map.iter().copied());
        match best.get_mut(&image) {
            Some(current) if map < current.as_slice() => *current = map.to_vec(),
            Some(_) => {}
            None => {
                best.insert(image, map.to_vec());
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(best
        .into_iter()
        .map(|(image, map)| Embedding { image, map })
        .collect())
}

/// Number of pattern→target maps (not image sets).
pub fn count_maps(pattern: &Graph, target: &Graph) -> Result<usize> {
    let mut n = 0;
    Matcher::new(pattern, target).for_each(&mut Budget::unlimited(), |_| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}

/// Graph isomorphism; order-preserving when both graphs are ordered.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.vertex_count() != b.vertex_count()
        || a.edge_count() != b.edge_count()
        || a.degree_sequence() != b.degree_sequence()
    {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let mut found = false;
    Matcher::new(a, b)
        .for_each(&mut Budget::unlimited(), |_| {
            found = true;
            ControlFlow::Break(())
        })
        .expect("unlimited budget");
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disjoint_triangles() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap()
    }

    #[test]
    fn single_vertex_in_c4() {
        assert_eq!(enumerate_copies(&Graph::from_edges(1, &[]).unwrap(), &Graph::cycle(4)).unwrap().len(), 4);
    }

    #[test]
    fn triangle_copies_are_images_not_maps() {
        let k4 = Graph::complete(4);
        let tri = Graph::complete(3);
        assert_eq!(enumerate_copies(&tri, &k4).unwrap().len(), 4);
        assert_eq!(count_maps(&tri, &k4).unwrap(), 24);
        let copies = enumerate_copies(&tri, &k4).unwrap();
        assert_eq!(copies[0].map, vec![0, 1, 2]);
    }

    #[test]
    fn induced_not_subgraph() {
        // a path on 3 vertices is a subgraph of a triangle but not induced
        assert!(enumerate_copies(&Graph::path(3), &Graph::complete(3)).unwrap().is_empty());
        assert_eq!(enumerate_copies(&Graph::path(3), &Graph::cycle(5)).unwrap().len(), 5);
    }

    #[test]
    fn isomorphism_examples() {
        let c6 = Graph::cycle(6);
        assert!(are_isomorphic(&c6, &c6));
        assert!(!are_isomorphic(&c6, &disjoint_triangles()));
        let relabelled = Graph::from_edges(6, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)]).unwrap();
        assert!(are_isomorphic(&c6, &relabelled));
    }

    #[test]
    fn ordered_isomorphism_respects_order() {
        let p = Graph::path(3);
        let a = p.with_order(&[0, 1, 2]).unwrap();
        let b = p.with_order(&[1, 0, 2]).unwrap();
        assert!(are_isomorphic(&a.reduct(), &b.reduct()));
        assert!(!are_isomorphic(&a, &b));
        let c = p.with_order(&[2, 1, 0]).unwrap();
        assert!(are_isomorphic(&a, &c));
    }

    #[test]
    fn pinned_search() {
        let k4 = Graph::complete(4);
        let tri = Graph::complete(3);
        let mut n = 0;
        Matcher::new(&tri, &k4)
            .fix(0, 3)
            .for_each(&mut Budget::unlimited(), |m| {
                assert_eq!(m[0], 3);
                n += 1;
                ControlFlow::Continue(())
            })
            .unwrap();
        assert_eq!(n, 6);
    }

    #[test]
    fn budget_is_reported() {
        let mut budget = Budget::new(3);
        let err = enumerate_copies_budgeted(&Graph::complete(3), &Graph::complete(6), &mut budget).unwrap_err();
        assert!(err.is_budget());
    }
}
