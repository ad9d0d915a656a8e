//! Exact minimisation of `δ_α(C) = α·|C| − e(C)` over `forced ⊆ C ⊆ allowed`.
//!
//! `δ_α` is submodular, so the minimisers form a lattice and the least one is
//! recovered as the source side of a minimum cut in the project-selection
//! network: one node per edge (profit `q`), one per vertex (cost `p`), with
//! `α = p/q`. The residual-reachable set after a maximum flow is the least
//! minimum cut, hence the least minimiser.

use std::collections::VecDeque;

use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::rational::{to_i64_parts, Rational};

const INF: i64 = i64::MAX / 4;

struct Network {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i64>,
    next: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Network {
    fn new(n: usize) -> Self {
        Network {
            head: vec![NIL; n],
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        for (a, b, cap) in [(u, v, c), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(cap);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut level = vec![NIL; self.head.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let mut e = self.head[u];
            while e != NIL {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] == NIL {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
                e = self.next[e];
            }
        }
        (level[t] != NIL).then_some(level)
    }

    fn augment(&mut self, u: usize, t: usize, pushed: i64, level: &[usize], iter: &mut [usize]) -> i64 {
        if u == t {
            return pushed;
        }
        while iter[u] != NIL {
            let e = iter[u];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let got = self.augment(v, t, pushed.min(self.cap[e]), level, iter);
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            iter[u] = self.next[e];
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) {
        while let Some(level) = self.levels(s, t) {
            let mut iter = self.head.clone();
            while self.augment(s, t, INF, &level, &mut iter) > 0 {}
        }
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let mut e = self.head[u];
            while e != NIL {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
                e = self.next[e];
            }
        }
        seen
    }
}

/// Least `C` with `forced ⊆ C ⊆ allowed` minimising `δ_α(C)`.
/// `forced` must be a subset of `allowed`; `α` must be non-negative.
pub fn least_delta_minimiser(
    host: &Graph,
    forced: &VertexSet,
    allowed: &VertexSet,
    alpha: &Rational,
) -> Result<VertexSet> {
    let (p, q) = to_i64_parts(alpha)?;
    let allowed_mask = host.mask(allowed);
    let forced_mask = host.mask(forced);
    let verts: Vec<usize> = allowed.iter().copied().collect();
    let mut node_of = vec![NIL; host.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        node_of[v] = i;
    }
    let edges: Vec<(usize, usize)> = host
        .edges()
        .filter(|&(u, v)| allowed_mask[u] && allowed_mask[v])
        .collect();
    let n_v = verts.len();
    let s = n_v + edges.len();
    let t = s + 1;
    let mut net = Network::new(t + 1);
    for (i, &v) in verts.iter().enumerate() {
        if forced_mask[v] {
            net.add(s, i, INF);
        }
        if p > 0 {
            net.add(i, t, p);
        }
    }
    for (j, &(u, v)) in edges.iter().enumerate() {
        let e = n_v + j;
        net.add(s, e, q);
        net.add(e, node_of[u], INF);
        net.add(e, node_of[v], INF);
    }
    net.max_flow(s, t);
    let side = net.reachable(s);
    Ok(VertexSet::from_indices(
        verts.iter().enumerate().filter(|&(i, _)| side[i]).map(|(_, &v)| v),
    ))
}
