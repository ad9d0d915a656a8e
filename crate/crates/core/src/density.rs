//! Maximum density, degeneracy and vertex-colouring refutations of the
//! one-point Ramsey property.

use std::ops::ControlFlow;

use num_traits::Zero;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::flow::least_delta_minimiser;
use crate::graph::{delta_of, Graph, VertexSet};
use crate::iso::Matcher;
use crate::rational::{int, ratio, Rational};
use crate::smooth::{is_closed, member, ClassSpec};

/// Vertex count up to which [`max_density`] enumerates subsets.
pub const DENSITY_ENUMERATION_LIMIT: usize = 16;

/// Vertex count up to which [`non_ramsey_certificate`] looks for a concrete
/// bad colouring.
pub const COLORING_SEARCH_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub value: Rational,
    pub witness: VertexSet,
}

/// `max{e(S)/|S| : ∅ ≠ S ⊆ V}`.
pub fn max_density(g: &Graph) -> Result<DensityReport> {
    if g.vertex_count() <= DENSITY_ENUMERATION_LIMIT {
        max_density_enumerate(g)
    } else {
        max_density_flow(g)
    }
}

/// Exhaustive: first subset (by bitmask) of maximum density.
pub fn max_density_enumerate(g: &Graph) -> Result<DensityReport> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Precondition("density of the empty graph".into()));
    }
    if n > 24 {
        return Err(Error::Precondition("too many vertices to enumerate".into()));
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let mut edges = vec![0u16; 1 << n];
    let mut best: (usize, usize, u32) = (0, 1, 1);
    for mask in 1u32..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let e = edges[rest as usize] as usize + (nbr[low] & rest).count_ones() as usize;
        edges[mask as usize] = e as u16;
        let k = mask.count_ones() as usize;
        if e * best.1 > best.0 * k {
            best = (e, k, mask);
        }
    }
    Ok(DensityReport {
        value: ratio(best.0 as i64, best.1 as i64),
        witness: (0..n).filter(|&i| best.2 >> i & 1 == 1).collect(),
    })
}

/// Dinkelbach iteration on the min-cut minimiser of `λ|S| − e(S)`.
pub fn max_density_flow(g: &Graph) -> Result<DensityReport> {
    if g.vertex_count() == 0 {
        return Err(Error::Precondition("density of the empty graph".into()));
    }
    let mut witness = g.all_vertices();
    let mut lambda = ratio(g.edge_count() as i64, g.vertex_count() as i64);
    loop {
        let s = least_delta_minimiser(g, &VertexSet::new(), &g.all_vertices(), &lambda)?;
        if delta_of(g, &s, &lambda) >= Rational::zero() {
            return Ok(DensityReport { value: lambda, witness });
        }
        lambda = ratio(g.edges_within(&s) as i64, s.len() as i64);
        witness = s;
    }
}

/// `η*`: the largest minimum degree of a subgraph, by peeling.
pub fn degeneracy(g: &Graph) -> Result<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Precondition("degeneracy of the empty graph".into()));
    }
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut best = 0;
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| deg[v]).expect("vertex left");
        best = best.max(deg[v]);
        removed[v] = true;
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringOutcome {
    /// Colour of each vertex of `C`, in `0..r`.
    Found(Vec<usize>),
    /// Every colouring has a monochromatic copy.
    Exhausted,
}

/// Vertex `r`-colouring of `c` with no monochromatic induced copy of `b`.
/// Running out of budget is an error, never a verdict.
pub fn search_bad_coloring(c: &Graph, b: &Graph, r: usize, budget: &mut Budget) -> Result<ColoringOutcome> {
    if b.is_empty() {
        return Err(Error::Precondition("pattern graph must be non-empty".into()));
    }
    if r == 0 {
        return Err(Error::Precondition("need at least one colour".into()));
    }
    let n = c.vertex_count();
    // Copies indexed by their last vertex.
    let mut closing: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    let mut seen = std::collections::BTreeSet::new();
    Matcher::new(b, c).for_each(budget, |map| {
        let mut img = map.to_vec();
        img.sort_unstable();
        if seen.insert(img.clone()) {
            let last = *img.last().expect("non-empty");
            closing[last].push(img);
        }
        ControlFlow::Continue(())
    })?;
    let mut colors = vec![usize::MAX; n];
    fn go(
        v: usize,
        used: usize,
        r: usize,
        closing: &[Vec<Vec<usize>>],
        colors: &mut Vec<usize>,
        budget: &mut Budget,
    ) -> Result<bool> {
        if v == colors.len() {
            return Ok(true);
        }
        budget.tick("colouring search")?;
        for col in 0..r.min(used + 1) {
            colors[v] = col;
            let mono = closing[v].iter().any(|img| img.iter().all(|&u| colors[u] == col));
            if !mono && go(v + 1, used.max(col + 1), r, closing, colors, budget)? {
                return Ok(true);
            }
        }
        colors[v] = usize::MAX;
        Ok(false)
    }
    Ok(if go(0, 0, r, &closing, &mut colors, budget)? {
        ColoringOutcome::Found(colors)
    } else {
        ColoringOutcome::Exhausted
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RamseyVerdict {
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchStatus {
    NotRun,
    Found(Vec<usize>),
    Exhausted,
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct RamseyCertificate {
    pub r: usize,
    pub m_c: Rational,
    pub eta_star_b: usize,
    /// `r·η*(B)/2`.
    pub bound: Rational,
    pub verdict: RamseyVerdict,
    pub search: SearchStatus,
}

impl RamseyCertificate {
    pub fn bad_coloring(&self) -> Option<&[usize]> {
        match &self.search {
            SearchStatus::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// `m(C) < r·η*(B)/2` refutes `C → (B)_r`. Small `C` also get a concrete
/// colouring search.
pub fn non_ramsey_certificate(b: &Graph, c: &Graph, r: usize, budget: &mut Budget) -> Result<RamseyCertificate> {
    if r < 2 {
        return Err(Error::Precondition("r must be at least 2".into()));
    }
    let m_c = max_density(c)?.value;
    let eta = degeneracy(b)?;
    let bound = ratio((r * eta) as i64, 2);
    let verdict = if m_c < bound {
        RamseyVerdict::Refuted
    } else {
        RamseyVerdict::Inconclusive
    };
    let search = if c.vertex_count() <= COLORING_SEARCH_LIMIT {
        match search_bad_coloring(c, b, r, budget) {
            Ok(ColoringOutcome::Found(col)) => SearchStatus::Found(col),
            Ok(ColoringOutcome::Exhausted) => SearchStatus::Exhausted,
            Err(e) if e.is_budget() => SearchStatus::BudgetExceeded,
            Err(e) => return Err(e),
        }
    } else {
        SearchStatus::NotRun
    };
    Ok(RamseyCertificate {
        r,
        m_c,
        eta_star_b: eta,
        bound,
        verdict,
        search,
    })
}

/// Hypotheses of the cycle argument against the one-point Ramsey property.
#[derive(Debug, Clone)]
pub struct OnePointReport {
    pub cycle: Graph,
    pub alpha: Rational,
    pub r: usize,
    pub ordered: bool,
    pub in_class: bool,
    pub vertices_closed: bool,
    pub eta_star: usize,
    /// `r·η*(L)/2`, which must exceed `α ≥ m(C)` for every `C` in the class.
    pub bound: Rational,
    pub valid: bool,
}

/// `L = C_n`: in the class, every vertex closed, `η*(L) = 2`, and every class
/// member has `m(C) ≤ α < r = r·η*(L)/2`, so no member arrows `(L)_r`.
pub fn one_point_refutation(spec: &ClassSpec, n: usize, r: usize, ordered: bool, budget: &mut Budget) -> Result<OnePointReport> {
    if n < 3 {
        return Err(Error::Precondition("the cycle needs at least 3 vertices".into()));
    }
    if int(r as i64) <= spec.alpha {
        return Err(Error::Precondition(format!("r = {r} must exceed alpha = {}", spec.alpha)));
    }
    let plain = Graph::cycle(n);
    let cycle = if ordered {
        plain.with_order(&(0..n).collect::<Vec<_>>())?
    } else {
        plain.clone()
    };
    let in_class = member(&plain, spec, budget)?.member;
    let all = cycle.all_vertices();
    let mut vertices_closed = true;
    for v in 0..n {
        if !is_closed(&VertexSet::from_indices([v]), &all, &cycle, &spec.alpha)?.closed {
            vertices_closed = false;
        }
    }
    let eta_star = degeneracy(&cycle)?;
    let bound = ratio((r * eta_star) as i64, 2);
    let valid = in_class && vertices_closed && eta_star == 2 && spec.alpha < bound;
    Ok(OnePointReport {
        cycle,
        alpha: spec.alpha.clone(),
        r,
        ordered,
        in_class,
        vertices_closed,
        eta_star,
        bound,
        valid,
    })
}
