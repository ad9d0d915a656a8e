//! The triangle/cycle pair `(A; B)` at `α = 2` and the mechanical checks of
//! its properties.
//!
//! `B` is six disjoint triangles `A_1..A_6` plus, for every 2-subset
//! `u = {u1 < u2}` of `{1..6}`, a cycle `X_u = c_1..c_m` attached by
//! `c_1 ~ a^{u2}_2`, `c_{2p-1} ~ a^{u1}_{p*}` and `c_{2p} ~ a^{u2}_{p*}`
//! (`p = 1..m/2`, `p* ≡ p mod 3`). In the full construction `m_u = 6·ζ(u)`
//! with `ζ` the lexicographic enumeration of 2-subsets.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::flow::least_delta_minimiser;
use crate::graph::{delta, delta_of, free_amalgam, induced, relative_delta, Embedding, Glue, Graph, VertexSet};
use crate::iso::{are_isomorphic, enumerate_copies};
use crate::rational::{int, Rational};
use crate::smooth::{closed_in_host, closure, is_closed, member, ClassSpec, EXHAUSTIVE_LIMIT};

/// The 2-subsets of `{1..6}` in lexicographic order; `ζ(u)` is the position
/// plus one.
pub fn pairs() -> Vec<(usize, usize)> {
    (1..=6).flat_map(|i| (i + 1..=6).map(move |j| (i, j))).collect()
}

pub fn full_lengths() -> Vec<usize> {
    (1..=15).map(|z| 6 * z).collect()
}

/// Smaller cycle lengths keeping the shape: even, at least 6, pairwise
/// distinct, and `m/2 ≢ 2 (mod 3)` so `c_m` and `c_1` never share a
/// neighbour.
pub fn reduced_lengths() -> Vec<usize> {
    vec![6, 8, 12, 14, 18, 20, 24, 26, 30, 32, 36, 38, 42, 44, 48]
}

/// One cycle `X_u` with its two triangles.
#[derive(Debug, Clone)]
pub struct Block {
    pub u: (usize, usize),
    pub zeta: usize,
    pub length: usize,
    pub cycle: VertexSet,
}

#[derive(Debug, Clone)]
pub struct WitnessBundle {
    /// The triangle `A`.
    pub a: Graph,
    pub b: Graph,
    /// `A_1..A_6` as vertex sets of `b` (index 0 is `A_1`).
    pub triangles: Vec<VertexSet>,
    pub blocks: Vec<Block>,
    pub alpha: Rational,
}

impl WitnessBundle {
    /// `A_{u1} ∪ A_{u2}` for a block.
    pub fn base_of(&self, block: &Block) -> VertexSet {
        self.triangles[block.u.0 - 1].union(&self.triangles[block.u.1 - 1])
    }

    pub fn all_triangles(&self) -> VertexSet {
        self.triangles.iter().fold(VertexSet::new(), |acc, t| acc.union(t))
    }
}

pub fn a_name(i: usize, j: usize) -> String {
    format!("a{i}_{j}")
}

pub fn c_name(u: (usize, usize), k: usize) -> String {
    format!("x{}{}_{k}", u.0, u.1)
}

fn triangle() -> Graph {
    Graph::new(&["a_1", "a_2", "a_3"], &[("a_1", "a_2"), ("a_2", "a_3"), ("a_3", "a_1")]).expect("triangle")
}

pub fn build_witness() -> WitnessBundle {
    build_witness_with_lengths(&full_lengths()).expect("full lengths are valid")
}

pub fn build_reduced_witness() -> WitnessBundle {
    build_witness_with_lengths(&reduced_lengths()).expect("reduced lengths are valid")
}

/// Same construction with `lengths[ζ(u) − 1]` as the length of `X_u`.
pub fn build_witness_with_lengths(lengths: &[usize]) -> Result<WitnessBundle> {
    if lengths.len() != 15 {
        return Err(Error::DimensionMismatch {
            expected: 15,
            got: lengths.len(),
        });
    }
    let distinct: BTreeSet<usize> = lengths.iter().copied().collect();
    if distinct.len() != 15 {
        return Err(Error::InvalidInput("cycle lengths must be pairwise distinct".into()));
    }
    for &m in lengths {
        if m < 6 || m % 2 == 1 || (m / 2) % 3 == 2 {
            return Err(Error::InvalidInput(format!(
                "cycle length {m} must be even, at least 6, with m/2 not congruent to 2 mod 3"
            )));
        }
    }
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=6 {
        let base = names.len();
        for j in 1..=3 {
            names.push(a_name(i, j));
        }
        edges.extend([(base, base + 1), (base + 1, base + 2), (base + 2, base)]);
    }
    let a = |i: usize, j: usize| 3 * (i - 1) + (j - 1);
    let mut blocks = Vec::new();
    for (z, (&u, &m)) in pairs().iter().zip(lengths).enumerate() {
        let start = names.len();
        for k in 1..=m {
            names.push(c_name(u, k));
        }
        let c = |k: usize| start + k - 1;
        for k in 1..=m {
            edges.push((c(k), c(k % m + 1)));
        }
        edges.push((c(1), a(u.1, 2)));
        for p in 1..=m / 2 {
            let star = (p - 1) % 3 + 1;
            edges.push((c(2 * p - 1), a(u.0, star)));
            edges.push((c(2 * p), a(u.1, star)));
        }
        blocks.push(Block {
            u,
            zeta: z + 1,
            length: m,
            cycle: (start..start + m).collect(),
        });
    }
    let b = Graph::from_indexed(names, &edges)?;
    Ok(WitnessBundle {
        a: triangle(),
        b,
        triangles: (1..=6).map(|i| (a(i, 1)..=a(i, 3)).collect()).collect(),
        blocks,
        alpha: int(2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimStatus {
    Pass,
    Fail,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct ClaimCheck {
    pub claim: &'static str,
    pub status: ClaimStatus,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ClaimsReport {
    pub checks: Vec<ClaimCheck>,
}

impl ClaimsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == ClaimStatus::Pass)
    }

    pub fn get(&self, claim: &str) -> Option<&ClaimCheck> {
        self.checks.iter().find(|c| c.claim == claim)
    }
}

fn check<F>(checks: &mut Vec<ClaimCheck>, claim: &'static str, f: F)
where
    F: FnOnce() -> Result<(bool, String)>,
{
    let (status, detail) = match f() {
        Ok((true, d)) => (ClaimStatus::Pass, d),
        Ok((false, d)) => (ClaimStatus::Fail, d),
        Err(e) if e.is_budget() => (ClaimStatus::BudgetExhausted, e.to_string()),
        Err(e) => (ClaimStatus::Fail, e.to_string()),
    };
    checks.push(ClaimCheck { claim, status, detail });
}

/// Replays every property of the pair: the arithmetic, the six closed
/// triangle copies, the per-block facts, the closure claims and the two-copy
/// amalgam.
pub fn verify_claims(w: &WitnessBundle, budget: &mut Budget) -> ClaimsReport {
    let alpha = &w.alpha;
    let b = &w.b;
    let mut checks = Vec::new();

    check(&mut checks, "A1", || {
        let d = delta(&w.a, alpha);
        let zero_subset = (1u32..8).any(|mask| {
            let s: VertexSet = (0..3).filter(|i| mask >> i & 1 == 1).collect();
            delta_of(&w.a, &s, alpha).is_zero()
        });
        Ok((d == int(3) && !zero_subset && w.a.vertex_count() > 2, format!("delta(A) = {d}")))
    });

    check(&mut checks, "A2", || {
        let copies = enumerate_copies(&w.a, b)?;
        let images: BTreeSet<VertexSet> = copies.iter().map(|e| e.image.clone()).collect();
        let expected: BTreeSet<VertexSet> = w.triangles.iter().cloned().collect();
        let all = b.all_vertices();
        let mut closed = true;
        for t in &w.triangles {
            budget.tick("witness closedness")?;
            closed &= is_closed(t, &all, b, alpha)?.closed;
        }
        Ok((
            images == expected && closed,
            format!("{} triangle copies, all closed: {closed}", copies.len()),
        ))
    });

    check(&mut checks, "A3a", || {
        let mut bad = Vec::new();
        for blk in &w.blocks {
            let d = relative_delta(&blk.cycle, &w.base_of(blk), b, alpha)?;
            if d != int(-1) {
                bad.push(format!("{:?}: {d}", blk.u));
            }
        }
        Ok((bad.is_empty(), format!("{} blocks with relative delta -1; failures {bad:?}", w.blocks.len() - bad.len())))
    });

    check(&mut checks, "A3b", || {
        let parts: Vec<Graph> = w
            .blocks
            .iter()
            .map(|blk| induced(b, &blk.cycle.union(&w.base_of(blk))))
            .collect::<Result<_>>()?;
        let mut iso_pairs = Vec::new();
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                budget.tick("block isomorphism")?;
                if are_isomorphic(&parts[i], &parts[j]) {
                    iso_pairs.push((w.blocks[i].u, w.blocks[j].u));
                }
            }
        }
        Ok((iso_pairs.is_empty(), format!("isomorphic block pairs: {iso_pairs:?}")))
    });

    check(&mut checks, "A3c", || {
        // Every proper X' misses some w, so it suffices to minimise over
        // base ⊆ C ⊆ base ∪ X_u ∖ {w} for each w.
        for blk in &w.blocks {
            let base = w.base_of(blk);
            let host_set = base.union(&blk.cycle);
            let target = delta_of(b, &base, alpha);
            if blk.length <= EXHAUSTIVE_LIMIT {
                let cyc: Vec<usize> = blk.cycle.iter().copied().collect();
                for mask in 1u32..(1 << cyc.len()) - 1 {
                    budget.tick("segment enumeration")?;
                    let x: VertexSet = (0..cyc.len()).filter(|i| mask >> i & 1 == 1).map(|i| cyc[i]).collect();
                    if delta_of(b, &base.union(&x), alpha) < target {
                        return Ok((false, format!("block {:?}: proper part {:?} has negative relative delta", blk.u, x.names(b))));
                    }
                }
            }
            for &v in blk.cycle.iter() {
                budget.tick("segment flow")?;
                let min = least_delta_minimiser(b, &base, &host_set.without(v), alpha)?;
                if delta_of(b, &min, alpha) < target {
                    return Ok((false, format!("block {:?}: a proper part has negative relative delta", blk.u)));
                }
            }
        }
        Ok((true, "every proper part of every cycle has relative delta >= 0".into()))
    });

    check(&mut checks, "A4", || {
        let db = delta(b, alpha);
        let da = delta(&w.a, alpha);
        Ok((db == da && db == int(3), format!("delta(B) = {db}, delta(A) = {da}")))
    });

    check(&mut checks, "B1", || {
        let all_a = w.all_triangles();
        let min = least_delta_minimiser(b, &all_a, &b.all_vertices(), alpha)?;
        let m = delta_of(b, &min, alpha);
        let mut minus = Vec::new();
        for blk in &w.blocks {
            let d = delta_of(b, &b.all_vertices().difference(&blk.cycle), alpha);
            if d != int(4) {
                minus.push(format!("{:?}: {d}", blk.u));
            }
        }
        Ok((
            m == int(3) && minus.is_empty(),
            format!("min delta over supersets of the triangles = {m}; delta(B - X_u) != 4 for {minus:?}"),
        ))
    });

    check(&mut checks, "B2", || {
        // The least minimiser over supersets of A_i ∪ A_j being all of B makes
        // B the unique minimiser: every proper superset has delta > 3.
        let all = b.all_vertices();
        for i in 0..6 {
            for j in i + 1..6 {
                budget.tick("pair closure")?;
                let s = w.triangles[i].union(&w.triangles[j]);
                let min = least_delta_minimiser(b, &s, &all, alpha)?;
                if min != all || delta_of(b, &min, alpha) != int(3) {
                    return Ok((false, format!("closure of A_{} and A_{} is not B", i + 1, j + 1)));
                }
                if closure(&s, b, alpha)?.closure != all {
                    return Ok((false, format!("closure of A_{} and A_{} is not B", i + 1, j + 1)));
                }
            }
        }
        Ok((true, "all 15 pairs of triangles close to B; B is the unique delta-minimiser over each".into()))
    });

    check(&mut checks, "B3", || {
        for (i, t) in w.triangles.iter().enumerate() {
            if closure(t, b, alpha)?.closure != *t {
                return Ok((false, format!("A_{} is not closed", i + 1)));
            }
        }
        Ok((true, "each A_i is its own closure".into()))
    });

    check(&mut checks, "K0", || {
        let m = member(b, &ClassSpec::k_plus(alpha.clone()), budget)?;
        Ok((m.member, format!("B in K_2^+: {}", m.member)))
    });

    check(&mut checks, "C", || {
        let win = WitnessWindow::single(w).extend(w, 0, 0, 0, "w1:")?;
        let d = delta(&win.graph, alpha);
        let mut closed = true;
        for c in &win.copies {
            closed &= closed_in_host(&c.image, &win.graph, alpha)?;
        }
        let inter = win.copies[0].image.intersection(&win.copies[1].image);
        let di = delta_of(&win.graph, &inter, alpha);
        let expected_edges = 2 * b.edge_count() - w.a.edge_count();
        Ok((
            d == int(3) && closed && di == int(3) && win.graph.edge_count() == expected_edges,
            format!("two-copy window: delta = {d}, both copies closed: {closed}, delta(intersection) = {di}"),
        ))
    });

    ClaimsReport { checks }
}

/// Ordered expansions of `A` and `B`. Every linear order on a triangle gives
/// the same ordered graph, so `A` carries its listed order.
#[derive(Debug, Clone)]
pub struct OrderedWitness {
    pub a: Graph,
    pub b: Graph,
}

pub fn build_ordered_witness<S: AsRef<str>>(w: &WitnessBundle, seq: &[S]) -> Result<OrderedWitness> {
    Ok(OrderedWitness {
        a: w.a.with_order(&[0, 1, 2])?,
        b: w.b.with_order_names(seq)?,
    })
}

/// A finite window: copies of `B` glued along closed triangles.
#[derive(Debug, Clone)]
pub struct WitnessWindow {
    pub graph: Graph,
    /// Each placed copy of `B`, as an embedding of `w.b`.
    pub copies: Vec<Embedding>,
}

impl WitnessWindow {
    pub fn single(w: &WitnessBundle) -> Self {
        WitnessWindow {
            graph: w.b.clone(),
            copies: vec![Embedding::from_map((0..w.b.vertex_count()).collect())],
        }
    }

    /// Same, for an ordered expansion of `B`.
    pub fn single_ordered(b: &Graph) -> Self {
        WitnessWindow {
            graph: b.clone(),
            copies: vec![Embedding::from_map((0..b.vertex_count()).collect())],
        }
    }

    /// Glues a new copy of `B` by identifying its triangle `new_triangle`
    /// with triangle `host_triangle` of placed copy `host_copy`. Triangles
    /// are 0-based; vertices are matched in increasing order of rank (or
    /// index when unordered).
    pub fn extend(&self, w: &WitnessBundle, host_copy: usize, host_triangle: usize, new_triangle: usize, prefix: &str) -> Result<WitnessWindow> {
        self.extend_with(&w.b, w, host_copy, host_triangle, new_triangle, prefix)
    }

    /// As [`WitnessWindow::extend`] with `b` a (possibly ordered) expansion of
    /// the witness `B`.
    pub fn extend_with(
        &self,
        b: &Graph,
        w: &WitnessBundle,
        host_copy: usize,
        host_triangle: usize,
        new_triangle: usize,
        prefix: &str,
    ) -> Result<WitnessWindow> {
        let host = self
            .copies
            .get(host_copy)
            .ok_or_else(|| Error::Precondition(format!("no placed copy {host_copy}")))?;
        if host_triangle >= 6 || new_triangle >= 6 {
            return Err(Error::Precondition("triangle index out of range".into()));
        }
        let key = |g: &Graph, v: usize| g.rank(v).unwrap_or(v);
        let mut in_window: Vec<usize> = host.apply(&w.triangles[host_triangle]).iter().copied().collect();
        in_window.sort_by_key(|&v| key(&self.graph, v));
        let mut in_new: Vec<usize> = w.triangles[new_triangle].iter().copied().collect();
        in_new.sort_by_key(|&v| key(b, v));
        let glue = Glue::new(
            in_new
                .iter()
                .zip(&in_window)
                .map(|(&c, &m)| (b.name(c).to_string(), self.graph.name(m).to_string())),
        );
        let am = free_amalgam(&self.graph, b, &glue, prefix)?;
        let alpha = &w.alpha;
        let new_copy = am.c_embedding();
        if !closed_in_host(&new_copy.image, &am.graph, alpha)? || !closed_in_host(&self.graph.all_vertices(), &am.graph, alpha)? {
            return Err(Error::Precondition("extension is not a closed amalgam".into()));
        }
        let mut copies = self.copies.clone();
        copies.push(new_copy);
        Ok(WitnessWindow { graph: am.graph, copies })
    }
}
