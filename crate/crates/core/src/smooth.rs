//! The `≤_α` calculus: self-sufficiency, closure, class membership and
//! zero-minimal algebraicity.
//!
//! Small searches (at most [`EXHAUSTIVE_LIMIT`] free vertices) enumerate
//! intermediate sets by increasing size, so a reported violation is one of
//! minimum size. Larger ones go through the exact min-cut minimiser in
//! [`crate::flow`]; their witness is the least `δ`-minimising superset.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::flow::least_delta_minimiser;
use crate::graph::{delta, delta_of, free_amalgam, induced, Embedding, Glue, Graph, GraphJson, VertexSet};
use crate::iso::Matcher;
use crate::rational::{int, parse_rational, Rational};

/// Free-vertex count up to which closedness questions are settled by
/// enumerating subsets.
pub const EXHAUSTIVE_LIMIT: usize = 16;

/// Outcome of a (strict) self-sufficiency test. `witness` is an intermediate
/// set refuting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedVerdict {
    pub closed: bool,
    pub witness: Option<VertexSet>,
}

impl ClosedVerdict {
    fn yes() -> Self {
        ClosedVerdict { closed: true, witness: None }
    }

    fn no(witness: VertexSet) -> Self {
        ClosedVerdict {
            closed: false,
            witness: Some(witness),
        }
    }
}

fn check_subset(a: &VertexSet, b: &VertexSet, host: &Graph) -> Result<()> {
    a.check_in(host)?;
    b.check_in(host)?;
    if !a.is_subset(b) {
        return Err(Error::Precondition("first set is not contained in the second".into()));
    }
    Ok(())
}

/// First set `base ∪ X` (X ⊆ `free`, non-empty, smallest |X| first) accepted
/// by `bad`.
fn smallest_extension<F>(host: &Graph, base: &VertexSet, free: &[usize], mut bad: F) -> Option<VertexSet>
where
    F: FnMut(&VertexSet) -> bool,
{
    let n = free.len();
    debug_assert!(n < 32);
    for k in 1..=n {
        // Gosper's hack over k-subsets of the free vertices.
        let mut bits: u32 = (1u32 << k) - 1;
        while bits < (1u32 << n) {
            let set = base.union(&(0..n).filter(|i| bits >> i & 1 == 1).map(|i| free[i]).collect());
            if bad(&set) {
                return Some(set);
            }
            let c = bits & bits.wrapping_neg();
            let r = bits + c;
            bits = (((r ^ bits) >> 2) / c) | r;
        }
    }
    let _ = host;
    None
}

/// `A ≤_α B`: every `A ⊆ C ⊆ B` has `δ(C) ≥ δ(A)`.
pub fn is_closed(a: &VertexSet, b: &VertexSet, host: &Graph, alpha: &Rational) -> Result<ClosedVerdict> {
    check_subset(a, b, host)?;
    let base = delta_of(host, a, alpha);
    let free: Vec<usize> = b.difference(a).iter().copied().collect();
    if free.len() <= EXHAUSTIVE_LIMIT {
        return Ok(
            match smallest_extension(host, a, &free, |c| delta_of(host, c, alpha) < base) {
                Some(c) => ClosedVerdict::no(c),
                None => ClosedVerdict::yes(),
            },
        );
    }
    let min = least_delta_minimiser(host, a, b, alpha)?;
    Ok(if delta_of(host, &min, alpha) < base {
        ClosedVerdict::no(min)
    } else {
        ClosedVerdict::yes()
    })
}

/// `A ≤_α host` decided by min cut alone.
pub fn closed_in_host(a: &VertexSet, host: &Graph, alpha: &Rational) -> Result<bool> {
    a.check_in(host)?;
    let min = least_delta_minimiser(host, a, &host.all_vertices(), alpha)?;
    Ok(delta_of(host, &min, alpha) >= delta_of(host, a, alpha))
}

/// `A <_α B`: every `A ⊊ B' ⊆ B` has `δ(A) < δ(B')`.
pub fn is_strictly_closed(a: &VertexSet, b: &VertexSet, host: &Graph, alpha: &Rational) -> Result<ClosedVerdict> {
    check_subset(a, b, host)?;
    let base = delta_of(host, a, alpha);
    let free: Vec<usize> = b.difference(a).iter().copied().collect();
    if free.len() <= EXHAUSTIVE_LIMIT {
        return Ok(
            match smallest_extension(host, a, &free, |c| delta_of(host, c, alpha) <= base) {
                Some(c) => ClosedVerdict::no(c),
                None => ClosedVerdict::yes(),
            },
        );
    }
    for &v in &free {
        let min = least_delta_minimiser(host, &a.with(v), b, alpha)?;
        if delta_of(host, &min, alpha) <= base {
            return Ok(ClosedVerdict::no(min));
        }
    }
    Ok(ClosedVerdict::yes())
}

/// Smallest `≤_α`-closed superset of a set, with the violating sets absorbed
/// on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub closure: VertexSet,
    pub certificate: Vec<VertexSet>,
}

/// Absorbs violating extensions until the set is closed. Each absorbed set is
/// either a minimum-size violation or the least `δ`-minimiser, and both lie
/// inside every closed superset, so the fixpoint is the closure.
pub fn closure(s: &VertexSet, host: &Graph, alpha: &Rational) -> Result<ClosureResult> {
    s.check_in(host)?;
    let all = host.all_vertices();
    let mut current = s.clone();
    let mut certificate = Vec::new();
    loop {
        let verdict = is_closed(&current, &all, host, alpha)?;
        match verdict.witness {
            Some(w) if !verdict.closed => {
                certificate.push(w.clone());
                current = w;
            }
            _ => break,
        }
    }
    Ok(ClosureResult {
        closure: current,
        certificate,
    })
}

/// Which finite class membership is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    KPlus,
    KF,
    KMu,
}

/// Lower-bound function `f` for `K_α^f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ControlFunction {
    /// Step function: `f(n)` is the value at the largest listed size `≤ n`
    /// (zero below the first entry).
    Table(BTreeMap<usize, Rational>),
    /// `f(n) = ⌊log₂(n + 1)⌋`.
    Log2Floor,
}

impl ControlFunction {
    pub fn eval(&self, n: usize) -> Rational {
        match self {
            ControlFunction::Table(t) => t.range(..=n).next_back().map(|(_, v)| v.clone()).unwrap_or_else(|| int(0)),
            ControlFunction::Log2Floor => int((usize::BITS - 1 - (n + 1).leading_zeros()) as i64),
        }
    }

    fn validate(&self) -> Result<()> {
        if let ControlFunction::Table(t) = self {
            let values: Vec<&Rational> = t.values().collect();
            if values.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::InvalidInput("control function must be non-decreasing".into()));
            }
        }
        Ok(())
    }
}

/// One row of the `μ` table: `B` contains `A` (matched by vertex name) and
/// `B ∖ A` must be 0-minimally algebraic over `A`.
#[derive(Debug, Clone)]
pub struct MuEntry {
    pub base: Graph,
    pub over: Graph,
    pub bound: u64,
}

#[derive(Debug, Clone)]
pub struct ClassSpec {
    pub alpha: Rational,
    pub variant: Variant,
    pub f: Option<ControlFunction>,
    /// Pairs not listed are unbounded.
    pub mu: Option<Vec<MuEntry>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ControlJson {
    Named(String),
    Table(Vec<[String; 2]>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MuEntryJson {
    #[serde(rename = "A")]
    pub a: GraphJson,
    #[serde(rename = "B")]
    pub b: GraphJson,
    pub bound: u64,
}

/// `{"alpha":"2/1","variant":"k_mu","mu":[{"A":..,"B":..,"bound":2}],"f":[["1","0"],..]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassSpecJson {
    pub alpha: String,
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<ControlJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<MuEntryJson>>,
}

impl ClassSpec {
    pub fn k_plus(alpha: Rational) -> Self {
        ClassSpec {
            alpha,
            variant: Variant::KPlus,
            f: None,
            mu: None,
        }
    }

    pub fn k_f(alpha: Rational, f: ControlFunction) -> Self {
        ClassSpec {
            alpha,
            variant: Variant::KF,
            f: Some(f),
            mu: None,
        }
    }

    pub fn k_mu(alpha: Rational, mu: Vec<MuEntry>) -> Self {
        ClassSpec {
            alpha,
            variant: Variant::KMu,
            f: None,
            mu: Some(mu),
        }
    }

    pub fn from_json(json: &ClassSpecJson) -> Result<Self> {
        let alpha = parse_rational(&json.alpha)?;
        let f = match &json.f {
            None if json.variant == Variant::KF => Some(ControlFunction::Log2Floor),
            None => None,
            Some(ControlJson::Named(name)) if name == "log2" => Some(ControlFunction::Log2Floor),
            Some(ControlJson::Named(name)) => {
                return Err(Error::InvalidInput(format!("unknown control function `{name}`")))
            }
            Some(ControlJson::Table(rows)) => {
                let mut t = BTreeMap::new();
                for [n, v] in rows {
                    let n: usize = n
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad size `{n}` in control function")))?;
                    t.insert(n, parse_rational(v)?);
                }
                Some(ControlFunction::Table(t))
            }
        };
        let mu = match &json.mu {
            None => None,
            Some(rows) => Some(
                rows.iter()
                    .map(|r| {
                        Ok(MuEntry {
                            base: Graph::from_json(&r.a)?,
                            over: Graph::from_json(&r.b)?,
                            bound: r.bound,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let spec = ClassSpec {
            alpha,
            variant: json.variant,
            f,
            mu,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let json: ClassSpecJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed class spec: {e}")))?;
        ClassSpec::from_json(&json)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha < int(1) {
            return Err(Error::InvalidInput(format!("alpha must be at least 1, got {}", self.alpha)));
        }
        match self.variant {
            Variant::KPlus => {}
            Variant::KF => self
                .f
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("k_f requires a control function `f`".into()))?
                .validate()?,
            Variant::KMu => {
                let mu = self
                    .mu
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("k_mu requires a `mu` table".into()))?;
                for (i, e) in mu.iter().enumerate() {
                    e.validate(&self.alpha).map_err(|err| Error::InvalidInput(format!("mu entry {i}: {err}")))?;
                }
            }
        }
        Ok(())
    }
}

impl MuEntry {
    fn base_in_over(&self) -> Result<VertexSet> {
        let names: Vec<&str> = self.base.names().iter().map(String::as_str).collect();
        VertexSet::from_names(&self.over, &names)
    }

    fn validate(&self, alpha: &Rational) -> Result<()> {
        if self.base.is_empty() {
            return Err(Error::InvalidInput("base A must be non-empty".into()));
        }
        let a = self.base_in_over()?;
        let restricted = induced(&self.over, &a)?;
        for (u, v) in self.base.edges() {
            let (x, y) = (restricted.index_of(self.base.name(u))?, restricted.index_of(self.base.name(v))?);
            if !restricted.has_edge(x, y) {
                return Err(Error::InvalidInput("A is not an induced subgraph of B".into()));
            }
        }
        if restricted.edge_count() != self.base.edge_count() {
            return Err(Error::InvalidInput("A is not an induced subgraph of B".into()));
        }
        let ext = self.over.all_vertices().difference(&a);
        if ext.is_empty() {
            return Err(Error::InvalidInput("B adds no vertices over A".into()));
        }
        let class = classify_zero_algebraic(&ext, &a, &self.over, alpha)?;
        if class != ZeroAlgebraicity::ZeroMinimallyAlgebraic {
            return Err(Error::InvalidInput("B is not 0-minimally algebraic over A".into()));
        }
        if int(self.bound as i64) < delta(&self.base, alpha) {
            return Err(Error::InvalidInput(format!(
                "bound {} is below delta(A) = {}",
                self.bound,
                delta(&self.base, alpha)
            )));
        }
        Ok(())
    }
}

/// Why a graph is outside the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A subset with negative pre-dimension.
    NegativeSubset { set: VertexSet, delta: Rational },
    /// A subset below the control function.
    BelowControl { set: VertexSet, delta: Rational, bound: Rational },
    /// Too many pairwise disjoint copies of a `μ`-listed extension over one
    /// copy of its base.
    MuExceeded {
        entry: usize,
        base: Vec<usize>,
        copies: Vec<VertexSet>,
        bound: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub violation: Option<Violation>,
}

pub fn member(g: &Graph, spec: &ClassSpec, budget: &mut Budget) -> Result<Membership> {
    spec.validate()?;
    let alpha = &spec.alpha;
    let min = least_delta_minimiser(g, &VertexSet::new(), &g.all_vertices(), alpha)?;
    let d = delta_of(g, &min, alpha);
    if d.is_negative() {
        return Ok(Membership {
            member: false,
            violation: Some(Violation::NegativeSubset { set: min, delta: d }),
        });
    }
    let violation = match spec.variant {
        Variant::KPlus => None,
        Variant::KF => control_violation(g, alpha, spec.f.as_ref().expect("validated"), budget)?,
        Variant::KMu => {
            let mut found = None;
            for (i, entry) in spec.mu.as_ref().expect("validated").iter().enumerate() {
                if let Some(v) = mu_violation(g, i, entry, budget)? {
                    found = Some(v);
                    break;
                }
            }
            found
        }
    };
    Ok(Membership {
        member: violation.is_none(),
        violation,
    })
}

/// Depth-first walk over all non-empty subsets with running edge counts.
fn control_violation(g: &Graph, alpha: &Rational, f: &ControlFunction, budget: &mut Budget) -> Result<Option<Violation>> {
    fn walk(
        g: &Graph,
        alpha: &Rational,
        f: &ControlFunction,
        v: usize,
        chosen: &mut Vec<usize>,
        edges: usize,
        budget: &mut Budget,
    ) -> Result<Option<Violation>> {
        if v == g.vertex_count() {
            if chosen.is_empty() {
                return Ok(None);
            }
            budget.tick("control-function subset enumeration")?;
            let d = alpha * int(chosen.len() as i64) - int(edges as i64);
            let bound = f.eval(chosen.len());
            return Ok((d < bound).then(|| Violation::BelowControl {
                set: VertexSet::from_indices(chosen.iter().copied()),
                delta: d,
                bound,
            }));
        }
        if let Some(found) = walk(g, alpha, f, v + 1, chosen, edges, budget)? {
            return Ok(Some(found));
        }
        let added = chosen.iter().filter(|&&u| g.has_edge(u, v)).count();
        chosen.push(v);
        let r = walk(g, alpha, f, v + 1, chosen, edges + added, budget);
        chosen.pop();
        r
    }
    walk(g, alpha, f, 0, &mut Vec::new(), 0, budget)
}

fn mu_violation(g: &Graph, entry_index: usize, entry: &MuEntry, budget: &mut Budget) -> Result<Option<Violation>> {
    let a_in_b = entry.base_in_over()?;
    let ext: Vec<usize> = entry.over.all_vertices().difference(&a_in_b).iter().copied().collect();
    let base_pos: Vec<usize> = entry
        .base
        .names()
        .iter()
        .map(|n| entry.over.index_of(n))
        .collect::<Result<_>>()?;
    let mut base_maps: Vec<Vec<usize>> = Vec::new();
    Matcher::new(&entry.base, g).ignore_order().for_each(budget, |m| {
        base_maps.push(m.to_vec());
        ControlFlow::Continue(())
    })?;
    for phi in base_maps {
        let mut matcher = Matcher::new(&entry.over, g).ignore_order();
        for (i, &p) in base_pos.iter().enumerate() {
            matcher = matcher.fix(p, phi[i]);
        }
        let mut copies: BTreeSet<VertexSet> = BTreeSet::new();
        matcher.for_each(budget, |m| {
            copies.insert(ext.iter().map(|&v| m[v]).collect());
            ControlFlow::Continue(())
        })?;
        if (copies.len() as u64) <= entry.bound {
            continue;
        }
        let copies: Vec<VertexSet> = copies.into_iter().collect();
        let best = max_disjoint_family(&copies, budget)?;
        if best.len() as u64 > entry.bound {
            return Ok(Some(Violation::MuExceeded {
                entry: entry_index,
                base: phi,
                copies: best.into_iter().map(|i| copies[i].clone()).collect(),
                bound: entry.bound,
            }));
        }
    }
    Ok(None)
}

/// Maximum family of pairwise disjoint sets (exact branch and bound over the
/// conflict graph).
pub fn max_disjoint_family(sets: &[VertexSet], budget: &mut Budget) -> Result<Vec<usize>> {
    let n = sets.len();
    let conflict: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && !sets[i].is_disjoint(&sets[j])).collect())
        .collect();
    fn go(
        candidates: &[usize],
        conflict: &[Vec<bool>],
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.tick("disjoint-copy search")?;
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        if chosen.len() + candidates.len() <= best.len() {
            return Ok(());
        }
        for (k, &c) in candidates.iter().enumerate() {
            if chosen.len() + candidates.len() - k <= best.len() {
                break;
            }
            let rest: Vec<usize> = candidates[k + 1..].iter().copied().filter(|&d| !conflict[c][d]).collect();
            chosen.push(c);
            go(&rest, conflict, chosen, best, budget)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut best = Vec::new();
    go(&(0..n).collect::<Vec<_>>(), &conflict, &mut Vec::new(), &mut best, budget)?;
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroAlgebraicity {
    None,
    ZeroAlgebraic,
    ZeroMinimallyAlgebraic,
}

const ZERO_ALG_EXHAUSTIVE: usize = 18;

/// `δ(B/A) = 0` and every proper non-empty `B₀ ⊊ B` has `δ(B₀/A) > 0`.
fn zero_algebraic(b: &VertexSet, a: &VertexSet, host: &Graph, alpha: &Rational) -> Result<bool> {
    let base = delta_of(host, a, alpha);
    if delta_of(host, &a.union(b), alpha) != base {
        return Ok(false);
    }
    let free: Vec<usize> = b.iter().copied().collect();
    if free.len() <= ZERO_ALG_EXHAUSTIVE {
        let n = free.len();
        let full = (1u32 << n) - 1;
        for bits in 1..full {
            let set = a.union(&(0..n).filter(|i| bits >> i & 1 == 1).map(|i| free[i]).collect());
            if delta_of(host, &set, alpha) <= base {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    // Every proper non-empty B₀ contains some v and misses some w.
    for &v in &free {
        for &w in &free {
            if v == w {
                continue;
            }
            let allowed = a.union(b).without(w);
            let min = least_delta_minimiser(host, &a.with(v), &allowed, alpha)?;
            if delta_of(host, &min, alpha) <= base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Classifies `B` over a disjoint `A`. Minimality only needs the maximal
/// proper subsets `A ∖ {a}`: shrinking the base can only raise `δ(·/A₀)`.
pub fn classify_zero_algebraic(b: &VertexSet, a: &VertexSet, host: &Graph, alpha: &Rational) -> Result<ZeroAlgebraicity> {
    a.check_in(host)?;
    b.check_in(host)?;
    if !a.is_disjoint(b) {
        return Err(Error::Precondition("A and B overlap".into()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("A and B must be non-empty".into()));
    }
    if !zero_algebraic(b, a, host, alpha)? {
        return Ok(ZeroAlgebraicity::None);
    }
    for &x in a.iter() {
        if zero_algebraic(b, &a.without(x), host, alpha)? {
            return Ok(ZeroAlgebraicity::ZeroAlgebraic);
        }
    }
    Ok(ZeroAlgebraicity::ZeroMinimallyAlgebraic)
}

/// `D_m = A ∪ C_m` with the cycle `c₁…c_m` attached by `c_i ~ a_i` (i ≤ n)
/// and `c_i ~ a_n` (n < i ≤ m), `a_1..a_n` the vertices of `A` in order.
#[derive(Debug, Clone)]
pub struct ZeroMinWitness {
    pub graph: Graph,
    pub base: VertexSet,
    pub cycle: VertexSet,
}

pub fn build_zero_min_witness(a: &Graph, m: usize) -> Result<ZeroMinWitness> {
    let n = a.vertex_count();
    if n == 0 {
        return Err(Error::Precondition("A must be non-empty".into()));
    }
    if m < n.max(3) {
        return Err(Error::Precondition(format!("cycle length {m} is below max(3, |A|) = {}", n.max(3))));
    }
    let taken: BTreeSet<&str> = a.names().iter().map(String::as_str).collect();
    let prefix = if (1..=m).any(|i| taken.contains(format!("c{i}").as_str())) { "zm:c" } else { "c" };
    let mut names: Vec<String> = a.names().to_vec();
    names.extend((1..=m).map(|i| format!("{prefix}{i}")));
    let mut edges: Vec<(usize, usize)> = a.edges().collect();
    let c = |i: usize| n + i - 1;
    for i in 1..=m {
        edges.push((c(i), c(i % m + 1)));
        edges.push((c(i), i.min(n) - 1));
    }
    let graph = Graph::from_indexed(names, &edges)?;
    Ok(ZeroMinWitness {
        base: (0..n).collect(),
        cycle: (n..n + m).collect(),
        graph,
    })
}

/// One step of generic-window growth: `M' = M ⊗_A B`.
#[derive(Debug, Clone)]
pub struct WindowExtension {
    pub graph: Graph,
    /// Where `B` landed in `M'`.
    pub embedding: Embedding,
}

/// Glues `b` onto `m` along `glue` (pairs `(b_vertex, m_vertex)`) and checks
/// that both `M` and the new copy of `B` are closed in the result.
pub fn extend_window(m: &Graph, a: &VertexSet, b: &Graph, glue: &Glue, prefix: &str, alpha: &Rational) -> Result<WindowExtension> {
    a.check_in(m)?;
    let glued_m: VertexSet = glue.pairs.iter().map(|(_, mv)| m.index_of(mv)).collect::<Result<_>>()?;
    if glued_m != *a || glue.pairs.len() != a.len() {
        return Err(Error::Precondition("glue does not identify exactly the base set".into()));
    }
    if let Some(w) = is_closed(a, &m.all_vertices(), m, alpha)?.witness {
        return Err(Error::Precondition(format!(
            "base is not closed in the window: {:?}",
            w.names(m)
        )));
    }
    let a_in_b: VertexSet = glue.pairs.iter().map(|(bv, _)| b.index_of(bv)).collect::<Result<_>>()?;
    if !closed_in_host(&a_in_b, b, alpha)? {
        return Err(Error::Precondition("glued part is not closed in B".into()));
    }
    let am = free_amalgam(m, b, glue, prefix)?;
    let embedding = am.c_embedding();
    if !closed_in_host(&embedding.image, &am.graph, alpha)? {
        return Err(Error::Precondition("new copy of B is not closed in the extended window".into()));
    }
    if !closed_in_host(&m.all_vertices(), &am.graph, alpha)? {
        return Err(Error::Precondition("old window is not closed in the extended window".into()));
    }
    Ok(WindowExtension {
        graph: am.graph,
        embedding,
    })
}
