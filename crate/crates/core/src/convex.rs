//! Coloring matrices, Dirac weights and the convex Ramsey condition.
//!
//! A 0/1 matrix `Y` (rows: coloring vectors of `B`-copies) satisfies the
//! condition when some probability vector `R` over its rows has
//! `(R·Y)_j − (R·Y)_k ≤ 1/2` for every pair of columns. Choosing a row subset
//! and a positive `R` on it is the same as a non-negative `R` on all rows, so
//! one LP decides it:
//!
//! ```text
//! minimize t   s.t.  Σ_i R_i (Y_ij − Y_ik) ≤ t  (j ≠ k),   Σ_i R_i = 1,  R ≥ 0.
//! ```
//!
//! The dual is a mixture `λ` of Dirac weights maximising `min_i Y_i·V` with
//! `V = Σ λ_jk (e_j − e_k)`; when that minimum exceeds the threshold no `R`
//! can work, which is the infeasibility certificate.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{Embedding, VertexSet};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{half, int, Rational};

/// Default bound on the column spread.
pub fn default_threshold() -> Rational {
    half()
}

/// 0/1 matrix with pairwise distinct rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    rows: Vec<Vec<u8>>,
}

impl BinaryMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidInput("matrix needs at least one row and one column".into()));
        }
        let m = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: r.len() });
            }
            if r.iter().any(|&x| x > 1) {
                return Err(Error::InvalidInput(format!("row {} has an entry other than 0/1", i + 1)));
            }
        }
        let distinct: BTreeSet<&Vec<u8>> = rows.iter().collect();
        if distinct.len() != rows.len() {
            return Err(Error::InvalidInput("matrix has repeated rows".into()));
        }
        Ok(BinaryMatrix { rows })
    }

    /// Keeps the first occurrence of each row.
    pub fn dedup(rows: Vec<Vec<u8>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        BinaryMatrix::new(rows.into_iter().filter(|r| seen.insert(r.clone())).collect())
    }

    /// One row per line, entries separated by whitespace. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    _ => Err(Error::InvalidInput(format!("line {}: `{t}` is not 0 or 1", ln + 1))),
                })
                .collect::<Result<Vec<u8>>>()?;
            rows.push(row);
        }
        BinaryMatrix::new(rows)
    }

    pub fn to_text(&self) -> String {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.rows[i][j]
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        BinaryMatrix::new(perm.iter().map(|&i| self.rows[i].clone()).collect())
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Result<Self> {
        BinaryMatrix::new(self.rows.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect())
    }

    /// Same rows, sorted.
    pub fn sorted(&self) -> Self {
        let mut rows = self.rows.clone();
        rows.sort();
        BinaryMatrix { rows }
    }

    /// Lexicographically least sorted form over all column permutations.
    pub fn canonical(&self) -> Self {
        let m = self.col_count();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut best = self.sorted();
        loop {
            let cand = BinaryMatrix {
                rows: self.rows.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect(),
            }
            .sorted();
            if cand < best {
                best = cand;
            }
            if !next_permutation(&mut perm) {
                return best;
            }
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The matrix whose convex Ramsey condition fails for the triangle/cycle
/// tree-pair.
pub fn witness_matrix() -> BinaryMatrix {
    BinaryMatrix::new(vec![
        vec![1, 1, 1, 1, 0, 0],
        vec![1, 1, 1, 0, 1, 0],
        vec![1, 1, 1, 0, 0, 1],
        vec![0, 1, 1, 0, 0, 0],
        vec![1, 0, 1, 0, 0, 0],
        vec![1, 1, 0, 0, 0, 0],
    ])
    .expect("valid matrix")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityVector(Vec<Rational>);

impl ProbabilityVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("probability vector is empty".into()));
        }
        if entries.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInput("probability vector has a negative entry".into()));
        }
        let sum: Rational = entries.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidInput(format!("probability vector sums to {sum}, not 1")));
        }
        Ok(ProbabilityVector(entries))
    }

    /// Point mass on entry `i` of `n`.
    pub fn point(n: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        ProbabilityVector(v)
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityVector(vec![Rational::new(1.into(), (n as i64).into()); n])
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Zero-sum weight vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        let sum: Rational = entries.iter().sum();
        if !sum.is_zero() {
            return Err(Error::InvalidInput(format!("weight vector sums to {sum}, not 0")));
        }
        Ok(WeightVector(entries))
    }

    /// `e_plus − e_minus` of length `m`.
    pub fn dirac(m: usize, plus: usize, minus: usize) -> Self {
        let mut v = vec![Rational::zero(); m];
        v[plus] = Rational::one();
        v[minus] = -Rational::one();
        WeightVector(v)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    /// Total positive mass.
    pub fn positive_mass(&self) -> Rational {
        self.0.iter().filter(|x| x.is_positive()).sum()
    }
}

/// All `m(m−1)` Dirac weights, ordered by `(plus, minus)`.
pub fn dirac_weights(m: usize) -> Result<Vec<WeightVector>> {
    if m < 2 {
        return Err(Error::Precondition("Dirac weights need at least two columns".into()));
    }
    Ok(dirac_pairs(m).map(|(j, k)| WeightVector::dirac(m, j, k)).collect())
}

fn dirac_pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |j| (0..m).filter(move |&k| k != j).map(move |k| (j, k)))
}

/// `R·X`.
pub fn column_values(r: &ProbabilityVector, x: &BinaryMatrix) -> Result<Vec<Rational>> {
    if r.len() != x.row_count() {
        return Err(Error::DimensionMismatch {
            expected: x.row_count(),
            got: r.len(),
        });
    }
    Ok((0..x.col_count())
        .map(|j| {
            r.0.iter()
                .zip(&x.rows)
                .filter(|(_, row)| row[j] == 1)
                .map(|(p, _)| p)
                .sum()
        })
        .collect())
}

/// `max_W R·X·W` over Dirac `W`: the spread of `R·X`.
pub fn worst_dirac_value(r: &ProbabilityVector, x: &BinaryMatrix) -> Result<Rational> {
    let q = column_values(r, x)?;
    let max = q.iter().max().expect("non-empty");
    let min = q.iter().min().expect("non-empty");
    Ok(max - min)
}

/// `R·X·V`.
pub fn general_weight_value(r: &ProbabilityVector, x: &BinaryMatrix, v: &WeightVector) -> Result<Rational> {
    if v.0.len() != x.col_count() {
        return Err(Error::DimensionMismatch {
            expected: x.col_count(),
            got: v.0.len(),
        });
    }
    let q = column_values(r, x)?;
    Ok(q.iter().zip(&v.0).map(|(a, b)| a * b).sum())
}

/// Mixture of Dirac weights whose combined vector scores above the threshold
/// on every row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    /// `(plus column, minus column, mass)`, masses summing to 1.
    pub weights: Vec<(usize, usize, Rational)>,
    /// `V = Σ mass·(e_plus − e_minus)`.
    pub combined: Vec<Rational>,
    /// `Y_i·V` per row.
    pub row_values: Vec<Rational>,
    /// `min_i Y_i·V`, a lower bound on the spread for every `R`.
    pub bound: Rational,
}

impl DualCertificate {
    pub fn from_weights(y: &BinaryMatrix, weights: Vec<(usize, usize, Rational)>) -> Result<Self> {
        let m = y.col_count();
        let total: Rational = weights.iter().map(|w| &w.2).sum();
        if !total.is_one() || weights.iter().any(|w| w.2.is_negative() || w.0 == w.1 || w.0 >= m || w.1 >= m) {
            return Err(Error::InvalidInput("dual weights must be a probability mixture of Dirac weights".into()));
        }
        let mut combined = vec![Rational::zero(); m];
        for (j, k, l) in &weights {
            combined[*j] += l;
            combined[*k] -= l;
        }
        let row_values: Vec<Rational> = y
            .rows
            .iter()
            .map(|row| row.iter().zip(&combined).filter(|(&e, _)| e == 1).map(|(_, v)| v).sum())
            .collect();
        let bound = row_values.iter().min().expect("non-empty").clone();
        Ok(DualCertificate {
            weights,
            combined,
            row_values,
            bound,
        })
    }

    /// Recomputes everything from `weights` against `y`.
    pub fn replays(&self, y: &BinaryMatrix) -> bool {
        DualCertificate::from_weights(y, self.weights.clone()).map_or(false, |c| c == *self)
    }

    /// The averaging argument, one line per step.
    pub fn explanation(&self, threshold: &Rational) -> Vec<String> {
        let mut lines = Vec::new();
        for (j, k, l) in &self.weights {
            lines.push(format!(
                "feasibility needs q{} - q{} <= {threshold}; weight {l}",
                j + 1,
                k + 1
            ));
        }
        let v: Vec<String> = self.combined.iter().map(|x| x.to_string()).collect();
        lines.push(format!("weighted sum: sum_i R_i * (Y_i . V) <= {threshold} with V = ({})", v.join(", ")));
        for (i, val) in self.row_values.iter().enumerate() {
            lines.push(format!("row {}: Y_{} . V = {val}", i + 1, i + 1));
        }
        lines.push(format!(
            "every row scores at least {}, so any probability R gives at least {} > {threshold}: infeasible",
            self.bound, self.bound
        ));
        lines
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionMethod {
    Lp,
    ConstantColumns,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    /// Least achievable spread `min_R max_W R·Y·W`.
    pub worst_value: Rational,
    pub threshold: Rational,
    /// An `R` achieving `worst_value`.
    pub optimal_r: ProbabilityVector,
    /// Present whenever the verdict is infeasible.
    pub dual: Option<DualCertificate>,
    pub method: DecisionMethod,
}

impl FeasibilityVerdict {
    /// Checks the verdict against `y` using only matrix arithmetic.
    pub fn replays(&self, y: &BinaryMatrix) -> bool {
        let Ok(spread) = worst_dirac_value(&self.optimal_r, y) else {
            return false;
        };
        if spread != self.worst_value {
            return false;
        }
        if self.feasible {
            return self.worst_value <= self.threshold;
        }
        match &self.dual {
            Some(d) => d.replays(y) && d.bound > self.threshold && d.bound <= self.worst_value,
            None => false,
        }
    }
}

/// Infeasible verdict when some column is all ones and another all zeros.
pub fn constant_column_fast_path(y: &BinaryMatrix, threshold: &Rational) -> Option<FeasibilityVerdict> {
    if *threshold >= int(1) {
        return None;
    }
    let m = y.col_count();
    let ones = (0..m).find(|&j| y.rows.iter().all(|r| r[j] == 1))?;
    let zeros = (0..m).find(|&j| y.rows.iter().all(|r| r[j] == 0))?;
    let dual = DualCertificate::from_weights(y, vec![(ones, zeros, Rational::one())]).expect("valid weights");
    Some(FeasibilityVerdict {
        feasible: false,
        worst_value: Rational::one(),
        threshold: threshold.clone(),
        optimal_r: ProbabilityVector::point(y.row_count(), 0),
        dual: Some(dual),
        method: DecisionMethod::ConstantColumns,
    })
}

fn solve_primal(y: &BinaryMatrix) -> Result<(Rational, ProbabilityVector)> {
    let n = y.row_count();
    let m = y.col_count();
    let mut obj = vec![Rational::zero(); n + 1];
    obj[n] = Rational::one();
    let mut lp = LinearProgram::new(obj);
    for (j, k) in dirac_pairs(m) {
        let mut row: Vec<Rational> = y.rows.iter().map(|r| int(r[j] as i64 - r[k] as i64)).collect();
        row.push(-Rational::one());
        lp.constrain(row, Relation::Le, Rational::zero());
    }
    let mut sum = vec![Rational::one(); n];
    sum.push(Rational::zero());
    lp.constrain(sum, Relation::Eq, Rational::one());
    match lp.minimize()? {
        LpOutcome::Optimal { value, mut x } => {
            x.truncate(n);
            Ok((value, ProbabilityVector::new(x)?))
        }
        other => Err(Error::Precondition(format!("primal LP ended as {other:?}"))),
    }
}

fn solve_dual(y: &BinaryMatrix) -> Result<(Rational, DualCertificate)> {
    let m = y.col_count();
    let pairs: Vec<(usize, usize)> = dirac_pairs(m).collect();
    let d = pairs.len();
    let mut obj = vec![Rational::zero(); d + 1];
    obj[d] = -Rational::one();
    let mut lp = LinearProgram::new(obj);
    for r in &y.rows {
        let mut row: Vec<Rational> = pairs.iter().map(|&(j, k)| int(r[k] as i64 - r[j] as i64)).collect();
        row.push(Rational::one());
        lp.constrain(row, Relation::Le, Rational::zero());
    }
    let mut sum = vec![Rational::one(); d];
    sum.push(Rational::zero());
    lp.constrain(sum, Relation::Eq, Rational::one());
    match lp.minimize()? {
        LpOutcome::Optimal { value, x } => {
            let weights = pairs
                .iter()
                .zip(&x)
                .filter(|(_, l)| l.is_positive())
                .map(|(&(j, k), l)| (j, k, l.clone()))
                .collect();
            Ok((-value, DualCertificate::from_weights(y, weights)?))
        }
        other => Err(Error::Precondition(format!("dual LP ended as {other:?}"))),
    }
}

/// Exact decision with primal and dual certificates.
pub fn decide_convex_ramsey(y: &BinaryMatrix, threshold: &Rational) -> Result<FeasibilityVerdict> {
    let n = y.row_count();
    if y.col_count() == 1 {
        return Ok(FeasibilityVerdict {
            feasible: Rational::zero() <= *threshold,
            worst_value: Rational::zero(),
            threshold: threshold.clone(),
            optimal_r: ProbabilityVector::point(n, 0),
            dual: None,
            method: DecisionMethod::Lp,
        });
    }
    let (t, r) = solve_primal(y)?;
    let feasible = t <= *threshold;
    let dual = if feasible {
        None
    } else {
        let (s, cert) = solve_dual(y)?;
        if s != t {
            return Err(Error::Precondition(format!("LP duality gap: primal {t}, dual {s}")));
        }
        Some(cert)
    };
    Ok(FeasibilityVerdict {
        feasible,
        worst_value: t,
        threshold: threshold.clone(),
        optimal_r: r,
        dual,
        method: DecisionMethod::Lp,
    })
}

/// Finitely supported probability measure on copies, keyed by image set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMeasure {
    atoms: BTreeMap<VertexSet, Rational>,
}

impl FiniteMeasure {
    /// Atoms on the same image are merged.
    pub fn new(atoms: impl IntoIterator<Item = (VertexSet, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<VertexSet, Rational> = BTreeMap::new();
        for (k, w) in atoms {
            if !w.is_positive() {
                return Err(Error::InvalidInput("measure weights must be positive".into()));
            }
            *map.entry(k).or_insert_with(Rational::zero) += w;
        }
        let total: Rational = map.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidInput(format!("measure has total mass {total}, not 1")));
        }
        Ok(FiniteMeasure { atoms: map })
    }

    pub fn point(set: VertexSet) -> Self {
        FiniteMeasure {
            atoms: BTreeMap::from([(set, Rational::one())]),
        }
    }

    pub fn uniform(sets: &[VertexSet]) -> Result<Self> {
        let w = Rational::new(1.into(), (sets.len() as i64).into());
        FiniteMeasure::new(sets.iter().map(|s| (s.clone(), w.clone())))
    }

    pub fn atoms(&self) -> &BTreeMap<VertexSet, Rational> {
        &self.atoms
    }

    pub fn mass(&self, set: &VertexSet) -> Rational {
        self.atoms.get(set).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Measure on `B`-copies, each atom an embedding of `B` into the window.
#[derive(Debug, Clone)]
pub struct EmbeddingMeasure {
    pub atoms: Vec<(Embedding, Rational)>,
}

/// `q(Λ∘Γ) = r(Λ)·p(Γ)`. `p` lives on subsets of `B` (indices below
/// `b_size`); `r` on embeddings of `B`.
pub fn compose_measures(r: &EmbeddingMeasure, p: &FiniteMeasure, b_size: usize) -> Result<FiniteMeasure> {
    for set in p.atoms.keys() {
        if set.iter().any(|&v| v >= b_size) {
            return Err(Error::Precondition("inner measure is not supported inside B".into()));
        }
    }
    let mut atoms = Vec::new();
    for (lambda, rw) in &r.atoms {
        if lambda.map.len() != b_size {
            return Err(Error::Precondition("outer measure atom is not an embedding of B".into()));
        }
        for (gamma, pw) in &p.atoms {
            atoms.push((lambda.apply(gamma), rw * pw));
        }
    }
    FiniteMeasure::new(atoms)
}

/// `Σ f(Γ)·q(Γ)`.
pub fn evaluate_measure(f: &BTreeMap<VertexSet, u8>, q: &FiniteMeasure) -> Result<Rational> {
    let mut total = Rational::zero();
    for (set, w) in &q.atoms {
        match f.get(set) {
            Some(1) => total += w,
            Some(0) => {}
            Some(c) => return Err(Error::InvalidInput(format!("color {c} is not 0 or 1"))),
            None => return Err(Error::InvalidInput("coloring undefined on the support".into())),
        }
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct ClassificationSummary {
    pub rows: usize,
    pub cols: usize,
    /// Matrices examined (row sets, so each permutation class once).
    pub examined: u64,
    pub total: u64,
    pub feasible: u64,
    pub infeasible: u64,
    /// Infeasible matrices up to column permutation, each as its
    /// lexicographically least sorted form.
    pub infeasible_classes: Vec<BinaryMatrix>,
    /// Stopped early on the budget.
    pub partial: bool,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Decides every `n×m` matrix with distinct rows, one per row set. The
/// budget caps the number of matrices decided.
pub fn classify_all(n: usize, m: usize, threshold: &Rational, budget: &mut Budget) -> Result<ClassificationSummary> {
    if n == 0 || m == 0 {
        return Err(Error::Precondition("rows and columns must be positive".into()));
    }
    if m > 16 {
        return Err(Error::Precondition("at most 16 columns".into()));
    }
    let universe = 1usize << m;
    let total = binomial(universe as u64, n as u64);
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut partial = false;
    if n <= universe {
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            if budget.tick("matrix classification").is_err() {
                partial = true;
                break;
            }
            subsets.push(idx.clone());
            let mut i = n;
            while i > 0 && idx[i - 1] == universe - n + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for t in i..n {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    let row_of = |code: usize| -> Vec<u8> { (0..m).map(|j| (code >> (m - 1 - j) & 1) as u8).collect() };
    let verdicts: Vec<(BinaryMatrix, bool)> = subsets
        .par_iter()
        .map(|s| {
            let y = BinaryMatrix::new(s.iter().map(|&c| row_of(c)).collect())?;
            let v = decide_convex_ramsey(&y, threshold)?;
            Ok((y, v.feasible))
        })
        .collect::<Result<_>>()?;
    let feasible = verdicts.iter().filter(|(_, f)| *f).count() as u64;
    let classes: BTreeSet<BinaryMatrix> = verdicts
        .par_iter()
        .filter(|(_, f)| !*f)
        .map(|(y, _)| y.canonical())
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(ClassificationSummary {
        rows: n,
        cols: m,
        examined: verdicts.len() as u64,
        total,
        feasible,
        infeasible: verdicts.len() as u64 - feasible,
        infeasible_classes: classes.into_iter().collect(),
        partial,
    })
}
