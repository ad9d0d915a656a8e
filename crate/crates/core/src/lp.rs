//! Exact two-phase simplex over rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `minimize c·x` subject to the rows and `x ≥ 0`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<(Vec<Rational>, Relation, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        LinearProgram {
            objective,
            rows: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) {
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn minimize(&self) -> Result<LpOutcome> {
        let n = self.objective.len();
        if let Some((c, _, _)) = self.rows.iter().find(|(c, _, _)| c.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.len(),
            });
        }
        Ok(Tableau::build(self).solve(&self.objective))
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    a: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    n_orig: usize,
    n_cols: usize,
    artificial_from: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.objective.len();
        let m = lp.rows.len();
        let slack_count = lp.rows.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let artificial_from = n + slack_count;
        // Normalise to non-negative right-hand sides.
        let rows: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .rows
            .iter()
            .map(|(c, r, b)| {
                if b.is_negative() {
                    let flipped = match r {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.iter().map(|x| -x).collect(), flipped, -b)
                } else {
                    (c.clone(), *r, b.clone())
                }
            })
            .collect();
        let needs_artificial: Vec<bool> = rows.iter().map(|(_, r, _)| *r != Relation::Le).collect();
        let n_art = needs_artificial.iter().filter(|&&x| x).count();
        let n_cols = artificial_from + n_art;
        let mut a = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = n;
        let mut art = artificial_from;
        for (i, (c, r, b)) in rows.into_iter().enumerate() {
            let mut row = vec![Rational::zero(); n_cols + 1];
            row[..n].clone_from_slice(&c);
            match r {
                Relation::Le => {
                    row[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            if needs_artificial[i] {
                row[art] = Rational::one();
                basis.push(art);
                art += 1;
            }
            row[n_cols] = b;
            a.push(row);
        }
        Tableau {
            a,
            basis,
            n_orig: n,
            n_cols,
            artificial_from,
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.a[r][col].clone();
        for x in self.a[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Runs the simplex loop for `cost` over columns `< allowed`. Returns
    /// false when unbounded.
    fn optimise(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let reduced = |t: &Tableau, j: usize| -> Rational {
                let mut z = cost[j].clone();
                for (i, &b) in t.basis.iter().enumerate() {
                    if !t.a[i][j].is_zero() && !cost[b].is_zero() {
                        z -= &cost[b] * &t.a[i][j];
                    }
                }
                z
            };
            let entering = (0..allowed).find(|&j| !self.basis.contains(&j) && reduced(self, j).is_negative());
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                let coef = &self.a[i][col];
                if coef.is_positive() {
                    let ratio = &self.a[i][self.n_cols] / coef;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| &cost[b] * &self.a[i][self.n_cols])
            .sum()
    }

    fn solve(mut self, objective: &[Rational]) -> LpOutcome {
        let mut phase1 = vec![Rational::zero(); self.n_cols];
        for c in phase1.iter_mut().skip(self.artificial_from) {
            *c = Rational::one();
        }
        self.optimise(&phase1, self.n_cols);
        if self.value(&phase1).is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining zero-level artificials out of the basis.
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= self.artificial_from {
                match (0..self.artificial_from).find(|&j| !self.a[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.a.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        let mut cost = vec![Rational::zero(); self.n_cols];
        cost[..self.n_orig].clone_from_slice(objective);
        if !self.optimise(&cost, self.artificial_from) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); self.n_orig];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_orig {
                x[b] = self.a[i][self.n_cols].clone();
            }
        }
        let value = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpOutcome::Optimal { value, x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // min -x - y s.t. x + 2y <= 4, 3x + y <= 6
        let mut lp = LinearProgram::new(ints(&[-1, -1]));
        lp.constrain(ints(&[1, 2]), Relation::Le, int(4));
        lp.constrain(ints(&[3, 1]), Relation::Le, int(6));
        match lp.minimize().unwrap() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, ratio(-14, 5));
                assert_eq!(x, vec![ratio(8, 5), ratio(6, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(ints(&[1]));
        lp.constrain(ints(&[1]), Relation::Ge, int(2));
        lp.constrain(ints(&[1]), Relation::Le, int(1));
        assert_eq!(lp.minimize().unwrap(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new(ints(&[-1, 0]));
        lp.constrain(ints(&[1, -1]), Relation::Eq, int(0));
        assert_eq!(lp.minimize().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_and_negative_rhs() {
        // min x + y s.t. x + y = 1, x - y >= -1/2
        let mut lp = LinearProgram::new(ints(&[2, 1]));
        lp.constrain(ints(&[1, 1]), Relation::Eq, int(1));
        lp.constrain(ints(&[1, -1]), Relation::Ge, ratio(-1, 2));
        match lp.minimize().unwrap() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, ratio(5, 4));
                assert_eq!(x, vec![ratio(1, 4), ratio(3, 4)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(ints(&[1, 1]));
        lp.constrain(ints(&[1, 1]), Relation::Eq, int(2));
        lp.constrain(ints(&[2, 2]), Relation::Eq, int(4));
        match lp.minimize().unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the textbook rule.
        let mut lp = LinearProgram::new(vec![ratio(-3, 4), int(150), ratio(-1, 50), int(6)]);
        lp.constrain(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)], Relation::Le, int(0));
        lp.constrain(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)], Relation::Le, int(0));
        lp.constrain(ints(&[0, 0, 1, 0]), Relation::Le, int(1));
        match lp.minimize().unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(-1, 20)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        let mut lp = LinearProgram::new(ints(&[1, 1]));
        lp.constrain(ints(&[1]), Relation::Le, int(1));
        assert!(lp.minimize().is_err());
    }
}
