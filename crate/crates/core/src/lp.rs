//! Dense two-phase tableau simplex with Bland's anti-cycling rule.
//!
//! Generic over the scalar: `BigRational` gives exact optima, `f64` uses a
//! fixed feasibility/pivot tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const FLOAT_TOLERANCE: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;
/// Float tableaus are rebuilt from the original rows this often.
const REFACTOR_EVERY: usize = 25;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Exact scalars never need the tableau rebuilt.
    const EXACT: bool;

    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn from_int(v: i64) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_pos(&self) -> bool {
        *self > FLOAT_TOLERANCE
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_TOLERANCE
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `minimize c^T x` subject to row constraints; each variable is either
/// nonnegative or free.
#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    free: Vec<bool>,
    constraints: Vec<(Vec<T>, Relation, T)>,
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub objective: T,
    pub x: Vec<T>,
    pub pivots: usize,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn minimize(objective: Vec<T>) -> Self {
        let n = objective.len();
        Self {
            objective,
            free: vec![false; n],
            constraints: Vec::new(),
        }
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn constrain(&mut self, row: Vec<T>, rel: Relation, rhs: T) -> &mut Self {
        assert_eq!(row.len(), self.objective.len(), "constraint width");
        self.constraints.push((row, rel, rhs));
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self) -> Result<LpSolution<T>> {
        // structural columns: x_j, or x_j+ and x_j- for free variables
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.num_vars());
        let mut n_struct = 0;
        for &free in &self.free {
            if free {
                col_of.push((n_struct, Some(n_struct + 1)));
                n_struct += 2;
            } else {
                col_of.push((n_struct, None));
                n_struct += 1;
            }
        }
        let m = self.constraints.len();
        let n_slack = self
            .constraints
            .iter()
            .filter(|c| c.1 != Relation::Eq)
            .count();

        // rows normalised to a nonnegative right-hand side
        let mut rows: Vec<(Vec<T>, Relation, T)> = Vec::with_capacity(m);
        for (coeffs, rel, rhs) in &self.constraints {
            let mut dense = vec![T::zero(); n_struct];
            for (j, a) in coeffs.iter().enumerate() {
                let (plus, minus) = col_of[j];
                dense[plus] = a.clone();
                if let Some(minus) = minus {
                    dense[minus] = -a.clone();
                }
            }
            if *rhs < T::zero() {
                let flipped = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                rows.push((dense.into_iter().map(|a| -a).collect(), flipped, -rhs.clone()));
            } else {
                rows.push((dense, *rel, rhs.clone()));
            }
        }
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let width = n_struct + n_slack + n_art;
        let art_start = n_struct + n_slack;

        let mut tab = Tableau {
            a: Vec::with_capacity(m),
            b: Vec::with_capacity(m),
            basis: Vec::with_capacity(m),
            cost: vec![T::zero(); width],
            value: T::zero(),
            pivots: 0,
            original: Vec::new(),
            prices: Vec::new(),
        };
        let (mut slack, mut art) = (n_struct, art_start);
        for (dense, rel, rhs) in rows {
            let mut row = dense;
            row.resize(width, T::zero());
            match rel {
                Relation::Le => {
                    row[slack] = T::one();
                    tab.basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -T::one();
                    slack += 1;
                    row[art] = T::one();
                    tab.basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = T::one();
                    tab.basis.push(art);
                    art += 1;
                }
            }
            tab.a.push(row);
            tab.b.push(rhs);
        }
        if !T::EXACT {
            tab.original = tab.a.iter().cloned().zip(tab.b.iter().cloned()).collect();
        }

        if n_art > 0 {
            let mut phase1 = vec![T::zero(); width];
            for c in phase1.iter_mut().skip(art_start) {
                *c = T::one();
            }
            tab.price(&phase1);
            tab.run(width)?;
            if tab.value.is_pos() {
                return Err(Error::Infeasible);
            }
            tab.evict_artificials(art_start);
        }

        let mut phase2 = vec![T::zero(); width];
        for (j, c) in self.objective.iter().enumerate() {
            let (plus, minus) = col_of[j];
            phase2[plus] = c.clone();
            if let Some(minus) = minus {
                phase2[minus] = -c.clone();
            }
        }
        tab.price(&phase2);
        tab.run(art_start)?;

        let mut col_value = vec![T::zero(); width];
        for (i, &bv) in tab.basis.iter().enumerate() {
            col_value[bv] = tab.b[i].clone();
        }
        let x: Vec<T> = col_of
            .iter()
            .map(|&(plus, minus)| match minus {
                Some(minus) => col_value[plus].clone() - col_value[minus].clone(),
                None => col_value[plus].clone(),
            })
            .collect();
        let objective = self
            .objective
            .iter()
            .zip(&x)
            .fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone());
        Ok(LpSolution {
            objective,
            x,
            pivots: tab.pivots,
        })
    }
}

struct Tableau<T> {
    a: Vec<Vec<T>>,
    b: Vec<T>,
    basis: Vec<usize>,
    /// reduced costs
    cost: Vec<T>,
    /// current objective value
    value: T,
    pivots: usize,
    /// rows as first built, kept for float refactorisation
    original: Vec<(Vec<T>, T)>,
    /// objective of the current phase
    prices: Vec<T>,
}

fn magnitude<T: Scalar>(x: &T) -> T {
    if *x < T::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}

impl<T: Scalar> Tableau<T> {
    fn price(&mut self, c: &[T]) {
        let width = c.len();
        self.prices = c.to_vec();
        self.cost = c.to_vec();
        self.value = T::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = c[bv].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                if !self.a[i][j].is_zero() {
                    self.cost[j] = self.cost[j].clone() - cb.clone() * self.a[i][j].clone();
                }
            }
            self.value = self.value.clone() + cb * self.b[i].clone();
        }
    }

    /// Bland's rule over columns `< allowed`.
    fn run(&mut self, allowed: usize) -> Result<()> {
        let mut since_refactor = 0;
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j].is_neg()) else {
                if since_refactor == 0 || self.original.is_empty() {
                    return Ok(());
                }
                // confirm optimality on a freshly rebuilt tableau
                self.refactor();
                since_refactor = 0;
                continue;
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.a.len() {
                let aij = &self.a[i][enter];
                if !aij.is_pos() {
                    continue;
                }
                let ratio = self.b[i].clone() / aij.clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr || (ratio == lr && self.basis[i] < self.basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            let Some((row, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(row, enter);
            since_refactor += 1;
            if !self.original.is_empty() && since_refactor >= REFACTOR_EVERY {
                self.refactor();
                since_refactor = 0;
            }
            if self.pivots > MAX_PIVOTS {
                return Err(Error::NoConvergence("simplex", MAX_PIVOTS));
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        self.pivots += 1;
        let p = self.a[row][col].clone();
        let width = self.a[row].len();
        for j in 0..width {
            if !self.a[row][j].is_zero() {
                self.a[row][j] = self.a[row][j].clone() / p.clone();
            }
        }
        self.b[row] = self.b[row].clone() / p;
        let pivot_row = self.a[row].clone();
        let pivot_b = self.b[row].clone();
        let nz: Vec<usize> = (0..width).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.a.len() {
            if i == row {
                continue;
            }
            let f = self.a[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                self.a[i][j] = self.a[i][j].clone() - f.clone() * pivot_row[j].clone();
            }
            self.a[i][col] = T::zero();
            self.b[i] = self.b[i].clone() - f * pivot_b.clone();
        }
        let f = self.cost[col].clone();
        if !f.is_zero() {
            for &j in &nz {
                self.cost[j] = self.cost[j].clone() - f.clone() * pivot_row[j].clone();
            }
            self.cost[col] = T::zero();
            self.value = self.value.clone() + f * pivot_b;
        }
        self.basis[row] = col;
    }

    /// Recomputes `B^-1 A`, `B^-1 b` and the reduced costs from the original
    /// rows by Gauss-Jordan elimination with partial pivoting. Leaves the
    /// tableau untouched if the basis looks singular.
    fn refactor(&mut self) {
        let m = self.original.len();
        let width = self.cost.len();
        let mut rows: Vec<(Vec<T>, T)> = self.original.clone();
        for (k, &col) in self.basis.iter().enumerate() {
            let Some(p) = (k..m).max_by(|&i, &j| {
                magnitude(&rows[i].0[col])
                    .partial_cmp(&magnitude(&rows[j].0[col]))
                    .unwrap_or(std::cmp::Ordering::Equal)
            }) else {
                return;
            };
            if !magnitude(&rows[p].0[col]).is_pos() {
                return;
            }
            rows.swap(k, p);
            let piv = rows[k].0[col].clone();
            for v in rows[k].0.iter_mut() {
                *v = v.clone() / piv.clone();
            }
            rows[k].1 = rows[k].1.clone() / piv;
            let (pivot_row, pivot_b) = rows[k].clone();
            for (i, (r, b)) in rows.iter_mut().enumerate() {
                if i == k || r[col].is_zero() {
                    continue;
                }
                let f = r[col].clone();
                for j in 0..width {
                    r[j] = r[j].clone() - f.clone() * pivot_row[j].clone();
                }
                *b = b.clone() - f * pivot_b.clone();
            }
        }
        for (i, (r, b)) in rows.into_iter().enumerate() {
            self.a[i] = r;
            // basic values are nonnegative up to rounding
            self.b[i] = if b < T::zero() && !b.is_neg() { T::zero() } else { b };
        }
        let prices = std::mem::take(&mut self.prices);
        self.price(&prices);
    }

    /// Pivots basic artificials (at zero after phase 1) onto structural
    /// columns; rows with no such column are redundant and left alone.
    fn evict_artificials(&mut self, art_start: usize) {
        for i in 0..self.a.len() {
            if self.basis[i] < art_start {
                continue;
            }
            if let Some(j) = (0..art_start).find(|&j| self.a[i][j].is_pos() || self.a[i][j].is_neg()) {
                self.pivot(i, j);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn textbook_maximisation() {
        // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let mut lp = LinearProgram::minimize(vec![q(-3, 1), q(-5, 1)]);
        lp.constrain(vec![q(1, 1), q(0, 1)], Relation::Le, q(4, 1))
            .constrain(vec![q(0, 1), q(2, 1)], Relation::Le, q(12, 1))
            .constrain(vec![q(3, 1), q(2, 1)], Relation::Le, q(18, 1));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.objective, q(-36, 1));
        assert_eq!(sol.x, vec![q(2, 1), q(6, 1)]);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min |x| via x free, t >= x, t >= -x, x = -3/2 -> 3/2
        let mut lp = LinearProgram::minimize(vec![q(0, 1), q(1, 1)]);
        lp.set_free(0);
        lp.constrain(vec![q(1, 1), q(-1, 1)], Relation::Le, q(0, 1))
            .constrain(vec![q(1, 1), q(1, 1)], Relation::Ge, q(0, 1))
            .constrain(vec![q(1, 1), q(0, 1)], Relation::Eq, q(-3, 2));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.objective, q(3, 2));
        assert_eq!(sol.x[0], q(-3, 2));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::minimize(vec![1.0]);
        lp.constrain(vec![1.0], Relation::Ge, 2.0)
            .constrain(vec![1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve().unwrap_err(), Error::Infeasible);

        let mut lp = LinearProgram::minimize(vec![-1.0, 0.0]);
        lp.constrain(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve().unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::minimize(vec![q(1, 1), q(1, 1)]);
        lp.constrain(vec![q(1, 1), q(1, 1)], Relation::Eq, q(2, 1))
            .constrain(vec![q(2, 1), q(2, 1)], Relation::Eq, q(4, 1));
        assert_eq!(lp.solve().unwrap().objective, q(2, 1));
    }

    #[test]
    fn float_matches_exact_on_degenerate_problem() {
        // Klee-Minty-flavoured cube, 3 dimensions
        let rows = [[1, 0, 0], [4, 1, 0], [8, 4, 1]];
        let rhs = [5, 25, 125];
        let c = [-4, -2, -1];
        let mut exact = LinearProgram::minimize(c.iter().map(|&v| q(v, 1)).collect());
        let mut float = LinearProgram::minimize(c.iter().map(|&v| v as f64).collect());
        for (r, b) in rows.iter().zip(rhs) {
            exact.constrain(r.iter().map(|&v| q(v, 1)).collect(), Relation::Le, q(b, 1));
            float.constrain(r.iter().map(|&v| v as f64).collect(), Relation::Le, b as f64);
        }
        let e = exact.solve().unwrap();
        let f = float.solve().unwrap();
        assert_eq!(e.objective, q(-125, 1));
        assert!((f.objective + 125.0).abs() < 1e-9);
    }
}
