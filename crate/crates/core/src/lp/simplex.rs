//! Two-phase revised simplex over exact rationals.
//!
//! Variables are nonnegative. Pricing takes the most negative reduced cost
//! and falls back to Bland's rule after a run of degenerate pivots, which
//! rules out cycling.

use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    /// Sparse `(variable, coefficient)` list.
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLP {
    pub sense: Sense,
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub objective: Rational,
    pub values: Vec<Rational>,
    /// Shadow price of each constraint: derivative of the optimum with
    /// respect to its right-hand side. These solve the dual program and
    /// `Σ rhs·dual = objective`.
    pub duals: Vec<Rational>,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Result<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Ok(s),
            LpOutcome::Infeasible => Err(Error::Infeasible),
            LpOutcome::Unbounded => Err(Error::Unbounded),
        }
    }
}

impl RationalLP {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        RationalLP {
            sense,
            num_vars: objective.len(),
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn check(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::Precondition("objective length differs from variable count".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.iter().any(|&(j, _)| j >= self.num_vars) {
                return Err(Error::Precondition(format!("row {i} names an unknown variable")));
            }
        }
        Ok(())
    }

    /// Objective value of a point.
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Every constraint and bound holds at `x`.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars || x.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: Rational = c.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }
}

/// Degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;

struct Revised {
    m: usize,
    /// Sparse columns of the equality system.
    cols: Vec<Vec<(usize, Rational)>>,
    basis: Vec<usize>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    is_basic: Vec<bool>,
    pivots: usize,
}

impl Revised {
    fn duals(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.m];
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, yj) in y.iter_mut().enumerate() {
                let a = &self.binv[i][j];
                if !a.is_zero() {
                    *yj += cb * a;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, cost: &[Rational], y: &[Rational]) -> Rational {
        let mut d = cost[j].clone();
        for (i, a) in &self.cols[j] {
            if !y[*i].is_zero() {
                d -= &y[*i] * a;
            }
        }
        d
    }

    fn column(&self, j: usize) -> Vec<Rational> {
        let mut u = vec![Rational::zero(); self.m];
        for (k, a) in &self.cols[j] {
            for (i, ui) in u.iter_mut().enumerate() {
                let b = &self.binv[i][*k];
                if !b.is_zero() {
                    *ui += b * a;
                }
            }
        }
        u
    }

    fn pivot(&mut self, r: usize, j: usize, u: &[Rational]) {
        let inv = Rational::one() / &u[r];
        for v in self.binv[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.xb[r] *= &inv;
        let row_r = self.binv[r].clone();
        let xr = self.xb[r].clone();
        for i in 0..self.m {
            if i == r || u[i].is_zero() {
                continue;
            }
            let f = &u[i];
            for (k, v) in self.binv[i].iter_mut().enumerate() {
                if !row_r[k].is_zero() {
                    *v -= f * &row_r[k];
                }
            }
            self.xb[i] -= f * &xr;
        }
        self.is_basic[self.basis[r]] = false;
        self.basis[r] = j;
        self.is_basic[j] = true;
        self.pivots += 1;
    }

    /// Minimize `cost` over the current basis, entering only columns for
    /// which `allowed` holds. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &dyn Fn(usize) -> bool) -> bool {
        let mut degenerate = 0usize;
        loop {
            let y = self.duals(cost);
            let bland = degenerate >= DEGENERATE_RUN;
            let mut entering: Option<(usize, Rational)> = None;
            for j in 0..self.cols.len() {
                if self.is_basic[j] || !allowed(j) {
                    continue;
                }
                let d = self.reduced_cost(j, cost, &y);
                if d.is_negative() {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    if entering.as_ref().map_or(true, |(_, best)| d < *best) {
                        entering = Some((j, d));
                    }
                }
            }
            let Some((j, _)) = entering else {
                return true;
            };
            let u = self.column(j);
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                if !u[i].is_positive() {
                    continue;
                }
                let ratio = &self.xb[i] / &u[i];
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return false;
            };
            if ratio.is_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, j, &u);
        }
    }
}

pub fn solve_lp(lp: &RationalLP) -> Result<LpOutcome> {
    lp.check()?;
    let m = lp.constraints.len();
    let n = lp.num_vars;
    let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    let mut flip = vec![false; m];
    let mut rhs = Vec::with_capacity(m);
    let mut basis = vec![usize::MAX; m];
    let mut artificial_rows = Vec::new();
    for (i, c) in lp.constraints.iter().enumerate() {
        flip[i] = c.rhs.is_negative();
        let sign = if flip[i] { -Rational::one() } else { Rational::one() };
        for (j, a) in &c.coeffs {
            if !a.is_zero() {
                cols[*j].push((i, a * &sign));
            }
        }
        rhs.push(&c.rhs * &sign);
        let relation = match (c.relation, flip[i]) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (r, _) => r,
        };
        match relation {
            Relation::Le => {
                basis[i] = cols.len();
                cols.push(vec![(i, Rational::one())]);
            }
            Relation::Ge => {
                cols.push(vec![(i, -Rational::one())]);
                artificial_rows.push(i);
            }
            Relation::Eq => artificial_rows.push(i),
        }
    }
    // merge duplicate (row) entries produced by repeated variables in a row
    for col in cols.iter_mut().take(n) {
        col.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(col.len());
        for (i, a) in col.drain(..) {
            match merged.last_mut() {
                Some((k, b)) if *k == i => *b += a,
                _ => merged.push((i, a)),
            }
        }
        merged.retain(|(_, a)| !a.is_zero());
        *col = merged;
    }
    let first_artificial = cols.len();
    for &i in &artificial_rows {
        basis[i] = cols.len();
        cols.push(vec![(i, Rational::one())]);
    }
    let total = cols.len();
    let mut is_basic = vec![false; total];
    for &b in &basis {
        is_basic[b] = true;
    }
    let mut binv = vec![vec![Rational::zero(); m]; m];
    for (i, row) in binv.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    let mut s = Revised {
        m,
        cols,
        basis,
        binv,
        xb: rhs.clone(),
        is_basic,
        pivots: 0,
    };

    if first_artificial < total {
        let phase1: Vec<Rational> = (0..total)
            .map(|j| if j >= first_artificial { Rational::one() } else { Rational::zero() })
            .collect();
        s.optimize(&phase1, &|_| true);
        let infeas: Rational = s
            .basis
            .iter()
            .zip(&s.xb)
            .filter(|(b, _)| **b >= first_artificial)
            .map(|(_, x)| x.clone())
            .sum();
        if infeas.is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..m {
            if s.basis[r] < first_artificial {
                continue;
            }
            let candidate = (0..first_artificial).find(|&j| {
                !s.is_basic[j] && {
                    let u = s.column(j);
                    !u[r].is_zero()
                }
            });
            if let Some(j) = candidate {
                let u = s.column(j);
                s.pivot(r, j, &u);
            }
        }
    }

    let to_min = if lp.sense == Sense::Maximize { -Rational::one() } else { Rational::one() };
    let cost: Vec<Rational> = (0..total)
        .map(|j| if j < n { &lp.objective[j] * &to_min } else { Rational::zero() })
        .collect();
    if !s.optimize(&cost, &|j| j < first_artificial) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut values = vec![Rational::zero(); n];
    for (i, &b) in s.basis.iter().enumerate() {
        if b < n {
            values[b] = s.xb[i].clone();
        }
    }
    let objective = lp.evaluate(&values);
    let y = s.duals(&cost);
    let duals: Vec<Rational> = (0..m)
        .map(|i| {
            let mut d = &y[i] * &to_min;
            if flip[i] {
                d = -d;
            }
            d
        })
        .collect();
    let dual_objective: Rational = lp
        .constraints
        .iter()
        .zip(&duals)
        .map(|(c, d)| &c.rhs * d)
        .sum();
    if dual_objective != objective {
        return Err(Error::Internal(format!(
            "dual objective {dual_objective} differs from primal {objective}"
        )));
    }
    Ok(LpOutcome::Optimal(LpSolution {
        objective,
        values,
        duals,
        pivots: s.pivots,
    }))
}
