//! Dense two-phase tableau simplex for small linear programs.
//!
//! Solves `maximize cᵀx` subject to rows `aᵢᵀx (≤ | ≥ | =) bᵢ` and `x ≥ 0`. Bland's rule is
//! used throughout, so the method terminates on degenerate problems. Intended for
//! problems with at most a few hundred rows and columns.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize, cost: &mut [f64]) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let f = cost[c];
        if f != 0.0 {
            for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row for objective `c`, priced out against the current basis.
    fn priced(&self, c: &[f64]) -> Vec<f64> {
        let mut cost = vec![0.0; self.width + 1];
        cost[..c.len()].copy_from_slice(c);
        for (i, &b) in self.basis.iter().enumerate() {
            let f = cost[b];
            if f != 0.0 {
                for (v, rv) in cost.iter_mut().zip(&self.rows[i]) {
                    *v -= f * rv;
                }
            }
        }
        cost
    }

    fn optimize(&mut self, cost: &mut [f64], allowed: impl Fn(usize) -> bool) -> Result<()> {
        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..self.width).find(|&j| allowed(j) && cost[j] > PIVOT_EPS) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][enter];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-15 || (ratio <= lr + 1e-15 && self.basis[i] < self.basis[li]) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(r, enter, cost);
        }
        Err(Error::NoConvergence("simplex"))
    }
}

/// Solves `lp` to optimality.
///
/// Returns [`Error::Infeasible`] or [`Error::Unbounded`] when no optimum exists.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    let nvars = lp.objective.len();
    for (k, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != nvars {
            return Err(domain!("constraint {k} has {} coefficients, expected {nvars}", c.coeffs.len()));
        }
        if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
            return Err(domain!("constraint {k} has non-finite data"));
        }
    }

    // Normalize to non-negative right-hand sides.
    let rows: Vec<(Vec<f64>, Relation, f64)> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs < 0.0 {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), flipped, -c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs)
            }
        })
        .collect();

    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let art_start = nvars + n_slack;
    let width = art_start + n_art;

    let mut tab = Tableau { rows: Vec::with_capacity(rows.len()), basis: Vec::with_capacity(rows.len()), width };
    let (mut slack, mut art) = (nvars, art_start);
    for (coeffs, relation, rhs) in rows {
        let mut row = vec![0.0; width + 1];
        row[..nvars].copy_from_slice(&coeffs);
        row[width] = rhs;
        match relation {
            Relation::Le => {
                row[slack] = 1.0;
                tab.basis.push(slack);
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -1.0;
                slack += 1;
                row[art] = 1.0;
                tab.basis.push(art);
                art += 1;
            }
            Relation::Eq => {
                row[art] = 1.0;
                tab.basis.push(art);
                art += 1;
            }
        }
        tab.rows.push(row);
    }

    if n_art > 0 {
        let mut phase1 = vec![0.0; width];
        for v in &mut phase1[art_start..] {
            *v = -1.0;
        }
        let mut cost = tab.priced(&phase1);
        tab.optimize(&mut cost, |_| true)?;
        if -cost[width] < -FEAS_EPS {
            return Err(Error::Infeasible);
        }
        // Drive zero-valued artificials out of the basis where possible.
        for i in 0..tab.rows.len() {
            if tab.basis[i] >= art_start {
                if let Some(c) = (0..art_start).find(|&j| tab.rows[i][j].abs() > PIVOT_EPS) {
                    tab.pivot(i, c, &mut cost);
                }
            }
        }
    }

    let mut objective = lp.objective.clone();
    objective.resize(width, 0.0);
    let mut cost = tab.priced(&objective);
    tab.optimize(&mut cost, |j| j < art_start)?;

    let mut x = vec![0.0; nvars];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < nvars {
            x[b] = tab.rhs(i).max(0.0);
        }
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution { objective, x })
}
