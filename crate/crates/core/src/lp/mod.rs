//! Linear programs `max c^T x` subject to `A x <= b` and finite variable
//! bounds, solved by a bounded-variable dual simplex.
//!
//! Because every structural variable is boxed, a dual feasible starting basis
//! always exists (slacks basic, each variable at the bound favoured by its
//! cost), so no phase one is needed. Adding rows or changing bounds keeps the
//! stored basis dual feasible, which makes warm restarts cheap.

mod gomory;
mod simplex;

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::LpError;

pub use gomory::gomory_cuts;

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-7;
/// Optimality tolerance on the objective.
pub const OPT_TOL: f64 = 1e-6;
/// Tolerance for treating a value as integral.
pub const INT_TOL: f64 = 1e-6;

/// A `<=` row with sparse coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        Row { coeffs, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    pub fn violation(&self, x: &[f64]) -> f64 {
        self.activity(x) - self.rhs
    }

    /// Merges repeated variables, drops zeros, sorts by variable.
    fn normalized(mut self) -> Self {
        self.coeffs.sort_by_key(|&(j, _)| j);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(self.coeffs.len());
        for (j, a) in self.coeffs {
            match merged.last_mut() {
                Some((k, b)) if *k == j => *b += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        self.coeffs = merged;
        self
    }

    fn key(&self) -> (Vec<(usize, u64)>, u64) {
        (self.coeffs.iter().map(|&(j, a)| (j, a.to_bits())).collect(), self.rhs.to_bits())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
}

/// Status of every column: structural variables first, then one slack per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    pub status: Vec<VarStatus>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    /// Upper bound on the optimum, valid even when the iteration limit
    /// stopped the solve early.
    pub bound: f64,
    pub basis: Basis,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| (v - v.round()).abs() <= INT_TOL)
    }
}

#[derive(Clone, Debug)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Refactorize the basis inverse after this many pivots.
    pub refactor_every: usize,
    /// Switch to Bland's rule after this many consecutive degenerate pivots.
    pub degenerate_limit: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { max_iterations: 100_000, refactor_every: 50, degenerate_limit: 60 }
    }
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    original: Vec<(f64, f64)>,
    rows: Vec<Row>,
    row_index: HashMap<(Vec<(usize, u64)>, u64), usize>,
}

impl LinearProgram {
    /// All variables in `[0, 1]`.
    pub fn new(objective: Vec<f64>) -> Result<Self, LpError> {
        let n = objective.len();
        Self::with_bounds(objective, vec![0.0; n], vec![1.0; n])
    }

    pub fn with_bounds(objective: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, LpError> {
        let n = objective.len();
        if lower.len() != n || upper.len() != n {
            return Err(LpError::ObjectiveLength { expected: n, got: lower.len().min(upper.len()) });
        }
        if objective.iter().chain(&lower).chain(&upper).any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite);
        }
        if let Some(var) = (0..n).find(|&j| lower[j] > upper[j]) {
            return Err(LpError::InvalidBounds { var, lo: lower[var], hi: upper[var] });
        }
        let original = lower.iter().copied().zip(upper.iter().copied()).collect();
        Ok(LinearProgram { objective, lower, upper, original, rows: Vec::new(), row_index: HashMap::new() })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], self.upper[var])
    }

    /// Appends a row and returns its index. An exact duplicate of an existing
    /// row is not added again; the existing index is returned.
    pub fn add_row(&mut self, row: Row) -> Result<usize, LpError> {
        let n = self.num_vars();
        if let Some(&(var, _)) = row.coeffs.iter().find(|&&(j, _)| j >= n) {
            return Err(LpError::UnknownVariable { var, n });
        }
        if !row.rhs.is_finite() || row.coeffs.iter().any(|(_, a)| !a.is_finite()) {
            return Err(LpError::NonFinite);
        }
        let row = row.normalized();
        let key = row.key();
        if let Some(&i) = self.row_index.get(&key) {
            return Ok(i);
        }
        let i = self.rows.len();
        self.rows.push(row);
        self.row_index.insert(key, i);
        Ok(i)
    }

    pub fn add_rows(&mut self, rows: impl IntoIterator<Item = Row>) -> Result<Vec<usize>, LpError> {
        rows.into_iter().map(|r| self.add_row(r)).collect()
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) -> Result<(), LpError> {
        if var >= self.num_vars() {
            return Err(LpError::UnknownVariable { var, n: self.num_vars() });
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(LpError::NonFinite);
        }
        if lo > hi {
            return Err(LpError::InvalidBounds { var, lo, hi });
        }
        self.lower[var] = lo;
        self.upper[var] = hi;
        Ok(())
    }

    /// Sets `lo = hi = value`; `value` must lie in the original bounds.
    pub fn fix_variable(&mut self, var: usize, value: f64) -> Result<(), LpError> {
        let (lo, hi) = *self
            .original
            .get(var)
            .ok_or(LpError::UnknownVariable { var, n: self.num_vars() })?;
        if value < lo || value > hi {
            return Err(LpError::InvalidBounds { var, lo: value, hi: value });
        }
        self.set_bounds(var, value, value)
    }

    /// Restores the bounds given at construction.
    pub fn unfix_variable(&mut self, var: usize) {
        let (lo, hi) = self.original[var];
        self.lower[var] = lo;
        self.upper[var] = hi;
    }

    pub fn reset_bounds(&mut self) {
        for var in 0..self.num_vars() {
            self.unfix_variable(var);
        }
    }

    pub fn solve(&self, warm_start: Option<&Basis>) -> LpSolution {
        self.solve_with(warm_start, &SimplexOptions::default())
    }

    pub fn solve_with(&self, warm_start: Option<&Basis>, options: &SimplexOptions) -> LpSolution {
        simplex::solve(self, warm_start, options)
    }

    /// Whether `x` satisfies bounds and rows within `tol`.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.num_vars()
            && (0..self.num_vars()).all(|j| x[j] >= self.lower[j] - tol && x[j] <= self.upper[j] + tol)
            && self.rows.iter().all(|r| r.violation(x) <= tol)
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// CPLEX LP text format, for debugging.
    pub fn to_lp_format(&self) -> String {
        let mut s = String::from("Maximize\n obj:");
        for (j, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                write_term(&mut s, c, j);
            }
        }
        s.push_str("\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(s, " r{i}:");
            for &(j, a) in &row.coeffs {
                write_term(&mut s, a, j);
            }
            if row.coeffs.is_empty() {
                s.push_str(" 0 x0");
            }
            let _ = writeln!(s, " <= {}", row.rhs);
        }
        s.push_str("Bounds\n");
        for j in 0..self.num_vars() {
            let _ = writeln!(s, " {} <= x{j} <= {}", self.lower[j], self.upper[j]);
        }
        s.push_str("End\n");
        s
    }
}

fn write_term(s: &mut String, coef: f64, var: usize) {
    let sign = if coef < 0.0 { '-' } else { '+' };
    let mag = coef.abs();
    if mag == 1.0 {
        let _ = write!(s, " {sign} x{var}");
    } else {
        let _ = write!(s, " {sign} {mag} x{var}");
    }
}
