//! Dual simplex with bounded variables and an explicit dense basis inverse.
//!
//! Internally the problem is `min c^T x` with `c = -objective`, written as
//! `A x + s = b`, `lo <= x <= hi`, `s >= 0`. Columns `0..n` are structural,
//! `n..n+m` are the slacks.

use super::{Basis, LinearProgram, LpSolution, LpStatus, SimplexOptions, VarStatus, FEAS_TOL};

const PIVOT_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-11;
const DUAL_TOL: f64 = 1e-9;

struct Tableau<'a> {
    lp: &'a LinearProgram,
    n: usize,
    m: usize,
    columns: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    status: Vec<VarStatus>,
    head: Vec<usize>,
    binv: Vec<f64>,
    xb: Vec<f64>,
}

impl<'a> Tableau<'a> {
    fn new(lp: &'a LinearProgram) -> Self {
        let n = lp.num_vars();
        let m = lp.num_rows();
        let mut columns = vec![Vec::new(); n];
        for (i, row) in lp.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                columns[j].push((i, a));
            }
        }
        let mut cost: Vec<f64> = lp.objective.iter().map(|c| -c).collect();
        cost.resize(n + m, 0.0);
        let mut lo = lp.lower.clone();
        lo.resize(n + m, 0.0);
        let mut hi = lp.upper.clone();
        hi.resize(n + m, f64::INFINITY);
        Tableau {
            lp,
            n,
            m,
            columns,
            cost,
            lo,
            hi,
            status: Vec::new(),
            head: Vec::new(),
            binv: Vec::new(),
            xb: vec![0.0; m],
        }
    }

    fn cold_start(&mut self) {
        let (n, m) = (self.n, self.m);
        self.status = (0..n)
            .map(|j| if self.cost[j] < 0.0 { VarStatus::AtUpper } else { VarStatus::AtLower })
            .collect();
        self.status.extend(std::iter::repeat(VarStatus::Basic).take(m));
        self.head = (n..n + m).collect();
        self.binv = vec![0.0; m * m];
        for i in 0..m {
            self.binv[i * m + i] = 1.0;
        }
    }

    /// Adopts a previous basis (padding new rows with basic slacks) and
    /// restores dual feasibility by moving boxed nonbasics to the right bound.
    fn warm_start(&mut self, basis: &Basis) -> bool {
        let (n, m) = (self.n, self.m);
        let old = &basis.status;
        if old.len() < n || old.len() > n + m {
            return false;
        }
        let old_rows = old.len() - n;
        let mut status = old.clone();
        status.extend(std::iter::repeat(VarStatus::Basic).take(m - old_rows));
        let head: Vec<usize> = (0..n + m).filter(|&j| status[j] == VarStatus::Basic).collect();
        if head.len() != m {
            return false;
        }
        self.status = status;
        self.head = head;
        if !self.factorize() {
            return false;
        }
        let d = self.reduced_costs();
        for j in 0..n + m {
            if self.status[j] == VarStatus::Basic {
                continue;
            }
            if j >= n {
                if self.status[j] != VarStatus::AtLower || d[j] < -1e-7 {
                    return false;
                }
            } else if self.lo[j] == self.hi[j] || d[j] >= 0.0 {
                self.status[j] = VarStatus::AtLower;
            } else {
                self.status[j] = VarStatus::AtUpper;
            }
        }
        true
    }

    fn column_dot(&self, j: usize, v: &[f64]) -> f64 {
        if j < self.n {
            self.columns[j].iter().map(|&(i, a)| a * v[i]).sum()
        } else {
            v[j - self.n]
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.status[j] {
            VarStatus::AtUpper => self.hi[j],
            _ => self.lo[j],
        }
    }

    /// Builds the basis inverse; false if singular.
    ///
    /// With the basic slacks' rows `T` and the remaining rows `R`, the basis
    /// is block triangular: only `A[R, S]` for the basic structurals `S` needs
    /// a dense inversion, and the slack rows follow by substitution.
    fn factorize(&mut self) -> bool {
        let (m, n) = (self.m, self.n);
        let mut slack_basic = vec![false; m];
        let mut structural: Vec<(usize, usize)> = Vec::new();
        for (k, &j) in self.head.iter().enumerate() {
            if j < n {
                structural.push((k, j));
            } else {
                slack_basic[j - n] = true;
            }
        }
        let tight: Vec<usize> = (0..m).filter(|&i| !slack_basic[i]).collect();
        let s = structural.len();
        if tight.len() != s {
            return false;
        }
        let mut tight_pos = vec![usize::MAX; m];
        for (p, &i) in tight.iter().enumerate() {
            tight_pos[i] = p;
        }
        let mut var_pos = vec![usize::MAX; n];
        for (q, &(_, j)) in structural.iter().enumerate() {
            var_pos[j] = q;
        }

        // dense A[R, S], rows by tight row, columns by basic structural
        let mut a = vec![0.0; s * s];
        for (q, &(_, j)) in structural.iter().enumerate() {
            for &(i, v) in &self.columns[j] {
                if tight_pos[i] != usize::MAX {
                    a[tight_pos[i] * s + q] = v;
                }
            }
        }
        let Some(inv) = invert_dense(a, s) else {
            return false;
        };

        let mut binv = vec![0.0; m * m];
        for (q, &(k, _)) in structural.iter().enumerate() {
            for p in 0..s {
                binv[k * m + tight[p]] = inv[q * s + p];
            }
        }
        for (k, &j) in self.head.iter().enumerate() {
            if j < n {
                continue;
            }
            let t = j - n;
            binv[k * m + t] = 1.0;
            for &(var, v) in &self.lp.rows[t].coeffs {
                let q = var_pos[var];
                if q == usize::MAX {
                    continue;
                }
                for p in 0..s {
                    binv[k * m + tight[p]] -= v * inv[q * s + p];
                }
            }
        }
        self.binv = binv;
        true
    }

    fn compute_xb(&mut self) {
        let m = self.m;
        let mut rhs: Vec<f64> = self.lp.rows.iter().map(|r| r.rhs).collect();
        for j in 0..self.n + m {
            if self.status[j] == VarStatus::Basic {
                continue;
            }
            let v = self.nonbasic_value(j);
            if v == 0.0 {
                continue;
            }
            if j < self.n {
                for &(i, a) in &self.columns[j] {
                    rhs[i] -= a * v;
                }
            } else {
                rhs[j - self.n] -= v;
            }
        }
        for k in 0..m {
            self.xb[k] = (0..m).map(|i| self.binv[k * m + i] * rhs[i]).sum();
        }
    }

    fn reduced_costs(&self) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (k, &j) in self.head.iter().enumerate() {
            let c = self.cost[j];
            if c != 0.0 {
                for i in 0..m {
                    y[i] += c * self.binv[k * m + i];
                }
            }
        }
        (0..self.n + m)
            .map(|j| {
                if self.status[j] == VarStatus::Basic {
                    0.0
                } else {
                    self.cost[j] - self.column_dot(j, &y)
                }
            })
            .collect()
    }

    /// Basic position with the largest squared bound violation relative to
    /// the squared norm of its basis inverse row (dual steepest edge), or
    /// under Bland's rule the smallest variable index. `true` means below the
    /// lower bound.
    fn leaving(&self, bland: bool) -> Option<(usize, bool)> {
        let m = self.m;
        let mut best: Option<(usize, bool, f64)> = None;
        for k in 0..m {
            let j = self.head[k];
            let x = self.xb[k];
            let (below, infeas) = if x < self.lo[j] - FEAS_TOL {
                (true, self.lo[j] - x)
            } else if x > self.hi[j] + FEAS_TOL {
                (false, x - self.hi[j])
            } else {
                continue;
            };
            let score = if bland {
                0.0
            } else {
                let norm: f64 = self.binv[k * m..(k + 1) * m].iter().map(|v| v * v).sum();
                infeas * infeas / norm.max(1e-12)
            };
            let better = match best {
                None => true,
                Some((bk, _, bs)) => {
                    if bland {
                        j < self.head[bk]
                    } else {
                        score > bs
                    }
                }
            };
            if better {
                best = Some((k, below, score));
            }
        }
        best.map(|(k, below, _)| (k, below))
    }

    /// Replaces basis position `r` by column `q` in the explicit inverse and
    /// returns the entering column `B^-1 a_q` before the update.
    fn pivot(&mut self, r: usize, q: usize) -> Option<Vec<f64>> {
        let m = self.m;
        let mut u = vec![0.0; m];
        if q < self.n {
            for &(i, a) in &self.columns[q] {
                for k in 0..m {
                    u[k] += self.binv[k * m + i] * a;
                }
            }
        } else {
            let i = q - self.n;
            for k in 0..m {
                u[k] = self.binv[k * m + i];
            }
        }
        let pr = u[r];
        if pr.abs() < SINGULAR_TOL {
            return None;
        }
        // row r is sparse: only tight rows and at most one slack row
        let mut support = Vec::new();
        for i in 0..m {
            let v = self.binv[r * m + i];
            if v != 0.0 {
                self.binv[r * m + i] = v / pr;
                support.push(i);
            }
        }
        for k in 0..m {
            if k == r || u[k] == 0.0 {
                continue;
            }
            let f = u[k];
            for &i in &support {
                self.binv[k * m + i] -= f * self.binv[r * m + i];
            }
        }
        Some(u)
    }

    fn run(&mut self, options: &SimplexOptions) -> (LpStatus, usize) {
        let (n, m) = (self.n, self.m);
        let mut iterations = 0;
        let mut since_refactor = 0;
        let mut degenerate = 0;
        let mut bland = false;
        let mut alpha = vec![0.0; n + m];
        self.compute_xb();
        let mut d = self.reduced_costs();
        loop {
            if since_refactor >= options.refactor_every {
                if !self.factorize() {
                    self.cold_start();
                }
                self.compute_xb();
                d = self.reduced_costs();
                since_refactor = 0;
            }
            let Some((r, below)) = self.leaving(bland) else {
                if since_refactor > 0 {
                    // confirm on a fresh factorization
                    since_refactor = options.refactor_every;
                    continue;
                }
                return (LpStatus::Optimal, iterations);
            };
            if iterations >= options.max_iterations {
                return (LpStatus::IterationLimit, iterations);
            }
            iterations += 1;

            let rho: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
            let mut entering: Option<(usize, f64, f64)> = None;
            for j in 0..n + m {
                let st = self.status[j];
                if st == VarStatus::Basic {
                    continue;
                }
                alpha[j] = self.column_dot(j, &rho);
                if self.lo[j] == self.hi[j] {
                    continue;
                }
                let a = alpha[j];
                let eligible = match (below, st) {
                    (true, VarStatus::AtLower) => a < -PIVOT_TOL,
                    (true, VarStatus::AtUpper) => a > PIVOT_TOL,
                    (false, VarStatus::AtLower) => a > PIVOT_TOL,
                    (false, VarStatus::AtUpper) => a < -PIVOT_TOL,
                    _ => false,
                };
                if !eligible {
                    continue;
                }
                let dj = match st {
                    VarStatus::AtLower => d[j].max(0.0),
                    _ => (-d[j]).max(0.0),
                };
                let ratio = dj / a.abs();
                let better = match entering {
                    None => true,
                    Some((_, br, ba)) => {
                        if bland {
                            ratio < br - DUAL_TOL
                        } else {
                            ratio < br - DUAL_TOL || (ratio <= br + DUAL_TOL && a.abs() > ba)
                        }
                    }
                };
                if better {
                    entering = Some((j, ratio, a.abs()));
                }
            }
            let Some((q, ratio, _)) = entering else {
                return (LpStatus::Infeasible, iterations);
            };
            if ratio <= DUAL_TOL {
                degenerate += 1;
                if degenerate > options.degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }

            let leaving_var = self.head[r];
            let entering_value = self.nonbasic_value(q);
            let Some(u) = self.pivot(r, q) else {
                since_refactor = options.refactor_every;
                continue;
            };
            let target = if below { self.lo[leaving_var] } else { self.hi[leaving_var] };
            let theta = (self.xb[r] - target) / u[r];
            for k in 0..m {
                self.xb[k] -= theta * u[k];
            }
            self.xb[r] = entering_value + theta;
            let theta_d = d[q] / alpha[q];
            for j in 0..n + m {
                if self.status[j] != VarStatus::Basic {
                    d[j] -= theta_d * alpha[j];
                }
            }
            d[q] = 0.0;
            d[leaving_var] = -theta_d;

            self.status[leaving_var] = if below { VarStatus::AtLower } else { VarStatus::AtUpper };
            self.status[q] = VarStatus::Basic;
            self.head[r] = q;
            since_refactor += 1;
        }
    }

    /// Objective of the current basic solution before clamping. The basis
    /// stays dual feasible, so this bounds the optimum from above.
    fn dual_objective(&self) -> f64 {
        let mut x: Vec<f64> = (0..self.n).map(|j| self.nonbasic_value(j)).collect();
        for (k, &j) in self.head.iter().enumerate() {
            if j < self.n {
                x[j] = self.xb[k];
            }
        }
        self.lp.objective_value(&x)
    }

    fn values(&self) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.n).map(|j| self.nonbasic_value(j)).collect();
        for (k, &j) in self.head.iter().enumerate() {
            if j < self.n {
                x[j] = self.xb[k];
            }
        }
        for j in 0..self.n {
            x[j] = x[j].clamp(self.lo[j], self.hi[j]);
        }
        x
    }
}

/// Inverse of a dense `s x s` matrix by Gauss-Jordan with partial pivoting.
fn invert_dense(mut b: Vec<f64>, s: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; s * s];
    for i in 0..s {
        inv[i * s + i] = 1.0;
    }
    for c in 0..s {
        let p = (c..s).max_by(|&r, &t| b[r * s + c].abs().total_cmp(&b[t * s + c].abs()))?;
        if b[p * s + c].abs() < SINGULAR_TOL {
            return None;
        }
        if p != c {
            for k in 0..s {
                b.swap(p * s + k, c * s + k);
                inv.swap(p * s + k, c * s + k);
            }
        }
        let piv = b[c * s + c];
        for k in 0..s {
            b[c * s + k] /= piv;
            inv[c * s + k] /= piv;
        }
        for r in 0..s {
            if r == c {
                continue;
            }
            let f = b[r * s + c];
            if f == 0.0 {
                continue;
            }
            for k in 0..s {
                b[r * s + k] -= f * b[c * s + k];
                inv[r * s + k] -= f * inv[c * s + k];
            }
        }
    }
    // rows of `inv` are indexed by the column order of the input
    Some(inv)
}

pub(super) fn solve(lp: &LinearProgram, warm: Option<&Basis>, options: &SimplexOptions) -> LpSolution {
    let mut t = Tableau::new(lp);
    let warmed = warm.is_some_and(|b| t.warm_start(b));
    if !warmed {
        t.cold_start();
    }
    let (status, iterations) = t.run(options);
    let values = t.values();
    let objective = lp.objective_value(&values);
    let bound = match status {
        LpStatus::Optimal => objective,
        LpStatus::Infeasible => f64::NEG_INFINITY,
        LpStatus::IterationLimit => t.dual_objective(),
    };
    LpSolution { status, values, objective, bound, basis: Basis { status: t.status.clone() }, iterations }
}

/// Row `r` of the basis inverse together with the basis header, for cut
/// generation from an optimal basis. `None` if the basis is singular or
/// does not fit the program.
pub(super) fn basis_inverse(lp: &LinearProgram, basis: &Basis) -> Option<(Vec<usize>, Vec<f64>)> {
    let mut t = Tableau::new(lp);
    if basis.status.len() != lp.num_vars() + lp.num_rows() {
        return None;
    }
    t.status = basis.status.clone();
    t.head = (0..t.n + t.m).filter(|&j| t.status[j] == VarStatus::Basic).collect();
    if t.head.len() != t.m || !t.factorize() {
        return None;
    }
    Some((t.head, t.binv))
}
