use serde::Serialize;

use crate::complex::ArcId;
use crate::error::SolverError;
use crate::lp::{Basis, LpSolution, INT_TOL};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchingRule {
    #[default]
    MostFractional,
    Pseudocost,
}

impl std::str::FromStr for BranchingRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "most_fractional" | "fractional" => Ok(BranchingRule::MostFractional),
            "pseudocost" => Ok(BranchingRule::Pseudocost),
            other => Err(format!("unknown branching rule '{other}'")),
        }
    }
}

/// Average objective loss per unit change, per variable and direction.
#[derive(Clone, Debug)]
pub struct Pseudocosts {
    down: Vec<(f64, usize)>,
    up: Vec<(f64, usize)>,
}

impl Pseudocosts {
    pub fn new(num_vars: usize) -> Self {
        Pseudocosts { down: vec![(0.0, 0); num_vars], up: vec![(0.0, 0); num_vars] }
    }

    /// Records that moving `var` by `distance` in direction `up` lowered the
    /// LP bound by `loss`.
    pub fn record(&mut self, var: ArcId, up: bool, distance: f64, loss: f64) {
        if distance <= INT_TOL {
            return;
        }
        let slot = if up { &mut self.up[var] } else { &mut self.down[var] };
        slot.0 += loss.max(0.0) / distance;
        slot.1 += 1;
    }

    /// Number of observations for `var` in the given direction.
    pub fn count(&self, var: ArcId, up: bool) -> usize {
        if up {
            self.up[var].1
        } else {
            self.down[var].1
        }
    }

    /// Expected bound losses `(down, up)` for branching on `var` at `value`.
    pub fn estimates(&self, var: ArcId, value: f64) -> (f64, f64) {
        let f = value - value.floor();
        let down = Self::estimate(&self.down, var, Self::average(&self.down)) * f;
        let up = Self::estimate(&self.up, var, Self::average(&self.up)) * (1.0 - f);
        (down, up)
    }

    fn average(list: &[(f64, usize)]) -> f64 {
        let (sum, count) = list
            .iter()
            .filter(|e| e.1 > 0)
            .fold((0.0, 0usize), |(s, c), e| (s + e.0 / e.1 as f64, c + 1));
        if count == 0 {
            1.0
        } else {
            sum / count as f64
        }
    }

    fn estimate(list: &[(f64, usize)], var: ArcId, fallback: f64) -> f64 {
        let (sum, count) = list[var];
        if count == 0 {
            fallback
        } else {
            sum / count as f64
        }
    }
}

/// Product score of two bound losses.
pub fn score(down: f64, up: f64) -> f64 {
    down.max(1e-6) * up.max(1e-6)
}

fn fractionality(v: f64) -> f64 {
    (v - v.round()).abs()
}

/// Picks the branching variable, or `None` when `x` is integral.
pub fn select_variable(x: &[f64], rule: BranchingRule, pseudocosts: &Pseudocosts) -> Option<ArcId> {
    let candidates = (0..x.len()).filter(|&j| fractionality(x[j]) > INT_TOL);
    match rule {
        BranchingRule::MostFractional => {
            candidates.min_by(|&a, &b| (x[a] - 0.5).abs().total_cmp(&(x[b] - 0.5).abs()).then(a.cmp(&b)))
        }
        BranchingRule::Pseudocost => {
            let avg_down = Pseudocosts::average(&pseudocosts.down);
            let avg_up = Pseudocosts::average(&pseudocosts.up);
            let score = |j: ArcId| {
                let f = x[j] - x[j].floor();
                let down = Pseudocosts::estimate(&pseudocosts.down, j, avg_down) * f;
                let up = Pseudocosts::estimate(&pseudocosts.up, j, avg_up) * (1.0 - f);
                score(down, up)
            };
            candidates.max_by(|&a, &b| score(a).total_cmp(&score(b)).then(b.cmp(&a)))
        }
    }
}

/// An open subproblem: variable fixings on top of the global cut pool.
#[derive(Clone, Debug)]
pub struct Node {
    pub fixings: Vec<(ArcId, f64)>,
    /// LP bound of the parent; an upper bound for this node.
    pub bound: f64,
    pub depth: usize,
    pub basis: Option<Basis>,
    /// The branching decision that created the node: variable, direction,
    /// and the parent's value of the variable.
    pub origin: Option<(ArcId, bool, f64)>,
}

impl Node {
    pub fn root() -> Self {
        Node { fixings: Vec::new(), bound: f64::INFINITY, depth: 0, basis: None, origin: None }
    }
}

/// Splits `node` on a variable chosen by `rule` into the children fixing it
/// to 0 and to 1 (in that order).
pub fn branch(
    node: &Node,
    solution: &LpSolution,
    rule: BranchingRule,
    pseudocosts: &Pseudocosts,
) -> Result<[Node; 2], SolverError> {
    let var = select_variable(&solution.values, rule, pseudocosts).ok_or(SolverError::IntegralBranch)?;
    branch_on(node, solution, var)
}

/// Splits `node` on `var`, which must be fractional in `solution`.
pub fn branch_on(node: &Node, solution: &LpSolution, var: ArcId) -> Result<[Node; 2], SolverError> {
    if (solution.values[var] - solution.values[var].round()).abs() <= INT_TOL {
        return Err(SolverError::IntegralBranch);
    }
    let value = solution.values[var];
    let child = |fix: f64| {
        let mut fixings = node.fixings.clone();
        fixings.push((var, fix));
        Node {
            fixings,
            bound: solution.objective,
            depth: node.depth + 1,
            basis: Some(solution.basis.clone()),
            origin: Some((var, fix > 0.5, value)),
        }
    };
    Ok([child(0.0), child(1.0)])
}
