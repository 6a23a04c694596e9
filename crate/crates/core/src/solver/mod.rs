//! Branch-and-cut for maximum Morse matchings.
//!
//! The initial LP holds the matching rows and one Betti row per dimension.
//! Cycle inequalities are separated at every node (up to a round limit) and
//! integral points are checked for acyclicity, with the witness cycle added
//! as a lazy cut. All cuts are globally valid and live in one shared LP;
//! nodes differ only in their variable fixings.

mod branching;

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::complex::{ArcId, FaceId, HasseDiagram, SimplicialComplex};
use crate::error::{MatchingError, SolverError};
use crate::heuristic;
use crate::homology::{best_betti_bounds, FieldSpec};
use crate::lp::{gomory_cuts, LinearProgram, LpSolution, LpStatus, Row, SimplexOptions, INT_TOL, OPT_TOL};
use crate::matching::{
    canonicalize_vertices, check_morse_matching, critical_report, CriticalReport, IncrementalMatching, MorseMatching,
};
use crate::separation::{separate_all, separate_free_face, CycleCut, FreeFaceCut, DEFAULT_MAX_CUTS};

pub use branching::{branch, branch_on, select_variable, BranchingRule, Node, Pseudocosts};

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Fields whose Betti numbers bound the critical counts.
    pub fields: Vec<FieldSpec>,
    /// Cut rounds per node.
    pub separation_rounds: usize,
    /// Run the heuristic at nodes whose depth is a multiple of this.
    pub heuristic_frequency: usize,
    /// Cycle cuts per level and round.
    pub max_cuts: usize,
    pub branching: BranchingRule,
    pub gomory: bool,
    /// Separate cycle inequalities at fractional points. When off, cycles
    /// are only excluded lazily at integral points.
    pub separate: bool,
    /// Also separate free-face inequalities (requires `separate`).
    pub free_face_cuts: bool,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<usize>,
    pub split_components: bool,
    /// Per-arc objective; all ones when absent.
    pub weights: Option<Vec<f64>>,
    pub lp: SimplexOptions,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            fields: FieldSpec::defaults(),
            separation_rounds: 7,
            heuristic_frequency: 10,
            max_cuts: DEFAULT_MAX_CUTS,
            branching: BranchingRule::MostFractional,
            gomory: false,
            separate: true,
            free_face_cuts: true,
            time_limit: None,
            node_limit: None,
            split_components: false,
            weights: None,
            lp: SimplexOptions::default(),
        }
    }
}

impl SolverConfig {
    /// Cycles are excluded only at integral LP points.
    pub fn no_separation() -> Self {
        SolverConfig { separate: false, free_face_cuts: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let positive = [
            ("separation rounds", self.separation_rounds),
            ("heuristic frequency", self.heuristic_frequency),
            ("max cuts", self.max_cuts),
            ("node limit", self.node_limit.unwrap_or(1)),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(SolverError::Config(format!("{name} must be positive")));
        }
        if self.time_limit.is_some_and(|t| t.is_zero()) {
            return Err(SolverError::Config("time limit must be positive".into()));
        }
        if self.fields.is_empty() {
            return Err(SolverError::Config("no fields for Betti bounds".into()));
        }
        if self.weights.as_ref().is_some_and(|w| w.iter().any(|v| !v.is_finite())) {
            return Err(SolverError::Config("weights must be finite".into()));
        }
        if self.weights.is_some() && self.split_components {
            return Err(SolverError::Config("weights cannot be combined with component splitting".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SolveStatus {
    Optimal,
    /// Search finished but some node could not be certified (LP trouble);
    /// `gap` is the remaining distance to the dual bound.
    Feasible { gap: f64 },
    TimeLimit,
    NodeLimit,
}

impl SolveStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible { .. } => "feasible",
            SolveStatus::TimeLimit => "time_limit",
            SolveStatus::NodeLimit => "node_limit",
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, SolveStatus::Optimal)
    }

    fn severity(&self) -> u8 {
        match self {
            SolveStatus::Optimal => 0,
            SolveStatus::Feasible { .. } => 1,
            SolveStatus::NodeLimit => 2,
            SolveStatus::TimeLimit => 3,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SolveStats {
    pub nodes: usize,
    pub max_depth: usize,
    pub time_seconds: f64,
    /// LP bound at the root after its cut rounds.
    pub root_bound: f64,
    pub cycle_cuts: usize,
    pub free_face_cuts: usize,
    pub lazy_cuts: usize,
    pub gomory_cuts: usize,
    pub separation_rounds: usize,
    pub lp_iterations: usize,
    pub heuristic_calls: usize,
    pub heuristic_improvements: usize,
}

impl SolveStats {
    pub fn cuts_added(&self) -> usize {
        self.cycle_cuts + self.free_face_cuts + self.lazy_cuts + self.gomory_cuts
    }

    fn absorb(&mut self, other: &SolveStats) {
        self.nodes += other.nodes;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.root_bound += other.root_bound;
        self.cycle_cuts += other.cycle_cuts;
        self.free_face_cuts += other.free_face_cuts;
        self.lazy_cuts += other.lazy_cuts;
        self.gomory_cuts += other.gomory_cuts;
        self.separation_rounds += other.separation_rounds;
        self.lp_iterations += other.lp_iterations;
        self.heuristic_calls += other.heuristic_calls;
        self.heuristic_improvements += other.heuristic_improvements;
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub matching: MorseMatching,
    pub report: CriticalReport,
    /// Objective value of `matching` (its size under unit weights).
    pub objective: f64,
    /// Proven upper bound on the objective.
    pub dual_bound: f64,
    /// Best Betti numbers per dimension.
    pub betti: Vec<usize>,
    pub betti_bound: usize,
    /// Proven lower bound on the number of critical faces.
    pub critical_bound: usize,
    pub stats: SolveStats,
}

/// The Betti lower bound `sum_i b_i` on the number of critical faces.
pub fn prove_bound(complex: &SimplicialComplex, config: &SolverConfig) -> Result<usize, SolverError> {
    Ok(best_betti_bounds(complex, &config.fields)?.iter().sum())
}

/// The initial relaxation: variable bounds, matching rows and Betti rows.
pub fn build_relaxation(h: &HasseDiagram, betti: &[usize], weights: Vec<f64>) -> Result<LinearProgram, SolverError> {
    if weights.len() != h.num_arcs() {
        return Err(SolverError::Weights { expected: h.num_arcs(), got: weights.len() });
    }
    let mut lp = LinearProgram::new(weights)?;
    for face in 0..h.num_faces() {
        let coeffs: Vec<(usize, f64)> = h.incident(face).map(|a| (a, 1.0)).collect();
        if !coeffs.is_empty() {
            lp.add_row(Row::new(coeffs, 1.0))?;
        }
    }
    let f = h.f_vector();
    for (dim, &b) in betti.iter().enumerate() {
        let coeffs: Vec<(usize, f64)> =
            h.faces_of_dim(dim).flat_map(|face| h.incident(face).map(|a| (a, 1.0))).collect();
        if !coeffs.is_empty() {
            lp.add_row(Row::new(coeffs, f[dim] as f64 - b as f64))?;
        }
    }
    Ok(lp)
}

/// Cycle cut for a directed cycle of `H(M)` reported by the matching check.
fn witness_cut(h: &HasseDiagram, level: usize, mut faces: Vec<FaceId>, x: &[f64]) -> Option<CycleCut> {
    let p = faces.iter().position(|&f| h.face_dim(f) == level)?;
    faces.rotate_left(p);
    CycleCut::from_faces(h, level, faces, x).ok()
}

fn free_face_cuts(h: &HasseDiagram, x: &[f64], max_cuts: usize) -> Vec<FreeFaceCut> {
    (0..h.num_levels()).flat_map(|level| separate_free_face(h, level, x, max_cuts).unwrap_or_default()).collect()
}

fn integral_arcs(x: &[f64]) -> Vec<ArcId> {
    (0..x.len()).filter(|&a| x[a] > 0.5).collect()
}

/// The root LP after its cut rounds, without branching. Used to seed the
/// heuristic from outside the search.
pub fn root_relaxation(complex: &SimplicialComplex, config: &SolverConfig) -> Result<LpSolution, SolverError> {
    config.validate()?;
    let h = HasseDiagram::new(complex);
    let betti = best_betti_bounds(complex, &config.fields)?;
    let weights = config.weights.clone().unwrap_or_else(|| vec![1.0; h.num_arcs()]);
    let mut lp = build_relaxation(&h, &betti, weights)?;
    let mut basis = None;
    let mut rounds = 0;
    loop {
        let sol = lp.solve_with(basis.as_ref(), &config.lp);
        if sol.status != LpStatus::Optimal {
            return Ok(sol);
        }
        basis = Some(sol.basis.clone());
        let before = lp.num_rows();
        if sol.is_integral() {
            if let Err(MatchingError::Cycle { level, faces, .. }) = check_morse_matching(&h, &integral_arcs(&sol.values)) {
                if let Some(cut) = witness_cut(&h, level, faces, &sol.values) {
                    lp.add_row(cut.to_row())?;
                }
            }
        } else if config.separate && rounds < config.separation_rounds {
            rounds += 1;
            let x: Vec<f64> = sol.values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
            for cut in separate_all(&h, &x, config.max_cuts).unwrap_or_default() {
                lp.add_row(cut.to_row())?;
            }
            if config.free_face_cuts {
                for cut in free_face_cuts(&h, &x, config.max_cuts) {
                    lp.add_row(cut.to_row())?;
                }
            }
        }
        if lp.num_rows() == before {
            return Ok(sol);
        }
    }
}

struct Open(Node);

impl PartialEq for Open {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Open {}

impl Ord for Open {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .bound
            .total_cmp(&other.0.bound)
            .then(self.0.depth.cmp(&other.0.depth))
            .then_with(|| fixing_key(&other.0).cmp(&fixing_key(&self.0)))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic tie-break between open nodes of equal bound and depth.
fn fixing_key(node: &Node) -> Vec<(ArcId, bool)> {
    node.fixings.iter().map(|&(a, x)| (a, x > 0.5)).collect()
}

enum Outcome {
    Done,
    Branched([Node; 2]),
}

/// Result of strong branching at a node.
enum Probe {
    Branch(ArcId),
    Fix(ArcId, f64),
}

/// Observations per direction before pseudocosts replace strong branching.
const RELIABLE: usize = 4;
const MAX_PROBES: usize = 16;
const STRONG_ITERATIONS: usize = 50;

struct Search<'a> {
    h: &'a HasseDiagram,
    config: &'a SolverConfig,
    lp: LinearProgram,
    integral_weights: bool,
    incumbent: MorseMatching,
    incumbent_value: f64,
    pseudocosts: Pseudocosts,
    stats: SolveStats,
    cut_keys: HashSet<Vec<ArcId>>,
    /// Largest bound among nodes dropped without certification.
    uncertified: f64,
}

impl<'a> Search<'a> {
    fn value(&self, m: &MorseMatching) -> f64 {
        m.arcs().iter().map(|&a| self.lp.objective()[a]).sum()
    }

    /// Rounds an LP bound down when the objective is integral.
    fn effective(&self, bound: f64) -> f64 {
        if self.integral_weights {
            (bound + OPT_TOL).floor()
        } else {
            bound
        }
    }

    fn prunes(&self, bound: f64) -> bool {
        if self.integral_weights {
            self.effective(bound) <= self.incumbent_value + 0.5
        } else {
            bound <= self.incumbent_value + OPT_TOL
        }
    }

    /// Canonicalizes a candidate and keeps it if it beats the incumbent.
    fn offer(&mut self, candidate: MorseMatching) -> bool {
        let candidate = match canonicalize_vertices(self.h, &candidate) {
            Ok(c) if self.value(&c) >= self.value(&candidate) - 1e-9 => c,
            _ => candidate,
        };
        let v = self.value(&candidate);
        if v > self.incumbent_value + 1e-9 {
            self.incumbent = candidate;
            self.incumbent_value = v;
            true
        } else {
            false
        }
    }

    fn add_cycle_cut(&mut self, cut: &CycleCut) -> Result<bool, SolverError> {
        if !self.cut_keys.insert(cut.key()) {
            return Ok(false);
        }
        let before = self.lp.num_rows();
        self.lp.add_row(cut.to_row())?;
        Ok(self.lp.num_rows() > before)
    }

    /// Strong branching on candidates whose pseudocosts are not yet
    /// reliable, most fractional first. A direction whose bound prunes
    /// turns into a fixing of the other direction.
    fn probe(&mut self, sol: &LpSolution) -> Result<Probe, SolverError> {
        let x = &sol.values;
        let mut candidates: Vec<ArcId> = (0..x.len()).filter(|&j| (x[j] - x[j].round()).abs() > INT_TOL).collect();
        candidates.sort_by(|&a, &b| (x[a] - 0.5).abs().total_cmp(&(x[b] - 0.5).abs()).then(a.cmp(&b)));
        let options = SimplexOptions { max_iterations: STRONG_ITERATIONS, ..self.config.lp.clone() };
        let mut best: Option<(f64, ArcId)> = None;
        let mut probed = 0;
        for var in candidates {
            let reliable = self.pseudocosts.count(var, false) >= RELIABLE && self.pseudocosts.count(var, true) >= RELIABLE;
            let (down, up) = if reliable || probed >= MAX_PROBES {
                self.pseudocosts.estimates(var, x[var])
            } else {
                probed += 1;
                let mut losses = [0.0; 2];
                for (k, value) in [0.0, 1.0].into_iter().enumerate() {
                    self.lp.fix_variable(var, value)?;
                    let child = self.lp.solve_with(Some(&sol.basis), &options);
                    self.lp.unfix_variable(var);
                    self.stats.lp_iterations += child.iterations;
                    if self.prunes(child.bound) {
                        return Ok(Probe::Fix(var, 1.0 - value));
                    }
                    let loss = (sol.objective - child.bound).max(0.0);
                    let distance = if value > 0.5 { 1.0 - x[var] } else { x[var] };
                    self.pseudocosts.record(var, value > 0.5, distance, loss);
                    losses[k] = loss;
                }
                (losses[0], losses[1])
            };
            let s = branching::score(down, up);
            if best.is_none_or(|(b, _)| s > b) {
                best = Some((s, var));
            }
        }
        best.map(|(_, var)| Probe::Branch(var)).ok_or(SolverError::IntegralBranch)
    }

    /// Fixes to 0 every free arc that cannot join the arcs fixed to 1.
    /// Returns false when those arcs are not a Morse matching themselves.
    fn propagate(&mut self, fixings: &[(ArcId, f64)]) -> Result<bool, SolverError> {
        let mut inc = IncrementalMatching::new(self.h);
        let mut fixed = vec![false; self.h.num_arcs()];
        for &(var, value) in fixings {
            fixed[var] = true;
            if value > 0.5 && !inc.try_add(var) {
                return Ok(false);
            }
        }
        if inc.is_empty() {
            return Ok(true);
        }
        for arc in 0..self.h.num_arcs() {
            if !fixed[arc] && !inc.can_add(arc) {
                self.lp.fix_variable(arc, 0.0)?;
            }
        }
        Ok(true)
    }

    fn process(&mut self, mut node: Node) -> Result<Outcome, SolverError> {
        if self.prunes(node.bound) {
            return Ok(Outcome::Done);
        }
        self.lp.reset_bounds();
        for &(var, value) in &node.fixings {
            self.lp.fix_variable(var, value)?;
        }
        if !self.propagate(&node.fixings)? {
            return Ok(Outcome::Done);
        }
        let mut basis = node.basis.clone();
        let mut rounds = 0;
        let mut heuristic_done = false;
        let mut first = true;
        loop {
            let sol = self.lp.solve_with(basis.as_ref(), &self.config.lp);
            self.stats.lp_iterations += sol.iterations;
            match sol.status {
                LpStatus::Infeasible => return Ok(Outcome::Done),
                LpStatus::IterationLimit if basis.is_some() => {
                    basis = None;
                    continue;
                }
                LpStatus::IterationLimit => {
                    self.uncertified = self.uncertified.max(node.bound);
                    return Ok(Outcome::Done);
                }
                LpStatus::Optimal => {}
            }
            if first {
                first = false;
                if let Some((var, up, value)) = node.origin {
                    let distance = if up { 1.0 - value } else { value };
                    self.pseudocosts.record(var, up, distance, node.bound - sol.objective);
                }
            }
            if node.depth == 0 {
                self.stats.root_bound = sol.objective;
            }
            basis = Some(sol.basis.clone());
            if self.prunes(sol.objective) {
                return Ok(Outcome::Done);
            }
            if !heuristic_done && node.depth % self.config.heuristic_frequency == 0 {
                heuristic_done = true;
                self.stats.heuristic_calls += 1;
                if self.offer(heuristic::run(self.h, &sol.values)) {
                    self.stats.heuristic_improvements += 1;
                }
                if self.prunes(sol.objective) {
                    return Ok(Outcome::Done);
                }
            }

            if sol.is_integral() {
                let arcs = integral_arcs(&sol.values);
                match check_morse_matching(self.h, &arcs) {
                    Ok(()) => {
                        self.offer(MorseMatching::new(self.h, arcs).expect("checked"));
                        return Ok(Outcome::Done);
                    }
                    Err(MatchingError::Cycle { level, faces, .. }) => {
                        let cut = witness_cut(self.h, level, faces, &sol.values)
                            .ok_or_else(|| SolverError::Numerical("cycle witness is not a simple cycle".into()))?;
                        if self.add_cycle_cut(&cut)? {
                            self.stats.lazy_cuts += 1;
                        } else {
                            // the row is present yet violated: LP numerics
                            self.uncertified = self.uncertified.max(sol.objective);
                            return Ok(Outcome::Done);
                        }
                        continue;
                    }
                    Err(e) => return Err(SolverError::Numerical(e.to_string())),
                }
            }

            if rounds < self.config.separation_rounds {
                let mut added = 0;
                if self.config.separate {
                    let x: Vec<f64> = sol.values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
                    let cuts = separate_all(self.h, &x, self.config.max_cuts).unwrap_or_default();
                    for cut in cuts {
                        if self.add_cycle_cut(&cut)? {
                            added += 1;
                            self.stats.cycle_cuts += 1;
                        }
                    }
                    if self.config.free_face_cuts {
                        for cut in free_face_cuts(self.h, &x, self.config.max_cuts) {
                            if self.cut_keys.insert(cut.key()) {
                                self.lp.add_row(cut.to_row())?;
                                added += 1;
                                self.stats.free_face_cuts += 1;
                            }
                        }
                    }
                }
                if self.config.gomory && node.fixings.is_empty() {
                    for row in gomory_cuts(&self.lp, &sol) {
                        let before = self.lp.num_rows();
                        self.lp.add_row(row)?;
                        if self.lp.num_rows() > before {
                            added += 1;
                            self.stats.gomory_cuts += 1;
                        }
                    }
                }
                if added > 0 {
                    rounds += 1;
                    self.stats.separation_rounds += 1;
                    continue;
                }
            }

            let var = match self.config.branching {
                BranchingRule::MostFractional => {
                    select_variable(&sol.values, BranchingRule::MostFractional, &self.pseudocosts)
                        .ok_or(SolverError::IntegralBranch)?
                }
                BranchingRule::Pseudocost => match self.probe(&sol)? {
                    Probe::Branch(var) => var,
                    Probe::Fix(var, value) => {
                        node.fixings.push((var, value));
                        self.lp.fix_variable(var, value)?;
                        if !self.propagate(&node.fixings)? {
                            return Ok(Outcome::Done);
                        }
                        continue;
                    }
                },
            };
            let parent = Node { bound: sol.objective, ..node };
            return Ok(Outcome::Branched(branch_on(&parent, &sol, var)?));
        }
    }
}

struct Budget {
    deadline: Option<Instant>,
    nodes_left: Option<usize>,
}

fn solve_connected(
    complex: &SimplicialComplex,
    config: &SolverConfig,
    budget: &mut Budget,
) -> Result<SolveResult, SolverError> {
    let start = Instant::now();
    let h = HasseDiagram::new(complex);
    let betti = best_betti_bounds(complex, &config.fields)?;
    let weights = config.weights.clone().unwrap_or_else(|| vec![1.0; h.num_arcs()]);
    let integral_weights = weights.iter().all(|w| w.fract() == 0.0);
    let lp = build_relaxation(&h, &betti, weights)?;

    let empty = MorseMatching::empty(&h);
    let mut search = Search {
        h: &h,
        config,
        lp,
        integral_weights,
        incumbent: empty.clone(),
        incumbent_value: 0.0,
        pseudocosts: Pseudocosts::new(h.num_arcs()),
        stats: SolveStats::default(),
        cut_keys: HashSet::new(),
        uncertified: f64::NEG_INFINITY,
    };
    search.incumbent_value = search.value(&empty);
    search.offer(empty);

    let mut heap: BinaryHeap<Open> = BinaryHeap::new();
    let mut current = Some(Node::root());
    let mut stopped = None;
    loop {
        let node = match current.take() {
            Some(n) => n,
            None => match heap.pop() {
                Some(Open(n)) => n,
                None => break,
            },
        };
        if search.prunes(node.bound) {
            continue;
        }
        if budget.deadline.is_some_and(|d| Instant::now() >= d) {
            stopped = Some(SolveStatus::TimeLimit);
            heap.push(Open(node));
            break;
        }
        if budget.nodes_left == Some(0) {
            stopped = Some(SolveStatus::NodeLimit);
            heap.push(Open(node));
            break;
        }
        if let Some(n) = budget.nodes_left.as_mut() {
            *n -= 1;
        }
        search.stats.nodes += 1;
        search.stats.max_depth = search.stats.max_depth.max(node.depth);
        match search.process(node)? {
            Outcome::Done => {}
            Outcome::Branched([down, up]) => {
                heap.push(Open(down));
                current = Some(up);
            }
        }
    }

    let open_bound = heap
        .iter()
        .map(|o| o.0.bound)
        .filter(|&b| !search.prunes(b))
        .fold(f64::NEG_INFINITY, f64::max);
    let objective = search.incumbent_value;
    let mut dual_bound = objective;
    let effective = |b: f64| search.effective(b);
    if open_bound.is_finite() {
        dual_bound = dual_bound.max(effective(open_bound));
    } else if open_bound == f64::INFINITY {
        dual_bound = f64::INFINITY;
    }
    if search.uncertified.is_finite() && !search.prunes(search.uncertified) {
        dual_bound = dual_bound.max(effective(search.uncertified));
    }
    let status = match stopped {
        Some(s) if dual_bound > objective + OPT_TOL => s,
        _ if dual_bound > objective + OPT_TOL => SolveStatus::Feasible { gap: dual_bound - objective },
        _ => SolveStatus::Optimal,
    };
    if status.is_optimal() {
        dual_bound = objective;
    }

    let report = critical_report(&h, &search.incumbent);
    let betti_bound: usize = betti.iter().sum();
    let n = h.num_faces();
    let critical_bound = if config.weights.is_none() && dual_bound.is_finite() {
        betti_bound.max(n.saturating_sub(2 * dual_bound.max(0.0) as usize))
    } else {
        betti_bound
    };
    let mut stats = search.stats;
    stats.time_seconds = start.elapsed().as_secs_f64();
    Ok(SolveResult {
        status,
        matching: search.incumbent,
        report,
        objective,
        dual_bound,
        betti,
        betti_bound,
        critical_bound,
        stats,
    })
}

/// Maps a matching of a component complex into the Hasse diagram of the
/// whole complex by vertex labels.
fn lift_matching(
    part: &SimplicialComplex,
    part_h: &HasseDiagram,
    whole: &SimplicialComplex,
    whole_h: &HasseDiagram,
    m: &MorseMatching,
) -> Vec<ArcId> {
    m.arcs()
        .iter()
        .map(|&a| {
            let arc = part_h.arc(a);
            let upper = whole.face_id_by_labels(&part.face_labels(arc.upper)).expect("same labels");
            let lower = whole.face_id_by_labels(&part.face_labels(arc.lower)).expect("same labels");
            whole_h.find_arc(upper, lower).expect("same face lattice")
        })
        .collect()
}

/// Maximum Morse matching of `complex` by branch-and-cut.
pub fn solve(complex: &SimplicialComplex, config: &SolverConfig) -> Result<SolveResult, SolverError> {
    config.validate()?;
    let mut budget = Budget {
        deadline: config.time_limit.map(|t| Instant::now() + t),
        nodes_left: config.node_limit,
    };
    let components = complex.components().len();
    if components == 1 {
        return solve_connected(complex, config, &mut budget);
    }
    if !config.split_components {
        return Err(SolverError::Disconnected { components });
    }
    let start = Instant::now();
    let h = HasseDiagram::new(complex);
    let mut arcs = Vec::new();
    let mut status = SolveStatus::Optimal;
    let mut stats = SolveStats::default();
    let (mut objective, mut dual_bound) = (0.0, 0.0);
    for part in complex.split_components() {
        let r = solve_connected(&part, config, &mut budget)?;
        let part_h = HasseDiagram::new(&part);
        arcs.extend(lift_matching(&part, &part_h, complex, &h, &r.matching));
        if r.status.severity() > status.severity() {
            status = r.status;
        }
        objective += r.objective;
        dual_bound += r.dual_bound;
        stats.absorb(&r.stats);
    }
    if let SolveStatus::Feasible { gap } = &mut status {
        *gap = dual_bound - objective;
    }
    stats.time_seconds = start.elapsed().as_secs_f64();
    let matching = MorseMatching::new(&h, arcs).map_err(|e| SolverError::Numerical(e.to_string()))?;
    let report = critical_report(&h, &matching);
    let betti = best_betti_bounds(complex, &config.fields)?;
    let betti_bound = betti.iter().sum();
    let critical_bound = if dual_bound.is_finite() {
        usize::max(betti_bound, h.num_faces().saturating_sub(2 * dual_bound as usize))
    } else {
        betti_bound
    };
    Ok(SolveResult { status, matching, report, objective, dual_bound, betti, betti_bound, critical_bound, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn projective_plane_at_root() {
        let c = instances::projective_plane();
        let r = solve(&c, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.report.total, 3);
        assert_eq!(r.report.counts, vec![1, 1, 1]);
        assert_eq!(r.betti_bound, 3);
    }

    #[test]
    fn triangle_root_lp() {
        let c = instances::simplex(2);
        let h = HasseDiagram::new(&c);
        let lp = build_relaxation(&h, &[1, 0, 0], vec![1.0; 9]).unwrap();
        let sol = lp.solve(None);
        assert!(sol.objective >= 3.0 - 1e-9);
        let r = solve(&c, &SolverConfig::default()).unwrap();
        assert_eq!(r.report.total, 1);
    }

    #[test]
    fn disconnected_needs_split() {
        let c = SimplicialComplex::from_facets(&[vec![1u32, 2, 3], vec![4, 5]]).unwrap();
        assert!(matches!(
            solve(&c, &SolverConfig::default()),
            Err(SolverError::Disconnected { components: 2 })
        ));
        let cfg = SolverConfig { split_components: true, ..SolverConfig::default() };
        let r = solve(&c, &cfg).unwrap();
        assert!(r.status.is_optimal());
        assert_eq!(r.report.total, 2);
        assert_eq!(r.report.counts[0], 2);
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig { max_cuts: 0, ..SolverConfig::default() };
        assert!(matches!(bad.validate(), Err(SolverError::Config(_))));
        let c = instances::simplex(1);
        let w = SolverConfig { weights: Some(vec![1.0; 5]), ..SolverConfig::default() };
        assert!(matches!(solve(&c, &w), Err(SolverError::Weights { .. })));
    }

    #[test]
    fn single_vertex() {
        let c = SimplicialComplex::from_facets(&[[7u32]]).unwrap();
        let r = solve(&c, &SolverConfig::default()).unwrap();
        assert!(r.status.is_optimal());
        assert_eq!(r.report.total, 1);
    }
}
