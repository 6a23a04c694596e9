//! Separation of the cycle inequalities `x(C) <= |C|/2 - 1` over the level
//! graphs of the Hasse diagram.
//!
//! A cycle `u0 w0 u1 w1 ... u_{k-1} w_{k-1}` of `H_i` is traced in the
//! transformed graph as the node sequence `({u_j, u_{j+1}}, w_j)`. Each node
//! carries the weight `1 - x(u_j w_j) - x(u_{j+1} w_j)`, non-negative under
//! the matching inequalities, and a cycle of `k` nodes has total weight
//! `k - x(C)`. The inequality is violated exactly when that total is below 1,
//! so a shortest-cycle search with cutoff 1 finds violated cycles.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt::Write as _;

use crate::complex::{ArcId, FaceId, HasseDiagram, LevelGraph};
use crate::error::SeparationError;
use crate::lp::{Row, FEAS_TOL};

mod free_face;

pub use free_face::{separate_free_face, FreeFaceCut};

/// Minimum violation for a cut to be reported.
pub const CUT_EPS: f64 = 1e-6;
/// Default cap on cuts per level and round.
pub const DEFAULT_MAX_CUTS: usize = 20;
/// Level size limit for the enumeration routines.
pub const BRUTE_FORCE_LIMIT: usize = 30;

/// A violated (or evaluated) cycle inequality of one level.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleCut {
    pub level: usize,
    /// Arcs in cycle order; arc `k` joins `faces[k]` and `faces[k + 1]`.
    pub arcs: Vec<ArcId>,
    /// Alternating faces, starting with a lower face.
    pub faces: Vec<FaceId>,
    pub rhs: f64,
    pub violation: f64,
}

impl CycleCut {
    /// Builds the cut for the closed face sequence `faces` (lower face
    /// first) and evaluates it at `x`.
    pub fn from_faces(h: &HasseDiagram, level: usize, faces: Vec<FaceId>, x: &[f64]) -> Result<Self, SeparationError> {
        let n = faces.len();
        if n < 6 || n % 2 == 1 {
            return Err(SeparationError::Inconsistent);
        }
        let mut seen = HashSet::new();
        for (k, &f) in faces.iter().enumerate() {
            let want = if k % 2 == 0 { level } else { level + 1 };
            if f >= h.num_faces() || h.face_dim(f) != want {
                return Err(SeparationError::Inconsistent);
            }
            if !seen.insert(f) {
                return Err(SeparationError::NonSimple(f));
            }
        }
        let mut arcs = Vec::with_capacity(n);
        for k in 0..n {
            let (a, b) = (faces[k], faces[(k + 1) % n]);
            let (upper, lower) = if k % 2 == 0 { (b, a) } else { (a, b) };
            arcs.push(h.find_arc(upper, lower).ok_or(SeparationError::Inconsistent)?);
        }
        let rhs = (n / 2) as f64 - 1.0;
        let value: f64 = arcs.iter().map(|&a| x[a]).sum();
        Ok(CycleCut { level, arcs, faces, rhs, violation: value - rhs })
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Canonical key: the sorted arc list.
    pub fn key(&self) -> Vec<ArcId> {
        let mut k = self.arcs.clone();
        k.sort_unstable();
        k
    }

    pub fn to_row(&self) -> Row {
        Row::new(self.arcs.iter().map(|&a| (a, 1.0)).collect(), self.rhs)
    }
}

fn check_point(h: &HasseDiagram, level: &LevelGraph<'_>, x: &[f64]) -> Result<(), SeparationError> {
    if x.len() != h.num_arcs() {
        return Err(SeparationError::PointLength { expected: h.num_arcs(), got: x.len() });
    }
    for face in level.faces() {
        let value: f64 = level.incident(face).iter().map(|&a| x[a]).sum();
        if value > 1.0 + FEAS_TOL {
            return Err(SeparationError::MatchingViolated { face, value });
        }
    }
    Ok(())
}

/// Node `({u, v}, w)` of the transformed graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairNode {
    pub pair: (FaceId, FaceId),
    pub cover: FaceId,
    /// `x(u w) + x(v w)`
    pub weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairEdge {
    pub a: usize,
    pub b: usize,
    /// Half the weight of both endpoints.
    pub length: f64,
    /// `1 - length`, the search length.
    pub search_length: f64,
}

/// The auxiliary graph whose cycles of length `k` correspond to cycles of
/// length `2k` in a level graph.
#[derive(Clone, Debug)]
pub struct TransformedGraph {
    pub level: usize,
    pub nodes: Vec<PairNode>,
    pub edges: Vec<PairEdge>,
    by_face: HashMap<FaceId, Vec<usize>>,
}

impl TransformedGraph {
    pub fn build(h: &HasseDiagram, level: usize, x: &[f64]) -> Result<Self, SeparationError> {
        let lg = h.level(level)?;
        check_point(h, &lg, x)?;
        let mut nodes = Vec::new();
        let mut by_face: HashMap<FaceId, Vec<usize>> = HashMap::new();
        for w in lg.upper_faces() {
            let down = h.down_arcs(w);
            for (p, &a) in down.iter().enumerate() {
                for &b in &down[p + 1..] {
                    let (u, v) = (h.arc(a).lower, h.arc(b).lower);
                    let id = nodes.len();
                    nodes.push(PairNode { pair: (u.min(v), u.max(v)), cover: w, weight: x[a] + x[b] });
                    by_face.entry(u).or_default().push(id);
                    by_face.entry(v).or_default().push(id);
                }
            }
        }
        let mut edges = Vec::new();
        let mut seen_pairs: HashMap<(FaceId, FaceId), FaceId> = HashMap::new();
        for node in &nodes {
            if let Some(&other) = seen_pairs.get(&node.pair) {
                if other != node.cover {
                    // two cofaces sharing two faces would be a 4-cycle
                    return Err(SeparationError::Inconsistent);
                }
            }
            seen_pairs.insert(node.pair, node.cover);
        }
        let mut adjacent = HashSet::new();
        for list in by_face.values() {
            for (p, &s) in list.iter().enumerate() {
                for &t in &list[p + 1..] {
                    if nodes[s].cover != nodes[t].cover && adjacent.insert((s.min(t), s.max(t))) {
                        let length = 0.5 * (nodes[s].weight + nodes[t].weight);
                        edges.push(PairEdge { a: s.min(t), b: s.max(t), length, search_length: 1.0 - length });
                    }
                }
            }
        }
        edges.sort_by_key(|e| (e.a, e.b));
        Ok(TransformedGraph { level, nodes, edges, by_face })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes whose pair contains `face`.
    pub fn nodes_with_face(&self, face: FaceId) -> &[usize] {
        self.by_face.get(&face).map_or(&[], Vec::as_slice)
    }

    /// Edge list `a b length search_length`, one per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# level {} nodes {} edges {}", self.level, self.nodes.len(), self.edges.len());
        for (id, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "# node {id} pair {} {} cover {}", n.pair.0, n.pair.1, n.cover);
        }
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {:.6} {:.6}", e.a, e.b, e.length, e.search_length);
        }
        s
    }
}

/// Maps a cycle of transformed-graph nodes back to the closed face sequence
/// `u0 w0 u1 w1 ...` of the level graph.
pub fn recover_cycle(graph: &TransformedGraph, cycle: &[usize]) -> Result<Vec<FaceId>, SeparationError> {
    let k = cycle.len();
    if k < 3 {
        return Err(SeparationError::Inconsistent);
    }
    let shared = |s: usize, t: usize| -> Result<FaceId, SeparationError> {
        let (a, b) = (graph.nodes[s].pair, graph.nodes[t].pair);
        if graph.nodes[s].cover == graph.nodes[t].cover {
            return Err(SeparationError::Inconsistent);
        }
        match (a.0 == b.0 || a.0 == b.1, a.1 == b.0 || a.1 == b.1) {
            (true, false) => Ok(a.0),
            (false, true) => Ok(a.1),
            _ => Err(SeparationError::Inconsistent),
        }
    };
    let mut faces = Vec::with_capacity(2 * k);
    let mut entry = shared(cycle[k - 1], cycle[0])?;
    for j in 0..k {
        let node = graph.nodes[cycle[j]];
        let exit = shared(cycle[j], cycle[(j + 1) % k])?;
        if exit == entry {
            return Err(SeparationError::NonSimple(exit));
        }
        faces.push(entry);
        faces.push(node.cover);
        entry = exit;
    }
    let mut seen = HashSet::new();
    for &f in &faces {
        if !seen.insert(f) {
            return Err(SeparationError::NonSimple(f));
        }
    }
    Ok(faces)
}

#[derive(Clone, Copy, PartialEq)]
struct Queued {
    dist: f64,
    state: usize,
}

impl Eq for Queued {}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.state.cmp(&self.state))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Oriented view of the transformed graph: state `2 * node + side` enters
/// the node through `pair.side` and leaves through the other face.
struct Oriented<'g> {
    graph: &'g TransformedGraph,
}

impl Oriented<'_> {
    fn entry(&self, state: usize) -> FaceId {
        let p = self.graph.nodes[state / 2].pair;
        if state % 2 == 0 {
            p.0
        } else {
            p.1
        }
    }

    fn exit(&self, state: usize) -> FaceId {
        let p = self.graph.nodes[state / 2].pair;
        if state % 2 == 0 {
            p.1
        } else {
            p.0
        }
    }

    fn cost(&self, state: usize) -> f64 {
        (1.0 - self.graph.nodes[state / 2].weight).max(0.0)
    }

    fn successors(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        let face = self.exit(state);
        let cover = self.graph.nodes[state / 2].cover;
        self.graph.nodes_with_face(face).iter().filter_map(move |&t| {
            let node = self.graph.nodes[t];
            (node.cover != cover).then(|| 2 * t + usize::from(node.pair.1 == face))
        })
    }

    fn can_follow(&self, from: usize, to: usize) -> bool {
        self.exit(from) == self.entry(to) && self.graph.nodes[from / 2].cover != self.graph.nodes[to / 2].cover
    }

    /// Shortest closed walk through `source` of weight below `cutoff`,
    /// as a list of states.
    fn shortest_closed_walk(&self, source: usize, cutoff: f64) -> Option<Vec<usize>> {
        let n = 2 * self.graph.nodes.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![usize::MAX; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = self.cost(source);
        heap.push(Queued { dist: dist[source], state: source });
        let mut best: Option<(f64, usize)> = None;
        while let Some(Queued { dist: d, state }) = heap.pop() {
            if done[state] {
                continue;
            }
            if best.is_some_and(|(b, _)| d >= b) || d >= cutoff {
                break;
            }
            done[state] = true;
            if state != source && self.can_follow(state, source) && best.is_none_or(|(b, _)| d < b) {
                best = Some((d, state));
            }
            for t in self.successors(state) {
                if t == source {
                    continue;
                }
                let nd = d + self.cost(t);
                if nd < dist[t] && nd < cutoff {
                    dist[t] = nd;
                    pred[t] = state;
                    heap.push(Queued { dist: nd, state: t });
                }
            }
        }
        let (_, last) = best?;
        let mut walk = vec![last];
        let mut s = last;
        while s != source {
            s = pred[s];
            walk.push(s);
        }
        walk.reverse();
        Some(walk)
    }
}

/// Splits a closed face walk at repeated faces into simple closed pieces.
fn simple_pieces(walk: &[FaceId]) -> Vec<Vec<FaceId>> {
    let mut pieces = Vec::new();
    let mut stack: Vec<FaceId> = Vec::new();
    let mut pos: HashMap<FaceId, usize> = HashMap::new();
    for &f in walk.iter().chain(walk.first()) {
        if let Some(&p) = pos.get(&f) {
            let piece: Vec<FaceId> = stack.drain(p..).collect();
            for g in &piece {
                pos.remove(g);
            }
            pieces.push(piece);
        }
        pos.insert(f, stack.len());
        stack.push(f);
    }
    pieces
}

/// Rotates a closed face sequence so that it starts at a face of dimension
/// `level`.
fn rotate_to_lower(h: &HasseDiagram, level: usize, mut faces: Vec<FaceId>) -> Vec<FaceId> {
    if let Some(p) = faces.iter().position(|&f| h.face_dim(f) == level) {
        faces.rotate_left(p);
    }
    faces
}

/// Violated cycle inequalities of level `level`, at most `max_cuts`, sorted
/// by decreasing violation.
pub fn separate_level(
    h: &HasseDiagram,
    level: usize,
    x: &[f64],
    max_cuts: usize,
) -> Result<Vec<CycleCut>, SeparationError> {
    let graph = TransformedGraph::build(h, level, x)?;
    let oriented = Oriented { graph: &graph };
    let cutoff = 1.0 - CUT_EPS;

    // cheap sources first
    let mut sources: Vec<usize> = (0..2 * graph.nodes.len()).filter(|&s| oriented.cost(s) < cutoff).collect();
    sources.sort_by(|&a, &b| oriented.cost(a).total_cmp(&oriented.cost(b)).then(a.cmp(&b)));

    let mut cuts: Vec<CycleCut> = Vec::new();
    let mut keys: HashSet<Vec<ArcId>> = HashSet::new();
    for source in sources {
        if cuts.len() >= max_cuts {
            break;
        }
        let Some(states) = oriented.shortest_closed_walk(source, cutoff) else {
            continue;
        };
        let mut walk = Vec::with_capacity(2 * states.len());
        for &s in &states {
            walk.push(oriented.entry(s));
            walk.push(graph.nodes[s / 2].cover);
        }
        for piece in simple_pieces(&walk) {
            if piece.len() < 6 {
                continue;
            }
            let faces = rotate_to_lower(h, level, piece);
            let Ok(cut) = CycleCut::from_faces(h, level, faces, x) else {
                continue;
            };
            if cut.violation > CUT_EPS && keys.insert(cut.key()) {
                cuts.push(cut);
            }
        }
    }
    cuts.sort_by(|a, b| b.violation.total_cmp(&a.violation).then_with(|| a.key().cmp(&b.key())));
    cuts.truncate(max_cuts);
    Ok(cuts)
}

/// Runs [`separate_level`] on every level.
pub fn separate_all(h: &HasseDiagram, x: &[f64], max_cuts: usize) -> Result<Vec<CycleCut>, SeparationError> {
    let mut out = Vec::new();
    for level in 0..h.num_levels() {
        out.extend(separate_level(h, level, x, max_cuts)?);
    }
    Ok(out)
}

/// Calls `visit` with every simple cycle of the level (each cycle once per
/// starting face and direction), given as faces starting at its smallest face.
fn for_each_simple_cycle(lg: &LevelGraph<'_>, max_len: usize, mut visit: impl FnMut(&[FaceId])) {
    for start in lg.faces() {
        let mut path = vec![start];
        let mut on_path = HashSet::from([start]);
        let mut iters: Vec<std::slice::Iter<'_, ArcId>> = vec![lg.incident(start).iter()];
        while let Some(it) = iters.last_mut() {
            let u = *path.last().expect("non-empty");
            match it.next() {
                Some(&a) => {
                    let w = lg.other(a, u);
                    if w == start && path.len() >= 4 {
                        visit(&path);
                    } else if w > start && !on_path.contains(&w) && path.len() < max_len {
                        path.push(w);
                        on_path.insert(w);
                        iters.push(lg.incident(w).iter());
                    }
                }
                None => {
                    iters.pop();
                    if let Some(u) = path.pop() {
                        on_path.remove(&u);
                    }
                }
            }
        }
    }
}

fn guard(lg: &LevelGraph<'_>) -> Result<(), SeparationError> {
    if lg.num_faces() > BRUTE_FORCE_LIMIT {
        return Err(SeparationError::TooLarge { faces: lg.num_faces(), limit: BRUTE_FORCE_LIMIT });
    }
    Ok(())
}

/// The most violated cycle inequality of a small level by enumerating every
/// simple cycle with at most `max_len` arcs.
pub fn brute_force_separation(
    h: &HasseDiagram,
    level: usize,
    x: &[f64],
    max_len: usize,
) -> Result<Option<CycleCut>, SeparationError> {
    let lg = h.level(level)?;
    guard(&lg)?;
    if x.len() != h.num_arcs() {
        return Err(SeparationError::PointLength { expected: h.num_arcs(), got: x.len() });
    }
    let mut best: Option<CycleCut> = None;
    for_each_simple_cycle(&lg, max_len, |faces| {
        let faces = rotate_to_lower(h, level, faces.to_vec());
        if let Ok(cut) = CycleCut::from_faces(h, level, faces, x) {
            if cut.violation > CUT_EPS && best.as_ref().is_none_or(|b| cut.violation > b.violation) {
                best = Some(cut);
            }
        }
    });
    Ok(best)
}

/// Minimum of `sum (1/2 - x_a)` over the simple cycles of a small level, or
/// `None` if the level is a forest.
pub fn conservative_weight_audit(h: &HasseDiagram, level: usize, x: &[f64]) -> Result<Option<f64>, SeparationError> {
    let lg = h.level(level)?;
    guard(&lg)?;
    check_point(h, &lg, x)?;
    let mut best: Option<f64> = None;
    for_each_simple_cycle(&lg, usize::MAX, |faces| {
        let n = faces.len();
        let weight: f64 = (0..n)
            .map(|k| {
                let (a, b) = (faces[k], faces[(k + 1) % n]);
                let (upper, lower) = if h.face_dim(a) > h.face_dim(b) { (a, b) } else { (b, a) };
                0.5 - x[h.find_arc(upper, lower).expect("adjacent")]
            })
            .sum();
        best = Some(best.map_or(weight, |b: f64| b.min(weight)));
    });
    Ok(best)
}
