//! Morse matchings: arc sets of the Hasse diagram that form a matching and
//! stay acyclic after reversing the matched arcs.

mod incremental;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::Serialize;

use crate::complex::{ArcId, FaceId, HasseDiagram};
use crate::error::MatchingError;
use crate::homology::alternating;

pub use incremental::IncrementalMatching;

/// A validated Morse matching, stored as a sorted arc list plus a per-face
/// lookup of the matched arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseMatching {
    arcs: Vec<ArcId>,
    mate: Vec<Option<ArcId>>,
}

impl MorseMatching {
    pub fn empty(h: &HasseDiagram) -> Self {
        MorseMatching { arcs: Vec::new(), mate: vec![None; h.num_faces()] }
    }

    /// Validates `arcs` (duplicates are ignored).
    pub fn new(h: &HasseDiagram, arcs: impl IntoIterator<Item = ArcId>) -> Result<Self, MatchingError> {
        let mut arcs: Vec<ArcId> = arcs.into_iter().collect();
        arcs.sort_unstable();
        arcs.dedup();
        check_morse_matching(h, &arcs)?;
        Ok(Self::from_sorted_unchecked(h, arcs))
    }

    pub(crate) fn from_sorted_unchecked(h: &HasseDiagram, arcs: Vec<ArcId>) -> Self {
        let mut mate = vec![None; h.num_faces()];
        for &a in &arcs {
            let arc = h.arc(a);
            mate[arc.upper] = Some(a);
            mate[arc.lower] = Some(a);
        }
        MorseMatching { arcs, mate }
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.arcs.binary_search(&arc).is_ok()
    }

    /// The matched arc at `face`, if any.
    pub fn mate(&self, face: FaceId) -> Option<ArcId> {
        self.mate[face]
    }

    pub fn is_critical(&self, face: FaceId) -> bool {
        self.mate[face].is_none()
    }

    /// 0/1 incidence vector over all arcs.
    pub fn incidence(&self, num_arcs: usize) -> Vec<f64> {
        let mut x = vec![0.0; num_arcs];
        for &a in &self.arcs {
            x[a] = 1.0;
        }
        x
    }

    /// Symmetric difference with an arc set.
    pub(crate) fn symmetric_difference(&self, h: &HasseDiagram, other: &[ArcId]) -> Vec<ArcId> {
        let mut flag = vec![false; h.num_arcs()];
        for &a in &self.arcs {
            flag[a] = true;
        }
        for &a in other {
            flag[a] = !flag[a];
        }
        (0..h.num_arcs()).filter(|&a| flag[a]).collect()
    }
}

/// Verifies the matching condition and per-level acyclicity of `H(M)`.
/// On failure returns an over-matched face or a directed cycle.
pub fn check_morse_matching(h: &HasseDiagram, arcs: &[ArcId]) -> Result<(), MatchingError> {
    let mut mate: Vec<Option<ArcId>> = vec![None; h.num_faces()];
    for &a in arcs {
        if a >= h.num_arcs() {
            return Err(MatchingError::UnknownArc(a));
        }
        let arc = h.arc(a);
        for face in [arc.upper, arc.lower] {
            match mate[face] {
                Some(b) if b != a => {
                    return Err(MatchingError::OverMatched {
                        face,
                        first: b.min(a),
                        second: b.max(a),
                    })
                }
                _ => mate[face] = Some(a),
            }
        }
    }
    for level in 0..h.num_levels() {
        if let Some(faces) = find_level_cycle(h, &mate, level) {
            let arcs = cycle_arcs(h, &faces);
            return Err(MatchingError::Cycle { level, faces, arcs });
        }
    }
    Ok(())
}

pub fn is_morse_matching(h: &HasseDiagram, arcs: &[ArcId]) -> bool {
    check_morse_matching(h, arcs).is_ok()
}

/// Out-neighbours of `face` in level `level` of `H(M)`.
pub(crate) fn level_successors<'a>(
    h: &'a HasseDiagram,
    mate: &'a [Option<ArcId>],
    level: usize,
    face: FaceId,
) -> impl Iterator<Item = FaceId> + 'a {
    let dim = h.face_dim(face);
    let (down, up): (&[ArcId], Option<FaceId>) = if dim == level + 1 {
        (h.down_arcs(face), None)
    } else {
        let up = mate[face].map(|a| h.arc(a)).filter(|arc| arc.lower == face).map(|arc| arc.upper);
        (&[], up)
    };
    down.iter()
        .filter(move |&&a| mate[face] != Some(a))
        .map(move |&a| h.arc(a).lower)
        .chain(up)
}

/// In-neighbours of `face` in level `level` of `H(M)`.
pub(crate) fn level_predecessors<'a>(
    h: &'a HasseDiagram,
    mate: &'a [Option<ArcId>],
    level: usize,
    face: FaceId,
) -> impl Iterator<Item = FaceId> + 'a {
    let dim = h.face_dim(face);
    let (up, down): (&[ArcId], Option<FaceId>) = if dim == level {
        (h.up_arcs(face), None)
    } else {
        let down = mate[face].map(|a| h.arc(a)).filter(|arc| arc.upper == face).map(|arc| arc.lower);
        (&[], down)
    };
    up.iter()
        .filter(move |&&a| mate[face] != Some(a))
        .map(move |&a| h.arc(a).upper)
        .chain(down)
}

/// Iterative DFS over one level of `H(M)`; returns the faces of a directed
/// cycle in traversal order.
fn find_level_cycle(h: &HasseDiagram, mate: &[Option<ArcId>], level: usize) -> Option<Vec<FaceId>> {
    let faces = h.faces_of_dim(level).start..h.faces_of_dim(level + 1).end;
    let base = faces.start;
    let mut color = vec![0u8; faces.len()];
    let mut parent = vec![usize::MAX; faces.len()];
    for root in faces.clone() {
        if color[root - base] != 0 {
            continue;
        }
        let mut stack: Vec<(FaceId, Vec<FaceId>)> = Vec::new();
        color[root - base] = 1;
        stack.push((root, level_successors(h, mate, level, root).collect()));
        while let Some(top) = stack.last_mut() {
            let u = top.0;
            if let Some(w) = top.1.pop() {
                match color[w - base] {
                    0 => {
                        color[w - base] = 1;
                        parent[w - base] = u;
                        let succ = level_successors(h, mate, level, w).collect();
                        stack.push((w, succ));
                    }
                    1 => {
                        let mut cycle = vec![u];
                        let mut v = u;
                        while v != w {
                            v = parent[v - base];
                            cycle.push(v);
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                color[u - base] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Hasse arcs joining consecutive faces of a closed face sequence.
pub(crate) fn cycle_arcs(h: &HasseDiagram, faces: &[FaceId]) -> Vec<ArcId> {
    (0..faces.len())
        .map(|k| {
            let (a, b) = (faces[k], faces[(k + 1) % faces.len()]);
            let (upper, lower) = if h.face_dim(a) > h.face_dim(b) { (a, b) } else { (b, a) };
            h.find_arc(upper, lower).expect("consecutive faces are adjacent")
        })
        .collect()
}

/// Critical (unmatched) faces of a matching, per dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalReport {
    /// `c_j` for `j = 0..=d`.
    pub counts: Vec<usize>,
    pub total: usize,
    pub critical: Vec<FaceId>,
}

impl CriticalReport {
    pub fn alternating_sum(&self) -> i64 {
        alternating(&self.counts)
    }
}

pub fn critical_report(h: &HasseDiagram, matching: &MorseMatching) -> CriticalReport {
    let d = h.dim();
    let mut counts = vec![0; d + 1];
    let mut critical = Vec::new();
    for face in 0..h.num_faces() {
        if matching.is_critical(face) {
            counts[h.face_dim(face)] += 1;
            critical.push(face);
        }
    }
    let total = critical.len();
    debug_assert_eq!(total, h.num_faces() - 2 * matching.len());
    CriticalReport { counts, total, critical }
}

/// A face function; values produced here are integers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteMorseFunction {
    pub values: Vec<f64>,
}

/// Checks that at every face at most one facet has a value not below it and
/// at most one coface has a value not above it.
pub fn check_discrete_morse_function(h: &HasseDiagram, f: &DiscreteMorseFunction) -> Result<(), MatchingError> {
    if f.values.len() != h.num_faces() {
        return Err(MatchingError::FunctionLength { expected: h.num_faces(), got: f.values.len() });
    }
    let v = &f.values;
    for g in 0..h.num_faces() {
        let below = h.down_arcs(g).iter().filter(|&&a| v[g] <= v[h.arc(a).lower]).count();
        let above = h.up_arcs(g).iter().filter(|&&a| v[h.arc(a).upper] <= v[g]).count();
        if below > 1 || above > 1 {
            return Err(MatchingError::NotMorseFunction { face: g });
        }
    }
    Ok(())
}

pub fn is_discrete_morse_function(h: &HasseDiagram, f: &DiscreteMorseFunction) -> bool {
    check_discrete_morse_function(h, f).is_ok()
}

/// Numbers the faces `n-1, n-2, ..., 0` along a topological order of `H(M)`
/// (smallest face id first among ready faces).
pub fn matching_to_function(h: &HasseDiagram, matching: &MorseMatching) -> Result<DiscreteMorseFunction, MatchingError> {
    check_morse_matching(h, matching.arcs())?;
    let n = h.num_faces();
    let mate = &matching.mate;
    let succ = |face: FaceId| -> Vec<FaceId> {
        let mut out: Vec<FaceId> = h
            .down_arcs(face)
            .iter()
            .filter(|&&a| mate[face] != Some(a))
            .map(|&a| h.arc(a).lower)
            .collect();
        if let Some(a) = mate[face] {
            if h.arc(a).lower == face {
                out.push(h.arc(a).upper);
            }
        }
        out
    };
    let mut indeg = vec![0usize; n];
    for face in 0..n {
        for w in succ(face) {
            indeg[w] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<FaceId>> = (0..n).filter(|&f| indeg[f] == 0).map(Reverse).collect();
    let mut values = vec![0.0; n];
    let mut next = n;
    while let Some(Reverse(face)) = ready.pop() {
        next -= 1;
        values[face] = next as f64;
        for w in succ(face) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    debug_assert_eq!(next, 0, "H(M) is acyclic");
    Ok(DiscreteMorseFunction { values })
}

/// The matching of arcs `(G, F)` with `f(G) <= f(F)`.
pub fn function_to_matching(h: &HasseDiagram, f: &DiscreteMorseFunction) -> Result<MorseMatching, MatchingError> {
    check_discrete_morse_function(h, f)?;
    let v = &f.values;
    let arcs = (0..h.num_arcs()).filter(|&a| {
        let arc = h.arc(a);
        v[arc.upper] <= v[arc.lower]
    });
    MorseMatching::new(h, arcs)
}

/// Whether the graph of the complex with edges matched to 2-faces removed
/// is connected.
pub fn gamma_is_connected(h: &HasseDiagram, matching: &MorseMatching) -> bool {
    gamma_spanning_tree(h, matching).is_some()
}

/// BFS tree of Γ(M) rooted at the lowest vertex; `parent_edge[v]` is the
/// edge face joining `v` to its parent. `None` when Γ(M) is disconnected.
fn gamma_spanning_tree(h: &HasseDiagram, matching: &MorseMatching) -> Option<Vec<Option<FaceId>>> {
    let vertices = h.faces_of_dim(0);
    let nv = vertices.len();
    if nv == 0 {
        return Some(Vec::new());
    }
    let mut adj: Vec<Vec<(FaceId, FaceId)>> = vec![Vec::new(); nv];
    for edge in h.faces_of_dim(1) {
        let to_triangle = matching.mate(edge).is_some_and(|a| h.arc(a).lower == edge);
        if to_triangle {
            continue;
        }
        let ends: Vec<FaceId> = h.down_arcs(edge).iter().map(|&a| h.arc(a).lower).collect();
        adj[ends[0]].push((ends[1], edge));
        adj[ends[1]].push((ends[0], edge));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut parent_edge = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &(w, e) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent_edge[w] = Some(e);
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    (reached == nv).then_some(parent_edge)
}

/// Rewrites the vertex-edge level of `matching` as a spanning tree of Γ(M)
/// directed away from the lowest vertex, leaving exactly one critical vertex.
/// Critical counts in dimension 2 and above are unchanged and the total does
/// not increase.
pub fn canonicalize_vertices(h: &HasseDiagram, matching: &MorseMatching) -> Result<MorseMatching, MatchingError> {
    let parent_edge = gamma_spanning_tree(h, matching).ok_or(MatchingError::Disconnected)?;
    if h.num_levels() == 0 {
        return Ok(matching.clone());
    }
    let level0 = h.level_arcs(0);
    let mut arcs: Vec<ArcId> = matching.arcs().iter().copied().filter(|a| !level0.contains(a)).collect();
    for (v, e) in parent_edge.iter().enumerate() {
        if let Some(e) = *e {
            arcs.push(h.find_arc(e, v).expect("edge contains its endpoint"));
        }
    }
    arcs.sort_unstable();
    let out = MorseMatching::from_sorted_unchecked(h, arcs);
    debug_assert!(is_morse_matching(h, out.arcs()));
    Ok(out)
}
