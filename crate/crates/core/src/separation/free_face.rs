//! Free-face inequalities.
//!
//! Let `S` be a set of `(i+1)`-faces and call an `i`-face shared when at
//! least two faces of `S` contain it. If every face of `S` is matched
//! downward, the earliest of them in a topological order of `H(M)` is
//! matched to a face that is not shared, since every other coface of its
//! mate points into the mate. Hence
//! `sum over w in S of x(w, u) for shared u < w  <=  |S| - 1`.
//! Taking `S` to be the upper faces of a cycle gives a row that contains
//! the cycle inequality.

use std::collections::HashSet;

use crate::complex::{ArcId, FaceId, HasseDiagram};
use crate::error::SeparationError;
use crate::lp::Row;

use super::CUT_EPS;

#[derive(Clone, Debug, PartialEq)]
pub struct FreeFaceCut {
    pub level: usize,
    /// The set `S`, sorted.
    pub uppers: Vec<FaceId>,
    /// Arcs from faces of `S` to shared faces, sorted.
    pub arcs: Vec<ArcId>,
    pub rhs: f64,
    pub violation: f64,
}

impl FreeFaceCut {
    pub fn from_uppers(
        h: &HasseDiagram,
        level: usize,
        mut uppers: Vec<FaceId>,
        x: &[f64],
    ) -> Result<Self, SeparationError> {
        if x.len() != h.num_arcs() {
            return Err(SeparationError::PointLength { expected: h.num_arcs(), got: x.len() });
        }
        uppers.sort_unstable();
        uppers.dedup();
        if uppers.is_empty() || uppers.iter().any(|&w| w >= h.num_faces() || h.face_dim(w) != level + 1) {
            return Err(SeparationError::Inconsistent);
        }
        let mut count = std::collections::HashMap::new();
        for &w in &uppers {
            for &a in h.down_arcs(w) {
                *count.entry(h.arc(a).lower).or_insert(0usize) += 1;
            }
        }
        let mut arcs: Vec<ArcId> = uppers
            .iter()
            .flat_map(|&w| h.down_arcs(w).iter().copied())
            .filter(|&a| count[&h.arc(a).lower] >= 2)
            .collect();
        arcs.sort_unstable();
        let rhs = (uppers.len() - 1) as f64;
        let value: f64 = arcs.iter().map(|&a| x[a]).sum();
        Ok(FreeFaceCut { level, uppers, arcs, rhs, violation: value - rhs })
    }

    /// Sorted arcs followed by the right-hand side, so that rows with equal
    /// support but different bounds stay distinct.
    pub fn key(&self) -> Vec<usize> {
        let mut k = self.arcs.clone();
        k.push(usize::MAX);
        k.push(self.uppers.len());
        k
    }

    pub fn to_row(&self) -> Row {
        Row::new(self.arcs.iter().map(|&a| (a, 1.0)).collect(), self.rhs)
    }
}

/// Heuristic separation by peeling: starting from the faces with positive
/// downward value, repeatedly drop the face of least contribution and
/// evaluate every connected piece of what remains.
pub fn separate_free_face(
    h: &HasseDiagram,
    level: usize,
    x: &[f64],
    max_cuts: usize,
) -> Result<Vec<FreeFaceCut>, SeparationError> {
    h.level(level)?;
    if x.len() != h.num_arcs() {
        return Err(SeparationError::PointLength { expected: h.num_arcs(), got: x.len() });
    }
    let lowers = h.faces_of_dim(level);
    let down_value = |w: FaceId| h.down_arcs(w).iter().map(|&a| x[a]).sum::<f64>();
    let mut alive: Vec<FaceId> = h.faces_of_dim(level + 1).filter(|&w| down_value(w) > CUT_EPS).collect();
    let mut count = vec![0usize; lowers.len()];
    for &w in &alive {
        for &a in h.down_arcs(w) {
            count[h.arc(a).lower - lowers.start] += 1;
        }
    }

    let mut seen: HashSet<Vec<FaceId>> = HashSet::new();
    let mut found = Vec::new();
    while !alive.is_empty() {
        let contribution = |w: FaceId| {
            h.down_arcs(w)
                .iter()
                .filter(|&&a| count[h.arc(a).lower - lowers.start] >= 2)
                .map(|&a| x[a])
                .sum::<f64>()
                - 1.0
        };
        for piece in pieces(h, &alive, &count, lowers.start) {
            let value: f64 = piece.iter().map(|&w| contribution(w)).sum::<f64>() + 1.0;
            if value > CUT_EPS && seen.insert(piece.clone()) {
                found.push(FreeFaceCut::from_uppers(h, level, piece, x)?);
            }
        }
        let (pos, _) = alive
            .iter()
            .enumerate()
            .map(|(k, &w)| (k, contribution(w)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(alive[a.0].cmp(&alive[b.0])))
            .expect("non-empty");
        let w = alive.remove(pos);
        for &a in h.down_arcs(w) {
            count[h.arc(a).lower - lowers.start] -= 1;
        }
    }
    found.retain(|c| c.violation > CUT_EPS);
    found.sort_by(|a, b| b.violation.total_cmp(&a.violation).then(a.uppers.cmp(&b.uppers)));
    found.truncate(max_cuts);
    Ok(found)
}

/// Connected pieces of `alive`, two faces being adjacent when they share a
/// lower face.
fn pieces(h: &HasseDiagram, alive: &[FaceId], count: &[usize], base: FaceId) -> Vec<Vec<FaceId>> {
    let index: std::collections::HashMap<FaceId, usize> = alive.iter().enumerate().map(|(k, &w)| (w, k)).collect();
    let mut component = vec![usize::MAX; alive.len()];
    let mut out = Vec::new();
    for start in 0..alive.len() {
        if component[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        component[start] = id;
        let mut members = vec![alive[start]];
        let mut stack = vec![alive[start]];
        while let Some(w) = stack.pop() {
            for &a in h.down_arcs(w) {
                let u = h.arc(a).lower;
                if count[u - base] < 2 {
                    continue;
                }
                for &b in h.up_arcs(u) {
                    let v = h.arc(b).upper;
                    if let Some(&k) = index.get(&v) {
                        if component[k] == usize::MAX {
                            component[k] = id;
                            members.push(v);
                            stack.push(v);
                        }
                    }
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}
