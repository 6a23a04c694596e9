//! Growing a Morse matching one arc at a time.
//!
//! Each level of `H(M)` keeps a topological order of its faces. Matching an
//! arc `(G, F)` replaces `G -> F` by `F -> G`, which is an order violation
//! since `G` precedes `F`; the order is repaired locally (Pearce-Kelly) and a
//! cycle is reported when `F` is reachable from `G` without the arc itself.

use crate::complex::{ArcId, FaceId, HasseDiagram};
use crate::matching::{level_predecessors, level_successors, MorseMatching};

pub struct IncrementalMatching<'h> {
    h: &'h HasseDiagram,
    mate: Vec<Option<ArcId>>,
    arcs: Vec<ArcId>,
    /// position of a face in the level where it is the lower face
    ord_lower: Vec<usize>,
    /// position of a face in the level where it is the upper face
    ord_upper: Vec<usize>,
    stamp: Vec<u32>,
    generation: u32,
}

impl<'h> IncrementalMatching<'h> {
    pub fn new(h: &'h HasseDiagram) -> Self {
        let n = h.num_faces();
        let mut ord_lower = vec![0; n];
        let mut ord_upper = vec![0; n];
        for level in 0..h.num_levels() {
            let uppers = h.faces_of_dim(level + 1);
            let lowers = h.faces_of_dim(level);
            for u in uppers.clone() {
                ord_upper[u] = u - uppers.start;
            }
            for l in lowers.clone() {
                ord_lower[l] = uppers.len() + (l - lowers.start);
            }
        }
        IncrementalMatching {
            h,
            mate: vec![None; n],
            arcs: Vec::new(),
            ord_lower,
            ord_upper,
            stamp: vec![0; n],
            generation: 0,
        }
    }

    /// Starts from an existing Morse matching.
    pub fn from_matching(h: &'h HasseDiagram, matching: &MorseMatching) -> Self {
        let mut inc = Self::new(h);
        for &a in matching.arcs() {
            let added = inc.try_add(a);
            debug_assert!(added, "input is a Morse matching");
        }
        inc
    }

    fn ord(&self, level: usize, face: FaceId) -> usize {
        if self.h.face_dim(face) == level {
            self.ord_lower[face]
        } else {
            self.ord_upper[face]
        }
    }

    fn set_ord(&mut self, level: usize, face: FaceId, value: usize) {
        if self.h.face_dim(face) == level {
            self.ord_lower[face] = value;
        } else {
            self.ord_upper[face] = value;
        }
    }

    fn next_generation(&mut self) -> u32 {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        self.generation
    }

    pub fn is_matched(&self, face: FaceId) -> bool {
        self.mate[face].is_some()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Faces reachable from `G` that precede `F` in the order, or `None`
    /// when `F` itself is reachable without the arc.
    fn forward_region(&mut self, arc: ArcId) -> Option<Vec<FaceId>> {
        let h = self.h;
        let a = h.arc(arc);
        let (g, f) = (a.upper, a.lower);
        let level = h.arc_level(arc);
        let ub = self.ord(level, f);
        let gen = self.next_generation();
        let mut forward = Vec::new();
        let mut stack = vec![g];
        self.stamp[g] = gen;
        while let Some(u) = stack.pop() {
            forward.push(u);
            for w in level_successors(h, &self.mate, level, u) {
                if u == g && w == f {
                    continue;
                }
                if w == f {
                    return None;
                }
                if self.stamp[w] != gen && self.ord(level, w) < ub {
                    self.stamp[w] = gen;
                    stack.push(w);
                }
            }
        }
        Some(forward)
    }

    /// Whether [`try_add`](Self::try_add) would accept `arc`. Leaves the
    /// matching unchanged.
    pub fn can_add(&mut self, arc: ArcId) -> bool {
        let a = self.h.arc(arc);
        if self.mate[a.upper].is_some() || self.mate[a.lower].is_some() {
            return false;
        }
        self.forward_region(arc).is_some()
    }

    /// Adds `arc` if the result is still a Morse matching.
    pub fn try_add(&mut self, arc: ArcId) -> bool {
        let h = self.h;
        let a = h.arc(arc);
        let (g, f) = (a.upper, a.lower);
        if self.mate[g].is_some() || self.mate[f].is_some() {
            return false;
        }
        let level = h.arc_level(arc);
        let lb = self.ord(level, g);
        debug_assert!(lb < self.ord(level, f));

        // forward from G, skipping the arc being reversed
        let Some(mut forward) = self.forward_region(arc) else {
            return false;
        };

        let gen = self.next_generation();
        let mut backward = Vec::new();
        let mut stack = vec![f];
        self.stamp[f] = gen;
        while let Some(u) = stack.pop() {
            backward.push(u);
            for w in level_predecessors(h, &self.mate, level, u) {
                if u == f && w == g {
                    continue;
                }
                if self.stamp[w] != gen && self.ord(level, w) > lb {
                    self.stamp[w] = gen;
                    stack.push(w);
                }
            }
        }

        forward.sort_by_key(|&v| self.ord(level, v));
        backward.sort_by_key(|&v| self.ord(level, v));
        let mut slots: Vec<usize> = forward
            .iter()
            .chain(backward.iter())
            .map(|&v| self.ord(level, v))
            .collect();
        slots.sort_unstable();
        for (slot, v) in slots.into_iter().zip(backward.into_iter().chain(forward)) {
            self.set_ord(level, v, slot);
        }

        self.mate[g] = Some(arc);
        self.mate[f] = Some(arc);
        self.arcs.push(arc);
        debug_assert!(self.order_is_topological(level));
        true
    }

    fn order_is_topological(&self, level: usize) -> bool {
        let faces = self.h.faces_of_dim(level).start..self.h.faces_of_dim(level + 1).end;
        faces.into_iter().all(|u| {
            level_successors(self.h, &self.mate, level, u).all(|w| self.ord(level, u) < self.ord(level, w))
        })
    }

    pub fn into_matching(self) -> MorseMatching {
        let mut arcs = self.arcs;
        arcs.sort_unstable();
        MorseMatching::from_sorted_unchecked(self.h, arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::matching::is_morse_matching;

    #[test]
    fn agrees_with_full_check() {
        // add arcs in a scrambled order; every accepted prefix must verify and
        // every rejected arc must fail the full check
        for c in [instances::projective_plane(), instances::dunce_hat(), instances::simplex_boundary(3)] {
            let h = HasseDiagram::new(&c);
            let m = h.num_arcs();
            let order: Vec<ArcId> = (0..m).map(|k| (k * 37 + 11) % m).collect();
            let mut inc = IncrementalMatching::new(&h);
            let mut accepted: Vec<ArcId> = Vec::new();
            for a in order {
                let ok = inc.try_add(a);
                let mut trial = accepted.clone();
                trial.push(a);
                assert_eq!(ok, is_morse_matching(&h, &trial), "arc {a}");
                if ok {
                    accepted.push(a);
                }
            }
            assert!(is_morse_matching(&h, inc.into_matching().arcs()));
        }
    }
}
