//! Primal heuristic: LP-guided greedy matching followed by augmentation along
//! unique paths between critical faces.

use crate::complex::{ArcId, FaceId, HasseDiagram};
use crate::matching::{is_morse_matching, level_successors, IncrementalMatching, MorseMatching};

/// Scans arcs by decreasing `x` (ties by arc id) and keeps every arc that
/// leaves the matching acyclic.
pub fn greedy_from_lp(h: &HasseDiagram, x: &[f64]) -> MorseMatching {
    let mut order: Vec<ArcId> = (0..h.num_arcs()).collect();
    let value = |a: ArcId| x.get(a).copied().unwrap_or(0.0);
    order.sort_by(|&a, &b| value(b).total_cmp(&value(a)).then(a.cmp(&b)));
    let mut inc = IncrementalMatching::new(h);
    for a in order {
        inc.try_add(a);
    }
    inc.into_matching()
}

/// Path counts from `start` within one level of `H(M)`, capped at 2, with
/// one recorded predecessor per face.
fn count_paths(
    h: &HasseDiagram,
    mate: &[Option<ArcId>],
    level: usize,
    start: FaceId,
) -> (Vec<u8>, Vec<FaceId>, usize) {
    let base = h.faces_of_dim(level).start;
    let n = h.faces_of_dim(level + 1).end - base;
    // reverse postorder of the reachable part
    let mut order = Vec::new();
    let mut state = vec![0u8; n];
    let mut stack: Vec<(FaceId, Vec<FaceId>)> = vec![(start, level_successors(h, mate, level, start).collect())];
    state[start - base] = 1;
    while let Some(top) = stack.last_mut() {
        let u = top.0;
        if let Some(w) = top.1.pop() {
            if state[w - base] == 0 {
                state[w - base] = 1;
                let succ = level_successors(h, mate, level, w).collect();
                stack.push((w, succ));
            }
        } else {
            order.push(u);
            stack.pop();
        }
    }
    order.reverse();
    let mut count = vec![0u8; n];
    let mut pred = vec![usize::MAX; n];
    count[start - base] = 1;
    for &u in &order {
        let cu = count[u - base];
        if cu == 0 {
            continue;
        }
        for w in level_successors(h, mate, level, u) {
            let cw = &mut count[w - base];
            if *cw == 0 {
                pred[w - base] = u;
            }
            *cw = (*cw + cu).min(2);
        }
    }
    (count, pred, base)
}

fn mate_vector(h: &HasseDiagram, matching: &MorseMatching) -> Vec<Option<ArcId>> {
    (0..h.num_faces()).map(|f| matching.mate(f)).collect()
}

/// Flips the first unique path between a critical `(i+1)`-face and a
/// critical `i`-face, scanning levels upward and face pairs in id order.
pub fn augment_once(h: &HasseDiagram, matching: &MorseMatching) -> Option<MorseMatching> {
    let mate = mate_vector(h, matching);
    for level in 0..h.num_levels() {
        for g in h.faces_of_dim(level + 1) {
            if mate[g].is_some() {
                continue;
            }
            let (count, pred, base) = count_paths(h, &mate, level, g);
            let target = h.faces_of_dim(level).find(|&f| mate[f].is_none() && count[f - base] == 1);
            let Some(f) = target else {
                continue;
            };
            let mut faces = vec![f];
            let mut v = f;
            while v != g {
                v = pred[v - base];
                faces.push(v);
            }
            let path: Vec<ArcId> = faces
                .windows(2)
                .map(|p| {
                    let (a, b) = (p[0], p[1]);
                    let (upper, lower) = if h.face_dim(a) > h.face_dim(b) { (a, b) } else { (b, a) };
                    h.find_arc(upper, lower).expect("path follows Hasse arcs")
                })
                .collect();
            let arcs = matching.symmetric_difference(h, &path);
            debug_assert_eq!(arcs.len(), matching.len() + 1);
            debug_assert!(is_morse_matching(h, &arcs));
            return Some(MorseMatching::from_sorted_unchecked(h, arcs));
        }
    }
    None
}

/// Augments until no unique path is left.
pub fn improve(h: &HasseDiagram, matching: &MorseMatching) -> MorseMatching {
    let mut current = matching.clone();
    while let Some(next) = augment_once(h, &current) {
        current = next;
    }
    current
}

/// Greedy from `x` followed by [`improve`].
pub fn run(h: &HasseDiagram, x: &[f64]) -> MorseMatching {
    improve(h, &greedy_from_lp(h, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::instances;
    use crate::matching::critical_report;

    #[test]
    fn single_edge() {
        let c = SimplicialComplex::from_facets(&[[1u32, 2]]).unwrap();
        let h = HasseDiagram::new(&c);
        let m = augment_once(&h, &MorseMatching::empty(&h)).unwrap();
        assert_eq!(m.arcs(), &[h.find_arc(2, 0).unwrap()]);
        assert!(augment_once(&h, &m).is_none());
    }

    #[test]
    fn zero_point_greedy_is_nonempty() {
        for c in [instances::simplex(1), instances::projective_plane(), instances::dunce_hat()] {
            let h = HasseDiagram::new(&c);
            let m = greedy_from_lp(&h, &vec![0.0; h.num_arcs()]);
            assert!(!m.is_empty());
            assert!(m.contains(0));
            assert_eq!(m, greedy_from_lp(&h, &vec![0.0; h.num_arcs()]));
        }
    }

    #[test]
    fn full_triangle_reaches_one() {
        let c = SimplicialComplex::from_facets(&[[1u32, 2, 3]]).unwrap();
        let h = HasseDiagram::new(&c);
        let e12 = c.face_id_by_labels(&["1", "2"]).unwrap();
        let e23 = c.face_id_by_labels(&["2", "3"]).unwrap();
        let v1 = c.face_id_by_labels(&["1"]).unwrap();
        let tri = c.face_id_by_labels(&["1", "2", "3"]).unwrap();
        let mut x = vec![0.0; h.num_arcs()];
        x[h.find_arc(e12, v1).unwrap()] = 1.0;
        x[h.find_arc(tri, e23).unwrap()] = 1.0;
        let m = greedy_from_lp(&h, &x);
        assert!(m.contains(h.find_arc(e12, v1).unwrap()));
        assert!(m.contains(h.find_arc(tri, e23).unwrap()));
        assert_eq!(critical_report(&h, &improve(&h, &m)).total, 1);
    }

    #[test]
    fn tetrahedron_boundary_optimum_is_stable() {
        let c = instances::simplex_boundary(2);
        let h = HasseDiagram::new(&c);
        let m = run(&h, &vec![0.0; h.num_arcs()]);
        assert_eq!(critical_report(&h, &m).total, 2);
        assert!(augment_once(&h, &m).is_none());
    }
}
