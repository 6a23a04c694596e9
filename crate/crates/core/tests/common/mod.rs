//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's own checks.
#![allow(dead_code)]

use std::collections::HashSet;

use morsematch::matching::{
    canonicalize_vertices, critical_report, gamma_is_connected, DiscreteMorseFunction, MorseMatching,
};
use morsematch::{FaceId, HasseDiagram, SimplicialComplex};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Is the whole Hasse diagram acyclic after reversing the arcs in `arcs`?
/// Works on the full diagram, not level by level.
pub fn reoriented_is_acyclic(h: &HasseDiagram, arcs: &[usize]) -> bool {
    let n = h.num_faces();
    let matched: HashSet<usize> = arcs.iter().copied().collect();
    let mut succ = vec![Vec::new(); n];
    for (id, arc) in h.arcs().iter().enumerate() {
        if matched.contains(&id) {
            succ[arc.lower].push(arc.upper);
        } else {
            succ[arc.upper].push(arc.lower);
        }
    }
    // Kahn's algorithm
    let mut indeg = vec![0usize; n];
    for s in &succ {
        for &w in s {
            indeg[w] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    seen == n
}

pub fn is_matching(h: &HasseDiagram, arcs: &[usize]) -> bool {
    let mut used = HashSet::new();
    arcs.iter().all(|&a| {
        let arc = h.arc(a);
        used.insert(arc.upper) && used.insert(arc.lower)
    })
}

/// Calls `visit` on every Morse matching (as a sorted arc list).
pub fn for_each_morse_matching(h: &HasseDiagram, mut visit: impl FnMut(&[usize])) {
    fn rec(h: &HasseDiagram, next: usize, used: &mut Vec<bool>, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if next == h.num_arcs() {
            visit(chosen);
            return;
        }
        rec(h, next + 1, used, chosen, visit);
        let arc = h.arc(next);
        if !used[arc.upper] && !used[arc.lower] {
            chosen.push(next);
            // subsets of Morse matchings are Morse, so prune on the way down
            if reoriented_is_acyclic(h, chosen) {
                used[arc.upper] = true;
                used[arc.lower] = true;
                rec(h, next + 1, used, chosen, visit);
                used[arc.upper] = false;
                used[arc.lower] = false;
            }
            chosen.pop();
        }
    }
    let mut used = vec![false; h.num_faces()];
    rec(h, 0, &mut used, &mut Vec::new(), &mut visit);
}

/// Fewest critical faces over all Morse matchings, by enumeration.
pub fn brute_force_min_critical(h: &HasseDiagram) -> usize {
    let mut best = 0;
    for_each_morse_matching(h, |m| best = best.max(m.len()));
    h.num_faces() - 2 * best
}

/// Rank of an integer matrix over GF(p), dense elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    for r in rows.iter_mut() {
        for v in r.iter_mut() {
            *v = v.rem_euclid(p);
        }
    }
    let inv = |a: i64| {
        let (mut result, mut base, mut exp) = (1i64, a, p - 2);
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        result
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let scale = inv(rows[rank][c]);
        for v in rows[rank].iter_mut() {
            *v = *v * scale % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] - f * rows[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Signed boundary matrix of dimension `i`, rows = (i-1)-faces.
pub fn boundary(complex: &SimplicialComplex, i: usize) -> Vec<Vec<i64>> {
    let lower = complex.faces_of_dim(i - 1);
    let upper = complex.faces_of_dim(i);
    let mut rows = vec![vec![0i64; upper.len()]; lower.len()];
    for (col, g) in upper.enumerate() {
        let verts = complex.face(g).vertices().to_vec();
        for skip in 0..verts.len() {
            let face: Vec<u32> = verts.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
            let f = complex.face_id(&morsematch::Face::new(face).unwrap()).unwrap();
            rows[f - lower.start][col] = if skip % 2 == 0 { 1 } else { -1 };
        }
    }
    rows
}

/// Betti numbers over GF(p). With a large prime this agrees with the
/// rational numbers on small complexes (no torsion of that order).
pub fn betti_mod_p(complex: &SimplicialComplex, p: i64) -> Vec<usize> {
    let d = complex.dim();
    let mut ranks = vec![0usize; d + 2];
    for i in 1..=d {
        ranks[i] = rank_mod_p(boundary(complex, i), p);
    }
    (0..=d).map(|i| complex.f(i) - ranks[i] - ranks[i + 1]).collect()
}

pub const BIG_PRIME: i64 = 1_000_000_007;

/// The Morse condition checked face by face.
pub fn satisfies_morse_condition(h: &HasseDiagram, f: &DiscreteMorseFunction) -> bool {
    (0..h.num_faces()).all(|s| {
        let up = h.up_arcs(s).iter().filter(|&&a| f.values[h.arc(a).upper] <= f.values[s]).count();
        let down = h.down_arcs(s).iter().filter(|&&a| f.values[h.arc(a).lower] >= f.values[s]).count();
        up <= 1 && down <= 1
    })
}

/// Random Morse matching: random arc order, keep what stays Morse.
pub fn random_morse_matching(h: &HasseDiagram, rng: &mut ChaCha8Rng) -> MorseMatching {
    let mut order: Vec<usize> = (0..h.num_arcs()).collect();
    order.shuffle(rng);
    let keep = rng.gen_range(0..=order.len());
    let mut chosen = Vec::new();
    for a in order.into_iter().take(keep) {
        chosen.push(a);
        if !is_matching(h, &chosen) || !reoriented_is_acyclic(h, &chosen) {
            chosen.pop();
        }
    }
    MorseMatching::new(h, chosen).expect("built to be Morse")
}

/// Random point obeying the matching inequalities: random values scaled
/// down so that every face carries at most 1, with some mass pushed to ½.
pub fn random_matching_point(h: &HasseDiagram, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x: Vec<f64> = (0..h.num_arcs())
        .map(|_| match rng.gen_range(0..4) {
            0 => 0.0,
            1 => 0.5,
            _ => rng.gen_range(0.0..1.0),
        })
        .collect();
    for face in 0..h.num_faces() {
        let total: f64 = h.incident(face).map(|a| x[a]).sum();
        if total > 1.0 {
            for a in h.incident(face).collect::<Vec<_>>() {
                x[a] /= total;
            }
        }
    }
    x
}

/// Random 2-dimensional complex on `vertices` vertices with `triangles`
/// random triangles plus a spanning path, so that it is connected.
pub fn random_surface_patch(vertices: u32, triangles: usize, rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let mut facets: Vec<Vec<u32>> = (1..vertices).map(|v| vec![v - 1, v]).collect();
    for _ in 0..triangles {
        let mut t: Vec<u32> = (0..vertices).collect();
        t.shuffle(rng);
        t.truncate(3);
        facets.push(t);
    }
    SimplicialComplex::from_facets(&facets).unwrap()
}

/// Level size `f_i + f_{i+1}`.
pub fn level_size(complex: &SimplicialComplex, level: usize) -> usize {
    complex.f(level) + complex.f(level + 1)
}

/// Checks the identities every Morse matching must satisfy; returns a
/// description of the first failure.
pub fn identity_failures(complex: &SimplicialComplex, h: &HasseDiagram, m: &MorseMatching) -> Option<String> {
    if !is_matching(h, m.arcs()) || !reoriented_is_acyclic(h, m.arcs()) {
        return Some("not a Morse matching".into());
    }
    let report = critical_report(h, m);
    if report.total != h.num_faces() - 2 * m.len() {
        return Some(format!("c = {} but n - 2|M| = {}", report.total, h.num_faces() - 2 * m.len()));
    }
    let chi: i64 = complex.f_vector().iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum();
    let alt: i64 = report.counts.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
    if alt != chi {
        return Some(format!("alternating critical sum {alt} != chi {chi}"));
    }
    for p in [2, 3, BIG_PRIME] {
        let betti = betti_mod_p(complex, p);
        if report.counts.iter().zip(&betti).any(|(c, b)| c < b) {
            return Some(format!("counts {:?} below Betti numbers {betti:?} mod {p}", report.counts));
        }
    }
    if complex.is_connected() {
        if !gamma_is_connected(h, m) {
            return Some("Gamma(M) disconnected".into());
        }
        let canon = match canonicalize_vertices(h, m) {
            Ok(c) => c,
            Err(e) => return Some(format!("canonicalize failed: {e}")),
        };
        if !is_matching(h, canon.arcs()) || !reoriented_is_acyclic(h, canon.arcs()) {
            return Some("canonical matching is not Morse".into());
        }
        let after = critical_report(h, &canon);
        let higher = |counts: &[usize]| counts.iter().skip(2).copied().collect::<Vec<_>>();
        if after.counts[0] != 1 || after.total > report.total || higher(&after.counts) != higher(&report.counts) {
            return Some(format!("canonicalize: {:?} -> {:?}", report.counts, after.counts));
        }
    }
    None
}

/// Faces of a matched-arc forest, grouped by component, for graphs.
pub fn branching_roots(h: &HasseDiagram, m: &MorseMatching) -> Vec<usize> {
    // union-find over vertices joined by matched edges
    let vertices = h.faces_of_dim(0);
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(p: &mut Vec<usize>, v: usize) -> usize {
        let mut r = v;
        while p[r] != r {
            r = p[r];
        }
        let mut v = v;
        while p[v] != r {
            let next = p[v];
            p[v] = r;
            v = next;
        }
        r
    }
    for &a in m.arcs() {
        let edge = h.arc(a).upper;
        let ends: Vec<FaceId> = h.down_arcs(edge).iter().map(|&b| h.arc(b).lower).collect();
        let (x, y) = (find(&mut parent, ends[0] - vertices.start), find(&mut parent, ends[1] - vertices.start));
        parent[x] = y;
    }
    let mut roots = std::collections::HashMap::new();
    for v in vertices.clone() {
        let comp = find(&mut parent, v - vertices.start);
        let entry = roots.entry(comp).or_insert(0usize);
        if m.is_critical(v) {
            *entry += 1;
        }
    }
    let mut counts: Vec<usize> = roots.into_values().collect();
    counts.sort_unstable();
    counts
}

/// Every simple cycle of level `level` as its arc list, each cycle once.
pub fn simple_cycles(h: &HasseDiagram, level: usize) -> Vec<Vec<usize>> {
    let arcs: Vec<usize> = h.level_arcs(level).collect();
    let faces: Vec<FaceId> = (h.faces_of_dim(level).start..h.faces_of_dim(level + 1).end).collect();
    let mut adj: std::collections::HashMap<FaceId, Vec<(FaceId, usize)>> = std::collections::HashMap::new();
    for &a in &arcs {
        let arc = h.arc(a);
        adj.entry(arc.upper).or_default().push((arc.lower, a));
        adj.entry(arc.lower).or_default().push((arc.upper, a));
    }
    let mut out = HashSet::new();
    for &start in &faces {
        // paths from start through larger faces only, closed back at start
        let mut stack: Vec<(FaceId, Vec<FaceId>, Vec<usize>)> = vec![(start, vec![start], vec![])];
        while let Some((u, path, used)) = stack.pop() {
            for &(w, a) in adj.get(&u).map(|v| v.as_slice()).unwrap_or(&[]) {
                if w == start && used.len() >= 3 && !used.contains(&a) {
                    let mut key = used.clone();
                    key.push(a);
                    key.sort_unstable();
                    out.insert(key);
                } else if w > start && !path.contains(&w) {
                    let mut p = path.clone();
                    p.push(w);
                    let mut us = used.clone();
                    us.push(a);
                    stack.push((w, p, us));
                }
            }
        }
    }
    let mut v: Vec<Vec<usize>> = out.into_iter().collect();
    v.sort();
    v
}

/// Whether `arcs` form one simple cycle inside level `level`.
pub fn is_simple_level_cycle(h: &HasseDiagram, level: usize, arcs: &[usize]) -> bool {
    if arcs.len() < 4 || arcs.iter().any(|&a| h.arc_level(a) != level) {
        return false;
    }
    let distinct: HashSet<usize> = arcs.iter().copied().collect();
    if distinct.len() != arcs.len() {
        return false;
    }
    let mut degree: std::collections::HashMap<FaceId, usize> = std::collections::HashMap::new();
    for &a in arcs {
        *degree.entry(h.arc(a).upper).or_default() += 1;
        *degree.entry(h.arc(a).lower).or_default() += 1;
    }
    if degree.values().any(|&d| d != 2) {
        return false;
    }
    // connected
    let mut seen = HashSet::from([h.arc(arcs[0]).upper]);
    let mut changed = true;
    while changed {
        changed = false;
        for &a in arcs {
            let (u, l) = (h.arc(a).upper, h.arc(a).lower);
            if seen.contains(&u) != seen.contains(&l) {
                seen.insert(u);
                seen.insert(l);
                changed = true;
            }
        }
    }
    seen.len() == degree.len()
}
