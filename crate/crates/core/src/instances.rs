//! Small complexes that can be written down from their standard definitions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;

/// The 6-vertex, 10-triangle minimal triangulation of the real projective plane.
pub const PROJECTIVE_PLANE: [[u32; 3]; 10] = [
    [1, 2, 3],
    [1, 3, 4],
    [1, 4, 5],
    [1, 5, 6],
    [1, 2, 6],
    [2, 3, 5],
    [2, 4, 5],
    [2, 4, 6],
    [3, 4, 6],
    [3, 5, 6],
];

/// An 8-vertex, 17-triangle dunce hat: a triangle whose sides are glued by
/// the word `a a a^-1`. The glued side carries vertices 1-2-3-1, and 4..8 lie
/// in the interior. Edges 12, 23 and 13 lie in three triangles, all others in two.
pub const DUNCE_HAT: [[u32; 3]; 17] = [
    [1, 2, 4],
    [2, 3, 4],
    [1, 3, 5],
    [1, 2, 5],
    [2, 3, 6],
    [1, 3, 6],
    [1, 3, 7],
    [2, 3, 7],
    [1, 2, 8],
    [3, 4, 5],
    [2, 5, 6],
    [1, 6, 7],
    [2, 7, 8],
    [1, 4, 8],
    [4, 5, 6],
    [4, 6, 7],
    [4, 7, 8],
];

pub fn projective_plane() -> SimplicialComplex {
    SimplicialComplex::from_facets(&PROJECTIVE_PLANE).expect("static instance")
}

pub fn dunce_hat() -> SimplicialComplex {
    SimplicialComplex::from_facets(&DUNCE_HAT).expect("static instance")
}

/// The full `k`-simplex on vertices `0..=k`.
pub fn simplex(k: usize) -> SimplicialComplex {
    let facet: Vec<u32> = (0..=k as u32).collect();
    SimplicialComplex::from_facets(&[facet]).expect("non-empty")
}

/// The boundary of the `(d+1)`-simplex, a `d`-sphere with `d + 2` facets.
pub fn simplex_boundary(d: usize) -> SimplicialComplex {
    let n = d as u32 + 2;
    let facets: Vec<Vec<u32>> = (0..n)
        .map(|skip| (0..n).filter(|&v| v != skip).collect())
        .collect();
    SimplicialComplex::from_facets(&facets).expect("non-empty")
}

/// A random connected simple graph as a 1-dimensional complex: a random
/// spanning tree on `vertices` nodes plus extra random edges, `edges` in total
/// (clamped to the feasible range).
pub fn random_connected_graph(vertices: usize, edges: usize, seed: u64) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = vertices.max(2);
    let max_edges = n * (n - 1) / 2;
    let target = edges.clamp(n - 1, max_edges);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng);
    let mut present = std::collections::BTreeSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let (a, b) = (order[i].min(parent), order[i].max(parent));
        present.insert((a, b));
    }
    let mut rest: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
        .filter(|e| !present.contains(e))
        .collect();
    rest.shuffle(&mut rng);
    for e in rest.into_iter().take(target - present.len()) {
        present.insert(e);
    }
    let facets: Vec<Vec<u32>> = present.into_iter().map(|(a, b)| vec![a, b]).collect();
    SimplicialComplex::from_facets(&facets).expect("non-empty")
}

/// Named lookup used by the CLI and the test suites.
pub fn by_name(name: &str) -> Option<SimplicialComplex> {
    match name {
        "projective" => Some(projective_plane()),
        "dunce" => Some(dunce_hat()),
        _ => {
            if let Some(k) = name.strip_prefix("simplex").and_then(|s| s.parse().ok()) {
                Some(simplex(k))
            } else if let Some(d) = name.strip_prefix("sphere").and_then(|s| s.parse().ok()) {
                Some(simplex_boundary(d))
            } else {
                None
            }
        }
    }
}
