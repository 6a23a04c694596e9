mod common;

use common::*;
use morsematch::error::SeparationError;
use morsematch::lp::Row;
use morsematch::separation::{
    brute_force_separation, recover_cycle, separate_all, separate_free_face, separate_level, CycleCut, FreeFaceCut,
    TransformedGraph,
};
use morsematch::{instances, HasseDiagram, SimplicialComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_morse_matchings(h: &HasseDiagram) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for_each_morse_matching(h, |arcs| {
        let mut x = vec![0.0; h.num_arcs()];
        for &a in arcs {
            x[a] = 1.0;
        }
        out.push(x);
    });
    out
}

fn assert_valid(row: &Row, points: &[Vec<f64>]) {
    for x in points {
        assert!(row.activity(x) <= row.rhs + 1e-9, "row {row:?} cuts off an integral Morse matching");
    }
}

#[test]
fn free_face_inequalities_hold_for_every_subset() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..8 {
        let c = random_surface_patch(4, rng.gen_range(1..4), &mut rng);
        let h = HasseDiagram::new(&c);
        let points = all_morse_matchings(&h);
        for level in 0..h.num_levels() {
            let uppers: Vec<usize> = h.faces_of_dim(level + 1).collect();
            for mask in 1u32..(1 << uppers.len()) {
                let set: Vec<usize> = (0..uppers.len()).filter(|&k| mask >> k & 1 == 1).map(|k| uppers[k]).collect();
                let cut = FreeFaceCut::from_uppers(&h, level, set, &points[0]).unwrap();
                assert_valid(&cut.to_row(), &points);
            }
        }
    }
}

#[test]
fn separated_cuts_are_valid_and_violated() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..6 {
        let c = random_surface_patch(5, rng.gen_range(2..4), &mut rng);
        let h = HasseDiagram::new(&c);
        let points = all_morse_matchings(&h);
        for _ in 0..20 {
            let x = random_matching_point(&h, &mut rng);
            for cut in separate_all(&h, &x, 50).unwrap() {
                assert!(cut.violation > 1e-6);
                assert!(is_simple_level_cycle(&h, cut.level, &cut.arcs));
                assert_valid(&cut.to_row(), &points);
            }
            for level in 0..h.num_levels() {
                for cut in separate_free_face(&h, level, &x, 50).unwrap() {
                    assert!(cut.violation > 1e-6);
                    let again = FreeFaceCut::from_uppers(&h, level, cut.uppers.clone(), &x).unwrap();
                    assert_eq!(again, cut);
                    assert!((cut.to_row().activity(&x) - cut.rhs - cut.violation).abs() < 1e-9);
                    assert_valid(&cut.to_row(), &points);
                }
            }
        }
    }
}

#[test]
fn half_point_on_a_hexagon() {
    // A triangle boundary is a 6-cycle in level 0; x = 1/2 on every arc
    // violates it by 1.
    let c = SimplicialComplex::parse("1 2\n2 3\n1 3\n").unwrap();
    let h = HasseDiagram::new(&c);
    let x = vec![0.5; h.num_arcs()];
    let cuts = separate_level(&h, 0, &x, 10).unwrap();
    assert_eq!(cuts.len(), 1);
    assert_eq!(cuts[0].arcs.len(), 6);
    assert!((cuts[0].violation - 1.0).abs() < 1e-9);
    let brute = brute_force_separation(&h, 0, &x, 6).unwrap().unwrap();
    assert_eq!(brute.key(), cuts[0].key());
    let graph = TransformedGraph::build(&h, 0, &x).unwrap();
    assert!(!graph.dump().is_empty());
    let faces: Vec<usize> = (0..h.num_faces()).collect();
    assert!(CycleCut::from_faces(&h, 0, faces, &x).is_err());
    assert!(recover_cycle(&graph, &[]).is_err());
}

#[test]
fn rejects_bad_points() {
    let h = HasseDiagram::new(&instances::simplex(2));
    assert!(matches!(separate_level(&h, 0, &[0.5], 5), Err(SeparationError::PointLength { .. })));
    let over = vec![1.0; h.num_arcs()];
    assert!(matches!(separate_level(&h, 0, &over, 5), Err(SeparationError::MatchingViolated { .. })));
    assert!(separate_free_face(&h, 7, &over, 5).is_err());
    let big = HasseDiagram::new(&instances::dunce_hat());
    let x = vec![0.0; big.num_arcs()];
    assert!(matches!(brute_force_separation(&big, 1, &x, 10), Err(SeparationError::TooLarge { .. })));
}

#[test]
fn integral_matchings_are_never_cut() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for c in [instances::projective_plane(), instances::dunce_hat()] {
        let h = HasseDiagram::new(&c);
        for _ in 0..20 {
            let m = random_morse_matching(&h, &mut rng);
            let x = m.incidence(h.num_arcs());
            assert!(separate_all(&h, &x, 20).unwrap().is_empty());
            for level in 0..h.num_levels() {
                assert!(separate_free_face(&h, level, &x, 20).unwrap().is_empty());
            }
        }
    }
}
