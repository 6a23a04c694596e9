mod common;

use morsematch::error::ComplexError;
use morsematch::{instances, Face, HasseDiagram, SimplicialComplex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn faces_are_closed_and_sorted() {
    let c = SimplicialComplex::parse("# two triangles\n1 2 3\n2 3 4\n").unwrap();
    assert_eq!(c.f_vector(), vec![4, 5, 2]);
    for id in 0..c.num_faces() {
        for b in c.boundary_ids(id) {
            assert!(b < id);
            assert_eq!(c.face_dim(b) + 1, c.face_dim(id));
        }
    }
    let dims: Vec<usize> = (0..c.num_faces()).map(|f| c.face_dim(f)).collect();
    assert!(dims.windows(2).all(|w| w[0] <= w[1]));
    for i in 0..=c.dim() {
        let faces: Vec<&Face> = c.faces_of_dim(i).map(|f| c.face(f)).collect();
        assert!(faces.windows(2).all(|w| w[0].vertices() < w[1].vertices()));
    }
}

#[test]
fn labels_survive_round_trip() {
    let c = SimplicialComplex::parse("a b c\nc d\n").unwrap();
    let again = SimplicialComplex::parse(&c.to_facet_list()).unwrap();
    assert_eq!(c.f_vector(), again.f_vector());
    let edge = c.face_id_by_labels(&["d", "c"]).unwrap();
    assert_eq!(c.face_dim(edge), 1);
    assert!(c.face_id_by_labels(&["a", "d"]).is_none());
    let mut labels = c.face_labels(edge);
    labels.sort();
    assert_eq!(labels, ["c", "d"]);
}

#[test]
fn numeric_labels_sort_numerically() {
    let c = SimplicialComplex::parse("10 9 2\n").unwrap();
    let first = c.face_labels(c.faces_of_dim(0).start);
    assert_eq!(first, ["2"]);
}

#[test]
fn bad_input_is_rejected() {
    assert!(matches!(SimplicialComplex::parse("# nothing\n"), Err(ComplexError::NoFacets)));
    assert!(SimplicialComplex::from_facets::<Vec<u32>>(&[vec![]]).is_err());
    assert!(matches!(SimplicialComplex::parse("1 2\n3 4#x\n"), Err(ComplexError::Parse { line: 2, .. })));
}

#[test]
fn hasse_arcs_are_ordered_and_indexed() {
    let c = instances::projective_plane();
    let h = HasseDiagram::new(&c);
    assert_eq!(h.num_arcs(), 2 * c.f(1) + 3 * c.f(2));
    let keys: Vec<(usize, usize, usize)> =
        h.arcs().iter().map(|a| (c.face_dim(a.lower), a.upper, a.lower)).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    for a in 0..h.num_arcs() {
        let arc = h.arc(a);
        assert!(c.face(arc.upper).contains(c.face(arc.lower)));
        assert_eq!(h.find_arc(arc.upper, arc.lower), Some(a));
        assert!(h.down_arcs(arc.upper).contains(&a));
        assert!(h.up_arcs(arc.lower).contains(&a));
        assert!(h.level_arcs(h.arc_level(a)).contains(&a));
    }
    assert!(h.level(h.num_levels()).is_err());
}

#[test]
fn instance_shapes() {
    assert_eq!(instances::projective_plane().f_vector(), vec![6, 15, 10]);
    assert_eq!(instances::dunce_hat().f_vector(), vec![8, 24, 17]);
    assert_eq!(instances::simplex(3).f_vector(), vec![4, 6, 4, 1]);
    assert_eq!(instances::simplex_boundary(3).f_vector(), vec![5, 10, 10, 5]);
    assert!(instances::by_name("sphere2").is_some());
    assert!(instances::by_name("torus").is_none());
    let g = instances::random_connected_graph(9, 15, 3);
    assert_eq!(g.f_vector(), vec![9, 15]);
    assert!(g.is_connected());
}

#[test]
fn components_split_cleanly() {
    let c = SimplicialComplex::parse("1 2 3\n4 5\n6\n").unwrap();
    assert_eq!(c.components().len(), 3);
    assert!(!c.is_connected());
    let parts = c.split_components();
    let total: usize = parts.iter().map(|p| p.num_faces()).sum();
    assert_eq!(total, c.num_faces());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        assert!(common::random_surface_patch(6, 3, &mut rng).is_connected());
    }
}
