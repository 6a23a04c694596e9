mod common;

use common::*;
use morsematch::heuristic::{augment_once, greedy_from_lp, improve, run};
use morsematch::matching::critical_report;
use morsematch::{instances, HasseDiagram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn greedy_follows_the_point() {
    let c = instances::projective_plane();
    let h = HasseDiagram::new(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let target = random_morse_matching(&h, &mut rng);
    let x = target.incidence(h.num_arcs());
    let greedy = greedy_from_lp(&h, &x);
    for &a in target.arcs() {
        assert!(greedy.contains(a), "integral point arcs are all kept");
    }
    assert!(identity_failures(&c, &h, &greedy).is_none());
}

#[test]
fn augmentation_removes_two_critical_faces() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..40 {
        let c = random_surface_patch(rng.gen_range(4..8), rng.gen_range(1..8), &mut rng);
        let h = HasseDiagram::new(&c);
        let mut m = random_morse_matching(&h, &mut rng);
        while let Some(next) = augment_once(&h, &m) {
            assert_eq!(critical_report(&h, &next).total + 2, critical_report(&h, &m).total);
            assert!(identity_failures(&c, &h, &next).is_none());
            m = next;
        }
        let done = improve(&h, &m);
        assert_eq!(done, m);
        let betti: usize = betti_mod_p(&c, 2).iter().sum();
        assert!(critical_report(&h, &m).total >= betti);
    }
}

#[test]
fn run_reaches_the_optimum_on_tiny_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut hits = 0;
    for _ in 0..30 {
        let c = random_surface_patch(4, rng.gen_range(1..3), &mut rng);
        let h = HasseDiagram::new(&c);
        let x: Vec<f64> = (0..h.num_arcs()).map(|_| rng.gen_range(0.0..1.0)).collect();
        let m = run(&h, &x);
        let got = critical_report(&h, &m).total;
        let best = brute_force_min_critical(&h);
        assert!(got >= best);
        hits += (got == best) as usize;
    }
    assert!(hits > 0);
}
