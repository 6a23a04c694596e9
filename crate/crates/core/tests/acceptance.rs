//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use morsematch::heuristic::{augment_once, greedy_from_lp, improve, run as heuristic_run};
use morsematch::homology::{best_betti_bounds, betti_numbers, FieldSpec};
use morsematch::instances;
use morsematch::matching::{
    check_discrete_morse_function, critical_report, function_to_matching, matching_to_function, MorseMatching,
};
use morsematch::separation::{brute_force_separation, conservative_weight_audit, separate_level};
use morsematch::solver::{root_relaxation, solve, SolveResult, SolverConfig};
use morsematch::{HasseDiagram, SimplicialComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

/// Collects every matching the suite produces for the identity check.
#[derive(Default)]
struct Produced(Vec<(SimplicialComplex, MorseMatching)>);

impl Produced {
    fn add(&mut self, complex: &SimplicialComplex, m: &MorseMatching) {
        self.0.push((complex.clone(), m.clone()));
    }
}

struct Line {
    id: usize,
    pass: bool,
    detail: String,
}

fn timed_solve(complex: &SimplicialComplex, produced: &mut Produced) -> (SolveResult, Duration) {
    let start = Instant::now();
    let result = solve(complex, &SolverConfig::default()).expect("solve");
    let elapsed = start.elapsed();
    produced.add(complex, &result.matching);
    (result, elapsed)
}

fn criterion_1(produced: &mut Produced) -> Line {
    let c = instances::projective_plane();
    let (r, t) = timed_solve(&c, produced);
    let beta = best_betti_bounds(&c, &FieldSpec::defaults()).unwrap();
    let pass = r.status.is_optimal()
        && r.report.total == 3
        && r.report.counts == [1, 1, 1]
        && r.betti_bound == 3
        && beta == [1, 1, 1]
        && t < Duration::from_secs(5);
    Line {
        id: 1,
        pass,
        detail: format!(
            "projective plane: status {}, c {}, counts {:?}, beta bound {}, {:.3}s",
            r.status.name(),
            r.report.total,
            r.report.counts,
            r.betti_bound,
            t.as_secs_f64()
        ),
    }
}

fn criterion_2(produced: &mut Produced) -> Line {
    let c = instances::dunce_hat();
    let h = HasseDiagram::new(&c);
    let (r, t) = timed_solve(&c, produced);
    let pass = c.f_vector() == [8, 24, 17]
        && c.num_faces() == 49
        && h.num_arcs() == 99
        && r.status.is_optimal()
        && r.report.total == 3
        && r.betti_bound == 1
        && r.stats.cycle_cuts + r.stats.lazy_cuts > 0
        && t < Duration::from_secs(60);
    Line {
        id: 2,
        pass,
        detail: format!(
            "dunce hat f {:?} n {} m {}: status {}, c {}, beta bound {}, nodes {}, cycle cuts {}, lazy cuts {}, free-face cuts {}, {:.3}s",
            c.f_vector(),
            c.num_faces(),
            h.num_arcs(),
            r.status.name(),
            r.report.total,
            r.betti_bound,
            r.stats.nodes,
            r.stats.cycle_cuts,
            r.stats.lazy_cuts,
            r.stats.free_face_cuts,
            t.as_secs_f64()
        ),
    }
}

fn criterion_3(produced: &mut Produced) -> Line {
    let mut pass = true;
    let mut notes = Vec::new();
    for d in 2..=4 {
        let c = instances::simplex_boundary(d);
        let (r, t) = timed_solve(&c, produced);
        let mut expected = vec![0; d + 1];
        expected[0] = 1;
        expected[d] = 1;
        let oracle = betti_mod_p(&c, BIG_PRIME);
        let oracle_total: usize = oracle.iter().sum();
        let mut ok = r.status.is_optimal()
            && r.report.total == 2
            && r.report.counts == expected
            && oracle == expected
            && r.betti_bound == oracle_total
            && t < Duration::from_secs(5);
        let mut note = format!("d={d}: c {} counts {:?} oracle betti {:?} {:.3}s", r.report.total, r.report.counts, oracle, t.as_secs_f64());
        if d == 2 {
            let brute = brute_force_min_critical(&HasseDiagram::new(&c));
            ok &= brute == 2;
            note.push_str(&format!(" enumeration {brute}"));
        }
        pass &= ok;
        notes.push(note);
    }
    Line { id: 3, pass, detail: notes.join("; ") }
}

fn criterion_4(produced: &mut Produced) -> Line {
    let mut pass = true;
    let mut notes = Vec::new();
    for k in 1..=3 {
        let c = instances::simplex(k);
        let (r, t) = timed_solve(&c, produced);
        let mut ok = r.status.is_optimal() && r.report.total == 1 && t < Duration::from_secs(5);
        let mut note = format!("k={k}: c {} {:.3}s", r.report.total, t.as_secs_f64());
        if k <= 2 {
            let brute = brute_force_min_critical(&HasseDiagram::new(&c));
            ok &= brute == 1;
            note.push_str(&format!(" enumeration {brute}"));
        }
        pass &= ok;
        notes.push(note);
    }
    Line { id: 4, pass, detail: notes.join("; ") }
}

fn criterion_5(produced: &mut Produced) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for k in 0..50 {
        let vertices = rng.gen_range(2..=12usize);
        let max_edges = (vertices * (vertices - 1) / 2).min(30);
        let edges = rng.gen_range(vertices - 1..=max_edges);
        let c = instances::random_connected_graph(vertices, edges, 1000 + k);
        let h = HasseDiagram::new(&c);
        let (r, _) = timed_solve(&c, produced);
        let (f0, f1) = (c.f(0), c.f(1));
        let expected = 1 + (f1 + 1 - f0);
        let roots = branching_roots(&h, &r.matching);
        if !r.status.is_optimal() || r.report.total != expected || roots != [1] {
            failures.push(format!("graph {k} (f0 {f0}, f1 {f1}): c {} expected {expected}, roots {roots:?}", r.report.total));
        }
    }
    Line {
        id: 5,
        pass: failures.is_empty(),
        detail: if failures.is_empty() { "50 random connected graphs match 1 + (f1 - f0 + 1) with one root".into() } else { failures.join("; ") },
    }
}

/// Random (complex, level, point) triples on levels with at most 30 faces.
fn separation_cases() -> Vec<(SimplicialComplex, usize, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = Vec::new();
    while cases.len() < 200 {
        let vertices = rng.gen_range(4..=6);
        let triangles = rng.gen_range(1..=6);
        let c = random_surface_patch(vertices, triangles, &mut rng);
        let h = HasseDiagram::new(&c);
        let level = rng.gen_range(0..h.num_levels());
        if level_size(&c, level) > 30 {
            continue;
        }
        let x = random_matching_point(&h, &mut rng);
        cases.push((c, level, x));
    }
    cases
}

fn criterion_6(cases: &[(SimplicialComplex, usize, Vec<f64>)]) -> Line {
    let mut failures = Vec::new();
    let mut violated = 0;
    let mut cuts = 0;
    for (k, (c, level, x)) in cases.iter().enumerate() {
        let h = HasseDiagram::new(c);
        let fast = separate_level(&h, *level, x, usize::MAX).expect("separate");
        let brute = brute_force_separation(&h, *level, x, level_size(c, *level)).expect("brute force");
        let oracle_best = simple_cycles(&h, *level)
            .iter()
            .map(|cyc| cyc.iter().map(|&a| x[a]).sum::<f64>() - (cyc.len() / 2) as f64 + 1.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let oracle_violated = oracle_best > 1e-6;
        if oracle_violated {
            violated += 1;
        }
        if fast.is_empty() == brute.is_some() || brute.is_some() != oracle_violated {
            failures.push(format!("case {k}: fast {} brute {} oracle {oracle_best:.6}", fast.len(), brute.is_some()));
        }
        for cut in &fast {
            cuts += 1;
            let value: f64 = cut.arcs.iter().map(|&a| x[a]).sum();
            let violation = value - (cut.arcs.len() / 2) as f64 + 1.0;
            if !is_simple_level_cycle(&h, *level, &cut.arcs) || cut.arcs.len() < 6 || violation <= 1e-6 {
                failures.push(format!("case {k}: bad cut {:?} violation {violation}", cut.arcs));
            }
        }
    }
    Line {
        id: 6,
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("200 points, {violated} with a violated cycle, {cuts} cuts checked")
        } else {
            failures.join("; ")
        },
    }
}

fn criterion_7(cases: &[(SimplicialComplex, usize, Vec<f64>)]) -> Line {
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for (k, (c, level, x)) in cases.iter().enumerate() {
        let h = HasseDiagram::new(c);
        let audit = conservative_weight_audit(&h, *level, x).expect("audit");
        let oracle = simple_cycles(&h, *level)
            .iter()
            .map(|cyc| cyc.iter().map(|&a| 0.5 - x[a]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        if let Some(w) = audit {
            worst = worst.min(w);
            if (w - oracle).abs() > 1e-9 {
                failures.push(format!("case {k}: audit {w} oracle {oracle}"));
            }
        } else if oracle.is_finite() {
            failures.push(format!("case {k}: audit found no cycle, oracle {oracle}"));
        }
    }
    let pass = failures.is_empty() && worst >= -1e-9;
    Line {
        id: 7,
        pass,
        detail: if failures.is_empty() { format!("minimum cycle weight {worst:.6} over 200 points") } else { failures.join("; ") },
    }
}

fn criterion_8(produced: &Produced) -> Line {
    let mut failures = Vec::new();
    for (k, (c, m)) in produced.0.iter().enumerate() {
        let h = HasseDiagram::new(c);
        if let Some(why) = identity_failures(c, &h, m) {
            failures.push(format!("matching {k}: {why}"));
        }
        // Betti numbers from the library must agree with the oracle too
        for (field, p) in [(FieldSpec::Rationals, BIG_PRIME), (FieldSpec::Prime(2), 2)] {
            if betti_numbers(c, field).betti != betti_mod_p(c, p) {
                failures.push(format!("matching {k}: Betti numbers over {field} disagree"));
            }
        }
    }
    Line {
        id: 8,
        pass: failures.is_empty() && !produced.0.is_empty(),
        detail: if failures.is_empty() { format!("{} matchings checked", produced.0.len()) } else { failures.join("; ") },
    }
}

fn criterion_9(produced: &mut Produced) -> Line {
    let suite: Vec<(&str, SimplicialComplex, usize)> = vec![
        ("projective", instances::projective_plane(), 3),
        ("dunce", instances::dunce_hat(), 3),
        ("sphere2", instances::simplex_boundary(2), 2),
        ("sphere3", instances::simplex_boundary(3), 2),
        ("sphere4", instances::simplex_boundary(4), 2),
        ("simplex1", instances::simplex(1), 1),
        ("simplex2", instances::simplex(2), 1),
        ("simplex3", instances::simplex(3), 1),
    ];
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (name, c, optimum) in &suite {
        let h = HasseDiagram::new(c);
        let root = root_relaxation(c, &SolverConfig::default()).expect("root LP");
        let m = heuristic_run(&h, &root.values);
        produced.add(c, &m);
        let got = critical_report(&h, &m).total;
        notes.push(format!("{name} {got}"));
        if got != *optimum {
            failures.push(format!("{name}: heuristic c {got}, optimum {optimum}"));
        }
    }
    // property fallback: monotone improvement in steps of exactly 2
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (name, c, _) in &suite {
        let h = HasseDiagram::new(c);
        for _ in 0..10 {
            let x: Vec<f64> = (0..h.num_arcs()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let mut m = greedy_from_lp(&h, &x);
            let start = critical_report(&h, &m).total;
            while let Some(next) = augment_once(&h, &m) {
                let (before, after) = (critical_report(&h, &m).total, critical_report(&h, &next).total);
                if after + 2 != before {
                    failures.push(format!("{name}: augmentation {before} -> {after}"));
                }
                produced.add(c, &next);
                m = next;
            }
            let finished = improve(&h, &greedy_from_lp(&h, &x));
            if critical_report(&h, &finished).total > start {
                failures.push(format!("{name}: improve increased c"));
            }
        }
    }
    Line {
        id: 9,
        pass: failures.is_empty(),
        detail: if failures.is_empty() { format!("heuristic c from root LP: {}", notes.join(", ")) } else { failures.join("; ") },
    }
}

fn criterion_10(produced: &mut Produced) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let suite = [
        instances::projective_plane(),
        instances::dunce_hat(),
        instances::simplex_boundary(2),
        instances::simplex_boundary(3),
        instances::simplex(3),
        instances::random_connected_graph(8, 14, 77),
    ];
    let mut failures = Vec::new();
    for k in 0..100 {
        let c = &suite[k % suite.len()];
        let h = HasseDiagram::new(c);
        let m = random_morse_matching(&h, &mut rng);
        produced.add(c, &m);
        let f = matching_to_function(&h, &m).expect("function");
        let integral = f.values.iter().all(|v| v.fract() == 0.0);
        let condition = satisfies_morse_condition(&h, &f) && check_discrete_morse_function(&h, &f).is_ok();
        let back = function_to_matching(&h, &f).expect("matching");
        if !integral || !condition || back != m {
            failures.push(format!("sample {k}: integral {integral}, condition {condition}, identity {}", back == m));
        }
    }
    Line {
        id: 10,
        pass: failures.is_empty(),
        detail: if failures.is_empty() { "100 random Morse matchings round trip".into() } else { failures.join("; ") },
    }
}

#[test]
fn acceptance() {
    let mut produced = Produced::default();
    let cases = separation_cases();
    let mut lines = vec![
        criterion_1(&mut produced),
        criterion_2(&mut produced),
        criterion_3(&mut produced),
        criterion_4(&mut produced),
        criterion_5(&mut produced),
        criterion_6(&cases),
        criterion_7(&cases),
    ];
    let nine = criterion_9(&mut produced);
    let ten = criterion_10(&mut produced);
    lines.push(criterion_8(&produced));
    lines.push(nine);
    lines.push(ten);
    lines.sort_by_key(|l| l.id);
    for line in &lines {
        println!("criterion {:>2} {}: {}", line.id, if line.pass { "PASS" } else { "FAIL" }, line.detail);
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
