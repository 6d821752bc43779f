mod common;

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{brute_kappa, brute_w1};
use midspread::curvature::{edge_curvature_sweep, kappa};
use midspread::hypercube::{enumerate_vertices, hamming, Vertex};
use midspread::measure::DiscreteMeasure;
use midspread::transport::{validate_coupling, w1};
use midspread::weight::{Exact, Weight};
use midspread::Graph;

fn hd(a: &Vertex, b: &Vertex) -> f64 {
    hamming(*a, *b).unwrap() as f64
}

fn random_exact_measure(n: usize, atoms: usize, rng: &mut ChaCha8Rng) -> DiscreteMeasure<Vertex, Exact> {
    let verts = enumerate_vertices(n).unwrap();
    let atoms = atoms.min(verts.len());
    let mut chosen: BTreeSet<u32> = BTreeSet::new();
    while chosen.len() < atoms {
        chosen.insert(rng.random_range(0..verts.len() as u32));
    }
    DiscreteMeasure::from_weights(chosen.iter().map(|&i| {
        (verts[i as usize], Exact::from_ratio(rng.random_range(1..=6), 1))
    }))
    .unwrap()
}

// The solver against an oracle that knows nothing about flows: exhaustive
// integer dual enumeration. Exact equality of rationals, exact marginals,
// and a clean certificate on every instance.
#[test]
fn solver_matches_dual_enumeration_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..60 {
        let n = rng.random_range(2..=4usize);
        let mu = random_exact_measure(n, rng.random_range(1..=5), &mut rng);
        let nu = random_exact_measure(n, rng.random_range(1..=5), &mut rng);
        let r = w1(&mu, &nu, hd).unwrap();
        let oracle = brute_w1(&mu, &nu, |a, b| hamming(*a, *b).unwrap());
        assert_eq!(r.value, oracle, "trial {trial}");
        assert!(r.dual_feasible, "trial {trial}");
        assert_eq!(r.value, r.coupling.cost_int(|a, b| hamming(*a, *b)).unwrap());
        let check = validate_coupling(&r.coupling, &mu, &nu);
        assert!(check.ok, "trial {trial}: {check:?}");
        assert!(r.duality_gap <= 1e-9);
        assert_eq!(r.quantization_bound, 0.0);
    }
}

#[test]
fn float_solver_stays_within_quantization_of_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let n = rng.random_range(2..=4usize);
        let verts = enumerate_vertices(n).unwrap();
        let mu: DiscreteMeasure<Vertex, f64> = DiscreteMeasure::from_weights(
            (0..rng.random_range(1..=5)).map(|_| {
                (verts[rng.random_range(0..verts.len())], rng.random::<f64>() + 0.01)
            }),
        )
        .unwrap();
        let nu: DiscreteMeasure<Vertex, f64> = DiscreteMeasure::from_weights(
            (0..rng.random_range(1..=5)).map(|_| {
                (verts[rng.random_range(0..verts.len())], rng.random::<f64>() + 0.01)
            }),
        )
        .unwrap();
        let r = w1(&mu, &nu, hd).unwrap();
        let oracle = brute_w1(&mu, &nu, |a, b| hamming(*a, *b).unwrap());
        assert!(
            (r.value - oracle).abs() <= r.quantization_bound + 1e-12,
            "{} vs oracle {oracle}, bound {}",
            r.value,
            r.quantization_bound
        );
        assert!(r.duality_gap <= 1e-9);
        let check = validate_coupling(&r.coupling, &mu, &nu);
        assert!(check.ok, "{check:?}");
    }
}

#[test]
fn w1_triangle_inequality_in_rational_mode() {
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    for _ in 0..30 {
        let n = rng.random_range(2..=4usize);
        let a = random_exact_measure(n, rng.random_range(1..=4), &mut rng);
        let b = random_exact_measure(n, rng.random_range(1..=4), &mut rng);
        let c = random_exact_measure(n, rng.random_range(1..=4), &mut rng);
        let ab = w1(&a, &b, hd).unwrap().value;
        let bc = w1(&b, &c, hd).unwrap().value;
        let ac = w1(&a, &c, hd).unwrap().value;
        assert!(ac <= ab + bc);
    }
}

fn random_connected_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.random_range(4..=7u32);
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for v in 1..n {
        let p = rng.random_range(0..v);
        edges.insert((p, v));
    }
    for _ in 0..rng.random_range(0..=n) {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Graph::from_edges(&edges.into_iter().collect::<Vec<_>>()).unwrap()
}

#[test]
fn curvature_matches_brute_transport_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    for trial in 0..25 {
        let g = random_connected_graph(&mut rng);
        for (x, y) in g.edges() {
            let p = kappa::<Exact>(&g, x, y).unwrap();
            let oracle: Exact = brute_kappa(&g, x, y);
            assert_eq!(p.kappa, oracle, "trial {trial}, edge ({x}, {y})");
        }
    }
}

#[test]
fn named_graph_curvatures_match_oracle() {
    for g in [Graph::path(4).unwrap(), Graph::cycle(6).unwrap(), Graph::complete(5).unwrap()] {
        for (x, y) in g.edges() {
            let p = kappa::<Exact>(&g, x, y).unwrap();
            assert_eq!(p.kappa, brute_kappa::<Exact>(&g, x, y));
        }
    }
}

// Relabeling the vertices must permute the curvature report, not change it.
#[test]
fn edge_curvature_multiset_is_automorphism_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    // Hypercube N = 3 under a coordinate permutation plus a translation.
    let g = Graph::hypercube(3).unwrap();
    let perm = [2u32, 0, 1];
    let shift = rng.random_range(0..8u32);
    let relabel = |v: u32| -> u32 {
        let mut out = 0;
        for (i, &pi) in perm.iter().enumerate() {
            if (v ^ shift) >> i & 1 == 1 {
                out |= 1 << pi;
            }
        }
        out
    };
    let edges: Vec<(u32, u32)> = g.edges().iter().map(|&(a, b)| (relabel(a), relabel(b))).collect();
    let h = Graph::from_edges(&edges).unwrap();
    let mut kg: Vec<Exact> = edge_curvature_sweep::<Exact>(&g, None)
        .unwrap()
        .edges
        .into_iter()
        .map(|e| e.kappa)
        .collect();
    let mut kh: Vec<Exact> = edge_curvature_sweep::<Exact>(&h, None)
        .unwrap()
        .edges
        .into_iter()
        .map(|e| e.kappa)
        .collect();
    kg.sort_by(|a, b| a.partial_cmp(b).unwrap());
    kh.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(kg, kh);

    // A random graph under a random relabeling.
    let g2 = random_connected_graph(&mut rng);
    let n = g2.order() as u32;
    let mut labels: Vec<u32> = (0..n).collect();
    for i in (1..n as usize).rev() {
        let j = rng.random_range(0..=i);
        labels.swap(i, j);
    }
    let edges2: Vec<(u32, u32)> = g2
        .edges()
        .iter()
        .map(|&(a, b)| (labels[a as usize], labels[b as usize]))
        .collect();
    let h2 = Graph::from_edges(&edges2).unwrap();
    let mut k1: Vec<Exact> = edge_curvature_sweep::<Exact>(&g2, None)
        .unwrap()
        .edges
        .into_iter()
        .map(|e| e.kappa)
        .collect();
    let mut k2: Vec<Exact> = edge_curvature_sweep::<Exact>(&h2, None)
        .unwrap()
        .edges
        .into_iter()
        .map(|e| e.kappa)
        .collect();
    k1.sort_by(|a, b| a.partial_cmp(b).unwrap());
    k2.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(k1, k2);
}

// One-step ball transport on the cube, frozen: W1 = 1 - 2/(N+1) between
// neighboring ball measures, so N = 3 gives 1/2.
#[test]
fn neighbor_ball_transport_frozen_value() {
    let g = Graph::hypercube(3).unwrap();
    let p = kappa::<Exact>(&g, 0, 1).unwrap();
    assert_eq!(p.w1, Exact::from_ratio(1, 2));
    assert_eq!(p.kappa, Exact::from_ratio(1, 2));
}
