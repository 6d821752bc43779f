//! Brute-force oracles, independent of the library's algorithms.

#![allow(dead_code)]

use midspread::curvature::ball_measure;
use midspread::hypercube::{enumerate_vertices, hamming, Vertex, VertexSet};
use midspread::measure::DiscreteMeasure;
use midspread::weight::Weight;
use midspread::Graph;

/// Exact 1-Wasserstein value by exhaustive search over integer Kantorovich
/// potentials. The transportation polytope is totally unimodular, so for an
/// integer metric some optimal dual solution is integer with entries in
/// [-D, D]; fixing f[0] = 0 removes the shift freedom. No flow algorithm is
/// involved.
pub fn brute_w1<P: Ord + Clone, W: Weight>(
    mu: &DiscreteMeasure<P, W>,
    nu: &DiscreteMeasure<P, W>,
    metric: impl Fn(&P, &P) -> u32,
) -> W {
    let src: Vec<(&P, &W)> = mu.atoms().collect();
    let snk: Vec<(&P, &W)> = nu.atoms().collect();
    let ns = src.len();
    let nt = snk.len();
    assert!(ns >= 1 && ns <= 7, "oracle is exponential in the source support");
    let cost: Vec<i64> = src
        .iter()
        .flat_map(|(x, _)| snk.iter().map(|(y, _)| metric(x, y) as i64))
        .collect();
    let d = *cost.iter().max().unwrap();
    let width = (2 * d + 1) as u64;
    let states = width.checked_pow(ns as u32 - 1).expect("oracle state space fits");
    assert!(states <= 20_000_000, "oracle state space too large: {states}");

    let mut best: Option<W> = None;
    let mut f = vec![0i64; ns];
    for state in 0..states {
        let mut rest = state;
        for slot in f.iter_mut().skip(1) {
            *slot = (rest % width) as i64 - d;
            rest /= width;
        }
        let mut value = W::zero();
        for (i, (_, w)) in src.iter().enumerate() {
            value += W::from_int(f[i]) * (*w).clone();
        }
        for (j, (_, w)) in snk.iter().enumerate() {
            let g = (0..ns).map(|i| f[i] - cost[i * nt + j]).max().unwrap();
            value = value - W::from_int(g) * (*w).clone();
        }
        best = match best {
            None => Some(value),
            Some(b) if value > b => Some(value),
            keep => keep,
        };
    }
    best.unwrap()
}

/// Midpoints of a pair by scanning the whole cube for the defining property:
/// on a geodesic and within half a step of the middle.
pub fn brute_midpoints(a: Vertex, b: Vertex) -> Vec<Vertex> {
    let d = hamming(a, b).unwrap();
    enumerate_vertices(a.dim())
        .unwrap()
        .into_iter()
        .filter(|&m| {
            let da = hamming(m, a).unwrap();
            let db = hamming(m, b).unwrap();
            da + db == d && (2 * da as i64 - d as i64).abs() <= 1
        })
        .collect()
}

/// Midpoint set of two vertex sets by the same scan over all endpoint pairs.
pub fn brute_midpoint_set(a: &VertexSet, b: &VertexSet) -> Vec<Vertex> {
    enumerate_vertices(a.dim())
        .unwrap()
        .into_iter()
        .filter(|&m| {
            a.iter().any(|x| {
                b.iter().any(|y| {
                    let d = hamming(x, y).unwrap();
                    let da = hamming(m, x).unwrap();
                    let db = hamming(m, y).unwrap();
                    da + db == d && (2 * da as i64 - d as i64).abs() <= 1
                })
            })
        })
        .collect()
}

pub fn brute_set_distance(a: &VertexSet, b: &VertexSet) -> u32 {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| hamming(x, y).unwrap()))
        .min()
        .unwrap()
}

/// Coarse Ricci curvature of a pair from the dual-enumeration transport
/// oracle on the two one-step ball measures.
pub fn brute_kappa<W: Weight>(g: &Graph, x: u32, y: u32) -> W {
    let dist: Vec<Vec<u32>> = (0..g.order() as u32)
        .map(|v| g.distances_from(v, None))
        .collect();
    let d = dist[x as usize][y as usize];
    assert!(d > 0, "curvature needs distinct vertices");
    let mx: DiscreteMeasure<u32, W> = ball_measure(g, x, 1).unwrap();
    let my: DiscreteMeasure<u32, W> = ball_measure(g, y, 1).unwrap();
    let w1 = brute_w1(&mx, &my, |&u, &v| dist[u as usize][v as usize]);
    W::one() - w1 / W::from_int(d as i64)
}
