mod common;

use midspread::hypercube::Vertex;
use midspread::measure::{build_joint, conditional_laws, mid_of_measures, DiscreteMeasure};
use midspread::verify::random_vertex_measure;
use midspread::weight::{Exact, Weight};

fn v(s: &str) -> Vertex {
    s.parse().unwrap()
}

// A Dirac against a two-point uniform measure, fully worked by hand. The
// pair (000, 100) has the two endpoints as its midpoints; (000, 111) has
// the six vertices of intermediate weight.
#[test]
fn mid_of_measures_worked_example() {
    let mu0 = DiscreteMeasure::<Vertex, Exact>::dirac(v("000"));
    let mu1: DiscreteMeasure<Vertex, Exact> =
        DiscreteMeasure::uniform_on([v("100"), v("111")]).unwrap();
    let mid = mid_of_measures(&mu0, &mu1).unwrap();
    assert_eq!(mid.len(), 7);
    assert_eq!(mid.mass_of(&v("000")), Exact::from_ratio(1, 4));
    assert_eq!(mid.mass_of(&v("100")), Exact::from_ratio(1, 3));
    for m in ["010", "001", "110", "101", "011"] {
        assert_eq!(mid.mass_of(&v(m)), Exact::from_ratio(1, 12), "midpoint {m}");
    }
}

#[test]
fn joint_image_reproduces_midpoint_mixture() {
    for seed in 0..20u64 {
        let mu0: DiscreteMeasure<Vertex, f64> = random_vertex_measure(4, 6, seed).unwrap();
        let mu1: DiscreteMeasure<Vertex, f64> =
            random_vertex_measure(4, 6, seed ^ 0xdead).unwrap();
        let joint = build_joint(&mu0, &mu1).unwrap();
        let first = joint.image_pairs().pushforward(|p| p.m());
        let second = joint.image_pairs().pushforward(|p| p.m_prime());
        let mid = mid_of_measures(&mu0, &mu1).unwrap();
        for x in mid.support() {
            assert!((first.mass_of(x) - mid.mass_of(x)).abs() < 1e-12);
            assert!((second.mass_of(x) - mid.mass_of(x)).abs() < 1e-12);
        }
        assert_eq!(first.len(), mid.len());
    }
}

#[test]
fn joint_image_reproduces_midpoint_mixture_exactly_in_rational_mode() {
    let mu0: DiscreteMeasure<Vertex, Exact> = random_vertex_measure(3, 4, 7).unwrap();
    let mu1: DiscreteMeasure<Vertex, Exact> = random_vertex_measure(3, 4, 8).unwrap();
    let joint = build_joint(&mu0, &mu1).unwrap();
    let first = joint.image_pairs().pushforward(|p| p.m());
    let mid = mid_of_measures(&mu0, &mu1).unwrap();
    for x in mid.support() {
        assert_eq!(first.mass_of(x), mid.mass_of(x));
    }
}

// S(a, b, c) = S(m, m') + sum over image pairs of w * S(fiber), and the
// fiber weights themselves sum to one.
#[test]
fn conditional_entropy_chain_rule() {
    for seed in [1u64, 5, 9, 13] {
        let mu0: DiscreteMeasure<Vertex, f64> = random_vertex_measure(4, 5, seed).unwrap();
        let mu1: DiscreteMeasure<Vertex, f64> =
            random_vertex_measure(4, 5, seed.wrapping_mul(77)).unwrap();
        let joint = build_joint(&mu0, &mu1).unwrap();
        let fibers = conditional_laws(&joint).unwrap();
        let pairs = joint.image_pairs();
        let cond: f64 = fibers
            .values()
            .map(|f| f.weight * f.joint.shannon_entropy())
            .sum();
        let total_weight: f64 = fibers.values().map(|f| f.weight).sum();
        assert!((total_weight - 1.0).abs() < 1e-12);
        assert!(
            (joint.entropy() - pairs.shannon_entropy() - cond).abs() < 1e-10,
            "chain rule off at seed {seed}"
        );
        for (pair, fiber) in &fibers {
            assert!((pairs.mass_of(pair) - fiber.weight).abs() < 1e-12);
            fiber.joint.validate().unwrap();
            fiber.crossover_law.validate().unwrap();
        }
    }
}

#[test]
fn pair_entropy_is_subadditive_in_the_two_coordinates() {
    for seed in [2u64, 4, 6] {
        let mu0: DiscreteMeasure<Vertex, f64> = random_vertex_measure(5, 6, seed).unwrap();
        let mu1: DiscreteMeasure<Vertex, f64> =
            random_vertex_measure(5, 6, seed + 100).unwrap();
        let pairs = build_joint(&mu0, &mu1).unwrap().image_pairs();
        let s_first = pairs.pushforward(|p| p.m()).shannon_entropy();
        let s_second = pairs.pushforward(|p| p.m_prime()).shannon_entropy();
        assert!(pairs.shannon_entropy() <= s_first + s_second + 1e-12);
    }
}

#[test]
fn pushforward_preserves_mass() {
    let m: DiscreteMeasure<Vertex, Exact> = random_vertex_measure(6, 20, 3).unwrap();
    let folded = m.pushforward(|x| x.bits() % 5);
    assert_eq!(folded.total(), Exact::from_ratio(1, 1));
    let sum: Exact = <Exact as Weight>::sum(
        folded.atoms().map(|(_, w)| w).collect::<Vec<_>>().into_iter(),
    );
    assert_eq!(sum, Exact::from_ratio(1, 1));
}
