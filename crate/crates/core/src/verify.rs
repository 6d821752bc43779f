use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::crossover::{
    crossover_count, crossover_distance, decode, encode, iter_crossovers, k_subsets, Crossover,
    MidpointPair,
};
use crate::error::{Error, Result};
use crate::hypercube::{
    enumerate_vertices, hamming, set_distance, Vertex, VertexSet, MAX_DIM,
};
use crate::measure::{build_joint, conditional_laws, mid_of_measures, DiscreteMeasure};
use crate::transport::{coupling_transfer, validate_coupling, w1};
use crate::weight::Weight;

/// Endpoint-pair budget for set-level scans.
pub const PAIR_CAP: u64 = 10_000_000;
/// Endpoint-pair budget for the injection scan, which keeps every image.
pub const INJECTION_PAIR_CAP: u64 = 1_000_000;

/// Default curvature lower bound for the N-cube: 1 / (2N).
pub fn default_curvature(n: usize) -> f64 {
    1.0 / (2.0 * n as f64)
}

// XOR masks s such that x ^ s is a midpoint of (x, x ^ delta): submasks of
// delta of near-half popcount.
fn midpoint_masks(delta: u32) -> Vec<u32> {
    let d = delta.count_ones();
    let positions: Vec<u32> = (0..32).filter(|i| delta >> i & 1 == 1).collect();
    let mut sizes = vec![d / 2];
    if d % 2 == 1 {
        sizes.push(d / 2 + 1);
    }
    let mut out = Vec::new();
    for k in sizes {
        for compact in k_subsets(d, k) {
            let mut s = 0u32;
            let mut c = compact;
            while c != 0 {
                let j = c.trailing_zeros();
                s |= 1 << positions[j as usize];
                c &= c - 1;
            }
            out.push(s);
        }
    }
    out
}

/// Union of the midpoint sets over all endpoint pairs in A x B. The subset
/// enumeration is shared across pairs with the same difference mask, so the
/// cost is close to the number of insertions.
pub fn midpoint_set(a: &VertexSet, b: &VertexSet) -> Result<VertexSet> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let pairs = a.len() as u64 * b.len() as u64;
    if pairs > PAIR_CAP {
        return Err(Error::TooLarge(format!(
            "{pairs} endpoint pairs exceed the cap of {PAIR_CAP}"
        )));
    }
    let n = a.dim();
    let words = (1usize << n).div_ceil(64);
    let mut bits = vec![0u64; words];
    let mut cache: HashMap<u32, Vec<u32>> = HashMap::new();
    for x in a.iter() {
        for y in b.iter() {
            let delta = x.bits() ^ y.bits();
            let masks = cache.entry(delta).or_insert_with(|| midpoint_masks(delta));
            for &s in masks.iter() {
                let m = x.bits() ^ s;
                bits[(m >> 6) as usize] |= 1u64 << (m & 63);
            }
        }
    }
    let mut members = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut rest = word;
        while rest != 0 {
            let i = rest.trailing_zeros();
            members.push(Vertex::new(n, (w as u32) << 6 | i)?);
            rest &= rest - 1;
        }
    }
    VertexSet::new(n, members)
}

#[derive(Clone, Copy, Debug)]
pub struct BmSetReport {
    pub dim: usize,
    pub card_a: u64,
    pub card_b: u64,
    pub card_m: u64,
    pub set_distance: u32,
    pub k_used: f64,
    /// ln #M
    pub lhs: f64,
    /// (ln #A + ln #B) / 2 + (K/8) d(A, B)^2
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

/// Set-level midpoint inequality: the log-cardinality of the midpoint set
/// dominates the mean of the endpoint log-cardinalities plus a curvature
/// gain in the squared set distance.
pub fn bm_set_check(a: &VertexSet, b: &VertexSet, k: Option<f64>) -> Result<BmSetReport> {
    let m = midpoint_set(a, b)?;
    let d = set_distance(a, b)?;
    let n = a.dim();
    let k_used = match k {
        Some(v) if v.is_finite() => v,
        Some(v) => return Err(Error::Unsupported(format!("bad curvature constant {v}"))),
        None => default_curvature(n),
    };
    let lhs = (m.len() as f64).ln();
    let rhs = 0.5 * (a.len() as f64).ln()
        + 0.5 * (b.len() as f64).ln()
        + k_used / 8.0 * (d as f64).powi(2);
    let margin = lhs - rhs;
    Ok(BmSetReport {
        dim: n,
        card_a: a.len() as u64,
        card_b: b.len() as u64,
        card_m: m.len() as u64,
        set_distance: d,
        k_used,
        lhs,
        rhs,
        margin,
        holds: margin >= -1e-12,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct InjectionReport {
    pub dim: usize,
    pub card_a: u64,
    pub card_b: u64,
    pub card_m: u64,
    pub pairs: u64,
    pub collisions: u64,
    pub injective: bool,
    /// Every image coordinate lands in the midpoint set.
    pub images_in_m: bool,
    /// #M^2 >= #A #B, the counting consequence of injectivity.
    pub square_dominates: bool,
}

/// Map each endpoint pair through the canonical crossover and audit the
/// result: no two pairs share an image, images lie in M x M, and therefore
/// #M^2 >= #A #B.
pub fn injection_check(a: &VertexSet, b: &VertexSet) -> Result<InjectionReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let pairs = a.len() as u64 * b.len() as u64;
    if pairs > INJECTION_PAIR_CAP {
        return Err(Error::TooLarge(format!(
            "{pairs} endpoint pairs exceed the injection cap of {INJECTION_PAIR_CAP}"
        )));
    }
    let m = midpoint_set(a, b)?;
    let mut seen: BTreeSet<MidpointPair> = BTreeSet::new();
    let mut collisions = 0u64;
    let mut images_in_m = true;
    for x in a.iter() {
        for y in b.iter() {
            let d = hamming(x, y)?;
            let c = Crossover::canonical(d as usize)?;
            let pair = encode(c, x, y)?;
            images_in_m &= m.contains(pair.m()) && m.contains(pair.m_prime());
            if !seen.insert(pair) {
                collisions += 1;
            }
        }
    }
    let card_m = m.len() as u64;
    Ok(InjectionReport {
        dim: a.dim(),
        card_a: a.len() as u64,
        card_b: b.len() as u64,
        card_m,
        pairs,
        collisions,
        injective: collisions == 0,
        images_in_m,
        square_dominates: (card_m as u128) * (card_m as u128)
            >= a.len() as u128 * b.len() as u128,
    })
}

#[derive(Clone, Debug)]
pub struct FiberReport {
    pub arity: usize,
    pub members: Vec<Crossover>,
    pub card_fiber: u64,
    pub card_family: u64,
    pub set_distance: u32,
    /// d(E, E-bar) within the crossover family; absent for empty fibers.
    pub separation: Option<u32>,
    /// separation >= d(A, B); vacuously true for empty fibers.
    pub separation_ok: bool,
    pub bound: f64,
    pub within_bound: bool,
    pub vacuous: bool,
}

/// The fiber over an image pair: crossovers whose decoded endpoints land in
/// A and B. Its complement set is the fiber with the roles of the endpoints
/// swapped, it sits at least d(A, B) away, and the isoperimetric bound caps
/// its size by #C_r exp(-d(A, B)^2 / 8r).
pub fn fiber_analysis(a: &VertexSet, b: &VertexSet, pair: &MidpointPair) -> Result<FiberReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if pair.m().dim() != a.dim() {
        return Err(Error::DimensionMismatch(pair.m().dim(), a.dim()));
    }
    let d_ab = set_distance(a, b)?;
    let r = hamming(pair.m(), pair.m_prime())? as usize;
    let swapped = pair.swap();
    let mut members = Vec::new();
    for c in iter_crossovers(r)? {
        let x = decode(c, pair)?;
        let y = decode(c, &swapped)?;
        if a.contains(x) && b.contains(y) {
            members.push(c);
        }
    }
    let complements: Vec<Crossover> = members.iter().map(|c| c.complement()).collect();
    let separation = members
        .iter()
        .flat_map(|&x| {
            complements
                .iter()
                .map(move |&y| (x.picks() ^ y.picks()).count_ones())
        })
        .min();
    let separation_ok = separation.is_none_or(|s| s >= d_ab);
    let card_family = crossover_count(r)?;
    let bound = if r == 0 {
        1.0
    } else {
        card_family as f64 * (-(d_ab as f64).powi(2) / (8.0 * r as f64)).exp()
    };
    let card_fiber = members.len() as u64;
    Ok(FiberReport {
        arity: r,
        card_fiber,
        card_family,
        set_distance: d_ab,
        separation,
        separation_ok,
        bound,
        within_bound: card_fiber as f64 <= bound * (1.0 + 1e-12) + 1e-9,
        vacuous: members.is_empty(),
        members,
    })
}

fn common_dim<W: Weight>(
    mu0: &DiscreteMeasure<Vertex, W>,
    mu1: &DiscreteMeasure<Vertex, W>,
) -> Result<usize> {
    let mut dim = None;
    for v in mu0.support().chain(mu1.support()) {
        match dim {
            None => dim = Some(v.dim()),
            Some(d) if d != v.dim() => return Err(Error::DimensionMismatch(d, v.dim())),
            _ => {}
        }
    }
    dim.ok_or(Error::EmptySet)
}

fn hamming_metric(a: &Vertex, b: &Vertex) -> f64 {
    hamming(*a, *b).expect("common dimension checked") as f64
}

#[derive(Clone, Copy, Debug)]
pub struct BmEntropyReport {
    pub dim: usize,
    pub entropy_mid: f64,
    pub entropy_0: f64,
    pub entropy_1: f64,
    pub w1: f64,
    pub k_used: f64,
    /// S(mid) - (S0 + S1)/2 - (K/8) W1^2
    pub margin_entropy: f64,
    /// Same quantity through relative entropies against the uniform measure.
    pub margin_relative: f64,
    pub forms_agree: bool,
    pub holds: bool,
    pub transport_quantization: f64,
}

/// Entropic midpoint inequality: the Shannon entropy of the midpoint
/// mixture dominates the mean endpoint entropy plus a curvature gain in the
/// squared transport distance. The relative-entropy form against the
/// uniform measure is computed independently and must agree.
pub fn bm_entropy_check<W: Weight>(
    mu0: &DiscreteMeasure<Vertex, W>,
    mu1: &DiscreteMeasure<Vertex, W>,
    k: Option<f64>,
) -> Result<BmEntropyReport> {
    let n = common_dim(mu0, mu1)?;
    if n > 16 {
        return Err(Error::TooLarge(format!(
            "entropy comparison materializes the uniform measure; dimension {n} exceeds 16"
        )));
    }
    let k_used = match k {
        Some(v) if v.is_finite() => v,
        Some(v) => return Err(Error::Unsupported(format!("bad curvature constant {v}"))),
        None => default_curvature(n),
    };
    let mid = mid_of_measures(mu0, mu1)?;
    let s_mid = mid.shannon_entropy();
    let s0 = mu0.shannon_entropy();
    let s1 = mu1.shannon_entropy();
    let t = w1(mu0, mu1, hamming_metric)?;
    let wv = t.value.to_f64();
    let gain = k_used / 8.0 * wv * wv;
    let margin_entropy = s_mid - 0.5 * (s0 + s1) - gain;

    let uniform: DiscreteMeasure<Vertex, W> =
        DiscreteMeasure::uniform_on(enumerate_vertices(n)?)?;
    let h_mid = mid.relative_entropy(&uniform);
    let h0 = mu0.relative_entropy(&uniform);
    let h1 = mu1.relative_entropy(&uniform);
    let margin_relative = 0.5 * (h0 + h1) - h_mid - gain;

    let qb = t.quantization_bound;
    let slack = 1e-12 + k_used / 8.0 * qb * (2.0 * wv + qb);
    Ok(BmEntropyReport {
        dim: n,
        entropy_mid: s_mid,
        entropy_0: s0,
        entropy_1: s1,
        w1: wv,
        k_used,
        margin_entropy,
        margin_relative,
        forms_agree: (margin_entropy - margin_relative).abs() <= 1e-10,
        holds: margin_entropy >= -slack,
        transport_quantization: qb,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct ChainLink {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs - rhs for identities, slack in the good direction for bounds.
    pub margin: f64,
    pub identity: bool,
    pub tolerance: f64,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct ProofChainReport {
    pub dim: usize,
    pub links: Vec<ChainLink>,
    /// S(mid) - (S0 + S1)/2 - W1^2 / (16 N)
    pub final_margin: f64,
    pub ok: bool,
}

fn identity_link(name: &'static str, lhs: f64, rhs: f64, tol: f64) -> ChainLink {
    let margin = lhs - rhs;
    ChainLink { name, lhs, rhs, margin, identity: true, tolerance: tol, ok: margin.abs() <= tol }
}

fn bound_link(name: &'static str, lhs: f64, rhs: f64, tol: f64) -> ChainLink {
    // Convention: the bound asserts lhs >= rhs.
    let margin = lhs - rhs;
    ChainLink { name, lhs, rhs, margin, identity: false, tolerance: tol, ok: margin >= -tol }
}

/// Walk the full derivation of the entropic midpoint inequality on one pair
/// of measures, checking every identity and every one-sided bound along the
/// way: the joint construction, its disintegration over image pairs, the
/// per-fiber transport transfer, convexity of W1, the per-fiber entropy
/// bound, and the final subadditivity step.
pub fn proof_chain_check<W: Weight>(
    mu0: &DiscreteMeasure<Vertex, W>,
    mu1: &DiscreteMeasure<Vertex, W>,
) -> Result<ProofChainReport> {
    let n = common_dim(mu0, mu1)?;
    let nf = n as f64;
    let joint = build_joint(mu0, mu1)?;
    let fibers = conditional_laws(&joint)?;
    let pairs_law = joint.image_pairs();
    let s_y = joint.entropy();
    let s_pairs = pairs_law.shannon_entropy();
    let s0 = mu0.shannon_entropy();
    let s1 = mu1.shannon_entropy();
    let crossover_metric =
        |x: &Crossover, y: &Crossover| crossover_distance(*x, *y).expect("same arity") as f64;

    let mut links = Vec::new();

    // S(a, b, c) = S0 + S1 + E ln #C_{d(a, b)}: independent endpoints and a
    // uniform crossover given the distance.
    let mut e_log_family = 0.0;
    for (x, wx) in mu0.atoms() {
        for (y, wy) in mu1.atoms() {
            let d = hamming(*x, *y)? as usize;
            e_log_family +=
                wx.to_f64() * wy.to_f64() * (crossover_count(d)? as f64).ln();
        }
    }
    links.push(identity_link("joint-entropy", s_y, s0 + s1 + e_log_family, 1e-10));

    // Chain rule over the image pairs.
    let cond_entropy: f64 = fibers
        .values()
        .map(|f| f.weight.to_f64() * f.joint.shannon_entropy())
        .sum();
    links.push(identity_link("chain-rule", s_y, s_pairs + cond_entropy, 1e-10));

    // Within a fiber the crossover determines the whole atom.
    let worst_bijection = fibers
        .values()
        .map(|f| (f.joint.shannon_entropy() - f.crossover_law.shannon_entropy()).abs())
        .fold(0.0f64, f64::max);
    links.push(identity_link("fiber-codec-bijection", worst_bijection, 0.0, 1e-10));

    // Per fiber: W1 between the endpoint laws equals W1 between the
    // crossover law and its complement, via the transferred coupling.
    let mut worst_transfer = 0.0f64;
    let mut worst_transfer_tol = 1e-10f64;
    let mut transfers_valid = true;
    let mut fiber_w1: Vec<(f64, f64, usize)> = Vec::new(); // (weight, W1(E, E-bar), r)
    let mut max_fiber_qb = 0.0f64;
    for (pair, fiber) in &fibers {
        let r = hamming(pair.m(), pair.m_prime())? as usize;
        if r == 0 {
            fiber_w1.push((fiber.weight.to_f64(), 0.0, 0));
            continue;
        }
        let ebar = fiber.crossover_law.pushforward(|c| c.complement());
        let tf = w1(&fiber.crossover_law, &ebar, crossover_metric)?;
        let te = w1(&fiber.first_endpoint, &fiber.second_endpoint, hamming_metric)?;
        worst_transfer = worst_transfer.max((tf.value.to_f64() - te.value.to_f64()).abs());
        worst_transfer_tol =
            worst_transfer_tol.max(1e-10 + tf.quantization_bound + te.quantization_bound);
        let moved = coupling_transfer(&tf.coupling, pair)?;
        let check = validate_coupling(&moved, &fiber.first_endpoint, &fiber.second_endpoint);
        transfers_valid &= check.ok;
        max_fiber_qb = max_fiber_qb.max(tf.quantization_bound);
        fiber_w1.push((fiber.weight.to_f64(), tf.value.to_f64(), r));
    }
    let mut transfer_link =
        identity_link("fiber-transfer-isometry", worst_transfer, 0.0, worst_transfer_tol);
    transfer_link.ok &= transfers_valid;
    links.push(transfer_link);

    // Convexity: gluing the fiber couplings couples mu0 with mu1.
    let t01 = w1(mu0, mu1, hamming_metric)?;
    let w01 = t01.value.to_f64();
    let e_fiber_w1: f64 = fiber_w1.iter().map(|(w, v, _)| w * v).sum();
    links.push(bound_link(
        "transport-convexity",
        e_fiber_w1,
        w01,
        1e-12 + t01.quantization_bound + max_fiber_qb,
    ));

    // Jensen on the computed fiber values.
    let e_fiber_w1_sq: f64 = fiber_w1.iter().map(|(w, v, _)| w * v * v).sum();
    links.push(bound_link("jensen", e_fiber_w1_sq, e_fiber_w1 * e_fiber_w1, 1e-12));

    // Per-fiber entropy bound at arity r <= N:
    // S(E) + W1(E, E-bar)^2 / 8N <= ln #C_r, averaged over fibers.
    let mut lhs_fiber_entropy = 0.0;
    let mut rhs_fiber_entropy = 0.0;
    for (fiber, (wt, fv, r)) in fibers.values().zip(&fiber_w1) {
        lhs_fiber_entropy += wt * (fiber.crossover_law.shannon_entropy() + fv * fv / (8.0 * nf));
        rhs_fiber_entropy += wt * (crossover_count(*r)? as f64).ln();
    }
    links.push(bound_link(
        "fiber-entropy-bound",
        rhs_fiber_entropy,
        lhs_fiber_entropy,
        1e-12 + max_fiber_qb,
    ));

    // Combining the identities and fiber bounds:
    // S(m, m') >= S0 + S1 + W1(mu0, mu1)^2 / 8N.
    links.push(bound_link(
        "pair-entropy-bound",
        s_pairs,
        s0 + s1 + w01 * w01 / (8.0 * nf),
        1e-12 + t01.quantization_bound + max_fiber_qb,
    ));

    // The first image coordinate reproduces the midpoint mixture.
    let mid = mid_of_measures(mu0, mu1)?;
    let first_image = pairs_law.pushforward(|p| p.m());
    let mut worst_push = 0.0f64;
    for v in mid.support().chain(first_image.support()) {
        worst_push = worst_push
            .max((mid.mass_of(v).to_f64() - first_image.mass_of(v).to_f64()).abs());
    }
    links.push(identity_link("midpoint-pushforward", worst_push, 0.0, 1e-10));

    // Both image coordinates have the same law, so subadditivity halves the
    // pair entropy.
    let s_mid = mid.shannon_entropy();
    links.push(bound_link("midpoint-subadditivity", s_mid, 0.5 * s_pairs, 1e-12));

    let final_margin = s_mid - 0.5 * (s0 + s1) - w01 * w01 / (16.0 * nf);
    let ok = links.iter().all(|l| l.ok)
        && final_margin >= -(1e-12 + t01.quantization_bound + max_fiber_qb);
    Ok(ProofChainReport { dim: n, links, final_margin, ok })
}

#[derive(Clone, Copy, Debug)]
pub struct KStarReport {
    pub dim: usize,
    pub card_a: u64,
    pub card_b: u64,
    pub card_m: u64,
    pub set_distance: u32,
    /// Largest K making the set-level inequality an equality:
    /// 8 (ln #M - (ln #A + ln #B)/2) / d^2.
    pub k_star: f64,
}

/// Empirical curvature content of a set pair at positive distance.
pub fn empirical_k_star(a: &VertexSet, b: &VertexSet) -> Result<KStarReport> {
    let m = midpoint_set(a, b)?;
    let d = set_distance(a, b)?;
    if d == 0 {
        return Err(Error::Unsupported(
            "sets at distance zero carry no curvature information".into(),
        ));
    }
    let excess = (m.len() as f64).ln()
        - 0.5 * (a.len() as f64).ln()
        - 0.5 * (b.len() as f64).ln();
    Ok(KStarReport {
        dim: a.dim(),
        card_a: a.len() as u64,
        card_b: b.len() as u64,
        card_m: m.len() as u64,
        set_distance: d,
        k_star: 8.0 * excess / (d as f64 * d as f64),
    })
}

/// K* of the antipodal singleton pair, the extremal configuration.
pub fn k_star_antipodal(n: usize) -> Result<f64> {
    let a = VertexSet::singleton(Vertex::zero(n)?);
    let b = VertexSet::singleton(Vertex::ones(n)?);
    Ok(empirical_k_star(&a, &b)?.k_star)
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Unsupported("slope needs at least two points".into()));
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| {
            if x <= 0.0 || y <= 0.0 || !x.is_finite() || !y.is_finite() {
                return Err(Error::Unsupported(format!(
                    "log-log fit needs positive coordinates, got ({x}, {y})"
                )));
            }
            Ok((x.ln(), y.ln()))
        })
        .collect::<Result<_>>()?;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / logs.len() as f64;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / logs.len() as f64;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Unsupported("log-log fit is degenerate".into()));
    }
    Ok(sxy / sxx)
}

/// Seeded random measure on the N-cube: a support of at most max_support
/// distinct vertices with Exp(1) weights snapped to the 2^-24 dyadic grid,
/// so the normalized masses are a flat Dirichlet draw on the chosen support
/// and rational mode keeps transport denominators inside i128.
pub fn random_vertex_measure<W: Weight>(
    n: usize,
    max_support: usize,
    seed: u64,
) -> Result<DiscreteMeasure<Vertex, W>> {
    if n < 1 || n > MAX_DIM {
        return Err(Error::DimensionOutOfRange(n, MAX_DIM));
    }
    let cube = 1u64 << n;
    if max_support < 1 {
        return Err(Error::EmptySet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.random_range(1..=max_support.min(cube as usize));
    let mut support: BTreeSet<u32> = BTreeSet::new();
    while support.len() < target {
        support.insert(rng.random_range(0..cube) as u32);
    }
    let mut atoms = Vec::with_capacity(target);
    for bits in support {
        let u: f64 = rng.random();
        let e = -(1.0 - u).ln();
        atoms.push((Vertex::new(n, bits)?, crate::weight::quantized_weight::<W>(e)));
    }
    DiscreteMeasure::from_weights(atoms)
}

/// Sampling densities used by the set-level sweeps: a sparse floor of about
/// four expected vertices plus three fixed fills.
pub fn density_strata(n: usize) -> [f64; 4] {
    let floor = (4.0 / (1u64 << n) as f64).min(1.0);
    [floor, 0.1, 0.25, 0.5]
}
