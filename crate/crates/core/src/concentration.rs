use std::collections::BTreeMap;

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::crossover::{crossover_count, crossover_distance, enumerate_crossovers, Crossover};
use crate::error::{Error, Result};
use crate::hypercube::MAX_DIM;
use crate::measure::DiscreteMeasure;
use crate::transport::w1;
use crate::weight::Weight;

/// Exhaustive enumeration cap for the symmetric group.
pub const MAX_SN: usize = 7;
/// Cap for crossover family spaces.
pub const MAX_CN: usize = 20;
/// At or below this point count Lipschitz certification scans all pairs.
pub const CERT_EXHAUSTIVE_CAP: usize = 10_000;
/// Pair samples for randomized certification above the cap.
pub const CERT_SAMPLES: usize = 1_000_000;

const MATRIX_CAP: usize = 6_000;

/// A permutation of {1, ..., n}; `image(i)` is the value at position i.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        if n < 1 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n, MAX_DIM));
        }
        Ok(Permutation { images: (1..=n as u8).collect() })
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if n < 1 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n, MAX_DIM));
        }
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v < 1 || v as usize > n || seen[v as usize] {
                return Err(Error::Unsupported(format!(
                    "images {images:?} are not a permutation of 1..={n}"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> Result<usize> {
        if i < 1 || i > self.n() {
            return Err(Error::DimensionOutOfRange(i, self.n()));
        }
        Ok(self.images[i - 1] as usize)
    }

    /// Image of a pick set: {sigma(i) : i in mask}.
    pub fn apply_to_mask(&self, mask: u32) -> u32 {
        let mut out = 0u32;
        for (i, &v) in self.images.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out |= 1 << (v - 1);
            }
        }
        out
    }
}

/// Number of positions where the two permutations disagree. Never one: two
/// distinct permutations differ in at least two places.
pub fn perm_distance(a: &Permutation, b: &Permutation) -> Result<u32> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    Ok(a.images.iter().zip(&b.images).filter(|(x, y)| x != y).count() as u32)
}

/// S_n in lexicographic order on image sequences. Capped at n = 7.
pub fn enumerate_sn(n: usize) -> Result<Vec<Permutation>> {
    if n < 1 || n > MAX_SN {
        return Err(Error::DimensionOutOfRange(n, MAX_SN));
    }
    Ok((1..=n as u8)
        .permutations(n)
        .map(|images| Permutation { images })
        .collect())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpaceKind {
    SymmetricGroup,
    CrossoverFamily,
    SymmetricGroupStar,
}

/// A finite metric probability space (uniform measure) on which the
/// concentration estimates are checked: S_n with the disagreement metric,
/// C_n with the symmetric-difference metric, or S*_n = S_n x {0,1} with the
/// sum metric. Distances are cached as a full matrix for small spaces.
pub struct Space {
    kind: SpaceKind,
    n: usize,
    perms: Vec<Permutation>,
    crossovers: Vec<Crossover>,
    matrix: Option<Vec<u16>>,
}

impl Space {
    pub fn symmetric_group(n: usize) -> Result<Self> {
        let perms = enumerate_sn(n)?;
        let mut s = Space {
            kind: SpaceKind::SymmetricGroup,
            n,
            perms,
            crossovers: Vec::new(),
            matrix: None,
        };
        s.cache_matrix();
        Ok(s)
    }

    pub fn crossover_family(n: usize) -> Result<Self> {
        if n < 1 || n > MAX_CN {
            return Err(Error::DimensionOutOfRange(n, MAX_CN));
        }
        let crossovers = enumerate_crossovers(n)?;
        let mut s = Space {
            kind: SpaceKind::CrossoverFamily,
            n,
            perms: Vec::new(),
            crossovers,
            matrix: None,
        };
        s.cache_matrix();
        Ok(s)
    }

    pub fn symmetric_group_star(n: usize) -> Result<Self> {
        let perms = enumerate_sn(n)?;
        let mut s = Space {
            kind: SpaceKind::SymmetricGroupStar,
            n,
            perms,
            crossovers: Vec::new(),
            matrix: None,
        };
        s.cache_matrix();
        Ok(s)
    }

    fn cache_matrix(&mut self) {
        let m = self.len();
        if m > MATRIX_CAP {
            return;
        }
        let mut matrix = vec![0u16; m * m];
        for i in 0..m {
            for j in i + 1..m {
                let d = self.distance_uncached(i, j) as u16;
                matrix[i * m + j] = d;
                matrix[j * m + i] = d;
            }
        }
        self.matrix = Some(matrix);
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        match self.kind {
            SpaceKind::SymmetricGroup => self.perms.len(),
            SpaceKind::CrossoverFamily => self.crossovers.len(),
            SpaceKind::SymmetricGroupStar => 2 * self.perms.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Subgaussian variance constant in the Laplace bound exp(lambda^2 V/2):
    /// n - 1 on S_n, n on C_n and S*_n.
    pub fn variance_constant(&self) -> f64 {
        match self.kind {
            SpaceKind::SymmetricGroup => (self.n - 1) as f64,
            SpaceKind::CrossoverFamily | SpaceKind::SymmetricGroupStar => self.n as f64,
        }
    }

    pub fn diameter_bound(&self) -> f64 {
        match self.kind {
            SpaceKind::SymmetricGroup => self.n as f64,
            SpaceKind::CrossoverFamily => self.n as f64,
            SpaceKind::SymmetricGroupStar => (self.n + 1) as f64,
        }
    }

    fn distance_uncached(&self, i: usize, j: usize) -> u32 {
        match self.kind {
            SpaceKind::SymmetricGroup => {
                perm_distance(&self.perms[i], &self.perms[j]).expect("same n")
            }
            SpaceKind::CrossoverFamily => {
                crossover_distance(self.crossovers[i], self.crossovers[j]).expect("same arity")
            }
            SpaceKind::SymmetricGroupStar => {
                let half = self.perms.len();
                let (pi, bi) = (i % half, i / half);
                let (pj, bj) = (j % half, j / half);
                bi.abs_diff(bj) as u32
                    + perm_distance(&self.perms[pi], &self.perms[pj]).expect("same n")
            }
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> Result<u32> {
        let m = self.len();
        if i >= m || j >= m {
            return Err(Error::VertexOutOfRange(i.max(j), m));
        }
        Ok(match &self.matrix {
            Some(mat) => mat[i * m + j] as u32,
            None => self.distance_uncached(i, j),
        })
    }

    pub fn crossover_at(&self, i: usize) -> Result<Crossover> {
        self.crossovers
            .get(i)
            .copied()
            .ok_or(Error::VertexOutOfRange(i, self.crossovers.len()))
    }

    pub fn perm_at(&self, i: usize) -> Result<&Permutation> {
        self.perms.get(i).ok_or(Error::VertexOutOfRange(i, self.perms.len()))
    }

    /// Index decomposition for S*_n: (permutation index, bit).
    pub fn star_at(&self, i: usize) -> Result<(usize, u8)> {
        let half = self.perms.len();
        if self.kind != SpaceKind::SymmetricGroupStar || i >= 2 * half {
            return Err(Error::VertexOutOfRange(i, 2 * half));
        }
        Ok((i % half, (i / half) as u8))
    }
}

/// A real function on a space, certified at construction to obey
/// |f(x) - f(y)| <= constant * d(x, y): over every pair when the space has
/// at most 10^4 points, otherwise over 10^6 seeded random pairs.
#[derive(Clone, Debug)]
pub struct LipschitzFunction {
    values: Vec<f64>,
    constant: f64,
}

impl LipschitzFunction {
    pub fn certified(space: &Space, values: Vec<f64>, constant: f64, seed: u64) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch(values.len(), space.len()));
        }
        if !constant.is_finite() || constant <= 0.0 {
            return Err(Error::Unsupported(format!("bad Lipschitz constant {constant}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Unsupported("function values must be finite".into()));
        }
        let check = |i: usize, j: usize| -> Result<()> {
            let d = space.distance(i, j)?;
            let diff = (values[i] - values[j]).abs();
            if diff > constant * d as f64 + 1e-12 {
                return Err(Error::NotLipschitz { i, j, diff, dist: d, constant });
            }
            Ok(())
        };
        let m = space.len();
        if m <= CERT_EXHAUSTIVE_CAP {
            for i in 0..m {
                for j in i + 1..m {
                    check(i, j)?;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..CERT_SAMPLES {
                let i = rng.random_range(0..m);
                let j = rng.random_range(0..m);
                if i != j {
                    check(i, j)?;
                }
            }
        }
        Ok(LipschitzFunction { values, constant })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn mean(&self) -> f64 {
        <f64 as Weight>::sum(self.values.iter().collect::<Vec<_>>().into_iter())
            / self.values.len() as f64
    }
}

/// Infimal convolution of anchor values with the metric:
/// f(x) = min_j (values[j] + d(x, anchor_j)). Always 1-Lipschitz; the
/// certificate is still run.
pub fn sample_lipschitz(
    space: &Space,
    anchors: &[usize],
    anchor_values: &[f64],
    seed: u64,
) -> Result<LipschitzFunction> {
    if anchors.is_empty() || anchors.len() != anchor_values.len() {
        return Err(Error::DimensionMismatch(anchors.len(), anchor_values.len()));
    }
    for &a in anchors {
        if a >= space.len() {
            return Err(Error::VertexOutOfRange(a, space.len()));
        }
    }
    if anchor_values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Unsupported("anchor values must be finite".into()));
    }
    let mut values = vec![0.0f64; space.len()];
    for (x, slot) in values.iter_mut().enumerate() {
        let mut best = f64::INFINITY;
        for (&a, &v) in anchors.iter().zip(anchor_values) {
            best = best.min(v + space.distance(x, a)? as f64);
        }
        *slot = best;
    }
    LipschitzFunction::certified(space, values, 1.0, seed)
}

/// Seeded draw of a 1-Lipschitz function: 1..=4 random anchors with values
/// uniform in [0, diameter].
pub fn random_lipschitz(space: &Space, seed: u64) -> Result<LipschitzFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(1..=4usize);
    let anchors: Vec<usize> = (0..k).map(|_| rng.random_range(0..space.len())).collect();
    let values: Vec<f64> = (0..k)
        .map(|_| rng.random::<f64>() * space.diameter_bound())
        .collect();
    sample_lipschitz(space, &anchors, &values, seed ^ 0x9e37_79b9_7f4a_7c15)
}

#[derive(Clone, Copy, Debug)]
pub struct LaplaceRow {
    pub lambda: f64,
    pub log_lhs: f64,
    pub log_rhs: f64,
    /// log_lhs - log_rhs; nonpositive when the estimate holds.
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct LaplaceReport {
    pub variance_constant: f64,
    pub mean: f64,
    pub rows: Vec<LaplaceRow>,
    pub max_margin: f64,
    pub violations: usize,
}

/// Check E exp(lambda f) <= exp(lambda E f + lambda^2 V / 2) for each
/// lambda, in log space. Requires a 1-Lipschitz certified function.
pub fn check_laplace(space: &Space, f: &LipschitzFunction, lambdas: &[f64]) -> Result<LaplaceReport> {
    require_unit_lipschitz(space, f)?;
    let v = space.variance_constant();
    let mean = f.mean();
    let mut rows = Vec::with_capacity(lambdas.len());
    let mut max_margin = f64::NEG_INFINITY;
    let mut violations = 0;
    for &lambda in lambdas {
        if !lambda.is_finite() {
            return Err(Error::Unsupported(format!("bad lambda {lambda}")));
        }
        let log_lhs = log_mean_exp(f.values(), lambda);
        let log_rhs = lambda * mean + lambda * lambda * v / 2.0;
        let margin = log_lhs - log_rhs;
        if margin > 1e-12 {
            violations += 1;
        }
        max_margin = max_margin.max(margin);
        rows.push(LaplaceRow { lambda, log_lhs, log_rhs, margin });
    }
    Ok(LaplaceReport { variance_constant: v, mean, rows, max_margin, violations })
}

// ln( (1/M) sum exp(lambda f_i) ), stabilized.
fn log_mean_exp(values: &[f64], lambda: f64) -> f64 {
    let m = values.len() as f64;
    let top = values
        .iter()
        .map(|&x| lambda * x)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = values.iter().map(|&x| (lambda * x - top).exp()).sum();
    top + sum.ln() - m.ln()
}

fn require_unit_lipschitz(space: &Space, f: &LipschitzFunction) -> Result<()> {
    if f.values().len() != space.len() {
        return Err(Error::DimensionMismatch(f.values().len(), space.len()));
    }
    if f.constant() > 1.0 + 1e-12 {
        return Err(Error::Unsupported(format!(
            "estimate needs a 1-Lipschitz function, constant is {}",
            f.constant()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub struct TailRow {
    pub t: f64,
    pub tail: f64,
    pub bound: f64,
    /// bound - tail; nonnegative when the estimate holds.
    pub slack: f64,
}

#[derive(Clone, Debug)]
pub struct TailReport {
    pub variance_constant: f64,
    pub mean: f64,
    pub rows: Vec<TailRow>,
    pub violations: usize,
}

/// Check P(f >= E f + t) <= exp(-t^2 / (2V)) for each t > 0.
pub fn check_tail(space: &Space, f: &LipschitzFunction, ts: &[f64]) -> Result<TailReport> {
    require_unit_lipschitz(space, f)?;
    let v = space.variance_constant();
    let mean = f.mean();
    let m = space.len() as f64;
    let mut rows = Vec::with_capacity(ts.len());
    let mut violations = 0;
    for &t in ts {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::Unsupported(format!("tail level must be positive, got {t}")));
        }
        let count = f.values().iter().filter(|&&x| x >= mean + t).count();
        let tail = count as f64 / m;
        let bound = (-t * t / (2.0 * v)).exp();
        let slack = bound - tail;
        if slack < -1e-12 {
            violations += 1;
        }
        rows.push(TailRow { t, tail, bound, slack });
    }
    Ok(TailReport { variance_constant: v, mean, rows, violations })
}

/// Image of the canonical half set {1, ..., n/2} under sigma; even n.
pub fn project_even(sigma: &Permutation) -> Result<Crossover> {
    let n = sigma.n();
    if n % 2 != 0 {
        return Err(Error::Unsupported(format!("even projection needs even n, got {n}")));
    }
    let mask = sigma.apply_to_mask((1u32 << (n / 2)) - 1);
    Crossover::new(n, mask)
}

/// Image of (sigma, bit) for odd n: bit 0 maps the floor(n/2) prefix, bit 1
/// the ceil(n/2) prefix.
pub fn project_star(sigma: &Permutation, bit: u8) -> Result<Crossover> {
    let n = sigma.n();
    if n % 2 != 1 {
        return Err(Error::Unsupported(format!("star projection needs odd n, got {n}")));
    }
    if bit > 1 {
        return Err(Error::Unsupported(format!("star bit must be 0 or 1, got {bit}")));
    }
    let half = n / 2 + bit as usize;
    let mask = sigma.apply_to_mask((1u32 << half) - 1);
    Crossover::new(n, mask)
}

#[derive(Clone, Debug)]
pub struct QuotientReport {
    pub n: usize,
    pub star: bool,
    pub family_size: u64,
    pub source_size: u64,
    pub fiber_size: u64,
    pub uniform_fibers: bool,
    pub covers_family: bool,
    pub lipschitz_ok: bool,
    /// max over pairs of d(image) - d(source); <= 0 when the projection
    /// contracts distances.
    pub worst_excess: i64,
}

/// Exhaustively audit the quotient projection onto C_n: fiber sizes
/// ((n/2)!^2 for even n through S_n, floor(n/2)! ceil(n/2)! for odd n
/// through S*_n), coverage, and 1-Lipschitz contraction.
pub fn quotient_check(n: usize) -> Result<QuotientReport> {
    if n < 1 || n > MAX_SN {
        return Err(Error::DimensionOutOfRange(n, MAX_SN));
    }
    let star = n % 2 == 1;
    let perms = enumerate_sn(n)?;
    let points: Vec<(usize, u8)> = if star {
        (0..perms.len())
            .map(|p| (p, 0u8))
            .chain((0..perms.len()).map(|p| (p, 1u8)))
            .collect()
    } else {
        (0..perms.len()).map(|p| (p, 0u8)).collect()
    };
    let images: Vec<Crossover> = points
        .iter()
        .map(|&(p, b)| {
            if star {
                project_star(&perms[p], b)
            } else {
                project_even(&perms[p])
            }
        })
        .collect::<Result<_>>()?;

    let mut fibers: BTreeMap<Crossover, u64> = BTreeMap::new();
    for &c in &images {
        *fibers.entry(c).or_insert(0) += 1;
    }
    let family = enumerate_crossovers(n)?;
    let covers_family = family.iter().all(|c| fibers.contains_key(c))
        && fibers.len() == family.len();
    let sizes: Vec<u64> = fibers.values().copied().collect();
    let fiber_size = sizes[0];
    let uniform_fibers = sizes.iter().all(|&s| s == fiber_size);

    let mut worst_excess = i64::MIN;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (pi, bi) = points[i];
            let (pj, bj) = points[j];
            let ds = perm_distance(&perms[pi], &perms[pj])? as i64
                + (bi.abs_diff(bj)) as i64;
            let di = crossover_distance(images[i], images[j])? as i64;
            worst_excess = worst_excess.max(di - ds);
        }
    }
    Ok(QuotientReport {
        n,
        star,
        family_size: crossover_count(n)?,
        source_size: points.len() as u64,
        fiber_size,
        uniform_fibers,
        covers_family,
        lipschitz_ok: worst_excess <= 0,
        worst_excess,
    })
}

#[derive(Clone, Debug)]
pub struct Cor4Report {
    pub n: usize,
    pub card_a: u64,
    pub card_family: u64,
    pub separation: u32,
    pub bound: f64,
    pub holds: bool,
    pub separator_lipschitz: bool,
    pub separator_mean_zero: bool,
    pub separator_cap_ok: bool,
}

/// Isoperimetric bound on C_n: #A <= #C_n exp(-k^2 / 8n) with
/// k = d(A, A-bar), A-bar the complement image of A. Also audits the
/// separating function (d(., A) - d(., A-bar)) / 2: 1-Lipschitz, integer
/// mean exactly zero by the complement symmetry, and at most -k/2 on A.
pub fn corollary4_check(n: usize, a: &[Crossover]) -> Result<Cor4Report> {
    if n < 1 || n > MAX_CN {
        return Err(Error::DimensionOutOfRange(n, MAX_CN));
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut set: Vec<Crossover> = a.to_vec();
    for c in &set {
        if c.arity() != n {
            return Err(Error::ArityMismatch(c.arity(), n));
        }
    }
    set.sort();
    set.dedup();
    let bar: Vec<Crossover> = set.iter().map(|c| c.complement()).collect();
    let family = enumerate_crossovers(n)?;

    let dist_to = |c: Crossover, s: &[Crossover]| -> u32 {
        s.iter()
            .map(|&x| (c.picks() ^ x.picks()).count_ones())
            .min()
            .unwrap()
    };
    let separation = set
        .iter()
        .flat_map(|&x| bar.iter().map(move |&y| (x.picks() ^ y.picks()).count_ones()))
        .min()
        .unwrap();

    // Separator audit in integer arithmetic: values are half-integers, so
    // the mean-zero identity is exact.
    let mut twice_values: Vec<i64> = Vec::with_capacity(family.len());
    for &c in &family {
        twice_values.push(dist_to(c, &set) as i64 - dist_to(c, &bar) as i64);
    }
    let separator_mean_zero = twice_values.iter().sum::<i64>() == 0;
    let mut separator_lipschitz = true;
    for (i, &fi) in twice_values.iter().enumerate() {
        for (j, &fj) in twice_values.iter().enumerate().skip(i + 1) {
            let d = (family[i].picks() ^ family[j].picks()).count_ones() as i64;
            if (fi - fj).abs() > 2 * d {
                separator_lipschitz = false;
            }
        }
    }
    let k = separation as i64;
    let separator_cap_ok = set.iter().all(|&c| {
        let idx = family.iter().position(|&x| x == c).unwrap();
        twice_values[idx] <= -k
    });

    let card_family = crossover_count(n)?;
    let bound = card_family as f64 * (-(separation as f64).powi(2) / (8.0 * n as f64)).exp();
    let holds = set.len() as f64 <= bound * (1.0 + 1e-12) + 1e-9;
    Ok(Cor4Report {
        n,
        card_a: set.len() as u64,
        card_family,
        separation,
        bound,
        holds,
        separator_lipschitz,
        separator_mean_zero,
        separator_cap_ok,
    })
}

#[derive(Clone, Debug)]
pub struct W1hReport {
    pub n: usize,
    pub w1: f64,
    pub relative_entropy: f64,
    /// 2n H - W1^2; nonnegative when the transport estimate holds.
    pub margin: f64,
    pub holds: bool,
}

/// Transport-entropy estimate on C_n: W1(xi, uniform)^2 <= 2n H(xi | uniform).
pub fn w1h_check<W: Weight>(n: usize, xi: &DiscreteMeasure<Crossover, W>) -> Result<W1hReport> {
    let uniform = uniform_crossovers::<W>(n)?;
    for c in xi.support() {
        if c.arity() != n {
            return Err(Error::ArityMismatch(c.arity(), n));
        }
    }
    let h = xi.relative_entropy(&uniform);
    let r = w1(xi, &uniform, |a, b| {
        crossover_distance(*a, *b).expect("same arity") as f64
    })?;
    let w = r.value.to_f64();
    let margin = 2.0 * n as f64 * h - w * w;
    Ok(W1hReport { n, w1: w, relative_entropy: h, margin, holds: margin >= -1e-9 })
}

#[derive(Clone, Debug)]
pub struct Cor5Report {
    pub n: usize,
    pub entropy: f64,
    pub w1_to_complement: f64,
    pub bound: f64,
    /// bound - entropy; nonnegative when the estimate holds.
    pub margin: f64,
    pub holds: bool,
    /// W1(xi, xi-bar) <= 2 W1(xi, uniform): complement symmetry through the
    /// uniform measure.
    pub symmetry_ok: bool,
}

/// Entropy bound on C_n: S(xi) <= ln #C_n - W1(xi, xi-bar)^2 / 8n.
pub fn corollary5_check<W: Weight>(
    n: usize,
    xi: &DiscreteMeasure<Crossover, W>,
) -> Result<Cor5Report> {
    for c in xi.support() {
        if c.arity() != n {
            return Err(Error::ArityMismatch(c.arity(), n));
        }
    }
    let metric = |a: &Crossover, b: &Crossover| {
        crossover_distance(*a, *b).expect("same arity") as f64
    };
    let bar = xi.pushforward(|c| c.complement());
    let w1c = w1(xi, &bar, metric)?.value.to_f64();
    let s = xi.shannon_entropy();
    let bound = (crossover_count(n)? as f64).ln() - w1c * w1c / (8.0 * n as f64);
    let margin = bound - s;
    let uniform = uniform_crossovers::<W>(n)?;
    let w1u = w1(xi, &uniform, metric)?.value.to_f64();
    Ok(Cor5Report {
        n,
        entropy: s,
        w1_to_complement: w1c,
        bound,
        margin,
        holds: margin >= -1e-9,
        symmetry_ok: w1c <= 2.0 * w1u + 1e-9,
    })
}

pub fn uniform_crossovers<W: Weight>(n: usize) -> Result<DiscreteMeasure<Crossover, W>> {
    DiscreteMeasure::uniform_on(enumerate_crossovers(n)?)
}

/// Flat-Dirichlet random measure on all of C_n: masses proportional to
/// independent Exp(1) draws snapped to the 2^-24 dyadic grid, so rational
/// mode stays exact with small common denominators.
pub fn random_crossover_measure<W: Weight>(
    n: usize,
    seed: u64,
) -> Result<DiscreteMeasure<Crossover, W>> {
    let family = enumerate_crossovers(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut atoms = Vec::with_capacity(family.len());
    for c in family {
        let u: f64 = rng.random::<f64>();
        let e = -(1.0 - u).ln();
        atoms.push((c, crate::weight::quantized_weight::<W>(e)));
    }
    DiscreteMeasure::from_weights(atoms)
}
