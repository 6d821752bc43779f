use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::crossover::{decode, Crossover, MidpointPair};
use crate::error::{Error, Result};
use crate::hypercube::Vertex;
use crate::measure::DiscreteMeasure;
use crate::weight::{Weight, MASS_SCALE};

/// Base tolerance for marginal reproduction in floating mode. Couplings
/// whose masses live on the transport grid get additional slack from
/// [`validate_coupling`]: half a grid step of rounding per atom plus the
/// repaired drift, at worst half a step per support atom.
pub const COUPLING_TOLERANCE: f64 = 1e-10;

const COST_DENOM: i128 = 1_000_000_000;

/// A nonnegative mass assignment on pairs. The marginal contract is checked
/// by [`validate_coupling`], not at construction.
#[derive(Clone, Debug)]
pub struct Coupling<X: Ord + Clone, Y: Ord + Clone, W: Weight> {
    atoms: BTreeMap<(X, Y), W>,
}

impl<X: Ord + Clone, Y: Ord + Clone, W: Weight> Coupling<X, Y, W> {
    pub fn from_weights<I: IntoIterator<Item = ((X, Y), W)>>(weighted: I) -> Result<Self> {
        let mut atoms: BTreeMap<(X, Y), W> = BTreeMap::new();
        for (k, w) in weighted {
            if !w.valid_mass() {
                return Err(Error::InvalidMeasure(format!("coupling weight {w}")));
            }
            if w.is_zero() {
                continue;
            }
            *atoms.entry(k).or_insert_with(W::zero) += w;
        }
        Ok(Coupling { atoms })
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&(X, Y), &W)> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total(&self) -> W {
        W::sum(self.atoms.values())
    }

    pub fn first_marginal(&self) -> DiscreteMeasure<X, W> {
        let mut sums: BTreeMap<X, W> = BTreeMap::new();
        for ((x, _), w) in &self.atoms {
            *sums.entry(x.clone()).or_insert_with(W::zero) += w.clone();
        }
        DiscreteMeasure::from_normalized(sums)
    }

    pub fn second_marginal(&self) -> DiscreteMeasure<Y, W> {
        let mut sums: BTreeMap<Y, W> = BTreeMap::new();
        for ((_, y), w) in &self.atoms {
            *sums.entry(y.clone()).or_insert_with(W::zero) += w.clone();
        }
        DiscreteMeasure::from_normalized(sums)
    }

    /// Transport cost sum(mass * metric) as f64; rejects negative or
    /// non-finite metric values on the support.
    pub fn cost(&self, metric: impl Fn(&X, &Y) -> f64) -> Result<f64> {
        let terms: Result<Vec<f64>> = self
            .atoms
            .iter()
            .map(|((x, y), w)| {
                let c = metric(x, y);
                if !c.is_finite() || c < 0.0 {
                    return Err(Error::BadMetric { value: c });
                }
                Ok(w.to_f64() * c)
            })
            .collect();
        Ok(<f64 as Weight>::sum(terms?.iter()))
    }

    /// Exact transport cost for an integer-valued metric.
    pub fn cost_int(&self, metric: impl Fn(&X, &Y) -> Result<u32>) -> Result<W> {
        let mut acc = W::zero();
        for ((x, y), w) in &self.atoms {
            acc += w.clone() * W::from_int(metric(x, y)? as i64);
        }
        Ok(acc)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ValidationReport {
    pub ok: bool,
    pub worst_first_deviation: f64,
    pub worst_second_deviation: f64,
}

/// Check that a coupling reproduces the two prescribed marginals: exactly in
/// rational mode, up to mass-grid resolution in floating mode. The report
/// carries the worst deviation per side.
pub fn validate_coupling<X: Ord + Clone, Y: Ord + Clone, W: Weight>(
    xi: &Coupling<X, Y, W>,
    mu: &DiscreteMeasure<X, W>,
    nu: &DiscreteMeasure<Y, W>,
) -> ValidationReport {
    fn side<P: Ord + Clone, W: Weight>(
        got: &DiscreteMeasure<P, W>,
        want: &DiscreteMeasure<P, W>,
    ) -> (bool, f64) {
        let keys: std::collections::BTreeSet<&P> =
            got.support().chain(want.support()).collect();
        let mut ok = true;
        let mut worst = 0.0f64;
        for k in keys {
            let g = got.mass_of(k);
            let w = want.mass_of(k);
            if W::EXACT {
                ok &= g == w;
            }
            let dev = (g.to_f64() - w.to_f64()).abs();
            worst = worst.max(dev);
        }
        if !W::EXACT {
            // A floating coupling carries grid-quantized masses, so each
            // marginal atom may be off by half a step of rounding plus its
            // share of the repaired drift, bounded by half a step per atom.
            let grid = (0.5 * (want.len() as f64 + 1.0)) / MASS_SCALE as f64;
            ok = worst <= COUPLING_TOLERANCE.max(grid);
        }
        (ok, worst)
    }
    let (ok1, d1) = side(&xi.first_marginal(), mu);
    let (ok2, d2) = side(&xi.second_marginal(), nu);
    ValidationReport { ok: ok1 && ok2, worst_first_deviation: d1, worst_second_deviation: d2 }
}

/// Push a crossover coupling through the codec at a fixed image pair. Both
/// components decode with their own crossover, so a coupling of (E, E-bar)
/// becomes a coupling of the two endpoint laws, and the crossover metric
/// makes the map an isometry: cost is preserved arc by arc.
pub fn coupling_transfer<W: Weight>(
    xi: &Coupling<Crossover, Crossover, W>,
    pair: &MidpointPair,
) -> Result<Coupling<Vertex, Vertex, W>> {
    let mut atoms = Vec::with_capacity(xi.len());
    for ((c1, c2), w) in xi.atoms() {
        let a = decode(*c1, pair)?;
        let b = decode(*c2, pair)?;
        atoms.push(((a, b), w.clone()));
    }
    Coupling::from_weights(atoms)
}

/// Optimal transport output: the value, an optimal coupling, and integer
/// Kantorovich potentials (f on the first support, g on the second) with
/// f(x) - g(y) <= d(x, y) everywhere and equality on coupling arcs.
///
/// In floating mode the triple solves the instance with masses quantized to
/// denominator 10^9; `quantization_bound` bounds the distance to the
/// unquantized value, and `duality_gap` is the certificate defect against
/// the coupling's own marginals.
#[derive(Clone, Debug)]
pub struct TransportResult<P: Ord + Clone, W: Weight> {
    pub value: W,
    pub coupling: Coupling<P, P, W>,
    pub source_potential: BTreeMap<P, W>,
    pub sink_potential: BTreeMap<P, W>,
    pub dual_feasible: bool,
    pub duality_gap: f64,
    pub quantization_bound: f64,
}

impl<P: Ord + Clone, W: Weight> TransportResult<P, W> {
    pub fn potential_of(&self, p: &P) -> Option<&W> {
        self.source_potential.get(p)
    }
}

struct Solved {
    flow: Vec<i128>, // ns * nt, row major
    potential: Vec<i128>,
    total_cost: i128,
}

// Successive shortest paths with Johnson potentials on the complete
// bipartite transportation graph. Every node stays reachable from the
// active sources (forward arcs exist from any source to every sink, and a
// drained source has outgoing flow, hence an incoming residual arc), so the
// full Dijkstra pass keeps reduced costs nonnegative on all arcs and the
// final potentials are globally dual feasible.
fn solve_transportation(supply: &[i128], demand: &[i128], cost: &[i128]) -> Solved {
    let ns = supply.len();
    let nt = demand.len();
    let nodes = ns + nt;
    let mut flow = vec![0i128; ns * nt];
    let mut pi = vec![0i128; nodes];
    let mut supply_left = supply.to_vec();
    let mut demand_left = demand.to_vec();
    let mut remaining: i128 = supply.iter().sum();

    let mut dist = vec![i128::MAX; nodes];
    let mut parent = vec![usize::MAX; nodes];
    let mut settled = vec![false; nodes];

    while remaining > 0 {
        dist.fill(i128::MAX);
        parent.fill(usize::MAX);
        settled.fill(false);
        let mut heap: BinaryHeap<Reverse<(i128, usize)>> = BinaryHeap::new();
        for i in 0..ns {
            if supply_left[i] > 0 {
                dist[i] = 0;
                heap.push(Reverse((0, i)));
            }
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if settled[v] {
                continue;
            }
            settled[v] = true;
            if v < ns {
                for j in 0..nt {
                    let t = ns + j;
                    if settled[t] {
                        continue;
                    }
                    let red = cost[v * nt + j] + pi[v] - pi[t];
                    let nd = d + red;
                    if nd < dist[t] {
                        dist[t] = nd;
                        parent[t] = v;
                        heap.push(Reverse((nd, t)));
                    }
                }
            } else {
                let j = v - ns;
                for i in 0..ns {
                    if settled[i] || flow[i * nt + j] == 0 {
                        continue;
                    }
                    let red = -cost[i * nt + j] + pi[v] - pi[i];
                    let nd = d + red;
                    if nd < dist[i] {
                        dist[i] = nd;
                        parent[i] = v;
                        heap.push(Reverse((nd, i)));
                    }
                }
            }
        }
        for v in 0..nodes {
            if dist[v] < i128::MAX {
                pi[v] += dist[v];
            }
        }
        let target = (0..nt)
            .filter(|&j| demand_left[j] > 0)
            .min_by_key(|&j| dist[ns + j])
            .expect("active sink exists while mass remains");
        // Bottleneck along the parent chain.
        let mut delta = demand_left[target];
        let mut v = ns + target;
        loop {
            let p = parent[v];
            if v >= ns {
                if p == usize::MAX {
                    unreachable!("sink without parent");
                }
            } else {
                delta = delta.min(flow[v * nt + (p - ns)]);
            }
            if p < ns && parent[p] == usize::MAX {
                delta = delta.min(supply_left[p]);
                break;
            }
            v = p;
        }
        // Apply.
        let mut v = ns + target;
        loop {
            let p = parent[v];
            if v >= ns {
                flow[p * nt + (v - ns)] += delta;
            } else {
                flow[v * nt + (p - ns)] -= delta;
            }
            if p < ns && parent[p] == usize::MAX {
                supply_left[p] -= delta;
                break;
            }
            v = p;
        }
        demand_left[target] -= delta;
        remaining -= delta;
    }

    let total_cost = flow
        .iter()
        .zip(cost)
        .map(|(&f, &c)| f.checked_mul(c).expect("cost product fits i128"))
        .fold(0i128, |a, x| a.checked_add(x).expect("cost sum fits i128"));
    Solved { flow, potential: pi, total_cost }
}

/// Exact 1-Wasserstein distance between two finitely supported measures on
/// a common space, by min-cost flow over the support pair graph.
///
/// The metric must be finite and nonnegative on support pairs. Rational mode
/// additionally requires it to be integer-valued (all metrics in this crate
/// are); floating mode scales non-integer metrics by 10^9.
pub fn w1<P: Ord + Clone, W: Weight>(
    mu: &DiscreteMeasure<P, W>,
    nu: &DiscreteMeasure<P, W>,
    metric: impl Fn(&P, &P) -> f64,
) -> Result<TransportResult<P, W>> {
    if mu.is_empty() || nu.is_empty() {
        return Err(Error::EmptySet);
    }
    let src: Vec<(&P, &W)> = mu.atoms().collect();
    let snk: Vec<(&P, &W)> = nu.atoms().collect();
    let ns = src.len();
    let nt = snk.len();

    let mut raw_cost = vec![0.0f64; ns * nt];
    let mut integral = true;
    let mut max_cost = 0.0f64;
    for (i, (x, _)) in src.iter().enumerate() {
        for (j, (y, _)) in snk.iter().enumerate() {
            let c = metric(x, y);
            if !c.is_finite() || c < 0.0 {
                return Err(Error::BadMetric { value: c });
            }
            integral &= (c - c.round()).abs() <= 1e-9;
            max_cost = max_cost.max(c);
            raw_cost[i * nt + j] = c;
        }
    }
    if W::EXACT && !integral {
        let bad = raw_cost
            .iter()
            .copied()
            .find(|c| (c - c.round()).abs() > 1e-9)
            .unwrap();
        return Err(Error::NonIntegerMetric(bad));
    }
    let cost_den: i128 = if integral { 1 } else { COST_DENOM };
    let cost: Vec<i128> = raw_cost
        .iter()
        .map(|&c| (c * cost_den as f64).round() as i128)
        .collect();

    let mu_masses: Vec<W> = src.iter().map(|(_, w)| (*w).clone()).collect();
    let nu_masses: Vec<W> = snk.iter().map(|(_, w)| (*w).clone()).collect();
    let (supply, demand, scale) = W::to_common_units(&mu_masses, &nu_masses)?;

    let quantization_bound = if W::EXACT {
        0.0
    } else {
        let drift = |masses: &[W], units: &[i128]| -> f64 {
            masses
                .iter()
                .zip(units)
                .map(|(m, &u)| (m.to_f64() - u as f64 / scale as f64).abs())
                .sum::<f64>()
        };
        let tv_term = 0.5 * (drift(&mu_masses, &supply) + drift(&nu_masses, &demand)) * max_cost;
        let cost_term = if integral { 0.0 } else { 0.5 / COST_DENOM as f64 };
        tv_term + cost_term
    };

    let solved = solve_transportation(&supply, &demand, &cost);
    let value = W::from_units(
        solved.total_cost,
        scale.checked_mul(cost_den).ok_or(Error::ScaleOverflow)?,
    );

    let mut atoms = Vec::new();
    for i in 0..ns {
        for j in 0..nt {
            let f = solved.flow[i * nt + j];
            if f > 0 {
                atoms.push(((src[i].0.clone(), snk[j].0.clone()), W::from_units(f, scale)));
            }
        }
    }
    let coupling = Coupling::from_weights(atoms)?;

    let mut dual_feasible = true;
    for i in 0..ns {
        for j in 0..nt {
            if cost[i * nt + j] + solved.potential[i] - solved.potential[ns + j] < 0 {
                dual_feasible = false;
            }
        }
    }
    let source_potential: BTreeMap<P, W> = src
        .iter()
        .enumerate()
        .map(|(i, (p, _))| ((*p).clone(), W::from_units(-solved.potential[i], cost_den)))
        .collect();
    let sink_potential: BTreeMap<P, W> = snk
        .iter()
        .enumerate()
        .map(|(j, (p, _))| ((*p).clone(), W::from_units(-solved.potential[ns + j], cost_den)))
        .collect();

    // Certificate defect against the coupling's own marginals; zero up to
    // f64 evaluation by complementary slackness.
    let row = coupling.first_marginal();
    let col = coupling.second_marginal();
    let lhs: f64 = row
        .atoms()
        .map(|(p, w)| source_potential[p].to_f64() * w.to_f64())
        .sum::<f64>()
        - col
            .atoms()
            .map(|(p, w)| sink_potential[p].to_f64() * w.to_f64())
            .sum::<f64>();
    let duality_gap = (lhs - value.to_f64()).abs();

    Ok(TransportResult {
        value,
        coupling,
        source_potential,
        sink_potential,
        dual_feasible,
        duality_gap,
        quantization_bound,
    })
}
