use std::collections::BTreeMap;

use crate::crossover::{encode, midpoint_count, midpoints, Crossover, MidpointPair};
use crate::error::{Error, Result};
use crate::hypercube::Vertex;
use crate::weight::Weight;

/// Caps the atom count of a joint law; crossover families grow as binomials
/// and a runaway request should fail fast instead of thrashing.
pub const JOINT_ATOM_CAP: u64 = 10_000_000;

/// A probability measure with finite support. Atoms carry strictly positive
/// mass and the total is one: exactly in rational mode, within 1e-12 in
/// floating mode, where construction prunes atoms below 1e-15 and
/// renormalizes.
#[derive(Clone, PartialEq, Debug)]
pub struct DiscreteMeasure<P: Ord + Clone, W: Weight> {
    atoms: BTreeMap<P, W>,
}

impl<P: Ord + Clone, W: Weight> DiscreteMeasure<P, W> {
    pub fn dirac(p: P) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(p, W::one());
        DiscreteMeasure { atoms }
    }

    pub fn uniform_on<I: IntoIterator<Item = P>>(points: I) -> Result<Self> {
        let dedup: std::collections::BTreeSet<P> = points.into_iter().collect();
        let k = dedup.len();
        if k == 0 {
            return Err(Error::EmptySet);
        }
        let w = W::from_ratio(1, k as i64);
        Ok(DiscreteMeasure { atoms: dedup.into_iter().map(|p| (p, w.clone())).collect() })
    }

    /// Aggregates duplicate points, rejects negative or non-finite weights,
    /// normalizes to total mass one, prunes dust, renormalizes.
    pub fn from_weights<I: IntoIterator<Item = (P, W)>>(weighted: I) -> Result<Self> {
        let mut atoms: BTreeMap<P, W> = BTreeMap::new();
        for (p, w) in weighted {
            if !w.valid_mass() {
                return Err(Error::InvalidMeasure(format!("bad weight {w}")));
            }
            *atoms.entry(p).or_insert_with(W::zero) += w;
        }
        let mut m = DiscreteMeasure { atoms };
        m.normalize()?;
        let cut = W::prune_threshold();
        let before = m.atoms.len();
        m.atoms.retain(|_, w| !(w.is_zero() || *w < cut));
        if m.atoms.len() != before {
            m.normalize()?;
        }
        Ok(m)
    }

    fn normalize(&mut self) -> Result<()> {
        let total = self.total();
        if total.is_zero() || !total.valid_mass() {
            return Err(Error::InvalidMeasure(format!("total mass {total}")));
        }
        for w in self.atoms.values_mut() {
            *w = w.clone() / total.clone();
        }
        Ok(())
    }

    // Internal: masses already sum to one by construction.
    pub(crate) fn from_normalized(atoms: BTreeMap<P, W>) -> Self {
        DiscreteMeasure { atoms }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&P, &W)> {
        self.atoms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.atoms.keys()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mass_of(&self, p: &P) -> W {
        self.atoms.get(p).cloned().unwrap_or_else(W::zero)
    }

    pub fn total(&self) -> W {
        W::sum(self.atoms.values())
    }

    /// S = -sum p ln p, in nats. The convention 0 ln 0 = 0 is moot here:
    /// stored atoms are strictly positive.
    pub fn shannon_entropy(&self) -> f64 {
        let mut s = 0.0;
        for w in self.atoms.values() {
            let p = w.to_f64();
            s -= p * p.ln();
        }
        s
    }

    /// H(self | other) = sum p ln(p/q); +infinity when self is not
    /// absolutely continuous with respect to other. Ratios are formed in the
    /// weight type before taking logs, so equal measures give exactly zero.
    pub fn relative_entropy(&self, other: &Self) -> f64 {
        let mut h = 0.0;
        for (p, w) in &self.atoms {
            let q = other.mass_of(p);
            if q.is_zero() {
                return f64::INFINITY;
            }
            let ratio = (w.clone() / q).to_f64();
            h += w.to_f64() * ratio.ln();
        }
        h
    }

    pub fn expectation(&self, f: impl Fn(&P) -> f64) -> f64 {
        self.atoms.iter().map(|(p, w)| w.to_f64() * f(p)).sum()
    }

    /// Image measure under a point map; masses of merged points add.
    pub fn pushforward<Q: Ord + Clone>(&self, f: impl Fn(&P) -> Q) -> DiscreteMeasure<Q, W> {
        let mut atoms: BTreeMap<Q, W> = BTreeMap::new();
        for (p, w) in &self.atoms {
            *atoms.entry(f(p)).or_insert_with(W::zero) += w.clone();
        }
        DiscreteMeasure { atoms }
    }

    pub fn validate(&self) -> Result<()> {
        if self.atoms.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        for w in self.atoms.values() {
            if !w.valid_mass() || w.is_zero() {
                return Err(Error::InvalidMeasure(format!("atom mass {w}")));
            }
        }
        let dev = (self.total().to_f64() - 1.0).abs();
        if dev > W::mass_tolerance() {
            return Err(Error::InvalidMeasure(format!("total deviates by {dev:e}")));
        }
        Ok(())
    }
}

fn common_dim<W: Weight>(measures: &[&DiscreteMeasure<Vertex, W>]) -> Result<usize> {
    let mut dim = None;
    for m in measures {
        for v in m.support() {
            match dim {
                None => dim = Some(v.dim()),
                Some(d) if d != v.dim() => {
                    return Err(Error::DimensionMismatch(d, v.dim()));
                }
                _ => {}
            }
        }
    }
    dim.ok_or(Error::EmptySet)
}

/// Uniform measure on the midpoint set of a single pair.
pub fn mid_measure<W: Weight>(a: Vertex, b: Vertex) -> Result<DiscreteMeasure<Vertex, W>> {
    DiscreteMeasure::uniform_on(midpoints(a, b)?.iter())
}

/// The midpoint mixture of two measures: draw (a, b) independently, then a
/// uniform midpoint of the pair.
pub fn mid_of_measures<W: Weight>(
    mu0: &DiscreteMeasure<Vertex, W>,
    mu1: &DiscreteMeasure<Vertex, W>,
) -> Result<DiscreteMeasure<Vertex, W>> {
    common_dim(&[mu0, mu1])?;
    let mut acc: BTreeMap<Vertex, W> = BTreeMap::new();
    for (a, wa) in mu0.atoms() {
        for (b, wb) in mu1.atoms() {
            let pair_w = wa.clone() * wb.clone();
            let count = W::from_int(midpoint_count(*a, *b)? as i64);
            let each = pair_w / count;
            for m in midpoints(*a, *b)?.iter() {
                *acc.entry(m).or_insert_with(W::zero) += each.clone();
            }
        }
    }
    DiscreteMeasure::from_weights(acc)
}

/// Law of (a, b, c): endpoints independent, crossover uniform on C_{d(a,b)}
/// given the endpoints.
#[derive(Clone, Debug)]
pub struct JointLaw<W: Weight> {
    measure: DiscreteMeasure<(Vertex, Vertex, Crossover), W>,
}

impl<W: Weight> JointLaw<W> {
    pub fn measure(&self) -> &DiscreteMeasure<(Vertex, Vertex, Crossover), W> {
        &self.measure
    }

    pub fn entropy(&self) -> f64 {
        self.measure.shannon_entropy()
    }

    /// Image law of (m, m') under the crossover codec.
    pub fn image_pairs(&self) -> DiscreteMeasure<MidpointPair, W> {
        self.measure.pushforward(|(a, b, c)| encode(*c, *a, *b).expect("arity fixed at build"))
    }
}

pub fn build_joint<W: Weight>(
    mu0: &DiscreteMeasure<Vertex, W>,
    mu1: &DiscreteMeasure<Vertex, W>,
) -> Result<JointLaw<W>> {
    common_dim(&[mu0, mu1])?;
    let mut atom_budget: u64 = 0;
    for (a, _) in mu0.atoms() {
        for (b, _) in mu1.atoms() {
            atom_budget += midpoint_count(*a, *b)?;
            if atom_budget > JOINT_ATOM_CAP {
                return Err(Error::TooLarge(format!(
                    "joint law would exceed {JOINT_ATOM_CAP} atoms"
                )));
            }
        }
    }
    let mut atoms: BTreeMap<(Vertex, Vertex, Crossover), W> = BTreeMap::new();
    for (a, wa) in mu0.atoms() {
        for (b, wb) in mu1.atoms() {
            let d = crate::hypercube::hamming(*a, *b)? as usize;
            let count = W::from_int(crate::crossover::crossover_count(d)? as i64);
            let each = wa.clone() * wb.clone() / count;
            for c in crate::crossover::iter_crossovers(d)? {
                atoms.insert((*a, *b, c), each.clone());
            }
        }
    }
    Ok(JointLaw { measure: DiscreteMeasure::from_weights(atoms)? })
}

/// One fiber of the joint law over an image pair (m, m'): the conditional
/// joint, the crossover law E, and the two endpoint laws.
#[derive(Clone, Debug)]
pub struct Fiber<W: Weight> {
    pub weight: W,
    pub joint: DiscreteMeasure<(Vertex, Vertex, Crossover), W>,
    pub crossover_law: DiscreteMeasure<Crossover, W>,
    pub first_endpoint: DiscreteMeasure<Vertex, W>,
    pub second_endpoint: DiscreteMeasure<Vertex, W>,
}

/// Disintegrate a joint law over its image pairs.
pub fn conditional_laws<W: Weight>(
    joint: &JointLaw<W>,
) -> Result<BTreeMap<MidpointPair, Fiber<W>>> {
    let mut grouped: BTreeMap<MidpointPair, Vec<((Vertex, Vertex, Crossover), W)>> =
        BTreeMap::new();
    for ((a, b, c), w) in joint.measure.atoms() {
        let pair = encode(*c, *a, *b)?;
        grouped.entry(pair).or_default().push(((*a, *b, *c), w.clone()));
    }
    let mut out = BTreeMap::new();
    for (pair, atoms) in grouped {
        let weight = W::sum(atoms.iter().map(|(_, w)| w));
        let cond: Vec<((Vertex, Vertex, Crossover), W)> = atoms
            .into_iter()
            .map(|(k, w)| (k, w / weight.clone()))
            .collect();
        let joint = DiscreteMeasure::from_weights(cond)?;
        let crossover_law = joint.pushforward(|(_, _, c)| *c);
        let first_endpoint = joint.pushforward(|(a, _, _)| *a);
        let second_endpoint = joint.pushforward(|(_, b, _)| *b);
        out.insert(pair, Fiber { weight, joint, crossover_law, first_endpoint, second_endpoint });
    }
    Ok(out)
}
