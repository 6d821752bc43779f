use std::fmt;

use num::integer::binomial;

use crate::error::{Error, Result};
use crate::hypercube::{hamming, Vertex, VertexSet, MAX_DIM};

/// A balanced pick set over diff positions of a vertex pair at distance r:
/// a subset c of {1, ..., r} with |#c - r/2| <= 1/2. Even r forces #c = r/2.
/// Element i is bit i-1 of `picks`.
///
/// Positions are indexed 1..=r over the differing coordinates of the pair in
/// ascending coordinate order, so index 1 names the most significant
/// differing coordinate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Crossover {
    arity: u8,
    picks: u32,
}

fn check_arity(r: usize) -> Result<()> {
    if r > MAX_DIM {
        return Err(Error::DimensionOutOfRange(r, MAX_DIM));
    }
    Ok(())
}

fn allowed_sizes(r: usize) -> (usize, usize) {
    (r / 2, r.div_ceil(2))
}

impl Crossover {
    pub fn new(arity: usize, picks: u32) -> Result<Self> {
        check_arity(arity)?;
        if arity < 32 && picks >> arity != 0 {
            return Err(Error::PicksOutOfRange { picks, arity });
        }
        let got = picks.count_ones() as usize;
        let (lo, hi) = allowed_sizes(arity);
        if got < lo || got > hi {
            let want = if lo == hi { format!("{lo}") } else { format!("{lo} or {hi}") };
            return Err(Error::UnbalancedCrossover { picks, arity, got, want });
        }
        Ok(Crossover { arity: arity as u8, picks })
    }

    pub fn from_elems(arity: usize, elems: &[usize]) -> Result<Self> {
        let mut picks = 0u32;
        for &e in elems {
            if e < 1 || e > arity {
                return Err(Error::PicksOutOfRange { picks: 1 << (e.max(1) - 1), arity });
            }
            picks |= 1 << (e - 1);
        }
        Crossover::new(arity, picks)
    }

    /// The distinguished crossover {1, ..., floor(r/2)}.
    pub fn canonical(arity: usize) -> Result<Self> {
        check_arity(arity)?;
        Ok(Crossover { arity: arity as u8, picks: (1u32 << (arity / 2)) - 1 })
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn picks(&self) -> u32 {
        self.picks
    }

    pub fn cardinality(&self) -> usize {
        self.picks.count_ones() as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.arity() && self.picks >> (i - 1) & 1 == 1
    }

    pub fn elems(&self) -> Vec<usize> {
        (1..=self.arity()).filter(|&i| self.contains(i)).collect()
    }

    /// Complement within {1, ..., r}; an involution that swaps the two
    /// cardinality classes for odd r.
    pub fn complement(&self) -> Crossover {
        let mask = if self.arity == 0 { 0 } else { (1u32 << self.arity) - 1 };
        Crossover { arity: self.arity, picks: self.picks ^ mask }
    }
}

impl fmt::Display for Crossover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity == 0 {
            return write!(f, "-");
        }
        for i in 1..=self.arity() {
            write!(f, "{}", if self.contains(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Crossover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{self}")
    }
}

/// Symmetric-difference cardinality. Errors on mismatched arities.
pub fn crossover_distance(c1: Crossover, c2: Crossover) -> Result<u32> {
    if c1.arity != c2.arity {
        return Err(Error::ArityMismatch(c1.arity(), c2.arity()));
    }
    Ok((c1.picks ^ c2.picks).count_ones())
}

/// #C_r: binomial(r, r/2) for even r, twice binomial(r, (r-1)/2) for odd r.
pub fn crossover_count(arity: usize) -> Result<u64> {
    check_arity(arity)?;
    let r = arity as u64;
    Ok(if arity % 2 == 0 {
        binomial(r, r / 2)
    } else {
        2 * binomial(r, (r - 1) / 2)
    })
}

/// All of C_r, ordered by cardinality then lexicographically on the sorted
/// element lists.
pub fn enumerate_crossovers(arity: usize) -> Result<Vec<Crossover>> {
    Ok(iter_crossovers(arity)?.collect())
}

pub fn iter_crossovers(arity: usize) -> Result<CrossoverIter> {
    check_arity(arity)?;
    let (lo, hi) = allowed_sizes(arity);
    Ok(CrossoverIter { arity, size: lo, max_size: hi, combo: (0..lo).collect(), done: false })
}

pub struct CrossoverIter {
    arity: usize,
    size: usize,
    max_size: usize,
    combo: Vec<usize>, // 0-based ascending element indices
    done: bool,
}

impl CrossoverIter {
    fn advance(&mut self) {
        // Next k-combination of {0, ..., arity-1} in lexicographic order.
        let k = self.combo.len();
        let n = self.arity;
        let mut i = k;
        loop {
            if i == 0 {
                self.size += 1;
                if self.size > self.max_size {
                    self.done = true;
                } else {
                    self.combo = (0..self.size).collect();
                }
                return;
            }
            i -= 1;
            if self.combo[i] < n - (k - i) {
                self.combo[i] += 1;
                for j in i + 1..k {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
                return;
            }
        }
    }
}

impl Iterator for CrossoverIter {
    type Item = Crossover;

    fn next(&mut self) -> Option<Crossover> {
        if self.done {
            return None;
        }
        let picks = self.combo.iter().fold(0u32, |acc, &e| acc | 1 << e);
        let item = Crossover { arity: self.arity as u8, picks };
        self.advance();
        Some(item)
    }
}

/// Ordered midpoint pair (m, m'); the distance between the two components
/// equals the arity of the crossover that produced them.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MidpointPair {
    m: Vertex,
    m_prime: Vertex,
}

impl MidpointPair {
    pub fn new(m: Vertex, m_prime: Vertex) -> Result<Self> {
        if m.dim() != m_prime.dim() {
            return Err(Error::DimensionMismatch(m.dim(), m_prime.dim()));
        }
        Ok(MidpointPair { m, m_prime })
    }

    pub fn m(&self) -> Vertex {
        self.m
    }

    pub fn m_prime(&self) -> Vertex {
        self.m_prime
    }

    pub fn swap(&self) -> MidpointPair {
        MidpointPair { m: self.m_prime, m_prime: self.m }
    }
}

// Spread picks over the set bits of diff: pick index 1 maps to the most
// significant differing coordinate, index 2 to the next, and so on.
fn spread(picks: u32, diff: u32) -> u32 {
    let mut s = 0u32;
    let mut rest = diff;
    let mut idx = 0u32;
    while rest != 0 {
        let top = 1u32 << (31 - rest.leading_zeros());
        if picks >> idx & 1 == 1 {
            s |= top;
        }
        rest ^= top;
        idx += 1;
    }
    s
}

/// phi_c paired with its complement: m keeps a's coordinates on picked diff
/// positions and b's elsewhere; m' does the reverse.
pub fn encode(c: Crossover, a: Vertex, b: Vertex) -> Result<MidpointPair> {
    let d = hamming(a, b)?;
    if c.arity() != d as usize {
        return Err(Error::ArityMismatch(c.arity(), d as usize));
    }
    let s = spread(c.picks, a.bits() ^ b.bits());
    let m = Vertex::new(a.dim(), b.bits() ^ s)?;
    let m_prime = Vertex::new(a.dim(), a.bits() ^ s)?;
    Ok(MidpointPair { m, m_prime })
}

/// phi_c^{-1}: recover the first endpoint a from (m, m'). The second
/// endpoint is `decode(c.complement(), pair)`.
pub fn decode(c: Crossover, pair: &MidpointPair) -> Result<Vertex> {
    let d = hamming(pair.m, pair.m_prime)?;
    if c.arity() != d as usize {
        return Err(Error::ArityMismatch(c.arity(), d as usize));
    }
    let s = spread(c.picks, pair.m.bits() ^ pair.m_prime.bits());
    Vertex::new(pair.m.dim(), pair.m_prime.bits() ^ s)
}

/// binomial(d, d/2) for even d, 2*binomial(d, (d-1)/2) for odd d; 1 when a = b.
pub fn midpoint_count(a: Vertex, b: Vertex) -> Result<u64> {
    let d = hamming(a, b)?;
    crossover_count(d as usize)
}

/// The set {phi_c(a, b) : c in C_d}: vertices on a geodesic from a to b at
/// distance floor(d/2) or ceil(d/2) from b.
pub fn midpoints(a: Vertex, b: Vertex) -> Result<VertexSet> {
    let d = hamming(a, b)? as usize;
    let diff = a.bits() ^ b.bits();
    let mut positions = [0u32; MAX_DIM];
    let mut rest = diff;
    let mut np = 0;
    while rest != 0 {
        let top = 1u32 << (31 - rest.leading_zeros());
        positions[np] = top;
        np += 1;
        rest ^= top;
    }
    let (lo, hi) = allowed_sizes(d);
    let mut out = Vec::with_capacity(crossover_count(d)? as usize);
    for k in lo..=hi {
        for compact in k_subsets(d as u32, k as u32) {
            let mut s = 0u32;
            let mut c = compact;
            while c != 0 {
                let j = c.trailing_zeros();
                s |= positions[j as usize];
                c &= c - 1;
            }
            out.push(Vertex::new(a.dim(), b.bits() ^ s)?);
        }
    }
    VertexSet::new(a.dim(), out)
}

/// Gosper iteration over all k-subsets of {0, ..., n-1} as bitmasks.
pub fn k_subsets(n: u32, k: u32) -> KSubsets {
    let first = if k == 0 { 0 } else { (1u64 << k) - 1 };
    KSubsets { limit: 1u64 << n, cur: first, exhausted: false }
}

pub struct KSubsets {
    limit: u64,
    cur: u64,
    exhausted: bool,
}

impl Iterator for KSubsets {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.exhausted || self.cur >= self.limit {
            return None;
        }
        let v = self.cur;
        if v == 0 {
            self.exhausted = true;
        } else {
            let t = v | (v - 1);
            self.cur = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
        }
        Some(v as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn counts_match_closed_form() {
        let expect = [1u64, 2, 2, 6, 6, 20, 20, 70];
        for (r, &e) in expect.iter().enumerate() {
            assert_eq!(crossover_count(r).unwrap(), e, "arity {r}");
            assert_eq!(enumerate_crossovers(r).unwrap().len() as u64, e, "arity {r}");
        }
        assert_eq!(crossover_count(12).unwrap(), 924);
    }

    #[test]
    fn even_arity_rejects_unbalanced() {
        assert!(Crossover::new(4, 0b0001).is_err());
        assert!(Crossover::new(4, 0b0111).is_err());
        assert!(Crossover::new(4, 0b0011).is_ok());
        assert!(Crossover::new(3, 0b001).is_ok());
        assert!(Crossover::new(3, 0b011).is_ok());
        assert!(Crossover::new(3, 0b111).is_err());
    }

    #[test]
    fn canonical_prefix() {
        assert_eq!(Crossover::canonical(4).unwrap().elems(), vec![1, 2]);
        assert_eq!(Crossover::canonical(5).unwrap().elems(), vec![1, 2]);
        assert_eq!(Crossover::canonical(1).unwrap().elems(), Vec::<usize>::new());
    }

    #[test]
    fn complement_involution_and_classes() {
        for r in 0..=7 {
            for c in enumerate_crossovers(r).unwrap() {
                let cc = c.complement();
                assert_eq!(cc.complement(), c);
                assert_eq!(c.cardinality() + cc.cardinality(), r);
                assert_eq!(
                    crossover_distance(c, cc).unwrap() as usize,
                    r,
                    "complement at full distance"
                );
            }
        }
    }

    #[test]
    fn enumeration_order_cardinality_then_lex() {
        let cs = enumerate_crossovers(3).unwrap();
        let lists: Vec<Vec<usize>> = cs.iter().map(|c| c.elems()).collect();
        assert_eq!(lists, vec![vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn encode_takes_picked_coordinates_from_a() {
        let c = Crossover::from_elems(3, &[1]).unwrap();
        let pair = encode(c, v("000"), v("111")).unwrap();
        assert_eq!(pair.m(), v("011"));
        assert_eq!(pair.m_prime(), v("100"));

        let c = Crossover::from_elems(2, &[1]).unwrap();
        let pair = encode(c, v("0000"), v("0110")).unwrap();
        assert_eq!(pair.m(), v("0010"));
        assert_eq!(pair.m_prime(), v("0100"));
    }

    #[test]
    fn decode_recovers_endpoints() {
        let c = Crossover::from_elems(3, &[1]).unwrap();
        let pair = MidpointPair::new(v("100"), v("011")).unwrap();
        assert_eq!(decode(c, &pair).unwrap(), v("111"));
        assert_eq!(decode(c.complement(), &pair).unwrap(), v("000"));
    }

    #[test]
    fn encode_checks_arity_against_distance() {
        let c = Crossover::from_elems(2, &[1]).unwrap();
        assert!(encode(c, v("000"), v("111")).is_err());
    }

    #[test]
    fn midpoint_counts() {
        assert_eq!(midpoint_count(v("000"), v("000")).unwrap(), 1);
        assert_eq!(midpoint_count(v("0"), v("1")).unwrap(), 2);
        assert_eq!(
            midpoint_count(Vertex::zero(12).unwrap(), Vertex::ones(12).unwrap()).unwrap(),
            924
        );
        assert_eq!(midpoint_count(v("00000"), v("11111")).unwrap(), 20);
    }

    #[test]
    fn midpoints_distance_one_is_the_pair() {
        let ms = midpoints(v("010"), v("011")).unwrap();
        assert_eq!(ms.len(), 2);
        assert!(ms.contains(v("010")) && ms.contains(v("011")));
    }

    #[test]
    fn midpoints_match_count() {
        for (a, b) in [("0000", "1111"), ("0000", "0111"), ("0101", "1010"), ("0110", "0110")] {
            let ms = midpoints(v(a), v(b)).unwrap();
            assert_eq!(ms.len() as u64, midpoint_count(v(a), v(b)).unwrap());
        }
    }

    #[test]
    fn k_subsets_counts() {
        assert_eq!(k_subsets(5, 2).count(), 10);
        assert_eq!(k_subsets(5, 0).count(), 1);
        assert_eq!(k_subsets(5, 5).count(), 1);
    }
}
