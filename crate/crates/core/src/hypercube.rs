use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest supported cube dimension. Every vertex fits a machine word and
/// exhaustive 2^N scans stay at desk scale.
pub const MAX_DIM: usize = 24;

/// A point of {0,1}^N, stored as a bitmask with coordinate 1 in the most
/// significant position. Lexicographic order on coordinate strings therefore
/// agrees with numeric order on `bits`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    dim: u8,
    bits: u32,
}

impl Vertex {
    pub fn new(dim: usize, bits: u32) -> Result<Self> {
        if dim < 1 || dim > MAX_DIM {
            return Err(Error::DimensionOutOfRange(dim, MAX_DIM));
        }
        if bits >> dim != 0 {
            return Err(Error::BitsOutOfRange { bits, dim });
        }
        Ok(Vertex { dim: dim as u8, bits })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Vertex::new(dim, 0)
    }

    pub fn ones(dim: usize) -> Result<Self> {
        if dim < 1 || dim > MAX_DIM {
            return Err(Error::DimensionOutOfRange(dim, MAX_DIM));
        }
        Ok(Vertex { dim: dim as u8, bits: (1u32 << dim) - 1 })
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Coordinate `i`, 1-based from the most significant position.
    pub fn coordinate(&self, i: usize) -> Result<u8> {
        if i < 1 || i > self.dim() {
            return Err(Error::DimensionOutOfRange(i, self.dim()));
        }
        Ok(((self.bits >> (self.dim() - i)) & 1) as u8)
    }

    pub fn flip(&self, i: usize) -> Result<Vertex> {
        if i < 1 || i > self.dim() {
            return Err(Error::DimensionOutOfRange(i, self.dim()));
        }
        Ok(Vertex { dim: self.dim, bits: self.bits ^ (1 << (self.dim() - i)) })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.dim())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{self}")
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > MAX_DIM {
            return Err(Error::BadBitstring(s.into()));
        }
        let mut bits = 0u32;
        for ch in s.chars() {
            bits = (bits << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::BadBitstring(s.into())),
                };
        }
        Ok(Vertex { dim: s.len() as u8, bits })
    }
}

/// Hamming distance. Errors on mismatched dimensions.
pub fn hamming(a: Vertex, b: Vertex) -> Result<u32> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok((a.bits ^ b.bits).count_ones())
}

/// All 2^N vertices in lexicographic order.
pub fn enumerate_vertices(dim: usize) -> Result<Vec<Vertex>> {
    if dim < 1 || dim > MAX_DIM {
        return Err(Error::DimensionOutOfRange(dim, MAX_DIM));
    }
    Ok((0..1u32 << dim).map(|bits| Vertex { dim: dim as u8, bits }).collect())
}

/// A duplicate-free set of vertices of one common dimension. May be empty;
/// operations that need points check for themselves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexSet {
    dim: u8,
    members: Vec<Vertex>,
}

impl VertexSet {
    pub fn new<I: IntoIterator<Item = Vertex>>(dim: usize, members: I) -> Result<Self> {
        if dim < 1 || dim > MAX_DIM {
            return Err(Error::DimensionOutOfRange(dim, MAX_DIM));
        }
        let mut v: Vec<Vertex> = members.into_iter().collect();
        for m in &v {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch(m.dim(), dim));
            }
        }
        v.sort();
        v.dedup();
        Ok(VertexSet { dim: dim as u8, members: v })
    }

    pub fn full_cube(dim: usize) -> Result<Self> {
        Ok(VertexSet { dim: dim as u8, members: enumerate_vertices(dim)? })
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet { dim: v.dim, members: vec![v] }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.dim == self.dim && self.members.binary_search(&v).is_ok()
    }

    /// Membership mask over bit patterns, for inner-loop lookups.
    pub fn bitset(&self) -> Vec<u64> {
        let words = (1usize << self.dim()).div_ceil(64);
        let mut bs = vec![0u64; words];
        for m in &self.members {
            bs[(m.bits >> 6) as usize] |= 1u64 << (m.bits & 63);
        }
        bs
    }
}

/// min over a x b of the Hamming distance. Errors when either set is empty
/// or the dimensions differ.
pub fn set_distance(a: &VertexSet, b: &VertexSet) -> Result<u32> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut best = u32::MAX;
    for x in &a.members {
        for y in &b.members {
            let d = (x.bits ^ y.bits).count_ones();
            if d < best {
                best = d;
                if best == 0 {
                    return Ok(0);
                }
            }
        }
    }
    Ok(best)
}

/// Bernoulli(density) subset of {0,1}^N, resampled until nonempty.
/// Deterministic for fixed arguments.
pub fn random_subset(dim: usize, density: f64, seed: u64) -> Result<VertexSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_subset_from(dim, density, &mut rng)
}

/// Same draw fed from a caller-owned stream, so one stream can produce
/// several independent sets.
pub fn random_subset_from(dim: usize, density: f64, rng: &mut ChaCha8Rng) -> Result<VertexSet> {
    if dim < 1 || dim > MAX_DIM {
        return Err(Error::DimensionOutOfRange(dim, MAX_DIM));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::BadDensity(density));
    }
    loop {
        let mut members = Vec::new();
        for bits in 0..1u32 << dim {
            if rng.random::<f64>() < density {
                members.push(Vertex { dim: dim as u8, bits });
            }
        }
        if !members.is_empty() {
            return Ok(VertexSet { dim: dim as u8, members });
        }
    }
}
