use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, Sub, SubAssign};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Mass grid for floating-point transport: total mass one becomes this many
/// integer units, so one grid step is 1e-9 of the total.
pub const MASS_SCALE: i128 = 1_000_000_000;

/// Scalar arithmetic backing masses and transport values.
///
/// Two implementations are provided: `f64` (fast, tolerance-based) and
/// [`Exact`] (arbitrary-precision rationals, equality-based). Code generic
/// over `Weight` runs identically in both modes; tolerances collapse to zero
/// in exact mode.
pub trait Weight:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn from_units(num: i128, den: i128) -> Self;

    /// Ingest an f64 value; exact in rational mode since floats are dyadic.
    fn ingest_f64(x: f64) -> Result<Self>;

    fn to_f64(&self) -> f64;

    /// Whether a candidate mass is admissible at construction time.
    fn valid_mass(&self) -> bool;

    /// Atoms strictly below this threshold are dropped during normalization.
    fn prune_threshold() -> Self;

    /// Tolerance for total-mass and marginal checks. Zero in exact mode.
    fn mass_tolerance() -> f64;

    /// Sum with compensation in floating mode so that large supports do not
    /// accumulate drift past `mass_tolerance`.
    fn sum<'a, I: Iterator<Item = &'a Self>>(iter: I) -> Self;

    /// Express the masses of two measures as integer multiples of one common
    /// grain, returning `(units_a, units_b, scale)` with both unit vectors
    /// summing to `scale`. Exact mode uses the least common denominator;
    /// floating mode quantizes to denominator 10^9 and repairs rounding drift
    /// on the largest atom of each side.
    fn to_common_units(a: &[Self], b: &[Self]) -> Result<(Vec<i128>, Vec<i128>, i128)>;
}

impl Weight for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_units(num: i128, den: i128) -> Self {
        num as f64 / den as f64
    }

    fn ingest_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidMeasure(format!("non-finite value {x}")));
        }
        Ok(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn valid_mass(&self) -> bool {
        self.is_finite() && *self >= 0.0
    }

    fn prune_threshold() -> Self {
        1e-15
    }

    fn mass_tolerance() -> f64 {
        1e-12
    }

    fn sum<'a, I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        // Neumaier compensation: error stays O(eps) independent of length.
        let mut total = 0.0;
        let mut comp = 0.0;
        for &x in iter {
            let t = total + x;
            if total.abs() >= x.abs() {
                comp += (total - t) + x;
            } else {
                comp += (x - t) + total;
            }
            total = t;
        }
        total + comp
    }

    fn to_common_units(a: &[Self], b: &[Self]) -> Result<(Vec<i128>, Vec<i128>, i128)> {
        const SCALE: i128 = MASS_SCALE;
        // Round each mass to the grid, then repair the total by largest
        // remainder: atoms whose rounding moved furthest against the drift
        // absorb one unit each. No atom ends more than 1.5 steps from its
        // true mass, which the coupling validator relies on.
        let quantize = |masses: &[f64]| -> Vec<i128> {
            let mut units: Vec<i128> = masses
                .iter()
                .map(|&m| (m * SCALE as f64).round() as i128)
                .collect();
            let mut drift: i128 = SCALE - units.iter().sum::<i128>();
            if drift != 0 {
                let step = drift.signum();
                let mut order: Vec<usize> = (0..units.len()).collect();
                order.sort_by(|&i, &j| {
                    let ri = (masses[i] * SCALE as f64 - units[i] as f64) * step as f64;
                    let rj = (masses[j] * SCALE as f64 - units[j] as f64) * step as f64;
                    rj.total_cmp(&ri)
                });
                let mut k = 0usize;
                while drift != 0 {
                    let i = order[k % order.len()];
                    // never drive a unit count negative while repairing
                    if units[i] + step >= 0 {
                        units[i] += step;
                        drift -= step;
                    }
                    k += 1;
                }
            }
            units
        };
        let ua = quantize(a);
        let ub = quantize(b);
        if ua.iter().any(|&u| u < 0) || ub.iter().any(|&u| u < 0) {
            return Err(Error::InvalidMeasure(
                "mass too small for 1e-9 quantization".into(),
            ));
        }
        Ok((ua, ub, SCALE))
    }
}

/// Arbitrary-precision rational scalar.
#[derive(Clone, PartialEq, PartialOrd, Debug)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Exact conversion of a finite `f64`; every float is a dyadic rational.
    pub fn from_f64_exact(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(Exact)
            .ok_or(Error::InvalidMeasure(format!("non-finite mass {x}")))
    }
}

impl Display for Exact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        Display::fmt(&self.0, f)
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        Exact(self.0 + rhs.0)
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        Exact(self.0 - rhs.0)
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        Exact(self.0 * rhs.0)
    }
}

impl Div for Exact {
    type Output = Exact;
    fn div(self, rhs: Exact) -> Exact {
        Exact(self.0 / rhs.0)
    }
}

impl AddAssign for Exact {
    fn add_assign(&mut self, rhs: Exact) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Exact {
    fn sub_assign(&mut self, rhs: Exact) {
        self.0 -= rhs.0;
    }
}

impl Zero for Exact {
    fn zero() -> Self {
        Exact(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Exact {
    fn one() -> Self {
        Exact(BigRational::one())
    }
}

impl Weight for Exact {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn from_units(num: i128, den: i128) -> Self {
        Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn ingest_f64(x: f64) -> Result<Self> {
        Exact::from_f64_exact(x)
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    fn valid_mass(&self) -> bool {
        !self.0.is_negative()
    }

    fn prune_threshold() -> Self {
        Exact::zero()
    }

    fn mass_tolerance() -> f64 {
        0.0
    }

    fn sum<'a, I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        let mut acc = BigRational::zero();
        for x in iter {
            acc += &x.0;
        }
        Exact(acc)
    }

    fn to_common_units(a: &[Self], b: &[Self]) -> Result<(Vec<i128>, Vec<i128>, i128)> {
        let mut lcm = BigInt::one();
        for m in a.iter().chain(b) {
            lcm = lcm.lcm(m.0.denom());
        }
        let scale = lcm
            .to_i128()
            .ok_or(Error::ScaleOverflow)?;
        let units = |masses: &[Exact]| -> Result<Vec<i128>> {
            masses
                .iter()
                .map(|m| {
                    let v = (&m.0 * &lcm).to_integer();
                    v.to_i128().ok_or(Error::ScaleOverflow)
                })
                .collect()
        };
        Ok((units(a)?, units(b)?, scale))
    }
}

/// Snap a positive sample onto the 2^-24 dyadic grid before ingestion.
/// Raw f64 draws carry denominators near 2^90 after normalization; two
/// independent measures then need a common unit beyond i128 and exact
/// transport fails. The grid keeps common denominators near 2^35 while
/// preserving the draw to eight decimal places. Zero rounds up to one grid
/// step so the support never silently shrinks.
pub(crate) fn quantized_weight<W: Weight>(x: f64) -> W {
    let num = ((x * (1u64 << 24) as f64).round() as i64).max(1);
    W::from_ratio(num, 1i64 << 24)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn common_units_exact_lcm() {
        let a = vec![Exact::from_ratio(1, 3), Exact::from_ratio(2, 3)];
        let b = vec![Exact::from_ratio(1, 4), Exact::from_ratio(3, 4)];
        let (ua, ub, s) = Exact::to_common_units(&a, &b).unwrap();
        assert_eq!(s, 12);
        assert_eq!(ua, vec![4, 8]);
        assert_eq!(ub, vec![3, 9]);
    }

    #[test]
    fn common_units_float_drift_repair() {
        let a = vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        let b = vec![0.5, 0.5];
        let (ua, ub, s) = f64::to_common_units(&a, &b).unwrap();
        assert_eq!(ua.iter().sum::<i128>(), s);
        assert_eq!(ub.iter().sum::<i128>(), s);
    }

    #[test]
    fn compensated_sum_tight() {
        let xs = vec![1.0 / 12870.0; 12870];
        let total = <f64 as Weight>::sum(xs.iter());
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn dyadic_conversion_is_exact() {
        let x = 0.1 + 0.2;
        let e = Exact::from_f64_exact(x).unwrap();
        assert_eq!(e.to_f64(), x);
    }

    // Repairing the rounded total must spread the drift: units sum to the
    // scale and every atom stays within 1.5 grid steps of its true mass.
    #[test]
    fn float_mass_quantization_spreads_drift() {
        let cases: Vec<Vec<f64>> = vec![
            vec![1.0 / 7.0; 7],
            vec![1.0 / 101.0; 101],
            vec![0.3, 0.3, 0.4],
        ];
        for masses in &cases {
            let (ua, ub, scale) = <f64 as Weight>::to_common_units(masses, masses).unwrap();
            for units in [&ua, &ub] {
                assert_eq!(units.iter().sum::<i128>(), scale);
                for (&u, &m) in units.iter().zip(masses) {
                    let dev = (u as f64 / scale as f64 - m).abs();
                    assert!(dev <= 1.5 / scale as f64, "dev {dev} for mass {m}");
                }
            }
        }
    }
}
