//! Reproducible randomness: per-trial substreams derived from a master
//! seed, and inverse-CDF sampling over exact rational weights.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Generator used for every substream.
pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function (Stafford's "Mix13" finalizer).
#[inline]
pub fn avalanche(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Substream seed for `(master, index)`: the index is spread by one
/// SplitMix64 step, xored into the master seed, and finalized again.
#[inline]
pub fn mix64(master: u64, index: u64) -> u64 {
    avalanche(master ^ avalanche(index.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)))
}

pub fn substream(master: u64, index: u64) -> StreamRng {
    StreamRng::seed_from_u64(mix64(master, index))
}

/// Inverse-CDF sampler over exact rational weights. A 128-bit uniform draw
/// `u` selects the first index whose cumulative threshold
/// `floor(cdf_i * 2^128)` exceeds it.
#[derive(Clone, Debug)]
pub struct RationalSampler {
    thresholds: Vec<u128>,
}

impl RationalSampler {
    /// Weights must be positive and sum to exactly 1.
    pub fn new(weights: &[BigRational]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::config("empty weight list"));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::config("weights must be positive"));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::config(format!("weights sum to {total}, not 1")));
        }
        let scale: BigInt = BigInt::one() << 128usize;
        let mut cum = BigRational::zero();
        let mut thresholds = Vec::with_capacity(weights.len());
        for w in &weights[..weights.len() - 1] {
            cum += w;
            let t = (&cum * BigRational::from_integer(scale.clone())).floor().to_integer();
            thresholds.push(t.to_u128().unwrap_or(u128::MAX));
        }
        Ok(RationalSampler { thresholds })
    }

    pub fn len(&self) -> usize {
        self.thresholds.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: u128 = rng.gen();
        self.thresholds.partition_point(|&t| t <= u)
    }
}
