//! Seeding and random number generation.
//!
//! The generator is SplitMix64: output `i` is a bijective mix of
//! `seed + (i+1)*GOLDEN_GAMMA`, so the stream is a pure function of a 64-bit
//! counter. Child seeds are derived through the same mixer with a different
//! odd increment, which makes `child(i)` injective over the whole index range
//! and keeps child streams out of the parent's output sequence. Replications
//! that run in parallel each take their own child seed, so results never
//! depend on scheduling.

use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
/// Odd increment reserved for child-seed derivation (distinct from the
/// stream increment so children never collide with parent outputs).
const CHILD_GAMMA: u64 = 0xD1B5_4A32_D192_ED03;

/// Finalizer from SplitMix64; a bijection on `u64`.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A 64-bit seed; the root of a deterministic stream tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    /// Derives the `index`-th child seed.
    ///
    /// For a fixed parent the map `index -> child` is injective over all of
    /// `u64` (every step below is a bijection), so substreams never collide.
    pub fn child(self, index: u64) -> RandomSeed {
        RandomSeed(mix64(
            self.0.wrapping_add(index.wrapping_add(1).wrapping_mul(CHILD_GAMMA)),
        ))
    }

    /// Starts the uniform/normal stream rooted at this seed.
    pub fn rng(self) -> SplitMix64 {
        SplitMix64::new(self)
    }
}

impl From<u64> for RandomSeed {
    fn from(v: u64) -> Self {
        RandomSeed(v)
    }
}

/// Counter-based SplitMix64 stream with a cached spare normal deviate.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: RandomSeed) -> Self {
        SplitMix64 { state: seed.0, spare_normal: None }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `{0, 1, ..., n-1}`, exact via Lemire's rejection method.
    ///
    /// # Panics
    /// Panics if `n == 0`.
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "next_below requires n > 0");
        let reject_below = n.wrapping_neg() % n; // 2^64 mod n
        loop {
            let m = u128::from(self.next_u64()) * u128::from(n);
            if m as u64 >= reject_below {
                return (m >> 64) as u64;
            }
        }
    }

    /// Standard normal deviate by the Marsaglia polar method.
    ///
    /// Pairs are generated two at a time; the second is cached, so a stream
    /// consumes uniforms only on every other call (plus rejections).
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * f);
                return u * f;
            }
        }
    }
}
