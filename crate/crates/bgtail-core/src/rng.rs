//! Counter-based pseudorandom generator with a fully pinned-down
//! definition, so any reimplementation (in any language) reproduces the
//! exact same streams.
//!
//! Draw `i` (1-based) from seed `k` is
//!
//! ```text
//! out_i = mix(k + i·0x9E3779B97F4A7C15 mod 2^64)
//! ```
//!
//! where `mix` is the SplitMix64 finalizer:
//!
//! ```text
//! z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;
//! z ^= z >> 27;  z *= 0x94D049BB133111EB;
//! z ^= z >> 31;
//! ```
//!
//! Test vectors (first four draws):
//!
//! | seed       | draws                                                                          |
//! |------------|--------------------------------------------------------------------------------|
//! | 0          | e220a8397b1dcdaf, 6e789e6aa1b965f4, 06c45d188009454f, f88bb8a8724c81ec           |
//! | 0xDEADBEEF | 4adfb90f68c9eb9b, de586a3141a10922, 021fbc2f8e1cfc1d, 7466ce737be16790           |
//! | 42         | bdd732262feb6e95, 28efe333b266f103, 47526757130f9f52, 581ce1ff0e4ae394           |
//!
//! Substreams are counter windows: stream `s` starts at counter
//! `s·2^40`, leaving 2^40 draws per stream before overlap. Consumers
//! that need independent streams from one user seed (e.g. the two Monte
//! Carlo estimators) take consecutive stream indices.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SHIFT: u32 = 40;

/// Deterministic counter-based RNG state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngState {
    seed: u64,
    counter: u64,
}

impl RngState {
    /// Stream 0 for `seed`.
    pub fn new(seed: u64) -> Self {
        RngState { seed, counter: 0 }
    }

    /// Start of substream `stream` for `seed` (counter offset `stream·2^40`).
    pub fn substream(seed: u64, stream: u64) -> Self {
        RngState {
            seed,
            counter: stream.wrapping_shl(STREAM_SHIFT),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Draws consumed so far (including any substream offset).
    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform draw on the open interval (0, 1).
    ///
    /// 53-bit mantissa, offset by half an ulp so neither endpoint can
    /// ever be returned (callers take logs).
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal draw by the polar (Marsaglia) method.
    pub fn next_normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.next_open01() - 1.0;
            let v = 2.0 * self.next_open01() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * crate::fmath::sqrt(-2.0 * crate::fmath::ln(s) / s);
            }
        }
    }
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}
