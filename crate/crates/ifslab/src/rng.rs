//! Deterministic pseudo-random generator for reproducible sampling.
//!
//! Point-cloud generation promises bit-identical output for a given seed
//! across platforms and releases, so the generator is pinned here rather
//! than delegated to an external crate whose stream might change between
//! versions. The transition is the widely used splitmix64: a Weyl sequence
//! (increment 2⁶⁴/φ rounded to odd) whose state is scrambled by two
//! multiply-xorshift finalizer rounds. It passes BigCrush and is more than
//! adequate for driving chaos-game sampling.

/// Splitmix64 generator with a pinned, documented stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

/// Weyl-sequence increment: 2⁶⁴ divided by the golden ratio, rounded to odd
/// so the sequence has full period 2⁶⁴.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
/// First finalizer multiplier (from the splitmix64 reference finalizer).
const MIX_A: u64 = 0xBF58_476D_1CE4_E5B9;
/// Second finalizer multiplier.
const MIX_B: u64 = 0x94D0_49BB_1331_11EB;

impl SplitMix64 {
    /// Creates a generator whose stream is fully determined by `seed`.
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Next 64 uniformly distributed bits.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(MIX_A);
        z = (z ^ (z >> 27)).wrapping_mul(MIX_B);
        z ^ (z >> 31)
    }

    /// Uniform integer in `0..bound` via the multiply-high method
    /// (Lemire's unbiased-enough fixed-point reduction: the map-selection
    /// bias for bounds ≤ 2⁸ is below 2⁻⁵⁶ and is irrelevant next to the
    /// statistical noise of any finite sample).
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound >= 1, "below() needs a positive bound");
        let wide = u128::from(self.next_u64()) * bound as u128;
        (wide >> 64) as usize
    }

    /// Uniform float in `[0, 1)` with 53 random mantissa bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform float in `[lo, hi)`.
    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
