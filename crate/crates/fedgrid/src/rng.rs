//! Deterministic RNG for reading synthesis and client sampling.
//!
//! Uses xorshift64* with a splitmix64 seed scrambler. Output is stable
//! across platforms and dependency upgrades, which the reproducibility
//! guarantees of the simulator rely on. Not cryptographically secure.

/// Deterministic RNG with a single 64-bit state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimRng {
    state: u64,
}

/// splitmix64 finalizer; also used to derive independent substreams.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SimRng {
    /// Create a new RNG. Seeds are scrambled through splitmix64 so that
    /// adjacent seeds give unrelated streams; a resulting zero state is
    /// remapped to avoid the xorshift lockup state.
    pub fn new(seed: u64) -> Self {
        let s = mix64(seed);
        SimRng { state: if s == 0 { 0x9E37_79B9_7F4A_7C15 } else { s } }
    }

    /// Derive an independent substream keyed by `tags`, insensitive to the
    /// order in which other substreams are drawn.
    pub fn substream(seed: u64, tags: &[u64]) -> Self {
        let mut s = mix64(seed);
        for &t in tags {
            s = mix64(s ^ t);
        }
        SimRng::new(s)
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform f64 in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform f64 in `[-1, 1)`.
    pub fn next_signed_unit(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    /// Uniform integer in `[0, n)`. `n` must be positive.
    pub fn gen_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }
}
