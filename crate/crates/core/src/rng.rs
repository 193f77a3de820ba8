//! Small deterministic pseudo-random number generator.
//!
//! Training, bagging and the synthetic-data generators all need reproducible
//! randomness whose streams never change between releases or platforms, so we
//! carry our own generator instead of depending on an external crate whose
//! stream stability is not guaranteed. The generator is xoshiro256++ seeded
//! through splitmix64, both public-domain algorithms by Blackman and Vigna.
//! It is not cryptographically secure and does not need to be.

/// One step of the splitmix64 sequence; advances `state` and returns the
/// next output. Also used on its own to expand seeds and to mix seed streams.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent seed from a base seed and a stream index.
///
/// This is the documented mixing function used everywhere a component needs
/// its own stream (ensemble members, per-training shuffling): stream `k` of
/// base `b` is `splitmix64(b + k * GOLDEN)` where GOLDEN is the splitmix
/// increment. Adding more streams later never changes earlier ones.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut s = base.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    splitmix64(&mut s)
}

/// xoshiro256++ generator. All randomness in this crate flows through here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rng {
    s: [u64; 4],
}

impl Rng {
    /// Creates a generator from a 64-bit seed by expanding it with splitmix64,
    /// as recommended by the xoshiro authors.
    pub fn seed_from(seed: u64) -> Self {
        let mut x = seed;
        let mut s = [0u64; 4];
        for slot in &mut s {
            *slot = splitmix64(&mut x);
        }
        Rng { s }
    }

    #[cfg(test)]
    fn from_state(s: [u64; 4]) -> Self {
        Rng { s }
    }

    /// Next 64 uniformly random bits.
    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[0]
            .wrapping_add(self.s[3])
            .rotate_left(23)
            .wrapping_add(self.s[0]);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform double in `[0, 1)` built from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform double in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[0, n)`, unbiased via rejection sampling.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "Rng::below requires n > 0");
        let n64 = n as u64;
        // Reject draws above the largest multiple of n that fits in u64,
        // so every residue is equally likely.
        let rem = (u64::MAX % n64).wrapping_add(1) % n64; // 2^64 mod n
        let limit = u64::MAX - rem;
        loop {
            let x = self.next_u64();
            if x <= limit {
                return (x % n64) as usize;
            }
        }
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i + 1);
            xs.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First three outputs for seed 0, from the public-domain reference
        // implementation.
        let mut s = 0u64;
        assert_eq!(splitmix64(&mut s), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(&mut s), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(splitmix64(&mut s), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn xoshiro_first_output_matches_hand_computation() {
        // With state [1,2,3,4]: rotl(1+4, 23) + 1 = (5 << 23) + 1.
        let mut rng = Rng::from_state([1, 2, 3, 4]);
        assert_eq!(rng.next_u64(), (5u64 << 23) + 1);
    }

    #[test]
    fn seeded_stream_is_stable() {
        // Frozen outputs of our seed expansion + xoshiro256++; these must
        // never change, or saved seeds stop reproducing old runs.
        let mut rng = Rng::seed_from(42);
        let got: alloc::vec::Vec<u64> = (0..4).map(|_| rng.next_u64()).collect();
        assert_eq!(got, FROZEN_SEED_42);
    }

    const FROZEN_SEED_42: [u64; 4] = [
        0xD076_4D4F_4476_689F,
        0x519E_4174_576F_3791,
        0xFBE0_7CFB_0C24_ED8C,
        0xB37D_9F60_0CD8_35B8,
    ];

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::seed_from(7);
        let mut b = Rng::seed_from(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn next_f64_in_unit_interval() {
        let mut rng = Rng::seed_from(1);
        for _ in 0..10_000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn uniform_respects_bounds() {
        let mut rng = Rng::seed_from(2);
        for _ in 0..10_000 {
            let x = rng.uniform(-0.25, 0.75);
            assert!((-0.25..0.75).contains(&x));
        }
    }

    #[test]
    fn below_hits_every_residue() {
        let mut rng = Rng::seed_from(3);
        let mut seen = [0u32; 7];
        for _ in 0..7_000 {
            seen[rng.below(7)] += 1;
        }
        for (i, count) in seen.iter().enumerate() {
            assert!(*count > 700, "residue {i} drawn only {count} times");
        }
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut rng = Rng::seed_from(4);
        let mut xs: alloc::vec::Vec<u32> = (0..50).collect();
        rng.shuffle(&mut xs);
        let mut sorted = xs.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..50).collect::<alloc::vec::Vec<u32>>());
        assert_ne!(xs, sorted, "50 elements should not shuffle to identity");
    }

    #[test]
    fn derive_seed_streams_are_distinct_and_stable() {
        let s0 = derive_seed(99, 0);
        let s1 = derive_seed(99, 1);
        assert_ne!(s0, s1);
        assert_eq!(s0, derive_seed(99, 0));
        // Frozen: stream derivation is part of the reproducibility contract.
        assert_eq!(s0, 0x42F3_A936_4C47_6BE3);
    }

    extern crate alloc;
}
