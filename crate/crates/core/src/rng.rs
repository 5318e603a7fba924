//! Counter-based random streams.
//!
//! Every random decision in the crate is a pure function of a key tuple
//! (seed, stream, counter...). Edge states in percolation are keyed by the
//! edge itself, so a configuration at `p` is reproducible and the configuration
//! at `p' > p` opens a superset of edges.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive combination of a key with one more word.
#[inline]
pub fn combine(key: u64, word: u64) -> u64 {
    mix64(key.wrapping_add(GOLDEN).wrapping_add(mix64(word ^ 0x5851_F42D_4C95_7F2D)))
}

/// Hash of a key tuple.
pub fn key(words: &[u64]) -> u64 {
    words.iter().fold(0x243F_6A88_85A3_08D3, |k, &w| combine(k, w))
}

/// Map 64 random bits to a uniform double in [0, 1).
#[inline]
pub fn to_unit(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in [0, 1) determined by `(stream_key, counter)`.
#[inline]
pub fn uniform_at(stream_key: u64, counter: u64) -> f64 {
    to_unit(combine(stream_key, counter))
}

/// Sequential generator over a counter-based stream.
#[derive(Clone, Debug)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(key: u64) -> Self {
        Self { key, counter: 0 }
    }

    pub fn from_words(words: &[u64]) -> Self {
        Self::new(key(words))
    }

    pub fn next_u64(&mut self) -> u64 {
        let out = combine(self.key, self.counter);
        self.counter += 1;
        out
    }

    pub fn uniform(&mut self) -> f64 {
        to_unit(self.next_u64())
    }

    /// Uniform integer in `0..n` (`n > 0`), by rejection.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

/// Inverse-CDF sampling from a cumulative table (last entry should be 1).
pub fn sample_cdf(cdf: &[f64], u: f64) -> usize {
    let idx = cdf.partition_point(|&c| c <= u);
    idx.min(cdf.len().saturating_sub(1))
}
