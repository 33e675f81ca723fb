//! Counter-based random variates.
//!
//! Every variate drawn by the samplers is a pure function of
//! `(seed, stream, index)`. Vertex attributes are indexed by vertex id and
//! pair variates by [`pair_index`], so a graph does not depend on the order in
//! which vertices or pairs are visited, nor on how the work is split across
//! threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const TWO_POW_M53: f64 = 1.0 / 9_007_199_254_740_992.0;

/// splitmix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Role of a family of variates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stream {
    Weight,
    /// One stream per torus axis.
    Coordinate(u32),
    /// First half of the split pair variable.
    PairFirst,
    /// Second half of the split pair variable.
    PairSecond,
    /// Inclusion coins for the low-weight subset of the phased sampler.
    Selection,
    /// Anything else (restarts, Monte Carlo checks); the tag separates users.
    Aux(u64),
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Weight => 1,
            Stream::PairFirst => 2,
            Stream::PairSecond => 3,
            Stream::Selection => 4,
            Stream::Coordinate(axis) => 0x1_0000 + u64::from(axis),
            Stream::Aux(tag) => mix64(tag ^ 0x5eed_0f_a0c5),
        }
    }
}

/// A keyed family of independent 64-bit words, addressed by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CounterStream {
    key: u64,
}

impl CounterStream {
    pub fn new(seed: u64, stream: Stream) -> Self {
        let key = mix64(seed ^ mix64(stream.tag().wrapping_add(GOLDEN)));
        Self { key }
    }

    #[inline]
    pub fn bits(&self, index: u64) -> u64 {
        mix64(self.key.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn uniform(&self, index: u64) -> f64 {
        (self.bits(index) >> 11) as f64 * TWO_POW_M53
    }

    /// Uniform on `(0, 1]`.
    #[inline]
    pub fn uniform_open_zero(&self, index: u64) -> f64 {
        1.0 - self.uniform(index)
    }

    /// A sequential generator derived from one slot of this stream.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        for (i, chunk) in seed.chunks_mut(8).enumerate() {
            let word = mix64(self.bits(index) ^ (i as u64).wrapping_mul(GOLDEN));
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}

/// Canonical index of the unordered pair `{u, v}`, `u != v`:
/// `max * (max - 1) / 2 + min`.
#[inline]
pub fn pair_index(u: u32, v: u32) -> u64 {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    let hi = u64::from(hi);
    hi * (hi - 1) / 2 + u64::from(lo)
}

/// Parses a seed given in decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(text: &str) -> Result<u64, std::num::ParseIntError> {
    let text = text.trim();
    match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => text.parse(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_is_a_bijection_on_small_n() {
        let n = 40u32;
        let mut seen = vec![false; (n * (n - 1) / 2) as usize];
        for v in 1..n {
            for u in 0..v {
                let idx = pair_index(u, v) as usize;
                assert!(!seen[idx]);
                seen[idx] = true;
                assert_eq!(pair_index(v, u) as usize, idx);
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn streams_are_pure_functions_of_their_key() {
        let a = CounterStream::new(7, Stream::PairFirst);
        let b = CounterStream::new(7, Stream::PairFirst);
        let c = CounterStream::new(7, Stream::PairSecond);
        let d = CounterStream::new(8, Stream::PairFirst);
        for i in [0u64, 1, 99, u64::MAX - 1] {
            assert_eq!(a.bits(i), b.bits(i));
            assert_ne!(a.bits(i), c.bits(i));
            assert_ne!(a.bits(i), d.bits(i));
        }
        let u = a.uniform(3);
        assert!((0.0..1.0).contains(&u));
        assert!(a.uniform_open_zero(3) > 0.0);
    }

    #[test]
    fn seeds_parse_in_decimal_and_hex() {
        assert_eq!(parse_seed("42").unwrap(), 42);
        assert_eq!(parse_seed("0x2A").unwrap(), 42);
        assert_eq!(parse_seed(" 0xffffffffffffffff ").unwrap(), u64::MAX);
        assert!(parse_seed("0xzz").is_err());
    }

    #[test]
    fn uniform_mean_is_one_half() {
        let s = CounterStream::new(1, Stream::Aux(9));
        let n = 200_000;
        let mean = (0..n).map(|i| s.uniform(i)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.005, "mean {mean}");
    }
}
