//! Edge probability kernel and the two graph samplers.
//!
//! Both samplers draw every random quantity from counter streams keyed by the
//! model seed:
//!
//! * vertex `v`: its weight and one coordinate per axis, indexed by `v`;
//! * pair `{u, v}`: two split variables `Y1`, `Y2`, indexed by [`pair_index`].
//!
//! `Y1` and `Y2` are i.i.d. with CDF `F(c) = 1 - sqrt(1 - c)`, so that
//! `min(Y1, Y2)` is uniform and the edge insertion criterion
//! `min(Y1, Y2) < p_uv` inserts each edge with probability exactly `p_uv`.
//! Because the streams are shared, [`sample_direct`] and the final graph of
//! [`sample_phased`] coincide edge for edge.
//!
//! [`pair_index`]: crate::rng::pair_index

mod direct;
mod phased;

pub use direct::{sample_direct, sample_direct_with};
pub use phased::{sample_coupled, sample_phased, sample_phased_with, PhasedTrace};

use crate::error::{invalid, Result};
use crate::geometry::{GeometrySpec, TorusPoint};
use crate::rng::{pair_index, CounterStream, Stream};
use crate::weights::{keyed_weights, PowerLawParams, WeightSequence};

/// Complete description of one GIRG instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub geometry: GeometrySpec,
    pub n: usize,
    pub alpha: f64,
    /// Common value of the lower and upper probability constants.
    pub prefactor: f64,
    pub weights: PowerLawParams,
    pub seed: u64,
}

impl ModelParams {
    /// `prefactor = 1`, `w_min = 1`, default cap, seed 0.
    pub fn new(geometry: GeometrySpec, n: usize, alpha: f64, beta: f64) -> Self {
        Self {
            geometry,
            n,
            alpha,
            prefactor: 1.0,
            weights: PowerLawParams::new(beta),
            seed: 0,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_prefactor(self, prefactor: f64) -> Self {
        Self { prefactor, ..self }
    }

    pub fn with_n(self, n: usize) -> Self {
        Self { n, ..self }
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    pub fn beta(&self) -> f64 {
        self.weights.beta
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > u32::MAX as usize {
            return Err(invalid(format!("vertex count {} out of range", self.n)));
        }
        if !(self.alpha > 1.0 && self.alpha.is_finite()) {
            return Err(invalid(format!("alpha must be a finite value > 1, got {}", self.alpha)));
        }
        if !(self.prefactor > 0.0 && self.prefactor <= 1.0) {
            return Err(invalid(format!(
                "prefactor must lie in (0, 1], got {}",
                self.prefactor
            )));
        }
        self.weights.validate()
    }

    pub(crate) fn kernel(&self) -> Kernel {
        Kernel {
            n: self.n as f64,
            alpha: self.alpha,
            c: self.prefactor,
        }
    }
}

/// `c * min(1, (w_u w_v / (n V))^alpha)` evaluated on a weight product and a volume.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Kernel {
    n: f64,
    alpha: f64,
    c: f64,
}

impl Kernel {
    #[inline]
    pub(crate) fn probability(&self, weight_product: f64, volume: f64) -> f64 {
        if !(volume > 0.0) {
            return self.c;
        }
        let q = weight_product / (self.n * volume);
        if q >= 1.0 {
            self.c
        } else {
            self.c * q.powf(self.alpha)
        }
    }

    /// `y < probability(weight_product, volume)`, avoiding `powf` when `y`
    /// already exceeds the linear bound `c * q >= c * q^alpha`.
    #[inline(always)]
    pub(crate) fn admits(&self, y: f64, weight_product: f64, volume: f64) -> bool {
        if !(volume > 0.0) {
            return y < self.c;
        }
        let q = weight_product / (self.n * volume);
        if q >= 1.0 {
            y < self.c
        } else if y >= self.c * q {
            false
        } else {
            y < self.c * q.powf(self.alpha)
        }
    }
}

/// Edge probability for two weights at distance `dist`.
pub fn edge_probability(params: &ModelParams, wu: f64, wv: f64, dist: f64) -> f64 {
    params
        .kernel()
        .probability(wu * wv, params.geometry.volume(dist))
}

/// Lower-bound probability `c * min(1, (w_u w_v / (n r))^alpha)` with the
/// linearized volume `V(r) = r` (no truncation at 1/2).
pub fn p_lower(params: &ModelParams, wu: f64, wv: f64, r: f64) -> f64 {
    params.kernel().probability(wu * wv, r)
}

/// CDF of each split variable: `1 - sqrt(1 - c)`.
pub fn split_cdf(c: f64) -> f64 {
    1.0 - (1.0 - c.clamp(0.0, 1.0)).sqrt()
}

/// Inverse of [`split_cdf`]: `1 - (1 - u)^2`.
#[inline]
pub fn split_inverse_cdf(u: f64) -> f64 {
    let t = 1.0 - u;
    1.0 - t * t
}

/// The two split variables of one vertex pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairRandomness {
    pub y1: f64,
    pub y2: f64,
}

impl PairRandomness {
    /// The uniform variable the edge insertion criterion compares against.
    pub fn min(&self) -> f64 {
        self.y1.min(self.y2)
    }
}

/// Keyed access to the split variables of every pair.
#[derive(Clone, Copy, Debug)]
pub struct PairStreams {
    first: CounterStream,
    second: CounterStream,
}

impl PairStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            first: CounterStream::new(seed, Stream::PairFirst),
            second: CounterStream::new(seed, Stream::PairSecond),
        }
    }

    #[inline]
    pub fn y1(&self, index: u64) -> f64 {
        split_inverse_cdf(self.first.uniform(index))
    }

    #[inline]
    pub fn y2(&self, index: u64) -> f64 {
        split_inverse_cdf(self.second.uniform(index))
    }

    /// `min(Y1, Y2)`; the inverse CDF is monotone, so this equals the minimum
    /// of the transformed variables bit for bit.
    #[inline]
    pub(crate) fn y_min(&self, index: u64) -> f64 {
        split_inverse_cdf(self.first.uniform(index).min(self.second.uniform(index)))
    }

    pub fn draw(&self, u: u32, v: u32) -> PairRandomness {
        let idx = pair_index(u, v);
        PairRandomness {
            y1: self.y1(idx),
            y2: self.y2(idx),
        }
    }
}

/// Coordinate `axis` of vertex `v`.
#[derive(Clone, Debug)]
pub(crate) struct CoordinateStreams {
    axes: Vec<CounterStream>,
}

impl CoordinateStreams {
    pub(crate) fn new(seed: u64, dim: usize) -> Self {
        Self {
            axes: (0..dim as u32)
                .map(|a| CounterStream::new(seed, Stream::Coordinate(a)))
                .collect(),
        }
    }

    #[inline]
    pub(crate) fn coord(&self, axis: usize, v: usize) -> f64 {
        self.axes[axis].uniform(v as u64)
    }
}

pub(crate) fn draw_weights(params: &ModelParams) -> Result<WeightSequence> {
    keyed_weights(
        &params.weights,
        params.n,
        &CounterStream::new(params.seed, Stream::Weight),
    )
}

/// Row-major `n x dim` coordinates, all axes revealed.
pub(crate) fn draw_coordinates(params: &ModelParams) -> Vec<f64> {
    let d = params.dim();
    let streams = CoordinateStreams::new(params.seed, d);
    let mut coords = vec![0.0; params.n * d];
    for (v, row) in coords.chunks_mut(d).enumerate() {
        for (axis, c) in row.iter_mut().enumerate() {
            *c = streams.coord(axis, v);
        }
    }
    coords
}

pub(crate) fn points_from_rows(coords: &[f64], dim: usize) -> Vec<TorusPoint> {
    coords
        .chunks(dim)
        .map(|row| TorusPoint::new(row.to_vec()))
        .collect()
}

/// How the O(n^2) pair scan is split into work units.
///
/// Results never depend on the schedule; the knob exists so that this can be
/// checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// Row blocks with balanced pair counts, processed on the rayon pool.
    #[default]
    Parallel,
    /// One block, current thread.
    Sequential,
    /// Fixed-size row blocks processed sequentially, optionally last block first.
    Blocked { rows: usize, reverse: bool },
}

/// Splits `0..n` into contiguous row ranges for a triangular scan where row `k`
/// costs `k` units.
pub(crate) fn row_blocks(n: usize, schedule: Schedule) -> Vec<std::ops::Range<usize>> {
    match schedule {
        Schedule::Sequential => vec![0..n],
        Schedule::Blocked { rows, reverse } => {
            let rows = rows.max(1);
            let mut blocks: Vec<_> = (0..n).step_by(rows).map(|s| s..(s + rows).min(n)).collect();
            if reverse {
                blocks.reverse();
            }
            blocks
        }
        Schedule::Parallel => {
            let parts = (rayon::current_num_threads() * 8).max(1);
            let total = (n as f64) * (n as f64) / 2.0;
            let mut blocks = Vec::with_capacity(parts);
            let mut start = 0;
            for p in 1..=parts {
                // row r ends the first r(r-1)/2 pairs; invert for equal shares
                let target = total * p as f64 / parts as f64;
                let end = ((2.0 * target).sqrt().ceil() as usize).clamp(start, n);
                let end = if p == parts { n } else { end };
                if end > start {
                    blocks.push(start..end);
                    start = end;
                }
            }
            blocks
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::ks_uniform;
    use proptest::prelude::*;

    fn params(n: usize, alpha: f64, c: f64) -> ModelParams {
        ModelParams::new(GeometrySpec::mcd(2).unwrap(), n, alpha, 2.5).with_prefactor(c)
    }

    #[test]
    fn edge_probability_examples() {
        let p = params(100, 2.0, 1.0);
        // V(dist) = 0.1 under the linearized volume
        assert!((edge_probability(&p, 1.0, 1.0, 0.1) - 0.01).abs() < 1e-15);
        // saturation once V(dist) <= w_u w_v / n
        let c = params(100, 2.0, 0.7);
        assert_eq!(edge_probability(&c, 2.0, 3.0, 0.05), 0.7);
        assert_eq!(edge_probability(&c, 1.0, 1.0, 0.0), 0.7);
    }

    #[test]
    fn p_lower_examples() {
        let p = params(1000, 1.5, 0.8);
        assert_eq!(p_lower(&p, 2.0, 2.0, 0.004), 0.8);
        assert_eq!(p_lower(&p, 2.0, 2.0, f64::INFINITY), 0.0);
        assert!(p_lower(&p, 2.0, 2.0, 1e12) < 1e-15);
        for r in [0.01, 0.1, 0.3, 0.5] {
            assert_eq!(p_lower(&p, 1.3, 2.1, r), edge_probability(&p, 1.3, 2.1, r));
        }
    }

    #[test]
    fn split_cdf_round_trip() {
        assert_eq!(split_inverse_cdf(0.5), 0.75);
        assert_eq!(split_cdf(0.75), 0.5);
        assert_eq!(split_inverse_cdf(0.0), 0.0);
        for i in 0..1000 {
            let u = i as f64 / 1000.0;
            assert!((split_cdf(split_inverse_cdf(u)) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn split_bounds_hold() {
        // c/2 <= F(c) <= c on [0, 1]
        for i in 0..=1000 {
            let c = i as f64 / 1000.0;
            let f = split_cdf(c);
            assert!(c / 2.0 <= f + 1e-15 && f <= c + 1e-15);
        }
    }

    #[test]
    fn minimum_of_split_pair_is_uniform() {
        let s = PairStreams::new(12345);
        let ys: Vec<f64> = (0..1_000_000u64).map(|i| s.y1(i).min(s.y2(i))).collect();
        assert!(ks_uniform(&ys) < 0.005);
        let single: Vec<f64> = (0..200_000u64).map(|i| split_cdf(s.y1(i))).collect();
        assert!(ks_uniform(&single) < 0.005);
    }

    #[test]
    fn y_min_matches_the_minimum_of_both_draws() {
        let s = PairStreams::new(99);
        for i in 0..100_000u64 {
            assert_eq!(s.y_min(i), s.y1(i).min(s.y2(i)));
        }
        let r = s.draw(4, 9);
        assert_eq!(r.min(), s.y_min(pair_index(4, 9)));
    }

    #[test]
    fn parameter_validation() {
        let geom = GeometrySpec::mcd(2).unwrap();
        assert!(ModelParams::new(geom, 10, 1.5, 2.5).validate().is_ok());
        assert!(ModelParams::new(geom, 10, 1.0, 2.5).validate().is_err());
        assert!(ModelParams::new(geom, 10, 1.5, 3.5).validate().is_err());
        assert!(ModelParams::new(geom, 0, 1.5, 2.5).validate().is_err());
        assert!(ModelParams::new(geom, 10, 1.5, 2.5)
            .with_prefactor(1.5)
            .validate()
            .is_err());
    }

    #[test]
    fn row_blocks_cover_every_row_once() {
        for n in [0usize, 1, 2, 7, 100, 1000] {
            for sched in [
                Schedule::Parallel,
                Schedule::Sequential,
                Schedule::Blocked { rows: 3, reverse: true },
            ] {
                let mut rows: Vec<usize> = row_blocks(n, sched).into_iter().flatten().collect();
                rows.sort_unstable();
                assert_eq!(rows, (0..n).collect::<Vec<_>>());
            }
        }
    }

    proptest! {
        #[test]
        fn admits_agrees_with_probability(
            wu in 1.0f64..1e3, wv in 1.0f64..1e3, dist in 0.0f64..0.5,
            y in 0.0f64..1.0, alpha in 1.01f64..4.0, c in 0.01f64..1.0,
        ) {
            let p = params(10_000, alpha, c);
            let vol = p.geometry.volume(dist);
            let k = p.kernel();
            prop_assert_eq!(k.admits(y, wu * wv, vol), y < edge_probability(&p, wu, wv, dist));
        }

        #[test]
        fn probability_is_monotone(
            w1 in 1.0f64..100.0, w2 in 1.0f64..100.0, d1 in 0.0f64..0.5, d2 in 0.0f64..0.5,
        ) {
            let p = params(5_000, 1.5, 1.0);
            let (near, far) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            prop_assert!(edge_probability(&p, w1, w2, near) >= edge_probability(&p, w1, w2, far));
            let (lo, hi) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
            prop_assert!(edge_probability(&p, lo, 1.0, d1) <= edge_probability(&p, hi, 1.0, d1));
        }
    }
}
