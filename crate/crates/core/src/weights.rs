//! Power-law vertex weights and tail diagnostics.

use rand::Rng;

use crate::error::{invalid, GirgError, Result};
use crate::rng::CounterStream;

/// Minimum number of values at or above the cutoff for a tail fit.
pub const MIN_TAIL_VALUES: usize = 100;

/// Truncated Pareto law `w = min(cap, w_min * U^(-1/(beta-1)))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawParams {
    pub beta: f64,
    pub w_min: f64,
    /// Upper truncation; `None` means `n^(1/(beta-1))`.
    pub w_cap: Option<f64>,
}

impl PowerLawParams {
    pub fn new(beta: f64) -> Self {
        Self {
            beta,
            w_min: 1.0,
            w_cap: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 2.0 && self.beta < 3.0) {
            return Err(invalid(format!("beta must lie in (2, 3), got {}", self.beta)));
        }
        if !(self.w_min > 0.0 && self.w_min.is_finite()) {
            return Err(invalid(format!("w_min must be positive, got {}", self.w_min)));
        }
        if let Some(cap) = self.w_cap {
            if !(cap >= self.w_min) {
                return Err(invalid(format!("w_cap {cap} is below w_min {}", self.w_min)));
            }
        }
        Ok(())
    }

    /// Effective cap for `n` vertices.
    pub fn cap(&self, n: usize) -> f64 {
        self.w_cap
            .unwrap_or_else(|| (n.max(1) as f64).powf(1.0 / (self.beta - 1.0)))
            .max(self.w_min)
    }

    /// Weight obtained from a uniform variate on `(0, 1]`.
    #[inline]
    pub(crate) fn from_uniform(&self, u: f64, cap: f64) -> f64 {
        (self.w_min * u.powf(-1.0 / (self.beta - 1.0))).min(cap)
    }

    /// Expected weight under the truncated law for `n` vertices.
    pub fn mean(&self, n: usize) -> f64 {
        let a = self.beta - 1.0;
        let (lo, cap) = (self.w_min, self.cap(n));
        a * lo.powf(a) * (cap.powf(1.0 - a) - lo.powf(1.0 - a)) / (1.0 - a)
            + lo.powf(a) * cap.powf(1.0 - a)
    }
}

/// Vertex weights together with their sum.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence {
    weights: Vec<f64>,
    total: f64,
}

impl WeightSequence {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(invalid(format!("weights must be positive and finite, got {w}")));
        }
        let total = weights.iter().sum();
        Ok(Self { weights, total })
    }

    pub fn uniform(n: usize, w: f64) -> Self {
        Self {
            weights: vec![w; n],
            total: w * n as f64,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn min(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// i.i.d. truncated Pareto weights drawn from `rng`.
pub fn sample_weights<R: Rng + ?Sized>(
    params: &PowerLawParams,
    n: usize,
    rng: &mut R,
) -> Result<WeightSequence> {
    params.validate()?;
    if n == 0 {
        return Err(invalid("need at least one vertex"));
    }
    let cap = params.cap(n);
    let weights = (0..n)
        .map(|_| params.from_uniform(1.0 - rng.gen::<f64>(), cap))
        .collect();
    WeightSequence::new(weights)
}

/// Same law, with the weight of vertex `v` keyed by `v` in a counter stream.
pub(crate) fn keyed_weights(
    params: &PowerLawParams,
    n: usize,
    stream: &CounterStream,
) -> Result<WeightSequence> {
    params.validate()?;
    let cap = params.cap(n);
    let weights = (0..n as u64)
        .map(|v| params.from_uniform(stream.uniform_open_zero(v), cap))
        .collect();
    WeightSequence::new(weights)
}

/// `#{v : w_v >= w}`.
pub fn tail_count(ws: &WeightSequence, w: f64) -> usize {
    ws.weights.iter().filter(|&&x| x >= w).count()
}

/// Hill estimate of a complementary-CDF exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailFit {
    pub exponent: f64,
    /// Half-width of the asymptotic 95% confidence interval.
    pub half_width: f64,
    /// Number of values at or above the cutoff.
    pub tail_size: usize,
    pub cutoff: f64,
}

/// Maximum-likelihood (Hill) estimate of `a` in `P[X >= x] ~ (x / cutoff)^-a`,
/// using the values at or above `cutoff`.
pub fn fit_tail_exponent(values: &[f64], cutoff: f64) -> Result<TailFit> {
    if !(cutoff > 0.0) {
        return Err(invalid(format!("cutoff must be positive, got {cutoff}")));
    }
    let tail: Vec<f64> = values.iter().copied().filter(|&x| x >= cutoff).collect();
    if tail.len() < MIN_TAIL_VALUES {
        return Err(GirgError::InsufficientTail {
            found: tail.len(),
            required: MIN_TAIL_VALUES,
        });
    }
    if tail.iter().all(|&x| x == tail[0]) {
        return Err(GirgError::DegenerateTail);
    }
    let k = tail.len() as f64;
    let log_sum: f64 = tail.iter().map(|&x| (x / cutoff).ln()).sum();
    let exponent = k / log_sum;
    Ok(TailFit {
        exponent,
        half_width: 1.96 * exponent / k.sqrt(),
        tail_size: tail.len(),
        cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Exact (untruncated) Pareto samples with CCDF `x^-a` on `[1, inf)`.
    fn pareto(a: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut r = rng(seed);
        (0..n).map(|_| (1.0 - r.gen::<f64>()).powf(-1.0 / a)).collect()
    }

    #[test]
    fn parameter_validation() {
        assert!(PowerLawParams::new(2.5).validate().is_ok());
        assert!(PowerLawParams::new(2.0).validate().is_err());
        assert!(PowerLawParams::new(3.0).validate().is_err());
        let p = PowerLawParams {
            w_cap: Some(0.5),
            ..PowerLawParams::new(2.5)
        };
        assert!(p.validate().is_err());
        let p = PowerLawParams {
            w_min: 0.0,
            ..PowerLawParams::new(2.5)
        };
        assert!(sample_weights(&p, 10, &mut rng(0)).is_err());
    }

    #[test]
    fn tail_count_examples() {
        let ws = WeightSequence::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(tail_count(&ws, 2.0), 2);
        assert_eq!(tail_count(&ws, 10.0), 0);
        assert_eq!(tail_count(&ws, 0.5), 3);
    }

    #[test]
    fn default_cap_and_pareto_tail() {
        let p = PowerLawParams::new(2.5);
        assert!((p.cap(1_000_000) - 10_000.0).abs() < 1e-6);
        // Pr[w >= 4] = 4^-1.5 below the cap
        let ws = sample_weights(&p, 100_000, &mut rng(17)).unwrap();
        assert!(ws.min() >= 1.0);
        let expected = 100_000.0 * 4f64.powf(-1.5);
        assert!((expected - 12_500.0).abs() < 1e-9);
        let sd = (100_000.0 * 0.125 * 0.875f64).sqrt();
        let got = tail_count(&ws, 4.0) as f64;
        assert!((got - expected).abs() < 3.0 * sd, "{got}");
    }

    #[test]
    fn total_weight_is_linear_in_n() {
        let p = PowerLawParams::new(2.5);
        for (i, k) in (12..=16).enumerate() {
            let n = 1usize << k;
            let m = p.mean(n);
            let ws = sample_weights(&p, n, &mut rng(100 + i as u64)).unwrap();
            let ratio = ws.total() / n as f64;
            assert!(ratio >= 0.8 * m && ratio <= 1.25 * m, "n={n} ratio={ratio} mean={m}");
        }
    }

    #[test]
    fn truncated_mean_matches_monte_carlo() {
        let p = PowerLawParams {
            w_cap: Some(50.0),
            ..PowerLawParams::new(2.3)
        };
        let ws = sample_weights(&p, 400_000, &mut rng(4)).unwrap();
        let mc = ws.total() / ws.len() as f64;
        assert!((mc - p.mean(0)).abs() / p.mean(0) < 0.01, "{mc} vs {}", p.mean(0));
    }

    #[test]
    fn keyed_weights_follow_the_same_law() {
        let p = PowerLawParams::new(2.5);
        let s = CounterStream::new(3, crate::rng::Stream::Weight);
        let ws = keyed_weights(&p, 100_000, &s).unwrap();
        let fit = fit_tail_exponent(ws.as_slice(), 4.0).unwrap();
        assert!((fit.exponent - 1.5).abs() < 0.1);
        assert_eq!(ws, keyed_weights(&p, 100_000, &s).unwrap());
    }

    #[test]
    fn hill_recovers_exact_pareto_exponent() {
        let xs = pareto(1.5, 100_000, 21);
        let fit = fit_tail_exponent(&xs, 2.0).unwrap();
        assert!((fit.exponent - 1.5).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn hill_on_sampled_weights() {
        let ws = sample_weights(&PowerLawParams::new(2.5), 100_000, &mut rng(2)).unwrap();
        let fit = fit_tail_exponent(ws.as_slice(), 4.0).unwrap();
        assert!((fit.exponent - 1.5).abs() < 0.1, "{fit:?}");
    }

    #[test]
    fn hill_rejects_degenerate_input() {
        assert!(matches!(
            fit_tail_exponent(&[5.0; 500], 5.0),
            Err(GirgError::DegenerateTail)
        ));
        assert!(matches!(
            fit_tail_exponent(&[5.0; 500], 1.0),
            Err(GirgError::DegenerateTail)
        ));
        assert!(matches!(
            fit_tail_exponent(&[1.0; 50], 1.0),
            Err(GirgError::InsufficientTail { found: 50, .. })
        ));
    }

    #[test]
    fn hill_confidence_interval_coverage() {
        let covered = (0..100)
            .filter(|&seed| {
                let fit = fit_tail_exponent(&pareto(1.5, 2_000, 1_000 + seed), 1.0).unwrap();
                (fit.exponent - 1.5).abs() <= fit.half_width
            })
            .count();
        assert!(covered >= 90, "{covered}/100");
    }

    #[test]
    fn tail_count_is_monotone() {
        let ws = sample_weights(&PowerLawParams::new(2.7), 5_000, &mut rng(8)).unwrap();
        let mut prev = usize::MAX;
        for i in 0..200 {
            let c = tail_count(&ws, 1.0 + i as f64 * 0.25);
            assert!(c <= prev);
            prev = c;
        }
    }
}
