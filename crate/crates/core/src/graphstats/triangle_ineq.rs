use rand::Rng;

use crate::error::{invalid, Result};
use crate::geometry::{sample_in_ball, GeometrySpec, TorusPoint};

/// Monte Carlo estimate of `Pr[dist(x1, x2) <= C eps]` for two independent
/// uniform points of the `eps`-ball, plus the volume ratio `V(eps) / V(C eps)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleEstimate {
    pub estimate: f64,
    /// Normal-approximation 95% half-width of the estimate.
    pub half_width: f64,
    pub volume_ratio: f64,
    pub samples: usize,
}

pub const MIN_TRIANGLE_SAMPLES: usize = 1_000;

/// The ball is centered at the origin; the distances are translation invariant.
pub fn stochastic_triangle_estimate<R: Rng + ?Sized>(
    geom: &GeometrySpec,
    eps: f64,
    c: f64,
    samples: usize,
    rng: &mut R,
) -> Result<TriangleEstimate> {
    if samples < MIN_TRIANGLE_SAMPLES {
        return Err(invalid(format!(
            "need at least {MIN_TRIANGLE_SAMPLES} samples, got {samples}"
        )));
    }
    if !(c > 0.0) {
        return Err(invalid(format!("C must be positive, got {c}")));
    }
    let center = TorusPoint::origin(geom.dim());
    let mut hits = 0usize;
    for _ in 0..samples {
        let x1 = sample_in_ball(geom, &center, eps, rng)?;
        let x2 = sample_in_ball(geom, &center, eps, rng)?;
        if geom.distance(&x1, &x2)? <= c * eps {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok(TriangleEstimate {
        estimate: p,
        half_width: 1.96 * (p * (1.0 - p) / samples as f64).sqrt(),
        volume_ratio: geom.volume(eps) / geom.volume(c * eps),
        samples,
    })
}
