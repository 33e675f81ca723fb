//! Torus arithmetic, the two distance functions and their ball volumes.
//!
//! Positions live on `T^d = R^d / Z^d` with every coordinate stored reduced to
//! `[0, 1)`. Two distances are supported, both built from the per-axis torus
//! difference `|a - b|_T = min(|a - b|, 1 - |a - b|)`:
//!
//! * [`DistanceKind::EuclideanMax`]: the maximum over axes (the sup norm, a
//!   representative of the norm-induced geometries; its balls are cubes with
//!   volume `(2r)^d`).
//! * [`DistanceKind::Mcd`]: the minimum over axes (minimum component distance).
//!   Its exact ball volume is `1 - (1 - 2r)^d`; the linearized variant uses
//!   `V(r) = r`, which differs by at most a factor `2d`.

use rand::Rng;

use crate::error::{invalid, GirgError, Result};

/// Default number of rejection attempts allowed per ball sample.
pub const BALL_REJECTION_BUDGET: usize = 10_000;

/// Reduces a real number to the torus representative in `[0, 1)`.
#[inline]
pub fn reduce(x: f64) -> f64 {
    let r = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Per-axis torus difference for coordinates already in `[0, 1)`.
#[inline(always)]
pub(crate) fn circ_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// `|a - b|_T`. Inputs outside `[0, 1)` are reduced modulo 1 first.
pub fn torus_diff(a: f64, b: f64) -> f64 {
    circ_diff(reduce(a), reduce(b))
}

/// A point of the torus with all coordinates in `[0, 1)`.
///
/// A point may carry fewer coordinates than the ambient dimension; the phased
/// sampler uses this for vertices whose last coordinate is still unrevealed.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    /// Builds a point, reducing every coordinate modulo 1.
    pub fn new(coords: Vec<f64>) -> Self {
        Self {
            coords: coords.into_iter().map(reduce).collect(),
        }
    }

    pub fn origin(dim: usize) -> Self {
        Self {
            coords: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, axis: usize) -> Option<f64> {
        self.coords.get(axis).copied()
    }

    /// Copy restricted to the first `k` axes.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            coords: self.coords[..k.min(self.coords.len())].to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistanceKind {
    EuclideanMax,
    Mcd,
}

impl DistanceKind {
    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::EuclideanMax => "euclidean_max",
            DistanceKind::Mcd => "mcd",
        }
    }
}

impl std::fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DistanceKind {
    type Err = GirgError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean_max" | "euclidean" | "eu" => Ok(DistanceKind::EuclideanMax),
            "mcd" | "min" => Ok(DistanceKind::Mcd),
            other => Err(invalid(format!("unknown geometry `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VolumeMode {
    Exact,
    /// `V(r) = min(r, 1/2)`; only meaningful for the minimum component distance.
    Linearized,
}

impl std::str::FromStr for VolumeMode {
    type Err = GirgError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(VolumeMode::Exact),
            "linearized" | "linear" => Ok(VolumeMode::Linearized),
            other => Err(invalid(format!("unknown volume mode `{other}`"))),
        }
    }
}

/// Distance function plus dimension of the torus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometrySpec {
    kind: DistanceKind,
    dim: usize,
    volume_mode: VolumeMode,
}

impl GeometrySpec {
    pub fn new(kind: DistanceKind, dim: usize, volume_mode: VolumeMode) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("torus dimension must be at least 1"));
        }
        if kind == DistanceKind::EuclideanMax && volume_mode == VolumeMode::Linearized {
            return Err(invalid(
                "linearized volume is only defined for the minimum component distance",
            ));
        }
        Ok(Self {
            kind,
            dim,
            volume_mode,
        })
    }

    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::new(DistanceKind::EuclideanMax, dim, VolumeMode::Exact)
    }

    /// Minimum component distance with the linearized volume `V(r) = r`.
    pub fn mcd(dim: usize) -> Result<Self> {
        Self::new(DistanceKind::Mcd, dim, VolumeMode::Linearized)
    }

    pub fn mcd_exact(dim: usize) -> Result<Self> {
        Self::new(DistanceKind::Mcd, dim, VolumeMode::Exact)
    }

    /// The natural volume mode for a kind: linearized for MCD, exact otherwise.
    pub fn with_default_volume(kind: DistanceKind, dim: usize) -> Result<Self> {
        match kind {
            DistanceKind::Mcd => Self::mcd(dim),
            DistanceKind::EuclideanMax => Self::euclidean(dim),
        }
    }

    pub fn kind(&self) -> DistanceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn volume_mode(&self) -> VolumeMode {
        self.volume_mode
    }

    /// Same distance with exact volumes.
    pub fn exact(&self) -> Self {
        Self {
            volume_mode: VolumeMode::Exact,
            ..*self
        }
    }

    pub fn distance(&self, x: &TorusPoint, y: &TorusPoint) -> Result<f64> {
        for p in [x, y] {
            if p.dim() != self.dim {
                return Err(GirgError::DimensionMismatch {
                    expected: self.dim,
                    found: p.dim(),
                });
            }
        }
        Ok(self.distance_coords(x.coords(), y.coords()))
    }

    /// Distance between raw coordinate slices of equal length (reduced coordinates).
    #[inline]
    pub(crate) fn distance_coords(&self, x: &[f64], y: &[f64]) -> f64 {
        let diffs = x.iter().zip(y).map(|(&a, &b)| circ_diff(a, b));
        match self.kind {
            DistanceKind::Mcd => diffs.fold(f64::INFINITY, f64::min),
            DistanceKind::EuclideanMax => diffs.fold(0.0, f64::max),
        }
    }

    /// Volume of the ball of radius `r`, in `[0, 1]`.
    pub fn volume(&self, r: f64) -> f64 {
        let r = r.max(0.0).min(0.5);
        match (self.kind, self.volume_mode) {
            (DistanceKind::Mcd, VolumeMode::Exact) => 1.0 - (1.0 - 2.0 * r).powi(self.dim as i32),
            (DistanceKind::Mcd, VolumeMode::Linearized) => r,
            (DistanceKind::EuclideanMax, _) => (2.0 * r).powi(self.dim as i32).min(1.0),
        }
    }

    /// Exact Lebesgue measure of the ball, whatever the configured volume mode.
    pub fn exact_volume(&self, r: f64) -> f64 {
        self.exact().volume(r)
    }
}

/// Uniform point of `T^d`.
pub fn sample_point<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> TorusPoint {
    TorusPoint {
        coords: (0..dim).map(|_| rng.gen::<f64>()).collect(),
    }
}

/// Uniform point of the closed `eps`-ball around `center`, by rejection.
///
/// Proposals are drawn uniformly from the smallest axis-aligned region known to
/// contain the ball: the cube `center + [-eps, eps]^d` for the sup norm and the
/// whole torus for the minimum component distance (its balls are unions of
/// full-width slabs).
pub fn sample_in_ball<R: Rng + ?Sized>(
    geom: &GeometrySpec,
    center: &TorusPoint,
    eps: f64,
    rng: &mut R,
) -> Result<TorusPoint> {
    sample_in_ball_with_budget(geom, center, eps, BALL_REJECTION_BUDGET, rng)
}

pub fn sample_in_ball_with_budget<R: Rng + ?Sized>(
    geom: &GeometrySpec,
    center: &TorusPoint,
    eps: f64,
    budget: usize,
    rng: &mut R,
) -> Result<TorusPoint> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(invalid(format!("ball radius must lie in (0, 1/2], got {eps}")));
    }
    if center.dim() != geom.dim() {
        return Err(GirgError::DimensionMismatch {
            expected: geom.dim(),
            found: center.dim(),
        });
    }
    let (proposal_volume, cube) = match geom.kind() {
        DistanceKind::EuclideanMax => ((2.0 * eps).powi(geom.dim() as i32).min(1.0), true),
        DistanceKind::Mcd => (1.0, false),
    };
    let ball_volume = geom.exact_volume(eps);
    let expected_attempts = proposal_volume / ball_volume;
    if !(ball_volume > 0.0) || expected_attempts > budget as f64 {
        return Err(GirgError::BallTooSmall {
            eps,
            expected_attempts,
            budget,
        });
    }
    let mut coords = vec![0.0; geom.dim()];
    for _ in 0..budget {
        for (c, &mid) in coords.iter_mut().zip(center.coords()) {
            *c = if cube {
                reduce(mid + eps * (2.0 * rng.gen::<f64>() - 1.0))
            } else {
                rng.gen::<f64>()
            };
        }
        if geom.distance_coords(center.coords(), &coords) <= eps {
            return Ok(TorusPoint { coords });
        }
    }
    Err(GirgError::RejectionBudgetExhausted { eps, budget })
}
