use std::path::PathBuf;

use crate::cuts::LocalSearchConfig;
use crate::error::{invalid, Result};
use crate::geometry::{DistanceKind, GeometrySpec};
use crate::rng::mix64;
use crate::sampler::ModelParams;

/// Smallest graph a sweep accepts.
pub const MIN_SWEEP_N: usize = 16;

/// Which searchers a sweep runs and how hard they try.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutSettings {
    /// Half-space sweeps on every axis.
    pub halfspace: bool,
    pub local_search: bool,
    pub multilevel: bool,
    /// Restarts, pass and stall limits; the seed is replaced per cell.
    pub search: LocalSearchConfig,
}

impl Default for CutSettings {
    fn default() -> Self {
        Self {
            halfspace: true,
            local_search: true,
            multilevel: true,
            search: LocalSearchConfig {
                restarts: 4,
                stall_limit: Some(2_000),
                ..LocalSearchConfig::default()
            },
        }
    }
}

/// A grid of (geometry, n, seed) cells analysed with common parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kinds: Vec<DistanceKind>,
    pub dim: usize,
    pub ns: Vec<usize>,
    pub alpha: f64,
    pub beta: f64,
    pub prefactor: f64,
    pub deltas: Vec<f64>,
    /// Low-weight fraction used by phased runs.
    pub f: f64,
    pub seeds: Vec<u64>,
    pub cuts: CutSettings,
    /// Cutoff of the degree tail fit.
    pub degree_cutoff: f64,
    /// Where the CSV (and persisted graphs) go; `None` keeps results in memory.
    pub out_dir: Option<PathBuf>,
    pub persist_graphs: bool,
    /// Wall-clock timing makes the CSV non-reproducible, so it is opt-in.
    pub record_runtime: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kinds: vec![DistanceKind::EuclideanMax, DistanceKind::Mcd],
            dim: 2,
            ns: (12..=16).map(|k| 1 << k).collect(),
            alpha: 1.5,
            beta: 2.5,
            prefactor: 1.0,
            deltas: vec![0.1],
            f: 0.02,
            seeds: (0..5).collect(),
            cuts: CutSettings::default(),
            degree_cutoff: 8.0,
            out_dir: None,
            persist_graphs: false,
            record_runtime: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kinds.is_empty() || self.ns.is_empty() || self.deltas.is_empty() {
            return Err(invalid("a sweep needs at least one geometry, n and delta"));
        }
        if self.seeds.is_empty() {
            return Err(invalid("a sweep needs at least one seed"));
        }
        if let Some(n) = self.ns.iter().find(|&&n| n < MIN_SWEEP_N) {
            return Err(invalid(format!("n = {n} is below the minimum {MIN_SWEEP_N}")));
        }
        if let Some(d) = self.deltas.iter().find(|&&d| !(d > 0.0 && d < 0.5)) {
            return Err(invalid(format!("delta must lie in (0, 1/2), got {d}")));
        }
        if !(0.0..1.0).contains(&self.f) {
            return Err(invalid(format!("f must lie in [0, 1), got {}", self.f)));
        }
        if self.persist_graphs && self.out_dir.is_none() {
            return Err(invalid("persisting graphs needs an output directory"));
        }
        for &kind in &self.kinds {
            for &n in &self.ns {
                self.params(kind, n, 0)?.validate()?;
            }
        }
        Ok(())
    }

    /// Model parameters of one cell.
    pub fn params(&self, kind: DistanceKind, n: usize, seed: u64) -> Result<ModelParams> {
        let geometry = GeometrySpec::with_default_volume(kind, self.dim)?;
        Ok(ModelParams::new(geometry, n, self.alpha, self.beta)
            .with_prefactor(self.prefactor)
            .with_seed(cell_seed(seed, n)))
    }
}

/// Model seed of the cell `(seed, n)`, so that different sizes draw
/// independent graphs from the same user seed.
pub fn cell_seed(seed: u64, n: usize) -> u64 {
    mix64(seed ^ mix64(n as u64))
}
