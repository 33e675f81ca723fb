use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::fm::{refine, PassLimits, WeightedGraph};
use super::{min_side_size, normalize_target, Bipartition, CutMethod, CutResult};
use crate::error::{invalid, Result};
use crate::graph::{GirgGraph, VertexId};
use crate::rng::{CounterStream, Stream};

const RESTART_STREAM: u64 = 0x6c6f_6361_6c73;

/// Settings shared by the move-based searchers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalSearchConfig {
    pub restarts: usize,
    /// Passes per refinement; a pass that does not improve the cut ends it.
    pub max_passes: usize,
    /// Ends a pass after this many consecutive moves without a new best.
    /// `None` lets every pass run until all vertices are locked.
    pub stall_limit: Option<usize>,
    pub seed: u64,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_passes: 50,
            stall_limit: None,
            seed: 0,
        }
    }
}

impl LocalSearchConfig {
    pub fn with_restarts(self, restarts: usize) -> Self {
        Self { restarts, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub(crate) fn limits(&self) -> PassLimits {
        PassLimits {
            max_passes: self.max_passes,
            stall_limit: self.stall_limit,
        }
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if !(delta >= 0.0 && delta < 0.5) {
        return Err(invalid(format!("delta must lie in [0, 1/2), got {delta}")));
    }
    Ok(())
}

/// Keeps the best of several `(cut, sides)` outcomes on `target`.
pub(crate) fn pick_best(
    method: CutMethod,
    delta: f64,
    n: usize,
    target: &[VertexId],
    runs: Vec<(u64, Vec<bool>)>,
) -> CutResult {
    let mut best = CutResult::infeasible(method, delta, n);
    for (cut, side) in runs {
        let r = CutResult {
            method,
            delta,
            n,
            partition: Some(Bipartition::canonical(target.to_vec(), side)),
            cross_edges: cut as usize,
        };
        if r.better_than(&best) {
            best = r;
        }
    }
    best
}

/// Kernighan-Lin style bisection of `target` with Fiduccia-Mattheyses moves.
///
/// Each restart starts from a uniformly random even split and runs passes in
/// which every vertex moves at most once, always picking the best gain (lowest
/// id on ties) among moves that keep both sides at `delta * n` or more. The
/// pass is then rolled back to its best prefix. Restart `i` depends only on
/// `(seed, i)`, so adding restarts can only improve the result.
pub fn local_search_cut(
    g: &GirgGraph,
    target: &[VertexId],
    delta: f64,
    config: &LocalSearchConfig,
) -> Result<CutResult> {
    check_delta(delta)?;
    let target = normalize_target(g, target)?;
    let k = target.len();
    let m = min_side_size(delta, g.n());
    if k < 2 * m || k < 2 {
        return Ok(CutResult::infeasible(CutMethod::LocalSearch, delta, g.n()));
    }
    let local = WeightedGraph::induced(g, &target);
    let streams = CounterStream::new(config.seed, Stream::Aux(RESTART_STREAM));
    let runs = (0..config.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = streams.rng(i as u64);
            let mut order: Vec<usize> = (0..k).collect();
            order.shuffle(&mut rng);
            let mut side = vec![false; k];
            for &i in &order[..k / 2] {
                side[i] = true;
            }
            let cut = refine(&local, &mut side, m as u64, config.limits());
            (cut, side)
        })
        .collect();
    Ok(pick_best(CutMethod::LocalSearch, delta, g.n(), &target, runs))
}

/// Runs the same passes starting from `start` instead of a random split.
///
/// The result is tagged `method` and never has more cross edges than `start`.
pub fn refine_cut(
    g: &GirgGraph,
    start: &Bipartition,
    delta: f64,
    method: CutMethod,
    config: &LocalSearchConfig,
) -> Result<CutResult> {
    check_delta(delta)?;
    let target = start.members().to_vec();
    let m = min_side_size(delta, g.n());
    if start.min_side() < m {
        return Err(invalid(format!(
            "starting split has a side of {} < {m} vertices",
            start.min_side()
        )));
    }
    let local = WeightedGraph::induced(g, &target);
    let mut side = start.sides().to_vec();
    let cut = refine(&local, &mut side, m as u64, config.limits());
    Ok(pick_best(method, delta, g.n(), &target, vec![(cut, side)]))
}
