use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fm::{refine, WeightedGraph};
use super::local_search::{check_delta, pick_best};
use super::{min_side_size, normalize_target, CutMethod, CutResult, LocalSearchConfig};
use crate::error::Result;
use crate::graph::{GirgGraph, VertexId};
use crate::rng::{CounterStream, Stream};

const MULTILEVEL_STREAM: u64 = 0x6d75_6c74_696c;
/// Coarsening stops at this many vertices.
const COARSEST: usize = 160;
/// Coarsening also stops once a level shrinks by less than this fraction.
const MIN_SHRINK: f64 = 0.05;
const INITIAL_TRIES: usize = 12;

/// Multilevel bisection: heavy-edge matching down to a small graph, grown and
/// refined splits there, then projection and move-based refinement at every
/// finer level.
///
/// Restart `i` depends only on `(seed, i)`, and the best restart is kept.
pub fn multilevel_cut(
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
        return Ok(CutResult::infeasible(CutMethod::Multilevel, delta, g.n()));
    }
    let base = WeightedGraph::induced(g, &target);
    let streams = CounterStream::new(config.seed, Stream::Aux(MULTILEVEL_STREAM));
    let runs = (0..config.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = streams.rng(i as u64);
            bisect(&base, m as u64, config, &mut rng)
        })
        .collect();
    Ok(pick_best(CutMethod::Multilevel, delta, g.n(), &target, runs))
}

fn bisect(base: &WeightedGraph, min_weight: u64, config: &LocalSearchConfig, rng: &mut ChaCha8Rng) -> (u64, Vec<bool>) {
    let total = base.total_weight();
    // keeps every coarse vertex light enough for a balanced split to exist
    let cap = ((total - 2 * min_weight) / 4).clamp(1, (2 * total / COARSEST as u64).max(1)) as u32;
    let mut maps: Vec<Vec<u32>> = Vec::new();
    let mut levels: Vec<WeightedGraph> = vec![base.clone()];
    while levels.last().unwrap().len() > COARSEST {
        let fine = levels.last().unwrap();
        let (coarse, map) = coarsen(fine, cap, rng);
        if (coarse.len() as f64) > (1.0 - MIN_SHRINK) * fine.len() as f64 {
            break;
        }
        maps.push(map);
        levels.push(coarse);
    }

    let limits = config.limits();
    let coarsest = levels.last().unwrap();
    let mut best: Option<(u64, Vec<bool>)> = None;
    // region sizes from just above the minimum side up to an even split
    let targets = [total / 2, min_weight + min_weight / 8, (min_weight + total / 2) / 2];
    for t in 0..INITIAL_TRIES {
        let mut side = grow(coarsest, targets[t % targets.len()], rng);
        if !balanced(coarsest, &side, min_weight) {
            continue;
        }
        let cut = refine(coarsest, &mut side, min_weight, limits);
        if best.as_ref().map_or(true, |(c, _)| cut < *c) {
            best = Some((cut, side));
        }
    }
    let (mut cut, mut side) = best.unwrap_or_else(|| {
        // fall back to alternating vertices by weight
        let mut order: Vec<usize> = (0..coarsest.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(coarsest.vertex_weights[i]));
        let mut side = vec![false; coarsest.len()];
        let mut w = [0u64; 2];
        for i in order {
            let s = w[1] < w[0];
            side[i] = s;
            w[s as usize] += u64::from(coarsest.vertex_weights[i]);
        }
        let cut = refine(coarsest, &mut side, min_weight, limits);
        (cut, side)
    });
    for level in (0..maps.len()).rev() {
        let fine = &levels[level];
        side = maps[level].iter().map(|&c| side[c as usize]).collect();
        cut = refine(fine, &mut side, min_weight, limits);
    }
    (cut, side)
}

fn balanced(g: &WeightedGraph, side: &[bool], min_weight: u64) -> bool {
    let w = g.side_weights(side);
    w[0] >= min_weight && w[1] >= min_weight
}

/// Breadth-first region growing from a random vertex until `half` weight is
/// collected; unreachable leftovers are added in random order.
fn grow(g: &WeightedGraph, half: u64, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let n = g.len();
    let mut side = vec![false; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    let mut rest: Vec<usize> = (0..n).collect();
    rest.shuffle(rng);
    let start = rng.gen_range(0..n);
    rest.retain(|&v| v != start);
    rest.insert(0, start);
    let mut taken = 0u64;
    let mut next = rest.into_iter();
    while taken < half {
        let v = match queue.pop_front() {
            Some(v) => v,
            None => match next.by_ref().find(|&v| !seen[v]) {
                Some(v) => {
                    seen[v] = true;
                    v
                }
                None => break,
            },
        };
        side[v] = true;
        taken += u64::from(g.vertex_weights[v]);
        for &u in g.neighbors(v) {
            let u = u as usize;
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    side
}

/// Heavy-edge matching in random vertex order; returns the coarse graph and
/// the fine-to-coarse map.
fn coarsen(g: &WeightedGraph, cap: u32, rng: &mut ChaCha8Rng) -> (WeightedGraph, Vec<u32>) {
    let n = g.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut mate = vec![u32::MAX; n];
    for &u in &order {
        if mate[u] != u32::MAX {
            continue;
        }
        let wu = g.vertex_weights[u];
        let mut pick: Option<(i64, std::cmp::Reverse<u32>, std::cmp::Reverse<usize>)> = None;
        for (v, w) in g.edges(u) {
            if v == u || mate[v] != u32::MAX || wu + g.vertex_weights[v] > cap {
                continue;
            }
            let key = (w, std::cmp::Reverse(g.vertex_weights[v]), std::cmp::Reverse(v));
            if pick.map_or(true, |p| key > p) {
                pick = Some(key);
            }
        }
        match pick {
            Some((_, _, std::cmp::Reverse(v))) => {
                mate[u] = v as u32;
                mate[v] = u as u32;
            }
            None => mate[u] = u as u32,
        }
    }
    let mut map = vec![u32::MAX; n];
    let mut members: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        if map[u] != u32::MAX {
            continue;
        }
        let v = mate[u] as usize;
        let c = members.len() as u32;
        map[u] = c;
        map[v] = c;
        members.push((u, v));
    }
    let cn = members.len();
    let mut offsets = Vec::with_capacity(cn + 1);
    let mut targets = Vec::new();
    let mut edge_weights = Vec::new();
    let mut vertex_weights = Vec::with_capacity(cn);
    let mut acc = vec![0u32; cn];
    let mut touched: Vec<u32> = Vec::new();
    offsets.push(0);
    for (c, &(u, v)) in members.iter().enumerate() {
        let group: &[usize] = if u == v { &[u][..] } else { &[u, v][..] };
        let mut weight = 0;
        for &x in group {
            weight += g.vertex_weights[x];
            for (y, w) in g.edges(x) {
                let cy = map[y] as usize;
                if cy == c {
                    continue;
                }
                if acc[cy] == 0 {
                    touched.push(cy as u32);
                }
                acc[cy] += w as u32;
            }
        }
        touched.sort_unstable();
        for &cy in &touched {
            targets.push(cy);
            edge_weights.push(acc[cy as usize]);
            acc[cy as usize] = 0;
        }
        touched.clear();
        vertex_weights.push(weight);
        offsets.push(targets.len());
    }
    (
        WeightedGraph {
            offsets,
            targets,
            edge_weights,
            vertex_weights,
        },
        map,
    )
}
