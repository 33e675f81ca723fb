use rayon::prelude::*;

use super::{
    draw_coordinates, draw_weights, row_blocks, sample_direct_with, ModelParams, PairStreams,
    Schedule,
};
use crate::error::{invalid, GirgError, Result};
use crate::geometry::{circ_diff, DistanceKind, TorusPoint, VolumeMode};
use crate::graph::{GirgGraph, VertexId};
use crate::graphstats::connected_components;
use crate::rng::{pair_index, CounterStream, Stream};

/// Everything the six-phase sampler reveals along the way.
///
/// Vertex sets are sorted by id. In a snapshot, vertices whose last coordinate
/// is still unrevealed carry only their first `d - 1` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasedTrace {
    /// Graph built from the first `d - 1` coordinates and `Y1` alone.
    pub g1: GirgGraph,
    /// Largest component of `g1`.
    pub giant1: Vec<VertexId>,
    /// Low-weight subset of `giant1` revealed last.
    pub f_set: Vec<VertexId>,
    /// `g1` plus all edges among vertices outside `giant1`.
    pub g2: GirgGraph,
    /// `g2` plus all edges among vertices outside `f_set`.
    pub g3: GirgGraph,
    /// The final graph.
    pub g4: GirgGraph,
    pub f_param: f64,
    pub b_prime: f64,
    /// Observed `|giant1| / n`, standing in for the unknown giant density.
    pub s_max: f64,
    /// Inclusion probability `4 f / s_max`, clamped to `[0, 1]`.
    pub inclusion_probability: f64,
    /// Order in which the last coordinates were revealed.
    pub order: Vec<VertexId>,
}

impl PhasedTrace {
    /// Vertices finalized after the step that produced snapshot `g2` (2), `g3`
    /// (3) or `g4` (4).
    pub fn finalized(&self, snapshot: usize) -> &[VertexId] {
        let n = self.order.len();
        let outside = n - self.giant1.len();
        let end = match snapshot {
            2 => outside,
            3 => n - self.f_set.len(),
            _ => n,
        };
        &self.order[..end]
    }
}

/// Six-phase sampler for the minimum component distance with `d >= 2`.
///
/// Shares every random variate with [`sample_direct`](super::sample_direct),
/// so `g4` is edge-for-edge the graph the direct sampler returns.
pub fn sample_phased(params: &ModelParams, f: f64) -> Result<PhasedTrace> {
    sample_phased_with(params, f, Schedule::default())
}

pub fn sample_phased_with(params: &ModelParams, f: f64, schedule: Schedule) -> Result<PhasedTrace> {
    params.validate()?;
    let geom = params.geometry;
    let d = geom.dim();
    if geom.kind() != DistanceKind::Mcd {
        return Err(GirgError::Unsupported(
            "the phased sampler needs the minimum component distance".into(),
        ));
    }
    if d < 2 {
        return Err(GirgError::Unsupported(
            "the phased sampler needs at least two axes".into(),
        ));
    }
    if geom.volume_mode() != VolumeMode::Linearized {
        return Err(GirgError::Unsupported(
            "the phased sampler needs the linearized volume".into(),
        ));
    }
    if !(0.0..1.0).contains(&f) {
        return Err(invalid(format!("f must lie in [0, 1), got {f}")));
    }

    let n = params.n;
    let weights = draw_weights(params)?;
    let coords = draw_coordinates(params);
    let w = weights.as_slice();
    let pairs = PairStreams::new(params.seed);
    let kernel = params.kernel();
    let lead = d - 1;
    let run = |blocks: Vec<std::ops::Range<usize>>,
               scan: &(dyn Fn(std::ops::Range<usize>) -> Vec<(VertexId, VertexId)> + Sync)| {
        let chunks: Vec<Vec<(VertexId, VertexId)>> = match schedule {
            Schedule::Parallel => blocks.into_par_iter().map(scan).collect(),
            _ => blocks.into_iter().map(scan).collect(),
        };
        chunks.concat()
    };

    // Phase 1: first d - 1 coordinates and Y1 only.
    let phase1 = |rows: std::ops::Range<usize>| {
        let mut out = Vec::new();
        for v in rows {
            let xv = &coords[v * d..v * d + lead];
            let base = (v as u64) * (v as u64).saturating_sub(1) / 2;
            for u in 0..v {
                let xu = &coords[u * d..u * d + lead];
                let r = xu
                    .iter()
                    .zip(xv)
                    .map(|(&a, &b)| circ_diff(a, b))
                    .fold(f64::INFINITY, f64::min);
                if kernel.admits(pairs.y1(base + u as u64), w[u] * w[v], r) {
                    out.push((u as VertexId, v as VertexId));
                }
            }
        }
        out
    };
    let mut g1_edges = run(row_blocks(n, schedule), &phase1);
    g1_edges.sort_unstable();
    let truncated: Vec<TorusPoint> = coords
        .chunks(d)
        .map(|row| TorusPoint::new(row[..lead].to_vec()))
        .collect();
    let g1 = GirgGraph::from_sorted_unique(d, weights.clone(), truncated.clone(), &g1_edges);

    // Phase 2: weight bound and candidate subset.
    let giant1 = connected_components(&g1).giant();
    let s_max = giant1.len() as f64 / n as f64;
    let mut giant_weights: Vec<f64> = giant1.iter().map(|&v| w[v as usize]).collect();
    giant_weights.sort_by(f64::total_cmp);
    let b_prime = giant_weights[giant_weights.len().div_ceil(2) - 1].floor() + 1.0;
    let inclusion_probability = (4.0 * f / s_max).clamp(0.0, 1.0);
    let coins = CounterStream::new(params.seed, Stream::Selection);
    let candidate =
        |v: usize| w[v] < b_prime && coins.uniform(v as u64) < inclusion_probability;

    // Phase 3: restrict to the giant and fix the revelation order.
    let f_set: Vec<VertexId> = giant1
        .iter()
        .copied()
        .filter(|&v| candidate(v as usize))
        .collect();
    let mut stage = vec![4u8; n];
    for &v in &giant1 {
        stage[v as usize] = 5;
    }
    for &v in &f_set {
        stage[v as usize] = 6;
    }
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.sort_by_key(|&v| stage[v as usize]);

    // Phases 4-6: reveal the last coordinate of each vertex in order and test
    // every pair with an earlier vertex against the full criterion.
    let steps = |rows: std::ops::Range<usize>| {
        let mut out = Vec::new();
        for k in rows {
            let v = order[k] as usize;
            let xv = &coords[v * d..(v + 1) * d];
            for &u in &order[..k] {
                let u = u as usize;
                let dist = geom.distance_coords(&coords[u * d..(u + 1) * d], xv);
                let y = pairs.y_min(pair_index(u as u32, v as u32));
                if kernel.admits(y, w[u] * w[v], geom.volume(dist)) {
                    out.push((u.min(v) as VertexId, u.max(v) as VertexId));
                }
            }
        }
        out
    };
    let step_edges = run(row_blocks(n, schedule), &steps);

    let mut by_stage: [Vec<(VertexId, VertexId)>; 3] = Default::default();
    for (u, v) in step_edges {
        let s = stage[u as usize].max(stage[v as usize]);
        by_stage[(s - 4) as usize].push((u, v));
    }
    let mut acc = g1_edges;
    let mut snapshots = Vec::with_capacity(3);
    for (i, extra) in by_stage.into_iter().enumerate() {
        acc.extend(extra);
        acc.sort_unstable();
        acc.dedup();
        let last_stage = 4 + i as u8;
        let positions: Vec<TorusPoint> = (0..n)
            .map(|v| {
                if stage[v] <= last_stage {
                    TorusPoint::new(coords[v * d..(v + 1) * d].to_vec())
                } else {
                    truncated[v].clone()
                }
            })
            .collect();
        snapshots.push(GirgGraph::from_sorted_unique(d, weights.clone(), positions, &acc));
    }
    let g4 = snapshots.pop().unwrap();
    let g3 = snapshots.pop().unwrap();
    let g2 = snapshots.pop().unwrap();

    Ok(PhasedTrace {
        g1,
        giant1,
        f_set,
        g2,
        g3,
        g4,
        f_param: f,
        b_prime,
        s_max,
        inclusion_probability,
        order,
    })
}

/// Runs both samplers on the same streams.
pub fn sample_coupled(params: &ModelParams, f: f64) -> Result<(GirgGraph, PhasedTrace)> {
    let trace = sample_phased(params, f)?;
    let direct = sample_direct_with(params, Schedule::default())?;
    Ok((direct, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeometrySpec;
    use crate::sampler::{edge_probability, p_lower, sample_direct};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(n: usize, seed: u64) -> ModelParams {
        ModelParams::new(GeometrySpec::mcd(2).unwrap(), n, 1.5, 2.5).with_seed(seed)
    }

    fn edges_subset(a: &GirgGraph, b: &GirgGraph) -> bool {
        a.edges().all(|(u, v)| b.has_edge(u, v))
    }

    #[test]
    fn final_graph_equals_the_direct_sample() {
        for seed in 0..100 {
            let (direct, trace) = sample_coupled(&params(50, seed), 0.05).unwrap();
            assert_eq!(direct.edge_list(), trace.g4.edge_list(), "seed {seed}");
            assert_eq!(direct.positions(), trace.g4.positions());
        }
        for d in [3, 4] {
            let p = ModelParams::new(GeometrySpec::mcd(d).unwrap(), 120, 2.0, 2.3).with_seed(5);
            let (direct, trace) = sample_coupled(&p, 0.1).unwrap();
            assert_eq!(direct.edge_list(), trace.g4.edge_list());
        }
    }

    #[test]
    fn single_vertex() {
        let (direct, trace) = sample_coupled(&params(1, 0), 0.05).unwrap();
        assert_eq!(direct.edge_count(), 0);
        assert_eq!(trace.g4.edge_count(), 0);
        assert_eq!(trace.giant1, vec![0]);
    }

    #[test]
    fn snapshots_are_nested() {
        for seed in 0..20 {
            let t = sample_phased(&params(300, seed), 0.05).unwrap();
            assert!(edges_subset(&t.g1, &t.g2));
            assert!(edges_subset(&t.g2, &t.g3));
            assert!(edges_subset(&t.g3, &t.g4));
            // edges of g4 between finalized vertices are already in the snapshot
            for (snap, g) in [(2, &t.g2), (3, &t.g3)] {
                let mut done = vec![false; t.g4.n()];
                for &v in t.finalized(snap) {
                    done[v as usize] = true;
                }
                for (u, v) in t.g4.edges() {
                    if done[u as usize] && done[v as usize] {
                        assert!(g.has_edge(u, v));
                    }
                }
                for (v, p) in g.positions().iter().enumerate() {
                    assert_eq!(p.dim(), if done[v] { 2 } else { 1 });
                }
            }
            assert!(t.g1.positions().iter().all(|p| p.dim() == 1));
            assert!(t.g4.is_fully_embedded());
        }
    }

    #[test]
    fn selected_subset_lies_in_the_giant_below_the_bound() {
        for seed in 0..20 {
            let t = sample_phased(&params(400, seed), 0.05).unwrap();
            let w = t.g4.weights().as_slice();
            for v in &t.f_set {
                assert!(t.giant1.binary_search(v).is_ok());
                assert!(w[*v as usize] < t.b_prime);
            }
            let below = t.giant1.iter().filter(|&&v| w[v as usize] < t.b_prime).count();
            assert!(2 * below >= t.giant1.len());
            // B' - 1 no longer leaves half of the giant below it
            let below_prev = t
                .giant1
                .iter()
                .filter(|&&v| w[v as usize] < t.b_prime - 1.0)
                .count();
            assert!(2 * below_prev < t.giant1.len());
            assert_eq!(t.order.len(), 400);
            let mut sorted = t.order.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..400).collect::<Vec<_>>());
        }
    }

    #[test]
    fn zero_f_makes_the_last_phase_empty() {
        for seed in 0..10 {
            let t = sample_phased(&params(300, seed), 0.0).unwrap();
            assert!(t.f_set.is_empty());
            assert_eq!(t.inclusion_probability, 0.0);
            assert_eq!(t.g3.edge_list(), t.g4.edge_list());
        }
    }

    #[test]
    fn unsupported_geometries_are_rejected() {
        let one = ModelParams::new(GeometrySpec::mcd(1).unwrap(), 10, 1.5, 2.5);
        assert!(matches!(sample_phased(&one, 0.1), Err(GirgError::Unsupported(_))));
        let eu = ModelParams::new(GeometrySpec::euclidean(2).unwrap(), 10, 1.5, 2.5);
        assert!(sample_phased(&eu, 0.1).is_err());
        let exact = ModelParams::new(GeometrySpec::mcd_exact(2).unwrap(), 10, 1.5, 2.5);
        assert!(sample_phased(&exact, 0.1).is_err());
        assert!(sample_phased(&params(10, 0), 1.0).is_err());
    }

    #[test]
    fn schedule_does_not_matter() {
        let p = params(257, 9);
        let a = sample_phased_with(&p, 0.05, Schedule::Sequential).unwrap();
        let b = sample_phased_with(&p, 0.05, Schedule::Blocked { rows: 7, reverse: true }).unwrap();
        let c = sample_phased_with(&p, 0.05, Schedule::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn either_lower_bound_implies_the_insertion_criterion() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..1_000_000 {
            let d = rng.gen_range(2..=4);
            let p = ModelParams::new(GeometrySpec::mcd(d).unwrap(), rng.gen_range(10..100_000), 1.0 + rng.gen::<f64>() * 3.0, 2.5)
                .with_prefactor(rng.gen_range(0.05..=1.0));
            let (wu, wv) = (1.0 + rng.gen::<f64>() * 30.0, 1.0 + rng.gen::<f64>() * 30.0);
            let diffs: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() * 0.5).collect();
            let r1 = diffs[..d - 1].iter().copied().fold(f64::INFINITY, f64::min);
            let dist = r1.min(diffs[d - 1]);
            let (y1, y2): (f64, f64) = (rng.gen(), rng.gen());
            let lb = y1 < p_lower(&p, wu, wv, r1) || y2 < p_lower(&p, wu, wv, diffs[d - 1]);
            if lb {
                assert!(y1.min(y2) < edge_probability(&p, wu, wv, dist));
            }
        }
    }

    #[test]
    fn close_pairs_connect_with_full_probability() {
        // plant the pair (0, 1) at distance <= w_min^2 / n along the last axis
        let trials = 20_000;
        let n = 1_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut hits = 0;
        for seed in 0..trials {
            let p = params(n, seed).with_prefactor(0.8);
            let w = draw_weights(&p).unwrap();
            let (wu, wv) = (w.as_slice()[0], w.as_slice()[1]);
            let dist = rng.gen::<f64>() / n as f64;
            let y = PairStreams::new(seed).y_min(pair_index(0, 1));
            if y < edge_probability(&p, wu, wv, dist) {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        assert!(freq >= 0.8 - 0.02, "{freq}");
        // and the sampler itself links such pairs whenever they occur
        let p = params(n, 3);
        let g = sample_direct(&p).unwrap();
        let pos = g.positions();
        for (u, v) in (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))) {
            if p.geometry.distance(&pos[u], &pos[v]).unwrap() <= 1.0 / n as f64 {
                assert!(g.has_edge(u as u32, v as u32));
            }
        }
    }
}
