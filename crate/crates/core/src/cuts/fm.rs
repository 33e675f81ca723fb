//! Fiduccia-Mattheyses passes on a graph with vertex and edge weights.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{GirgGraph, VertexId};

/// Compact weighted graph in local indices `0..len`.
#[derive(Clone, Debug)]
pub(crate) struct WeightedGraph {
    pub(crate) offsets: Vec<usize>,
    pub(crate) targets: Vec<u32>,
    pub(crate) edge_weights: Vec<u32>,
    pub(crate) vertex_weights: Vec<u32>,
}

impl WeightedGraph {
    /// Subgraph of `g` induced on the sorted set `target`, unit weights.
    pub(crate) fn induced(g: &GirgGraph, target: &[VertexId]) -> Self {
        let mut local = vec![u32::MAX; g.n()];
        for (i, &v) in target.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut offsets = Vec::with_capacity(target.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &v in target {
            targets.extend(
                g.neighbors(v)
                    .iter()
                    .map(|&u| local[u as usize])
                    .filter(|&i| i != u32::MAX),
            );
            offsets.push(targets.len());
        }
        Self {
            offsets,
            edge_weights: vec![1; targets.len()],
            targets,
            vertex_weights: vec![1; target.len()],
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.vertex_weights.len()
    }

    pub(crate) fn total_weight(&self) -> u64 {
        self.vertex_weights.iter().map(|&w| u64::from(w)).sum()
    }

    #[inline]
    pub(crate) fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub(crate) fn edges(&self, i: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.targets[r.clone()]
            .iter()
            .zip(&self.edge_weights[r])
            .map(|(&j, &w)| (j as usize, i64::from(w)))
    }

    pub(crate) fn cut(&self, side: &[bool]) -> u64 {
        let twice: i64 = (0..self.len())
            .map(|i| {
                self.edges(i)
                    .filter(|&(j, _)| side[j] != side[i])
                    .map(|(_, w)| w)
                    .sum::<i64>()
            })
            .sum();
        (twice / 2) as u64
    }

    pub(crate) fn side_weights(&self, side: &[bool]) -> [u64; 2] {
        let mut w = [0u64; 2];
        for (i, &s) in side.iter().enumerate() {
            w[s as usize] += u64::from(self.vertex_weights[i]);
        }
        w
    }
}

/// Limits of one refinement run.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PassLimits {
    pub(crate) max_passes: usize,
    pub(crate) stall_limit: Option<usize>,
}

/// Runs passes on `side` in place, keeping both side weights at least
/// `min_weight`, and returns the final cut weight.
///
/// Each pass moves every vertex at most once, always taking the best gain
/// (lowest index on ties) among admissible moves, then rolls back to the best
/// prefix. Stops after a pass without improvement.
pub(crate) fn refine(g: &WeightedGraph, side: &mut [bool], min_weight: u64, limits: PassLimits) -> u64 {
    let k = g.len();
    let mut cut = g.cut(side) as i64;
    let mut gain = vec![0i64; k];
    let mut locked = vec![false; k];
    let mut moves: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..limits.max_passes {
        let mut weights = g.side_weights(side);
        for i in 0..k {
            gain[i] = g
                .edges(i)
                .map(|(j, w)| if side[j] != side[i] { w } else { -w })
                .sum();
        }
        locked.iter_mut().for_each(|l| *l = false);
        let mut heaps: [BinaryHeap<(i64, Reverse<u32>)>; 2] = Default::default();
        for i in 0..k {
            heaps[side[i] as usize].push((gain[i], Reverse(i as u32)));
        }
        moves.clear();
        let start = cut;
        let (mut best, mut best_len, mut stall) = (cut, 0usize, 0usize);
        loop {
            let mut pick: Option<(i64, Reverse<u32>)> = None;
            for s in 0..2 {
                while let Some(&(gv, Reverse(v))) = heaps[s].peek() {
                    let v = v as usize;
                    if locked[v] || gain[v] != gv {
                        heaps[s].pop();
                    } else {
                        break;
                    }
                }
                if let Some(&top) = heaps[s].peek() {
                    let wv = u64::from(g.vertex_weights[top.1 .0 as usize]);
                    // a side whose best move would break the balance sits out this step
                    if weights[s] < min_weight + wv {
                        continue;
                    }
                    if pick.map_or(true, |p| top > p) {
                        pick = Some(top);
                    }
                }
            }
            let Some((gv, Reverse(v))) = pick else { break };
            let v = v as usize;
            let from = side[v];
            heaps[from as usize].pop();
            locked[v] = true;
            side[v] = !from;
            let wv = u64::from(g.vertex_weights[v]);
            weights[from as usize] -= wv;
            weights[!from as usize] += wv;
            cut -= gv;
            for (j, w) in g.edges(v) {
                if locked[j] {
                    continue;
                }
                gain[j] += if side[j] == from { 2 * w } else { -2 * w };
                heaps[side[j] as usize].push((gain[j], Reverse(j as u32)));
            }
            moves.push(v);
            if cut < best {
                (best, best_len, stall) = (cut, moves.len(), 0);
            } else {
                stall += 1;
                if limits.stall_limit.is_some_and(|l| stall >= l) {
                    break;
                }
            }
        }
        for &v in &moves[best_len..] {
            side[v] = !side[v];
        }
        cut = best;
        if best >= start {
            break;
        }
    }
    cut as u64
}
