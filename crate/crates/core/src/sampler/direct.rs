use rayon::prelude::*;

use super::{
    draw_coordinates, draw_weights, points_from_rows, row_blocks, Kernel, ModelParams, PairStreams,
    Schedule,
};
use crate::error::Result;
use crate::geometry::{circ_diff, DistanceKind, VolumeMode};
use crate::graph::{GirgGraph, VertexId};

/// Samples a graph by testing every vertex pair.
///
/// Edge `{u, v}` is present iff `min(Y1_uv, Y2_uv) < p_uv`. Runs in O(n^2)
/// time; the result depends only on `params` (including the seed).
pub fn sample_direct(params: &ModelParams) -> Result<GirgGraph> {
    sample_direct_with(params, Schedule::default())
}

pub fn sample_direct_with(params: &ModelParams, schedule: Schedule) -> Result<GirgGraph> {
    params.validate()?;
    let d = params.dim();
    let weights = draw_weights(params)?;
    let coords = draw_coordinates(params);
    let pairs = PairStreams::new(params.seed);
    let kernel = params.kernel();
    let geom = params.geometry;
    let w = weights.as_slice();

    let scan = |rows: std::ops::Range<usize>| -> Vec<(VertexId, VertexId)> {
        let block = Block {
            rows,
            d,
            coords: &coords,
            w,
            pairs: &pairs,
            kernel: &kernel,
        };
        match (geom.kind(), geom.volume_mode(), d) {
            (DistanceKind::Mcd, VolumeMode::Linearized, 2) => block.scan(min_axis::<2>, |r| r.min(0.5)),
            (DistanceKind::Mcd, VolumeMode::Linearized, 3) => block.scan(min_axis::<3>, |r| r.min(0.5)),
            (DistanceKind::EuclideanMax, _, 1) => block.scan(max_axis::<1>, |r| geom.volume(r)),
            (DistanceKind::EuclideanMax, _, 2) => {
                block.scan(max_axis::<2>, |r| (4.0 * r * r).min(1.0))
            }
            _ => block.scan(|x, y| geom.distance_coords(x, y), |r| geom.volume(r)),
        }
    };

    let blocks = row_blocks(params.n, schedule);
    let chunks: Vec<Vec<(VertexId, VertexId)>> = match schedule {
        Schedule::Parallel => blocks.into_par_iter().map(scan).collect(),
        _ => blocks.into_iter().map(scan).collect(),
    };
    let mut edges: Vec<(VertexId, VertexId)> = chunks.concat();
    edges.sort_unstable();
    Ok(GirgGraph::from_sorted_unique(
        d,
        weights,
        points_from_rows(&coords, d),
        &edges,
    ))
}

/// Rows `rows` of the lower-triangular pair scan.
struct Block<'a> {
    rows: std::ops::Range<usize>,
    d: usize,
    coords: &'a [f64],
    w: &'a [f64],
    pairs: &'a PairStreams,
    kernel: &'a Kernel,
}

impl Block<'_> {
    #[inline(always)]
    fn scan(
        self,
        dist: impl Fn(&[f64], &[f64]) -> f64,
        volume: impl Fn(f64) -> f64,
    ) -> Vec<(VertexId, VertexId)> {
        let d = self.d;
        let mut out = Vec::new();
        for v in self.rows {
            let xv = &self.coords[v * d..(v + 1) * d];
            let wv = self.w[v];
            let base = (v as u64) * (v as u64).saturating_sub(1) / 2;
            for (u, xu) in self.coords[..v * d].chunks_exact(d).enumerate() {
                let y = self.pairs.y_min(base + u as u64);
                if self.kernel.admits(y, self.w[u] * wv, volume(dist(xu, xv))) {
                    out.push((u as VertexId, v as VertexId));
                }
            }
        }
        out
    }
}

#[inline(always)]
fn min_axis<const D: usize>(x: &[f64], y: &[f64]) -> f64 {
    let mut r = circ_diff(x[0], y[0]);
    for i in 1..D {
        r = r.min(circ_diff(x[i], y[i]));
    }
    r
}

#[inline(always)]
fn max_axis<const D: usize>(x: &[f64], y: &[f64]) -> f64 {
    let mut r = circ_diff(x[0], y[0]);
    for i in 1..D {
        r = r.max(circ_diff(x[i], y[i]));
    }
    r
}
