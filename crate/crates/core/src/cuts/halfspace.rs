use super::{cross_edges, min_side_size, normalize_target, Bipartition, CutMethod, CutResult};
use super::fm::WeightedGraph;
use crate::error::{invalid, GirgError, Result};
use crate::graph::{GirgGraph, VertexId};

/// Largest number of boundary positions scanned exhaustively.
const GRID: usize = 2048;
/// Coarse optima that get refined.
const CANDIDATES: usize = 8;
const MAX_REFINEMENTS: usize = 32;

/// Best cut by two parallel hyperplanes orthogonal to `axis`.
///
/// The target vertices are ordered by their coordinate on `axis`; on the
/// circle, a pair of hyperplanes splits them into an arc and its complement.
/// Hyperplane positions are only considered between consecutive vertices.
/// Up to 2048 target vertices every arc is evaluated. Beyond that the arcs
/// between 2048 evenly spaced boundaries are scanned and the best few are
/// refined by alternately re-optimizing one end with the other fixed.
pub fn geometric_halfspace_cut(
    g: &GirgGraph,
    target: &[VertexId],
    axis: usize,
    delta: f64,
) -> Result<CutResult> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(invalid(format!("delta must lie in (0, 1/2), got {delta}")));
    }
    if axis >= g.dim() {
        return Err(invalid(format!("axis {axis} out of range for a {}-torus", g.dim())));
    }
    let target = normalize_target(g, target)?;
    let method = CutMethod::Halfspace(axis);
    let positions = g.positions();
    let mut keyed = Vec::with_capacity(target.len());
    for &v in &target {
        let x = positions[v as usize]
            .coord(axis)
            .ok_or(GirgError::MissingCoordinate { vertex: v, axis })?;
        keyed.push((x, v));
    }
    let k = target.len();
    let m = min_side_size(delta, g.n());
    if k < 2 * m {
        return Ok(CutResult::infeasible(method, delta, g.n()));
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let by_rank: Vec<VertexId> = keyed.iter().map(|&(_, v)| v).collect();

    // adjacency in rank space
    let local = WeightedGraph::induced(g, &target);
    let mut rank_of_local = vec![0u32; k];
    for (r, &v) in by_rank.iter().enumerate() {
        rank_of_local[target.binary_search(&v).unwrap()] = r as u32;
    }
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); k];
    for i in 0..k {
        adj[rank_of_local[i] as usize] = local
            .neighbors(i)
            .iter()
            .map(|&j| rank_of_local[j as usize])
            .collect();
    }

    let sweep = Sweep { adj: &adj, k, m };
    let mut best: Option<(u64, usize, usize)> = None;
    for (c, a, b) in coarse_candidates(&adj, k, m) {
        let (c, a, b) = sweep.refine(c, a, b);
        if best.map_or(true, |(bc, ba, bb)| (c, a, b) < (bc, ba, bb)) {
            best = Some((c, a, b));
        }
    }
    let Some((cross, a, len)) = best else {
        return Ok(CutResult::infeasible(method, delta, g.n()));
    };
    let mut inside = vec![false; k];
    for off in 0..len {
        inside[(a + off) % k] = true;
    }
    let (mut one, mut other) = (Vec::new(), Vec::new());
    for (r, &v) in by_rank.iter().enumerate() {
        if inside[r] {
            one.push(v);
        } else {
            other.push(v);
        }
    }
    let partition = Bipartition::from_sides(&one, &other)?;
    let recount = cross_edges(g, &partition);
    debug_assert_eq!(recount as u64, cross);
    Ok(CutResult {
        method,
        delta,
        n: g.n(),
        partition: Some(partition),
        cross_edges: recount,
    })
}

/// Best arcs `(cross, start, length)` between evenly spaced rank boundaries.
fn coarse_candidates(adj: &[Vec<u32>], k: usize, m: usize) -> Vec<(u64, usize, usize)> {
    let cells = k.min(GRID);
    let start = |b: usize| b * k / cells;
    let mut bucket = vec![0usize; k];
    for b in 0..cells {
        for r in start(b)..start(b + 1) {
            bucket[r] = b;
        }
    }
    // prefix[i][j] = directed edge ends from buckets < i into buckets < j
    let w = cells + 1;
    let mut prefix = vec![0u64; w * w];
    for (r, nbrs) in adj.iter().enumerate() {
        let p = bucket[r];
        for &s in nbrs {
            prefix[(p + 1) * w + bucket[s as usize] + 1] += 1;
        }
    }
    for i in 1..w {
        for j in 1..w {
            prefix[i * w + j] +=
                prefix[(i - 1) * w + j] + prefix[i * w + j - 1] - prefix[(i - 1) * w + j - 1];
        }
    }
    let block = |i: usize, j: usize| {
        prefix[j * w + j] + prefix[i * w + i] - prefix[i * w + j] - prefix[j * w + i]
    };
    let row = |i: usize| prefix[i * w + cells];
    let mut top: Vec<(u64, usize, usize)> = Vec::with_capacity(CANDIDATES + 1);
    for i in 0..cells {
        for j in (i + 1)..=cells {
            let size = start(j) - start(i);
            if size < m || k - size < m {
                continue;
            }
            let cross = row(j) - row(i) - block(i, j);
            let cand = (cross, start(i), size);
            if top.len() < CANDIDATES || cand < top[top.len() - 1] {
                let pos = top.partition_point(|c| *c < cand);
                top.insert(pos, cand);
                top.truncate(CANDIDATES);
            }
        }
    }
    top
}

struct Sweep<'a> {
    adj: &'a [Vec<u32>],
    k: usize,
    m: usize,
}

impl Sweep<'_> {
    /// Best arc starting at rank `a`, as `(cross, length)`.
    fn from_start(&self, a: usize) -> (u64, usize) {
        let k = self.k;
        let offset = |x: usize| (x + k - a) % k;
        self.scan(|len| (a + len) % k, offset)
    }

    /// Best arc ending just before rank `b`, as `(cross, length)`.
    fn to_end(&self, b: usize) -> (u64, usize) {
        let k = self.k;
        let offset = |x: usize| (b + k - 1 - x) % k;
        self.scan(|len| (b + 2 * k - 1 - len) % k, offset)
    }

    /// Grows the arc one vertex at a time; `nth(len)` is the vertex added as
    /// the arc goes from `len` to `len + 1` vertices, `offset` its position.
    fn scan(&self, nth: impl Fn(usize) -> usize, offset: impl Fn(usize) -> usize) -> (u64, usize) {
        let mut cross: i64 = 0;
        let mut best = (u64::MAX, 0);
        for len in 0..(self.k - self.m) {
            let r = nth(len);
            let inner = self.adj[r]
                .iter()
                .filter(|&&s| offset(s as usize) < len)
                .count() as i64;
            cross += self.adj[r].len() as i64 - 2 * inner;
            let size = len + 1;
            if size >= self.m && (cross as u64, size) < best {
                best = (cross as u64, size);
            }
        }
        best
    }

    /// Alternating one-end re-optimization of the arc `[a, a + len)`.
    fn refine(&self, mut cross: u64, mut a: usize, mut len: usize) -> (u64, usize, usize) {
        let k = self.k;
        for _ in 0..MAX_REFINEMENTS {
            let mut improved = false;
            let (c, l) = self.from_start(a);
            if c < cross {
                (cross, len, improved) = (c, l, true);
            }
            let b = (a + len) % k;
            let (c, l) = self.to_end(b);
            if c < cross {
                (cross, len, improved) = (c, l, true);
                a = (b + k - l) % k;
            }
            if !improved {
                break;
            }
        }
        (cross, a, len)
    }
}
