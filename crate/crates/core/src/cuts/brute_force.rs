use super::{min_side_size, normalize_target, Bipartition, CutMethod, CutResult};
use super::fm::WeightedGraph;
use crate::error::{invalid, GirgError, Result};
use crate::graph::{GirgGraph, VertexId};

/// Largest target set the exhaustive search accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Exact minimum cut of `target` over all splits with both sides at least
/// `delta * n`. Ties go to the lexicographically smallest side vector.
pub fn brute_force_min_cut(g: &GirgGraph, target: &[VertexId], delta: f64) -> Result<CutResult> {
    if !(delta >= 0.0 && delta < 0.5) {
        return Err(invalid(format!("delta must lie in [0, 1/2), got {delta}")));
    }
    let target = normalize_target(g, target)?;
    let k = target.len();
    if k > BRUTE_FORCE_LIMIT {
        return Err(GirgError::OracleTooLarge {
            size: k,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let m = min_side_size(delta, g.n());
    if k < 2 * m || k < 2 {
        return Ok(CutResult::infeasible(CutMethod::BruteForce, delta, g.n()));
    }
    let local = WeightedGraph::induced(g, &target);
    let adj: Vec<u32> = (0..k)
        .map(|i| local.neighbors(i).iter().fold(0u32, |acc, &j| acc | (1 << j)))
        .collect();
    // member 0 stays on side false; bit i of the mask puts member i on side true
    let full = (1u32 << k) - 1;
    let mut best: Option<(usize, u32)> = None;
    for mask in (2u32..=full).step_by(2) {
        let ones = mask.count_ones() as usize;
        if ones < m || k - ones < m {
            continue;
        }
        let mut cross = 0;
        let mut rest = !mask & full;
        while rest != 0 {
            let i = rest.trailing_zeros();
            cross += (adj[i as usize] & mask).count_ones() as usize;
            rest &= rest - 1;
        }
        let key = (cross, mask.reverse_bits());
        if best.map_or(true, |b| key < b) {
            best = Some(key);
        }
    }
    let Some((cross, rev)) = best else {
        return Ok(CutResult::infeasible(CutMethod::BruteForce, delta, g.n()));
    };
    let mask = rev.reverse_bits();
    let side = (0..k).map(|i| mask >> i & 1 == 1).collect();
    Ok(CutResult {
        method: CutMethod::BruteForce,
        delta,
        n: g.n(),
        partition: Some(Bipartition::canonical(target, side)),
        cross_edges: cross,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::{cross_edges, Bipartition};

    fn cycle(n: u32) -> GirgGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        GirgGraph::unembedded(n as usize, &edges).unwrap()
    }

    /// Recursive enumeration of every split, independent of the bitmask loop.
    fn reference(g: &GirgGraph, target: &[u32], m: usize) -> Option<usize> {
        fn go(g: &GirgGraph, t: &[u32], m: usize, i: usize, a: &mut Vec<u32>, b: &mut Vec<u32>, best: &mut Option<usize>) {
            if i == t.len() {
                if a.len() >= m && b.len() >= m && !a.is_empty() && !b.is_empty() {
                    let c = cross_edges(g, &Bipartition::from_sides(a, b).unwrap());
                    *best = Some(best.map_or(c, |x| x.min(c)));
                }
                return;
            }
            a.push(t[i]);
            go(g, t, m, i + 1, a, b, best);
            a.pop();
            b.push(t[i]);
            go(g, t, m, i + 1, a, b, best);
            b.pop();
        }
        let mut best = None;
        go(g, target, m, 0, &mut Vec::new(), &mut Vec::new(), &mut best);
        best
    }

    #[test]
    fn path_and_cycle_examples() {
        let path = GirgGraph::unembedded(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = brute_force_min_cut(&path, &[0, 1, 2, 3], 0.25).unwrap();
        assert_eq!(r.cross_edges, 1);
        let c6 = cycle(6);
        let r = brute_force_min_cut(&c6, &[0, 1, 2, 3, 4, 5], 2.0 / 6.0).unwrap();
        assert_eq!(r.cross_edges, 2);
        assert!(r.partition.unwrap().min_side() >= 2);
    }

    #[test]
    fn size_limit_and_infeasibility() {
        let g = cycle(21);
        let all: Vec<u32> = (0..21).collect();
        assert!(matches!(
            brute_force_min_cut(&g, &all, 0.1),
            Err(GirgError::OracleTooLarge { size: 21, limit: 20 })
        ));
        let r = brute_force_min_cut(&g, &[0, 1, 2], 0.1).unwrap();
        assert!(!r.feasible());
    }

    #[test]
    fn agrees_with_recursive_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let k = rng.gen_range(2..=11u32);
            let mut edges = Vec::new();
            for u in 0..k {
                for v in (u + 1)..k {
                    if rng.gen_bool(0.35) {
                        edges.push((u, v));
                    }
                }
            }
            let g = GirgGraph::unembedded(k as usize + 3, &edges).unwrap();
            let t: Vec<u32> = (0..k).collect();
            let delta = rng.gen_range(0.0..0.3);
            let m = min_side_size(delta, g.n());
            let r = brute_force_min_cut(&g, &t, delta).unwrap();
            let expected = reference(&g, &t, m);
            assert_eq!(r.feasible(), expected.is_some());
            if let Some(e) = expected {
                assert_eq!(r.cross_edges, e);
                assert_eq!(r.cross_edges, cross_edges(&g, r.partition.as_ref().unwrap()));
            }
        }
    }
}
