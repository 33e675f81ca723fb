//! Balanced cuts of a target vertex set: semantics, three searchers and the
//! phase-inflation check.
//!
//! A cut is feasible for `delta` when both sides hold at least `delta * n`
//! vertices, where `n` counts every vertex of the graph rather than only the
//! target set. Only edges with both endpoints in the target set are counted.

mod brute_force;
mod destroy;
mod fm;
mod halfspace;
mod local_search;
mod multilevel;

pub use brute_force::{brute_force_min_cut, BRUTE_FORCE_LIMIT};
pub use destroy::{destroy_check, DestroyReport, InflatedCut};
pub use halfspace::geometric_halfspace_cut;
pub use local_search::{local_search_cut, refine_cut, LocalSearchConfig};
pub use multilevel::multilevel_cut;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{invalid, Result};
use crate::graph::{GirgGraph, VertexId};

/// Two-sided split of a sorted target set.
///
/// Stored canonically: the smallest member is on side `false`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    members: Vec<VertexId>,
    side: Vec<bool>,
}

impl Bipartition {
    /// `members` must be strictly increasing; `side[i]` is the side of `members[i]`.
    pub fn new(members: Vec<VertexId>, side: Vec<bool>) -> Result<Self> {
        if members.len() != side.len() {
            return Err(invalid(format!(
                "{} members but {} side flags",
                members.len(),
                side.len()
            )));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("bipartition members must be strictly increasing"));
        }
        let b = Self::canonical(members, side);
        let (a, c) = b.sizes();
        if a == 0 || c == 0 {
            return Err(invalid("both sides of a bipartition must be nonempty"));
        }
        Ok(b)
    }

    /// Builds the split from its two sides.
    pub fn from_sides(a: &[VertexId], b: &[VertexId]) -> Result<Self> {
        let mut tagged: Vec<(VertexId, bool)> = a
            .iter()
            .map(|&v| (v, false))
            .chain(b.iter().map(|&v| (v, true)))
            .collect();
        tagged.sort_unstable();
        let (members, side) = tagged.into_iter().unzip();
        Self::new(members, side)
    }

    pub(crate) fn canonical(members: Vec<VertexId>, mut side: Vec<bool>) -> Self {
        if side.first() == Some(&true) {
            side.iter_mut().for_each(|s| *s = !*s);
        }
        Self { members, side }
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn sides(&self) -> &[bool] {
        &self.side
    }

    pub fn side_of(&self, v: VertexId) -> Option<bool> {
        self.members.binary_search(&v).ok().map(|i| self.side[i])
    }

    /// Sizes of side `false` and side `true`.
    pub fn sizes(&self) -> (usize, usize) {
        let b = self.side.iter().filter(|&&s| s).count();
        (self.side.len() - b, b)
    }

    pub fn min_side(&self) -> usize {
        let (a, b) = self.sizes();
        a.min(b)
    }
}

/// Number of edges of `g` with one endpoint on each side of `b`.
pub fn cross_edges(g: &GirgGraph, b: &Bipartition) -> usize {
    let mut label = vec![0u8; g.n()];
    for (&v, &s) in b.members.iter().zip(&b.side) {
        label[v as usize] = 1 + s as u8;
    }
    b.members
        .iter()
        .filter(|&&u| label[u as usize] == 1)
        .map(|&u| {
            g.neighbors(u)
                .iter()
                .filter(|&&v| label[v as usize] == 2)
                .count()
        })
        .sum()
}

/// Smallest admissible side for `delta` and `n` vertices (at least 1).
pub fn min_side_size(delta: f64, n: usize) -> usize {
    ((delta * n as f64 - 1e-9).ceil() as usize).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutMethod {
    /// Parallel hyperplane pair orthogonal to the given axis.
    Halfspace(usize),
    /// Half-space cut on the given axis, improved by local moves.
    RefinedHalfspace(usize),
    LocalSearch,
    Multilevel,
    BruteForce,
}

impl fmt::Display for CutMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutMethod::Halfspace(axis) => write!(f, "halfspace_axis{axis}"),
            CutMethod::RefinedHalfspace(axis) => write!(f, "refined_halfspace_axis{axis}"),
            CutMethod::LocalSearch => f.write_str("local_search"),
            CutMethod::Multilevel => f.write_str("multilevel"),
            CutMethod::BruteForce => f.write_str("brute_force"),
        }
    }
}

/// Outcome of one cut search.
#[derive(Clone, Debug, PartialEq)]
pub struct CutResult {
    pub method: CutMethod,
    pub delta: f64,
    /// Vertex count of the whole graph.
    pub n: usize,
    /// `None` when no feasible split exists.
    pub partition: Option<Bipartition>,
    pub cross_edges: usize,
}

impl CutResult {
    pub(crate) fn infeasible(method: CutMethod, delta: f64, n: usize) -> Self {
        Self {
            method,
            delta,
            n,
            partition: None,
            cross_edges: 0,
        }
    }

    pub fn feasible(&self) -> bool {
        self.partition.is_some()
    }

    /// `cross_edges / n`, for feasible results.
    pub fn eta_achieved(&self) -> Option<f64> {
        self.feasible().then(|| self.cross_edges as f64 / self.n as f64)
    }

    /// Orders feasible results by cross edges, then lexicographically by sides.
    pub fn better_than(&self, other: &CutResult) -> bool {
        match (&self.partition, &other.partition) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(a), Some(b)) => match self.cross_edges.cmp(&other.cross_edges) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => a.side < b.side,
            },
        }
    }
}

/// The best of several results, or `None` for an empty input.
pub fn best_cut<'a>(results: impl IntoIterator<Item = &'a CutResult>) -> Option<&'a CutResult> {
    results
        .into_iter()
        .fold(None, |best: Option<&CutResult>, r| match best {
            Some(b) if !r.better_than(b) => Some(b),
            _ => Some(r),
        })
}

/// Sorted, duplicate-free copy of a target set, checked against `g`.
pub(crate) fn normalize_target(g: &GirgGraph, target: &[VertexId]) -> Result<Vec<VertexId>> {
    let mut t = target.to_vec();
    t.sort_unstable();
    t.dedup();
    if let Some(&v) = t.iter().find(|&&v| v as usize >= g.n()) {
        return Err(invalid(format!("vertex {v} out of range for n = {}", g.n())));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> GirgGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        GirgGraph::unembedded(n as usize, &edges).unwrap()
    }

    #[test]
    fn cross_edge_examples() {
        let path = GirgGraph::unembedded(3, &[(0, 1), (1, 2)]).unwrap();
        let b = Bipartition::from_sides(&[0], &[1, 2]).unwrap();
        assert_eq!(cross_edges(&path, &b), 1);
        let c6 = cycle(6);
        let b = Bipartition::from_sides(&[0, 1, 2], &[3, 4, 5]).unwrap();
        assert_eq!(cross_edges(&c6, &b), 2);
        let empty = GirgGraph::unembedded(6, &[]).unwrap();
        assert_eq!(cross_edges(&empty, &b), 0);
    }

    #[test]
    fn only_edges_inside_the_target_count() {
        let c6 = cycle(6);
        let b = Bipartition::from_sides(&[0, 1], &[2, 3]).unwrap();
        assert_eq!(cross_edges(&c6, &b), 1);
    }

    #[test]
    fn bipartitions_are_canonical_and_validated() {
        let a = Bipartition::from_sides(&[3, 1], &[0, 2]).unwrap();
        let b = Bipartition::from_sides(&[0, 2], &[1, 3]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.side_of(0), Some(false));
        assert_eq!(a.side_of(1), Some(true));
        assert_eq!(a.side_of(7), None);
        assert_eq!(a.sizes(), (2, 2));
        assert!(Bipartition::from_sides(&[0, 1], &[]).is_err());
        assert!(Bipartition::from_sides(&[0, 1], &[1]).is_err());
    }

    #[test]
    fn min_side_uses_a_ceiling() {
        assert_eq!(min_side_size(0.1, 100), 10);
        assert_eq!(min_side_size(0.1, 101), 11);
        assert_eq!(min_side_size(0.0, 5), 1);
        assert_eq!(min_side_size(0.3, 10), 3);
    }

    #[test]
    fn best_cut_prefers_feasible_then_fewer_edges() {
        let p = |a: &[u32], b: &[u32]| Some(Bipartition::from_sides(a, b).unwrap());
        let r = |cross, partition| CutResult {
            method: CutMethod::LocalSearch,
            delta: 0.1,
            n: 4,
            partition,
            cross_edges: cross,
        };
        let results = [
            CutResult::infeasible(CutMethod::BruteForce, 0.1, 4),
            r(3, p(&[0, 1], &[2, 3])),
            r(2, p(&[0, 2], &[1, 3])),
            r(2, p(&[0, 1, 2], &[3])),
        ];
        let best = best_cut(&results).unwrap();
        assert_eq!(best.cross_edges, 2);
        assert_eq!(best.partition, p(&[0, 1, 2], &[3]));
        assert_eq!(best_cut(&results[..1]).unwrap().feasible(), false);
        assert!(best_cut(&[]).is_none());
    }
}
