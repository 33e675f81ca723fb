//! The sampled graph: vertex weights, torus positions and a compressed
//! symmetric adjacency structure.

use crate::error::{invalid, Result};
use crate::geometry::TorusPoint;
use crate::weights::WeightSequence;

/// Vertex ids are dense `0..n`.
pub type VertexId = u32;

/// An undirected simple graph with GIRG vertex attributes.
///
/// Adjacency is stored in CSR form; every neighbor list is sorted and the
/// structure is symmetric without self-loops or duplicates.
#[derive(Clone, Debug, PartialEq)]
pub struct GirgGraph {
    dim: usize,
    weights: WeightSequence,
    positions: Vec<TorusPoint>,
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
}

impl GirgGraph {
    /// Builds a graph from an edge list. Edges may come in any orientation and
    /// order; self-loops and repeated pairs are rejected.
    ///
    /// `positions[v]` may hold fewer than `dim` coordinates (an unrevealed tail).
    pub fn from_edges(
        dim: usize,
        weights: WeightSequence,
        positions: Vec<TorusPoint>,
        edges: &[(VertexId, VertexId)],
    ) -> Result<Self> {
        let n = weights.len();
        if positions.len() != n {
            return Err(invalid(format!(
                "{} positions for {n} weights",
                positions.len()
            )));
        }
        if let Some(p) = positions.iter().find(|p| p.dim() > dim) {
            return Err(invalid(format!("position with {} axes in a {dim}-torus", p.dim())));
        }
        let mut canon: Vec<(VertexId, VertexId)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(invalid(format!("self-loop at vertex {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            canon.push(if u < v { (u, v) } else { (v, u) });
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self::from_sorted_unique(dim, weights, positions, &canon))
    }

    /// `edges` must be sorted, unique, with `u < v < n`.
    pub(crate) fn from_sorted_unique(
        dim: usize,
        weights: WeightSequence,
        positions: Vec<TorusPoint>,
        edges: &[(VertexId, VertexId)],
    ) -> Self {
        let n = weights.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0; offsets[n]];
        // With edges in lexicographic order, vertex x first receives its smaller
        // neighbors (as the second endpoint) and then its larger ones, both in
        // increasing order, so every list comes out sorted.
        for &(u, v) in edges {
            neighbors[fill[u as usize]] = v;
            fill[u as usize] += 1;
            neighbors[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        debug_assert!((0..n).all(|v| neighbors[offsets[v]..offsets[v + 1]]
            .windows(2)
            .all(|w| w[0] < w[1])));
        Self {
            dim,
            weights,
            positions,
            offsets,
            neighbors,
        }
    }

    /// A graph without geometry: unit weights, every vertex at the origin of `T^1`.
    pub fn unembedded(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        Self::from_edges(
            1,
            WeightSequence::uniform(n, 1.0),
            vec![TorusPoint::origin(1); n],
            edges,
        )
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn positions(&self) -> &[TorusPoint] {
        &self.positions
    }

    /// Whether every vertex has all `dim` coordinates.
    pub fn is_fully_embedded(&self) -> bool {
        self.positions.iter().all(|p| p.dim() == self.dim)
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n() as VertexId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn edge_list(&self) -> Vec<(VertexId, VertexId)> {
        self.edges().collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n() as VertexId).map(|v| self.degree(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_is_symmetric_and_sorted() {
        let g = GirgGraph::unembedded(5, &[(3, 1), (0, 4), (1, 0), (2, 4), (4, 1)]).unwrap();
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.neighbors(1), &[0, 3, 4]);
        assert_eq!(g.neighbors(4), &[0, 1, 2]);
        for (u, v) in g.edges() {
            assert!(u < v);
            assert!(g.has_edge(u, v) && g.has_edge(v, u));
        }
        let total: usize = g.degrees().iter().sum();
        assert_eq!(total, 2 * g.edge_count());
        assert_eq!(g.edge_list(), vec![(0, 1), (0, 4), (1, 3), (1, 4), (2, 4)]);
    }

    #[test]
    fn rejects_loops_duplicates_and_out_of_range() {
        assert!(GirgGraph::unembedded(3, &[(1, 1)]).is_err());
        assert!(GirgGraph::unembedded(3, &[(0, 1), (1, 0)]).is_err());
        assert!(GirgGraph::unembedded(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn empty_graph() {
        let g = GirgGraph::unembedded(4, &[]).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(g.degrees().iter().all(|&d| d == 0));
        assert!(g.is_fully_embedded());
    }
}
