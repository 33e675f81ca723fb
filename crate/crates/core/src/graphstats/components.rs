use crate::graph::{GirgGraph, VertexId};

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Returns `true` if `a` and `b` were in different sets.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }
}

/// Component label of every vertex.
///
/// Labels are ordered by decreasing component size, ties broken by the
/// smallest vertex id in the component, so the giant always has label 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabeling {
    labels: Vec<u32>,
    sizes: Vec<usize>,
}

impl ComponentLabeling {
    pub fn label(&self, v: VertexId) -> u32 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Component sizes, largest first.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn giant_label(&self) -> u32 {
        0
    }

    pub fn giant_size(&self) -> usize {
        self.sizes.first().copied().unwrap_or(0)
    }

    /// Sorted members of component `label`.
    pub fn members(&self, label: u32) -> Vec<VertexId> {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l == label)
            .map(|(v, _)| v as VertexId)
            .collect()
    }

    pub fn giant(&self) -> Vec<VertexId> {
        self.members(0)
    }
}

pub fn connected_components(g: &GirgGraph) -> ComponentLabeling {
    let n = g.n();
    let mut uf = UnionFind::new(n);
    for (u, v) in g.edges() {
        uf.union(u, v);
    }
    // root -> (size, smallest member); vertices are scanned in id order
    let mut first_seen = vec![u32::MAX; n];
    let mut order: Vec<(usize, u32, u32)> = Vec::new();
    for v in 0..n as u32 {
        let r = uf.find(v);
        if first_seen[r as usize] == u32::MAX {
            first_seen[r as usize] = v;
            order.push((uf.size[r as usize] as usize, v, r));
        }
    }
    order.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut label_of_root = vec![0u32; n];
    for (label, &(_, _, root)) in order.iter().enumerate() {
        label_of_root[root as usize] = label as u32;
    }
    let labels = (0..n as u32)
        .map(|v| label_of_root[uf.find(v) as usize])
        .collect();
    ComponentLabeling {
        labels,
        sizes: order.iter().map(|c| c.0).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_has_singletons() {
        let c = connected_components(&GirgGraph::unembedded(5, &[]).unwrap());
        assert_eq!(c.sizes(), &[1, 1, 1, 1, 1]);
        assert_eq!(c.giant(), vec![0]);
    }

    #[test]
    fn path_is_one_component() {
        let g = GirgGraph::unembedded(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let c = connected_components(&g);
        assert_eq!(c.sizes(), &[4]);
        assert_eq!(c.giant_size(), 4);
    }

    #[test]
    fn ties_go_to_the_smallest_vertex() {
        let g = GirgGraph::unembedded(7, &[(5, 6), (1, 2), (3, 4), (4, 0)]).unwrap();
        let c = connected_components(&g);
        assert_eq!(c.sizes(), &[3, 2, 2]);
        assert_eq!(c.giant(), vec![0, 3, 4]);
        assert_eq!(c.members(1), vec![1, 2]);
        assert_eq!(c.members(2), vec![5, 6]);
        assert_eq!(c.sizes().iter().sum::<usize>(), 7);
    }
}
