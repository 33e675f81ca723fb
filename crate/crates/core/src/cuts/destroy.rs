use super::{cross_edges, geometric_halfspace_cut, local_search_cut, Bipartition, CutMethod, LocalSearchConfig};
use crate::error::Result;
use crate::graph::VertexId;
use crate::graphstats::connected_components;
use crate::sampler::PhasedTrace;

/// A cut found in `g3` and recounted in `g4`.
#[derive(Clone, Debug, PartialEq)]
pub struct InflatedCut {
    pub method: CutMethod,
    pub partition: Bipartition,
    pub g3_cross: usize,
    pub g4_cross: usize,
}

impl InflatedCut {
    pub fn gained(&self) -> usize {
        self.g4_cross - self.g3_cross
    }

    /// `g4_cross / g3_cross`; 1 when both are 0, infinite when only `g3_cross` is.
    pub fn inflation(&self) -> f64 {
        match (self.g3_cross, self.g4_cross) {
            (0, 0) => 1.0,
            (0, _) => f64::INFINITY,
            (a, b) => b as f64 / a as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DestroyReport {
    pub delta: f64,
    pub eta: f64,
    pub n: usize,
    /// Component of `g3` containing the Phase-1 giant.
    pub giant3: Vec<VertexId>,
    /// Best feasible cut of each searcher that could run on `g3`.
    pub cuts: Vec<InflatedCut>,
}

impl DestroyReport {
    /// Cuts with at most `eta * n` cross edges in `g3`.
    pub fn sparse_cuts(&self) -> impl Iterator<Item = &InflatedCut> {
        let limit = self.eta * self.n as f64;
        self.cuts.iter().filter(move |c| c.g3_cross as f64 <= limit)
    }

    /// Whether every sparse cut picked up at least one edge in `g4`.
    pub fn sparse_cuts_destroyed(&self) -> bool {
        self.sparse_cuts().all(|c| c.gained() >= 1)
    }
}

/// Searches `g3` for sparse balanced cuts of its giant and recounts them in `g4`.
///
/// Half-space cuts are tried on every axis whose coordinate is already
/// revealed for the whole component in `g3`.
pub fn destroy_check(
    trace: &PhasedTrace,
    delta: f64,
    eta: f64,
    search: &LocalSearchConfig,
) -> Result<DestroyReport> {
    let g3 = &trace.g3;
    let labels = connected_components(g3);
    let giant3 = match trace.giant1.first() {
        Some(&v) => labels.members(labels.label(v)),
        None => Vec::new(),
    };
    let mut found = Vec::new();
    for axis in 0..g3.dim() {
        let revealed = giant3
            .iter()
            .all(|&v| g3.positions()[v as usize].coord(axis).is_some());
        if revealed {
            found.push(geometric_halfspace_cut(g3, &giant3, axis, delta)?);
        }
    }
    found.push(local_search_cut(g3, &giant3, delta, search)?);
    let cuts = found
        .into_iter()
        .filter_map(|r| {
            let partition = r.partition?;
            let g4_cross = cross_edges(&trace.g4, &partition);
            Some(InflatedCut {
                method: r.method,
                g3_cross: r.cross_edges,
                g4_cross,
                partition,
            })
        })
        .collect();
    Ok(DestroyReport {
        delta,
        eta,
        n: g3.n(),
        giant3,
        cuts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeometrySpec;
    use crate::sampler::{sample_phased, ModelParams};

    fn params(seed: u64) -> ModelParams {
        ModelParams::new(GeometrySpec::mcd(2).unwrap(), 600, 1.5, 2.5).with_seed(seed)
    }

    #[test]
    fn recounts_never_drop() {
        let cfg = LocalSearchConfig::default().with_restarts(3);
        for seed in 0..5 {
            let t = sample_phased(&params(seed), 0.05).unwrap();
            let rep = destroy_check(&t, 0.1, 1.0, &cfg).unwrap();
            assert!(!rep.cuts.is_empty());
            for c in &rep.cuts {
                assert!(c.g4_cross >= c.g3_cross);
                assert!(c.inflation() >= 1.0);
                assert_eq!(c.g3_cross, cross_edges(&t.g3, &c.partition));
            }
            assert!(t.giant1.iter().all(|v| rep.giant3.binary_search(v).is_ok()));
        }
    }

    #[test]
    fn zero_f_gives_unit_inflation() {
        let t = sample_phased(&params(3), 0.0).unwrap();
        let rep = destroy_check(&t, 0.1, 1.0, &LocalSearchConfig::default().with_restarts(2)).unwrap();
        // both axes are revealed for every vertex when nothing is held back
        assert_eq!(rep.cuts.len(), 3);
        for c in &rep.cuts {
            assert_eq!(c.inflation(), 1.0);
            assert_eq!(c.gained(), 0);
        }
    }

    #[test]
    fn inflation_edge_cases() {
        let b = Bipartition::from_sides(&[0], &[1]).unwrap();
        let cut = |g3, g4| InflatedCut {
            method: CutMethod::LocalSearch,
            partition: b.clone(),
            g3_cross: g3,
            g4_cross: g4,
        };
        assert_eq!(cut(0, 0).inflation(), 1.0);
        assert_eq!(cut(0, 2).inflation(), f64::INFINITY);
        assert_eq!(cut(2, 5).inflation(), 2.5);
    }
}
