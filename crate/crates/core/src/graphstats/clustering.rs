use crate::graph::{GirgGraph, VertexId};

/// Local clustering coefficients and their unweighted mean.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringReport {
    pub per_vertex: Vec<f64>,
    pub mean: f64,
    /// Vertices with fewer than two neighbors (their coefficient is 0).
    pub low_degree: usize,
    pub triangles: u64,
}

/// Number of triangles through each vertex.
///
/// Edges are oriented from lower to higher `(degree, id)` rank, each triangle
/// is found once by intersecting sorted out-lists, and all three corners are
/// credited.
pub fn triangles_per_vertex(g: &GirgGraph) -> Vec<u64> {
    let n = g.n();
    let rank_less = |a: VertexId, b: VertexId| (g.degree(a), a) < (g.degree(b), b);
    let mut out_offsets = Vec::with_capacity(n + 1);
    out_offsets.push(0usize);
    let mut out: Vec<VertexId> = Vec::with_capacity(g.edge_count());
    for v in 0..n as VertexId {
        out.extend(g.neighbors(v).iter().copied().filter(|&u| rank_less(v, u)));
        out_offsets.push(out.len());
    }
    let out_of = |v: VertexId| &out[out_offsets[v as usize]..out_offsets[v as usize + 1]];

    let mut tri = vec![0u64; n];
    for v in 0..n as VertexId {
        let nv = out_of(v);
        for &u in nv {
            let nu = out_of(u);
            let (mut i, mut j) = (0, 0);
            while i < nv.len() && j < nu.len() {
                match nv[i].cmp(&nu[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        tri[v as usize] += 1;
                        tri[u as usize] += 1;
                        tri[nv[i] as usize] += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    tri
}

pub fn clustering_coefficient(g: &GirgGraph) -> ClusteringReport {
    let tri = triangles_per_vertex(g);
    let mut low_degree = 0;
    let per_vertex: Vec<f64> = tri
        .iter()
        .enumerate()
        .map(|(v, &t)| {
            let d = g.degree(v as VertexId) as f64;
            if d < 2.0 {
                low_degree += 1;
                0.0
            } else {
                t as f64 / (d * (d - 1.0) / 2.0)
            }
        })
        .collect();
    let mean = if per_vertex.is_empty() {
        0.0
    } else {
        per_vertex.iter().sum::<f64>() / per_vertex.len() as f64
    };
    ClusteringReport {
        mean,
        low_degree,
        triangles: tri.iter().sum::<u64>() / 3,
        per_vertex,
    }
}
