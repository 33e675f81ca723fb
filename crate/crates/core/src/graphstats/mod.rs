//! Structural analyses of sampled graphs: components, clustering, degree
//! tails, last-axis occupancy and the stochastic triangle inequality.

mod clustering;
mod components;
mod degrees;
mod occupancy;
mod triangle_ineq;

pub use clustering::{clustering_coefficient, triangles_per_vertex, ClusteringReport};
pub use components::{connected_components, ComponentLabeling, UnionFind};
pub use degrees::{degree_report, degree_tail_fit, DegreeReport};
pub use occupancy::{default_scale, subinterval_occupancy, OccupancyReport};
pub use triangle_ineq::{stochastic_triangle_estimate, TriangleEstimate, MIN_TRIANGLE_SAMPLES};
