//! Geometric inhomogeneous random graphs on the torus under the minimum
//! component distance and the sup norm, with tools to measure their
//! separators, components and clustering.

pub mod cuts;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod graphstats;
pub mod harness;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod weights;

pub use error::{GirgError, Result};
pub use geometry::{DistanceKind, GeometrySpec, TorusPoint, VolumeMode};
pub use graph::{GirgGraph, VertexId};
pub use sampler::ModelParams;
