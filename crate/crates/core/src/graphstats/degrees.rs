use crate::error::Result;
use crate::graph::GirgGraph;
use crate::weights::{fit_tail_exponent, TailFit};

/// Degree histogram and a power-law fit of the degree tail.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport {
    /// `histogram[k]` = number of vertices of degree `k`.
    pub histogram: Vec<usize>,
    pub max_degree: usize,
    pub mean_degree: f64,
    pub cutoff: f64,
    /// `None` when the tail is too thin or degenerate to fit.
    pub tail: Option<TailFit>,
}

pub fn degree_report(g: &GirgGraph, cutoff: f64) -> DegreeReport {
    let degrees = g.degrees();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0usize; max_degree + 1];
    for &d in &degrees {
        histogram[d] += 1;
    }
    DegreeReport {
        histogram,
        max_degree,
        mean_degree: if degrees.is_empty() {
            0.0
        } else {
            degrees.iter().sum::<usize>() as f64 / degrees.len() as f64
        },
        cutoff,
        tail: degree_tail_fit(g, cutoff).ok(),
    }
}

/// CCDF exponent of the degrees at or above `cutoff`.
pub fn degree_tail_fit(g: &GirgGraph, cutoff: f64) -> Result<TailFit> {
    let values: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    fit_tail_exponent(&values, cutoff)
}
