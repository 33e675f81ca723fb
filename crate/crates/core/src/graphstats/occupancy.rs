use crate::error::{invalid, Result};

/// Occupancy of `M = ceil(n / l)` equal subintervals of `[0, 1]` by a set of
/// last-axis coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyReport {
    pub l: f64,
    pub bins: usize,
    pub histogram: Vec<usize>,
    /// `ceil(r n)`, the size of the subinterval sets examined.
    pub set_size: usize,
    /// Largest total occupancy of any `set_size` subintervals.
    pub top_sum: usize,
    /// `delta * n / 2`.
    pub threshold: f64,
    /// `top_sum < threshold`.
    pub pass: bool,
}

/// Checks whether some `ceil(r n)` subintervals jointly hold at least
/// `delta n / 2` of the coordinates.
///
/// The maximum over all sets of that many subintervals is attained by the
/// fullest bins, so only the top `ceil(r n)` counts are summed.
pub fn subinterval_occupancy(
    coords: &[f64],
    l: f64,
    r: f64,
    delta: f64,
    n: usize,
) -> Result<OccupancyReport> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(invalid(format!("l must be positive, got {l}")));
    }
    if !(r > 0.0 && r < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("r and delta must lie in (0, 1), got {r}, {delta}")));
    }
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let bins = (n as f64 / l).ceil() as usize;
    let set_size = (r * n as f64).ceil() as usize;
    if set_size > bins {
        return Err(invalid(format!(
            "cannot choose {set_size} subintervals out of {bins}"
        )));
    }
    let mut histogram = vec![0usize; bins];
    for &x in coords {
        let j = ((x * bins as f64).floor() as usize).min(bins - 1);
        histogram[j] += 1;
    }
    let mut sorted = histogram.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let top_sum = sorted[..set_size].iter().sum();
    let threshold = delta * n as f64 / 2.0;
    Ok(OccupancyReport {
        l,
        bins,
        histogram,
        set_size,
        top_sum,
        threshold,
        pass: (top_sum as f64) < threshold,
    })
}

/// Default subinterval scale `l = w_min^2`.
pub fn default_scale(w_min: f64) -> f64 {
    w_min * w_min
}
