use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::io::export_graph;
use crate::cuts::{
    best_cut, geometric_halfspace_cut, local_search_cut, multilevel_cut, CutResult,
    LocalSearchConfig,
};
use crate::error::{invalid, GirgError, Result};
use crate::geometry::DistanceKind;
use crate::graph::GirgGraph;
use crate::graphstats::{clustering_coefficient, connected_components, degree_tail_fit};
use crate::sampler::sample_direct;
use crate::stats::{least_squares, LineFit};

pub const RECORDS_FILE: &str = "records.csv";

/// One analysed (geometry, n, seed, delta) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRecord {
    pub geometry: String,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub delta: f64,
    pub giant_size: usize,
    pub giant_fraction: f64,
    /// Empty when no searcher found a feasible cut.
    pub best_cut_cross_edges: Option<usize>,
    pub best_cut_method: String,
    pub eta_achieved: Option<f64>,
    pub mean_cc: f64,
    /// Empty when the degree tail is too thin to fit.
    pub degree_tail_exponent: Option<f64>,
    pub runtime_ms: u64,
}

/// Every cut searcher enabled in `config` on the giant of `g`.
pub fn search_cuts(
    g: &GirgGraph,
    giant: &[u32],
    delta: f64,
    config: &ExperimentConfig,
    search_seed: u64,
) -> Result<Vec<CutResult>> {
    let settings = &config.cuts;
    let search = LocalSearchConfig {
        seed: search_seed,
        ..settings.search
    };
    let mut results = Vec::new();
    if settings.halfspace && g.is_fully_embedded() {
        for axis in 0..g.dim() {
            results.push(geometric_halfspace_cut(g, giant, axis, delta)?);
        }
    }
    if settings.local_search {
        results.push(local_search_cut(g, giant, delta, &search)?);
    }
    if settings.multilevel {
        results.push(multilevel_cut(g, giant, delta, &search)?);
    }
    Ok(results)
}

/// Records of one sampled graph, one per delta of `config`.
///
/// `seed` is the user seed of the cell; searchers draw from the model seed.
pub fn analyze_graph(
    g: &GirgGraph,
    kind: DistanceKind,
    seed: u64,
    config: &ExperimentConfig,
) -> Result<Vec<ScalingRecord>> {
    let n = g.n();
    let search_seed = config.params(kind, n, seed)?.seed;
    let labels = connected_components(g);
    let giant = labels.giant();
    let mean_cc = clustering_coefficient(g).mean;
    let degree_tail_exponent = degree_tail_fit(g, config.degree_cutoff)
        .ok()
        .map(|f| f.exponent);
    config
        .deltas
        .iter()
        .map(|&delta| {
            let cuts = search_cuts(g, &giant, delta, config, search_seed)?;
            let best = best_cut(&cuts).filter(|b| b.feasible());
            Ok(ScalingRecord {
                geometry: kind.name().to_string(),
                d: g.dim(),
                n,
                seed,
                delta,
                giant_size: giant.len(),
                giant_fraction: giant.len() as f64 / n as f64,
                best_cut_cross_edges: best.map(|b| b.cross_edges),
                best_cut_method: best.map_or("none".to_string(), |b| b.method.to_string()),
                eta_achieved: best.and_then(|b| b.eta_achieved()),
                mean_cc,
                degree_tail_exponent,
                runtime_ms: 0,
            })
        })
        .collect()
}

/// Directory of a persisted sweep graph.
pub fn graph_dir(out: &Path, kind: DistanceKind, d: usize, n: usize, seed: u64) -> PathBuf {
    out.join("graphs")
        .join(format!("{}_d{d}_n{n}_s{seed}", kind.name()))
}

/// Samples and analyses every cell of `config`, in config order.
///
/// With an output directory, the records are also written to `records.csv`
/// there (and the graphs below `graphs/` when requested).
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<ScalingRecord>> {
    config.validate()?;
    let cells: Vec<(DistanceKind, usize, u64)> = config
        .kinds
        .iter()
        .flat_map(|&k| {
            config
                .ns
                .iter()
                .flat_map(move |&n| config.seeds.iter().map(move |&s| (k, n, s)))
        })
        .collect();
    let per_cell: Vec<Vec<ScalingRecord>> = cells
        .into_par_iter()
        .map(|(kind, n, seed)| {
            let start = Instant::now();
            let g = sample_direct(&config.params(kind, n, seed)?)?;
            if config.persist_graphs {
                if let Some(out) = &config.out_dir {
                    export_graph(&g, &graph_dir(out, kind, config.dim, n, seed))?;
                }
            }
            let mut records = analyze_graph(&g, kind, seed, config)?;
            if config.record_runtime {
                let ms = start.elapsed().as_millis() as u64;
                records.iter_mut().for_each(|r| r.runtime_ms = ms);
            }
            Ok(records)
        })
        .collect::<Result<_>>()?;
    let records: Vec<ScalingRecord> = per_cell.into_iter().flatten().collect();
    if let Some(out) = &config.out_dir {
        fs::create_dir_all(out)?;
        write_records(&out.join(RECORDS_FILE), &records)?;
    }
    Ok(records)
}

pub fn write_records(path: &Path, records: &[ScalingRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<ScalingRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize()
        .map(|rec| rec.map_err(GirgError::from))
        .collect()
}

/// Least-squares slope of `log(mean best cut)` against `log(n)`.
///
/// The records must share geometry, dimension and delta, and cover at least 4
/// distinct `n` with at least 3 seeds each.
pub fn fit_scaling_exponent(records: &[ScalingRecord]) -> Result<LineFit> {
    let Some(first) = records.first() else {
        return Err(GirgError::InsufficientData("no records".into()));
    };
    if records
        .iter()
        .any(|r| r.geometry != first.geometry || r.d != first.d || r.delta != first.delta)
    {
        return Err(invalid("records mix geometries, dimensions or deltas"));
    }
    let mut by_n: BTreeMap<usize, Vec<(u64, f64)>> = BTreeMap::new();
    for r in records {
        let cut = r.best_cut_cross_edges.ok_or_else(|| {
            GirgError::InsufficientData(format!("no feasible cut for n = {}, seed {}", r.n, r.seed))
        })?;
        by_n.entry(r.n).or_default().push((r.seed, cut as f64));
    }
    if by_n.len() < 4 {
        return Err(GirgError::InsufficientData(format!(
            "need at least 4 distinct n, found {}",
            by_n.len()
        )));
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (n, cuts) in &by_n {
        let mut seeds: Vec<u64> = cuts.iter().map(|c| c.0).collect();
        seeds.sort_unstable();
        seeds.dedup();
        if seeds.len() < 3 {
            return Err(GirgError::InsufficientData(format!(
                "n = {n} has {} seeds, need at least 3",
                seeds.len()
            )));
        }
        let mean = cuts.iter().map(|c| c.1).sum::<f64>() / cuts.len() as f64;
        if !(mean > 0.0) {
            return Err(GirgError::InsufficientData(format!("mean cut at n = {n} is zero")));
        }
        xs.push((*n as f64).ln());
        ys.push(mean.ln());
    }
    least_squares(&xs, &ys).ok_or_else(|| GirgError::InsufficientData("degenerate fit".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(ns: &[usize], seeds: u64, cut: impl Fn(usize) -> f64) -> Vec<ScalingRecord> {
        ns.iter()
            .flat_map(|&n| {
                let cut = cut(n);
                (0..seeds).map(move |seed| ScalingRecord {
                    geometry: "mcd".into(),
                    d: 2,
                    n,
                    seed,
                    delta: 0.1,
                    giant_size: n,
                    giant_fraction: 1.0,
                    best_cut_cross_edges: Some(cut.round() as usize),
                    best_cut_method: "local_search".into(),
                    eta_achieved: Some(cut / n as f64),
                    mean_cc: 0.3,
                    degree_tail_exponent: None,
                    runtime_ms: 0,
                })
            })
            .collect()
    }

    #[test]
    fn linear_and_square_root_cuts() {
        let ns = [1 << 10, 1 << 12, 1 << 14, 1 << 16];
        let fit = fit_scaling_exponent(&synthetic(&ns, 3, |n| n as f64)).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        let fit = fit_scaling_exponent(&synthetic(&ns, 3, |n| (n as f64).sqrt())).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fit_needs_enough_data() {
        let few_n = synthetic(&[64, 128, 256], 5, |n| n as f64);
        assert!(matches!(fit_scaling_exponent(&few_n), Err(GirgError::InsufficientData(_))));
        let few_seeds = synthetic(&[64, 128, 256, 512], 2, |n| n as f64);
        assert!(matches!(fit_scaling_exponent(&few_seeds), Err(GirgError::InsufficientData(_))));
        assert!(fit_scaling_exponent(&[]).is_err());
        let mut mixed = synthetic(&[64, 128, 256, 512], 3, |n| n as f64);
        mixed[0].geometry = "euclidean_max".into();
        assert!(fit_scaling_exponent(&mixed).is_err());
    }

    #[test]
    fn records_round_trip_through_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let mut recs = synthetic(&[64, 128], 2, |n| n as f64 / 3.0);
        recs[1].best_cut_cross_edges = None;
        recs[1].eta_achieved = None;
        recs[2].degree_tail_exponent = Some(1.4999999999999998);
        write_records(&path, &recs).unwrap();
        assert_eq!(read_records(&path).unwrap(), recs);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(
            "geometry,d,n,seed,delta,giant_size,giant_fraction,best_cut_cross_edges,best_cut_method,eta_achieved,mean_cc,degree_tail_exponent,runtime_ms\n"
        ));
        assert!(!text.contains('\r'));
    }
}
