use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use girg_core::cuts::{
    best_cut, brute_force_min_cut, geometric_halfspace_cut, local_search_cut, multilevel_cut,
    LocalSearchConfig, BRUTE_FORCE_LIMIT,
};
use girg_core::graphstats::{clustering_coefficient, connected_components, degree_report};
use girg_core::harness::{
    cell_seed, emit_plot_data, export_graph, import_graph, run_sweep, Acceptance, CutSettings,
    ExperimentConfig, RECORDS_FILE,
};
use girg_core::rng::parse_seed;
use girg_core::sampler::{sample_direct, sample_phased, ModelParams};
use girg_core::{DistanceKind, GeometrySpec, GirgGraph};

#[derive(Parser)]
#[command(name = "girg", version, about = "Sample and analyse geometric inhomogeneous random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph and write it as TSV files.
    Gen {
        #[command(flatten)]
        model: ModelArgs,
        /// Write the four snapshots of the phased sampler with this f instead.
        #[arg(long)]
        f: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Components, clustering and degrees of a graph.
    Stats {
        #[command(flatten)]
        source: Source,
        /// Cutoff of the degree tail fit.
        #[arg(long, default_value_t = 8.0)]
        cutoff: f64,
    },
    /// Run the cut searchers on the giant component.
    Cut {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
    },
    /// Scaling sweep over geometries, sizes and seeds.
    Sweep {
        /// Geometries (repeatable).
        #[arg(long = "geometry", default_values_t = vec!["euclidean_max".to_string(), "mcd".to_string()])]
        geometries: Vec<String>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Sizes (repeatable).
        #[arg(long = "n", default_values_t = (12..=16).map(|k| 1usize << k).collect::<Vec<_>>())]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 1.5)]
        alpha: f64,
        #[arg(long, default_value_t = 2.5)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        prefactor: f64,
        /// Balance parameters (repeatable).
        #[arg(long = "delta", default_values_t = vec![0.1])]
        deltas: Vec<f64>,
        #[arg(long, default_value_t = 0.02)]
        f: f64,
        /// Seeds (repeatable, decimal or 0x-hex).
        #[arg(long = "seed", value_parser = seed_arg, default_values = ["0", "1", "2", "3", "4"])]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write every sampled graph below `out/graphs`.
        #[arg(long)]
        persist_graphs: bool,
        /// Record wall-clock time per cell (the CSV stops being reproducible).
        #[arg(long)]
        runtime: bool,
    },
    /// Run the acceptance suite; exits nonzero if any criterion fails.
    Verify {
        /// Where to keep the sweep records and plot data.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run only these criteria (repeatable).
        #[arg(long = "only")]
        only: Vec<usize>,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value = "mcd")]
    geometry: String,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 4096)]
    n: usize,
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long, default_value_t = 2.5)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    prefactor: f64,
    /// Decimal or 0x-hex; derived per size exactly as in sweeps.
    #[arg(long, value_parser = seed_arg, default_value = "0")]
    seed: u64,
}

#[derive(Args)]
struct Source {
    /// Read this exported graph instead of sampling one.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
}

fn seed_arg(text: &str) -> Result<u64, String> {
    parse_seed(text).map_err(|e| format!("bad seed `{text}`: {e}"))
}

impl ModelArgs {
    fn params(&self) -> anyhow::Result<ModelParams> {
        let kind: DistanceKind = self.geometry.parse()?;
        let geometry = GeometrySpec::with_default_volume(kind, self.dim)?;
        let params = ModelParams::new(geometry, self.n, self.alpha, self.beta)
            .with_prefactor(self.prefactor)
            .with_seed(cell_seed(self.seed, self.n));
        params.validate()?;
        Ok(params)
    }
}

impl Source {
    fn load(&self) -> anyhow::Result<GirgGraph> {
        match &self.graph {
            Some(dir) => import_graph(dir).with_context(|| format!("reading {}", dir.display())),
            None => Ok(sample_direct(&self.model.params()?)?),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Gen { model, f, out } => gen(&model, f, &out)?,
        Command::Stats { source, cutoff } => stats(&source.load()?, cutoff),
        Command::Cut { source, delta, restarts } => {
            let search = LocalSearchConfig::default()
                .with_restarts(restarts)
                .with_seed(source.model.seed);
            cut(&source.load()?, delta, &search)?
        }
        Command::Sweep {
            geometries,
            dim,
            ns,
            alpha,
            beta,
            prefactor,
            deltas,
            f,
            seeds,
            restarts,
            out,
            persist_graphs,
            runtime,
        } => {
            let kinds = geometries
                .iter()
                .map(|g| g.parse())
                .collect::<Result<Vec<DistanceKind>, _>>()?;
            let defaults = CutSettings::default();
            let config = ExperimentConfig {
                kinds,
                dim,
                ns,
                alpha,
                beta,
                prefactor,
                deltas,
                f,
                seeds,
                cuts: CutSettings {
                    search: defaults.search.with_restarts(restarts),
                    ..defaults
                },
                out_dir: Some(out.clone()),
                persist_graphs,
                record_runtime: runtime,
                ..ExperimentConfig::default()
            };
            let records = run_sweep(&config)?;
            let plots = emit_plot_data(&records, &out.join("plots"))?;
            println!(
                "{} records in {}, {} plot files in {}",
                records.len(),
                out.join(RECORDS_FILE).display(),
                plots.len(),
                out.join("plots").display()
            );
        }
        Command::Verify { out, only } => return Ok(verify(out.as_deref(), &only)),
    }
    Ok(ExitCode::SUCCESS)
}

fn gen(model: &ModelArgs, f: Option<f64>, out: &Path) -> anyhow::Result<()> {
    let params = model.params()?;
    match f {
        None => {
            let g = sample_direct(&params)?;
            export_graph(&g, out)?;
            println!("n = {}, {} edges -> {}", g.n(), g.edge_count(), out.display());
        }
        Some(f) => {
            let trace = sample_phased(&params, f)?;
            for (name, g) in [("g1", &trace.g1), ("g2", &trace.g2), ("g3", &trace.g3), ("g4", &trace.g4)] {
                export_graph(g, &out.join(name))?;
                println!("{name}: {} edges", g.edge_count());
            }
            println!(
                "giant1 {} vertices, late set {} vertices, weight bound {}",
                trace.giant1.len(),
                trace.f_set.len(),
                trace.b_prime
            );
        }
    }
    Ok(())
}

fn stats(g: &GirgGraph, cutoff: f64) {
    let labels = connected_components(g);
    let cc = clustering_coefficient(g);
    let degrees = degree_report(g, cutoff);
    println!("vertices           {}", g.n());
    println!("edges              {}", g.edge_count());
    println!("components         {}", labels.count());
    println!(
        "giant              {} ({:.4})",
        labels.giant_size(),
        labels.giant_size() as f64 / g.n().max(1) as f64
    );
    println!("mean cc            {:.6}", cc.mean);
    println!("triangles          {}", cc.triangles);
    println!("mean degree        {:.3}", degrees.mean_degree);
    println!("max degree         {}", degrees.max_degree);
    match degrees.tail {
        Some(t) => println!(
            "degree tail        {:.4} ± {:.4} over {} vertices at cutoff {cutoff}",
            t.exponent, t.half_width, t.tail_size
        ),
        None => println!("degree tail        too few degrees at cutoff {cutoff}"),
    }
}

fn cut(g: &GirgGraph, delta: f64, search: &LocalSearchConfig) -> anyhow::Result<()> {
    let giant = connected_components(g).giant();
    let mut results = Vec::new();
    if g.is_fully_embedded() {
        for axis in 0..g.dim() {
            results.push(geometric_halfspace_cut(g, &giant, axis, delta)?);
        }
    }
    results.push(local_search_cut(g, &giant, delta, search)?);
    results.push(multilevel_cut(g, &giant, delta, search)?);
    if giant.len() <= BRUTE_FORCE_LIMIT {
        results.push(brute_force_min_cut(g, &giant, delta)?);
    }
    println!("giant {} of {} vertices, delta {delta}", giant.len(), g.n());
    for r in &results {
        match r.eta_achieved() {
            Some(eta) => println!("{:<24} {:>8} cross edges  eta {eta:.5}", r.method.to_string(), r.cross_edges),
            None => println!("{:<24} infeasible", r.method.to_string()),
        }
    }
    match best_cut(&results).filter(|b| b.feasible()) {
        Some(b) => println!("best: {} with {} cross edges", b.method, b.cross_edges),
        None => bail!("no balanced cut exists for delta {delta}"),
    }
    Ok(())
}

fn verify(out: Option<&Path>, only: &[usize]) -> ExitCode {
    let mut acceptance = Acceptance::new(out);
    let ids: Vec<usize> = if only.is_empty() {
        (1..=girg_core::harness::CRITERIA).collect()
    } else {
        only.to_vec()
    };
    let mut failed = Vec::new();
    for id in ids {
        let outcome = acceptance.run(id);
        println!("{outcome}");
        if !outcome.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
