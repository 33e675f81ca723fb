//! Experiment configuration, sweeps, persistence, plots and acceptance checks.

pub mod acceptance;
mod config;
mod io;
mod plot;
mod sweep;

pub use acceptance::{Acceptance, CriterionOutcome, CRITERIA};
pub use config::{cell_seed, CutSettings, ExperimentConfig, MIN_SWEEP_N};
pub use io::{export_graph, import_graph, EDGE_FILE, VERTEX_FILE};
pub use plot::emit_plot_data;
pub use sweep::{
    analyze_graph, fit_scaling_exponent, graph_dir, read_records, run_sweep, search_cuts,
    write_records, ScalingRecord, RECORDS_FILE,
};
