//! Synthetic test problems, error metrics, reports and the experiment
//! drivers used by the `krylov-or` binary.

pub mod metrics;
pub mod report;
pub mod run;
pub mod spectrum;

pub use metrics::{exact_matrix_function, weighted_error, weighted_norm, NormSpec};
pub use report::{read_csv, render_svg, to_csv_string, write_csv, ExperimentReport};
pub use run::{
    parse_restart_lengths, run, run_experiment, Experiment, ExperimentConfig, ExperimentOutput,
    Problem,
};
pub use spectrum::{
    model_spectrum, uniform_weight_vector, IntervalBlock, SpectrumBlock, SpectrumSpec,
};
