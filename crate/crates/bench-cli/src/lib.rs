//! Experiment harness behind the `omd-bench` binary: seeded data
//! generators, experiment configuration, the run pipeline tying learners to
//! their offline comparators and closed-form regret bounds, and the file
//! formats used to exchange markets, measurement streams, and results.

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`: the
// negated form is true for NaN, so NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod data;
pub mod run;

pub use config::{Algorithm, DataSource, ExperimentConfig, Problem};
pub use data::{
    generate_market, generate_quantum_stream, read_market_csv, read_observables_json,
    write_market_csv, write_observables_json, MarketKind, PovmStyle, TrueStateKind,
};
pub use run::{
    compare_results, run_experiment, write_results_csv, ComparatorSummary, RunOutcome, RunSummary,
};
