//! Experiment orchestration: plays, baselines, summaries and CSV output.

mod config;
mod play;
mod report;
pub mod stats;

pub use config::{parse_config_text, parse_seeds, read_config_file, ExperimentConfig, GameSelection, OpponentMode, Profile};
pub use play::{
    best_expert_baseline, ehba_options, hba_baseline, run_play, Controller, PlayRecord, PlaySetup, RoundRow, TraceDetail,
};
pub use report::{
    condition_key, emit_plot_data, emit_plot_data_from_trace, read_baselines_csv, read_plays_csv, read_trace_csv, run_experiment, summarize,
    write_csv, BaselineRow, CurveAccumulator, CurvePoint, ExperimentOutcome, PlaySummary, SummaryRow, TraceRow,
};
