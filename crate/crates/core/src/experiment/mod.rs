//! Configuration-driven experiments and their CSV/JSON artifacts.

mod config;
mod output;
mod run;

pub use config::{
    fig2, fig3, fig4, ChainConfig, CompoundConfig, Diagnostic, ExperimentConfig, FitHypothesis, InteractionValues,
    Preset, SeedConfig, SeriesOutput, Severity, TransitionConfig, WindowConfig, SCHEMA_VERSION,
};
pub use output::{format_float, write_artifacts, ArtifactPaths};
pub use run::{case_id, execute, CaseResult, EnsembleStats, FitRecord, Realization, RunOutput};

/// Validates, runs and writes all artifacts of `config` into its `out_dir`.
pub fn run(config: &ExperimentConfig) -> crate::Result<ArtifactPaths> {
    let output = execute(config)?;
    write_artifacts(&output, &config.out_dir)
}
