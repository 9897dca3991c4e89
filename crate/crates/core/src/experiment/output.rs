use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{ExperimentConfig, SeriesOutput, SCHEMA_VERSION};
use super::run::{CaseResult, RunOutput};
use crate::speckle::TimeGrid;
use crate::Result;

/// Files written by one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArtifactPaths {
    pub dir: PathBuf,
    pub summary: PathBuf,
    pub meta: PathBuf,
    pub pdf: PathBuf,
    pub fit_curves: PathBuf,
    pub series: Vec<PathBuf>,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: u32,
    name: &'a str,
    cases: &'a [CaseResult],
}

#[derive(Serialize)]
struct Meta<'a> {
    schema_version: u32,
    version: &'static str,
    name: &'a str,
    seeds: &'a [u64],
    u_values: Vec<f64>,
    windows: Vec<&'a TimeGrid>,
    cases: Vec<&'a str>,
    series_files: Vec<String>,
    config: &'a ExperimentConfig,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn series_file_name(case: &str, seed: u64) -> String {
    format!("{case}__s{seed}.csv")
}

/// Writes `series/*.csv`, `pdf.csv`, `fit_curves.csv`, `summary.json` and
/// `meta.json` under `dir`.
pub fn write_artifacts(output: &RunOutput, dir: &Path) -> Result<ArtifactPaths> {
    fs::create_dir_all(dir)?;
    let config = &output.config;

    let mut series = Vec::new();
    if config.series_output != SeriesOutput::None {
        let series_dir = dir.join("series");
        fs::create_dir_all(&series_dir)?;
        for case in &output.cases {
            let take = match config.series_output {
                SeriesOutput::All => case.realizations.len(),
                _ => 1,
            };
            for r in &case.realizations[..take] {
                let path = series_dir.join(series_file_name(&case.case, r.seed));
                let mut w = create(&path)?;
                writeln!(w, "t,I")?;
                for (t, i) in r.series.times().zip(&r.series.intensities) {
                    writeln!(w, "{},{}", format_float(t), format_float(*i))?;
                }
                w.flush()?;
                series.push(path);
            }
        }
    }

    let pdf = dir.join("pdf.csv");
    let mut w = create(&pdf)?;
    writeln!(w, "bin_center,density,count,channel,case")?;
    for case in &output.cases {
        let h = &case.histogram;
        for ((x, d), c) in h.centers().iter().zip(&h.densities).zip(&h.counts) {
            writeln!(
                w,
                "{},{},{c},{},{}",
                format_float(*x),
                format_float(*d),
                case.channel,
                case.case
            )?;
        }
    }
    w.flush()?;

    // Fitted densities of the first realization on the histogram's axis.
    let fit_curves = dir.join("fit_curves.csv");
    let mut w = create(&fit_curves)?;
    writeln!(w, "x,density,model,case")?;
    for case in &output.cases {
        let mean = case.histogram.mean;
        for fit in &case.realizations[0].fits {
            let Some(model) = &fit.fitted else { continue };
            for x in case.histogram.centers() {
                let d = mean * model.pdf(x * mean).unwrap_or(f64::NAN);
                writeln!(w, "{},{},{},{}", format_float(x), format_float(d), fit.model, case.case)?;
            }
        }
    }
    w.flush()?;

    let summary = dir.join("summary.json");
    write_json(
        &summary,
        &Summary {
            schema_version: SCHEMA_VERSION,
            name: &config.name,
            cases: &output.cases,
        },
    )?;

    let mut windows: Vec<&TimeGrid> = Vec::new();
    for case in &output.cases {
        if !windows.iter().any(|g| g.label == case.grid.label) {
            windows.push(&case.grid);
        }
    }
    let meta = dir.join("meta.json");
    write_json(
        &meta,
        &Meta {
            schema_version: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            name: &config.name,
            seeds: &output.seeds,
            u_values: config.u_values(),
            windows,
            cases: output.cases.iter().map(|c| c.case.as_str()).collect(),
            series_files: series
                .iter()
                .map(|p| format!("series/{}", p.file_name().unwrap().to_string_lossy()))
                .collect(),
            config,
        },
    )?;

    Ok(ArtifactPaths {
        dir: dir.to_path_buf(),
        summary,
        meta,
        pdf,
        fit_curves,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 123456.789, f64::MIN_POSITIVE, 0.0] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
    }
}
