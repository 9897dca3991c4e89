use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, FitHypothesis, TransitionConfig};
use crate::distributions::{build_g_of_r, fit_by_moments, ks_distance, DistributionModel};
use crate::model::sample_disorder;
use crate::speckle::{
    log_histogram, sample_series, summarize, EnsemblePoint, Histogram, IntensitySeries, Provenance, SpeckleSummary,
    TimeGrid,
};
use crate::spectral::{Channel, PhasorList, Propagator};
use crate::Result;

/// One fitted hypothesis. A fit that cannot be made (for instance a K
/// shape for a contrast below 1) carries `error` instead of numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRecord {
    pub model: String,
    pub parameters: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contrast: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub fitted: Option<DistributionModel>,
}

impl FitRecord {
    fn failed(model: &str, error: String) -> Self {
        Self {
            model: model.into(),
            parameters: BTreeMap::new(),
            contrast: None,
            ks_distance: None,
            error: Some(error),
            fitted: None,
        }
    }

    fn evaluate(model: DistributionModel, samples: &[f64]) -> Self {
        match ks_distance(samples, &model) {
            Ok(d) => Self {
                model: model.name().into(),
                parameters: model
                    .parameters()
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v))
                    .collect(),
                contrast: Some(model.contrast()),
                ks_distance: Some(d),
                error: None,
                fitted: Some(model),
            },
            Err(e) => Self::failed(model.name(), e.to_string()),
        }
    }
}

fn hypothesis_name(h: FitHypothesis) -> &'static str {
    match h {
        FitHypothesis::Exponential => "exponential",
        FitHypothesis::KDist { .. } => "k",
        FitHypothesis::WeibullBound => "weibull_bound",
        FitHypothesis::Rician => "rician",
        FitHypothesis::CompoundRician => "compound_rician",
    }
}

/// One disorder realization of one case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Realization {
    pub seed: u64,
    pub summary: SpeckleSummary,
    pub fits: Vec<FitRecord>,
    #[serde(skip)]
    pub series: IntensitySeries,
}

/// Realization-to-realization statistics of one case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub contrast: EnsemblePoint,
    pub mean: EnsemblePoint,
    /// Per fitted model, over the realizations where the fit succeeded.
    pub ks_distance: BTreeMap<String, EnsemblePoint>,
}

/// Everything computed for one `(U, transition, window)` combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub case: String,
    pub channel: Channel,
    pub u: f64,
    /// 1-based sites.
    pub input: [usize; 2],
    pub output: [usize; 2],
    pub window: String,
    pub grid: TimeGrid,
    /// All realizations' samples pooled.
    pub pooled: SpeckleSummary,
    pub ensemble: EnsembleStats,
    pub realizations: Vec<Realization>,
    #[serde(skip)]
    pub histogram: Histogram,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub seeds: Vec<u64>,
    pub cases: Vec<CaseResult>,
}

/// Case identifier used for file names and cross references.
pub fn case_id(transition: &TransitionConfig, u: f64, window: &str) -> String {
    format!("{}_u{u}_{window}", transition.label())
}

fn mc_seed(seed: u64, u_index: usize, transition_index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((u_index as u64) << 32) ^ transition_index as u64
}

fn fit_all(
    config: &ExperimentConfig,
    intensities: &[f64],
    compound: &Option<std::result::Result<DistributionModel, String>>,
) -> Vec<FitRecord> {
    config
        .fits
        .iter()
        .map(|&h| match h.moment_kind() {
            Some(kind) => match fit_by_moments(intensities, kind) {
                Ok(model) => FitRecord::evaluate(model, intensities),
                Err(e) => FitRecord::failed(hypothesis_name(h), e.to_string()),
            },
            None => match compound.as_ref().expect("compound model prepared") {
                Ok(model) => FitRecord::evaluate(model.clone(), intensities),
                Err(e) => FitRecord::failed(hypothesis_name(h), e.clone()),
            },
        })
        .collect()
}

/// Output of one `(seed, U)` task, indexed `[transition][window]`.
type TaskOutput = Vec<Vec<Option<Realization>>>;

fn run_task(config: &ExperimentConfig, grids: &[TimeGrid], seed: u64, u_index: usize) -> Result<TaskOutput> {
    let u = config.u_values()[u_index];
    let spec = config.chain_spec(u)?;
    let disorder = sample_disorder(&spec, seed)?;
    let propagator = Propagator::new(spec, disorder, config.distinguishable_method)?;
    let wants_compound = config.fits.contains(&FitHypothesis::CompoundRician);

    config
        .transitions
        .iter()
        .enumerate()
        .map(|(t_index, transition)| {
            let (input, output) = transition.zero_based();
            let phasors: PhasorList = propagator.phasors(transition.channel, input, output)?;
            let compound = wants_compound.then(|| {
                build_g_of_r(
                    &phasors,
                    config.compound.n_dominant,
                    config.compound.mc_samples,
                    mc_seed(seed, u_index, t_index),
                )
                .map(|g| g.into_model())
                .map_err(|e| e.to_string())
            });
            grids
                .iter()
                .map(|grid| {
                    let series = sample_series(&phasors, grid).with_provenance(Provenance {
                        channel: transition.channel,
                        n: spec.n,
                        w: spec.w,
                        u,
                        seed,
                        input,
                        output,
                    });
                    let summary = summarize(&series.intensities)?;
                    let fits = fit_all(config, &series.intensities, &compound);
                    Ok(Some(Realization {
                        seed,
                        summary,
                        fits,
                        series,
                    }))
                })
                .collect()
        })
        .collect()
}

/// Runs every `(seed, U)` task concurrently and merges the results in
/// `(U, transition, window, seed)` order, so the output does not depend on
/// the number of threads.
pub fn execute(config: &ExperimentConfig) -> Result<RunOutput> {
    config.check()?;
    let grids = config.grids()?;
    let seeds = config.seeds();
    let us = config.u_values();

    let tasks: Vec<(usize, usize)> = (0..seeds.len())
        .flat_map(|s| (0..us.len()).map(move |u| (s, u)))
        .collect();
    let outputs: Vec<TaskOutput> = tasks
        .par_iter()
        .map(|&(s, u)| run_task(config, &grids, seeds[s], u))
        .collect::<Result<_>>()?;

    let mut slots: Vec<Option<TaskOutput>> = outputs.into_iter().map(Some).collect();
    let mut by_u: Vec<Vec<TaskOutput>> = (0..us.len()).map(|_| Vec::with_capacity(seeds.len())).collect();
    for (k, &(_, u)) in tasks.iter().enumerate() {
        by_u[u].push(slots[k].take().expect("each task output is used once"));
    }

    let mut cases = Vec::new();
    for (u_index, per_seed) in by_u.iter_mut().enumerate() {
        let u = us[u_index];
        for (t_index, transition) in config.transitions.iter().enumerate() {
            for (w_index, grid) in grids.iter().enumerate() {
                let realizations: Vec<Realization> = per_seed
                    .iter_mut()
                    .map(|task| task[t_index][w_index].take().expect("each realization is used once"))
                    .collect();
                cases.push(merge_case(config, transition, u, grid, realizations)?);
            }
        }
    }
    Ok(RunOutput {
        config: config.clone(),
        seeds,
        cases,
    })
}

fn merge_case(
    config: &ExperimentConfig,
    transition: &TransitionConfig,
    u: f64,
    grid: &TimeGrid,
    realizations: Vec<Realization>,
) -> Result<CaseResult> {
    let pooled_samples: Vec<f64> = realizations
        .iter()
        .flat_map(|r| r.series.intensities.iter().copied())
        .collect();
    let pooled = summarize(&pooled_samples)?;
    let histogram = log_histogram(&pooled_samples, &config.histogram)?;

    let contrasts: Vec<f64> = realizations.iter().map(|r| r.summary.contrast).collect();
    let means: Vec<f64> = realizations.iter().map(|r| r.summary.mean).collect();
    let mut ks: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in &realizations {
        for f in &r.fits {
            if let Some(d) = f.ks_distance {
                ks.entry(f.model.clone()).or_default().push(d);
            }
        }
    }
    Ok(CaseResult {
        case: case_id(transition, u, &grid.label),
        channel: transition.channel,
        u,
        input: transition.input,
        output: transition.output,
        window: grid.label.clone(),
        grid: grid.clone(),
        pooled,
        ensemble: EnsembleStats {
            contrast: EnsemblePoint::from_values(&contrasts),
            mean: EnsemblePoint::from_values(&means),
            ks_distance: ks
                .into_iter()
                .map(|(k, v)| (k, EnsemblePoint::from_values(&v)))
                .collect(),
        },
        realizations,
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::{ChainConfig, InteractionValues, SeedConfig, WindowConfig};
    use crate::experiment::fig2;

    fn small() -> ExperimentConfig {
        let mut c = fig2();
        c.chain = ChainConfig {
            n: 8,
            j: 1.0,
            w: 0.5,
            u: InteractionValues::Sweep(vec![0.0, 2.0]),
        };
        c.transitions = vec![
            TransitionConfig::new(Channel::Distinguishable, [2, 4], [5, 7]),
            TransitionConfig::new(Channel::Fermionic, [2, 4], [5, 7]),
        ];
        c.windows = vec![WindowConfig::until(2e4, 100.0)];
        c.seeds = SeedConfig { base: 3, count: 3 };
        c
    }

    #[test]
    fn cases_are_ordered_by_u_transition_window() {
        let out = execute(&small()).unwrap();
        let ids: Vec<&str> = out.cases.iter().map(|c| c.case.as_str()).collect();
        assert_eq!(
            ids,
            [
                "distinguishable_2-4_5-7_u0_full",
                "fermionic_2-4_5-7_u0_full",
                "distinguishable_2-4_5-7_u2_full",
                "fermionic_2-4_5-7_u2_full",
            ]
        );
        for case in &out.cases {
            let seeds: Vec<u64> = case.realizations.iter().map(|r| r.seed).collect();
            assert_eq!(seeds, [3, 4, 5]);
            assert_eq!(case.pooled.count, 3 * 200);
        }
    }

    #[test]
    fn fermionic_case_ignores_u() {
        let out = execute(&small()).unwrap();
        for (a, b) in out.cases[1].realizations.iter().zip(&out.cases[3].realizations) {
            assert!((a.summary.contrast - b.summary.contrast).abs() < 1e-12);
        }
    }

    #[test]
    fn single_seed_is_passthrough() {
        let mut c = small();
        c.seeds.count = 1;
        let out = execute(&c).unwrap();
        for case in &out.cases {
            assert_eq!(case.ensemble.contrast.mean, case.realizations[0].summary.contrast);
            assert_eq!(case.ensemble.contrast.std_error, 0.0);
            assert_eq!(case.pooled, case.realizations[0].summary);
        }
    }

    #[test]
    fn invalid_config_is_rejected_before_work() {
        let mut c = small();
        c.transitions[1].input = [3, 3];
        assert!(matches!(execute(&c), Err(crate::Error::Config(_))));
    }
}
