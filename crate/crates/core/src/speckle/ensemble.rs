use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Mean and dispersion of one quantity over disorder realizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsemblePoint {
    pub mean: f64,
    /// Sample standard deviation (`n - 1`); zero for a single realization.
    pub std_dev: f64,
    pub std_error: f64,
    pub count: usize,
}

impl EnsemblePoint {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std_dev = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std_dev,
            std_error: std_dev / (n as f64).sqrt(),
            count: n,
        }
    }
}

/// Runs `experiment` once per seed (concurrently) and averages each output
/// coordinate over seeds. Results are merged in seed order, so the outcome
/// does not depend on scheduling.
pub fn ensemble_average<F>(seeds: &[u64], experiment: F) -> Result<Vec<EnsemblePoint>>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync,
{
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("ensemble needs at least one seed".into()));
    }
    let runs: Vec<Vec<f64>> = seeds.par_iter().map(|&s| experiment(s)).collect::<Result<_>>()?;
    let points = runs[0].len();
    if runs.iter().any(|r| r.len() != points) {
        return Err(Error::InvalidParameter(
            "realizations returned different point counts".into(),
        ));
    }
    Ok((0..points)
        .map(|p| {
            let values: Vec<f64> = runs.iter().map(|r| r[p]).collect();
            EnsemblePoint::from_values(&values)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_seed_passes_through() {
        let out = ensemble_average(&[5], |s| Ok(vec![s as f64, 2.0])).unwrap();
        assert_eq!(out[0].mean, 5.0);
        assert_eq!(out[1].mean, 2.0);
        assert_eq!(out[0].std_error, 0.0);
    }

    #[test]
    fn constant_experiment_has_no_dispersion() {
        let seeds: Vec<u64> = (0..16).collect();
        let out = ensemble_average(&seeds, |_| Ok(vec![1.25])).unwrap();
        assert_eq!(out[0].std_dev, 0.0);
        assert_eq!(out[0].count, 16);
    }

    #[test]
    fn mean_and_error() {
        let out = ensemble_average(&[1, 2, 3, 4], |s| Ok(vec![s as f64])).unwrap();
        assert!((out[0].mean - 2.5).abs() < 1e-15);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((out[0].std_error - sd / 2.0).abs() < 1e-15);
        assert!(ensemble_average(&[], |_| Ok(vec![])).is_err());
    }
}
