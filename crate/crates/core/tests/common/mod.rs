//! Independent samplers for the distribution family, built from each
//! model's physical construction rather than from its density.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hbt_speckle::distributions::DistributionModel;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_exponential(rng: &mut ChaCha8Rng) -> f64 {
    -(1.0 - rng.random::<f64>()).ln()
}

/// Box-Muller pair of independent standard normals.
pub fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let r = (-2.0 * (1.0 - rng.random::<f64>()).ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * rng.random::<f64>()).sin_cos();
    (r * c, r * s)
}

/// Exponential intensity times a unit-mean Gamma(ν) built from `ν`
/// exponentials. Integer shapes only.
pub fn k_sample(rng: &mut ChaCha8Rng, mu: f64, nu: u32) -> f64 {
    let gamma: f64 = (0..nu).map(|_| unit_exponential(rng)).sum::<f64>() / nu as f64;
    mu * unit_exponential(rng) * gamma
}

/// Square of an exponential amplitude, scaled to mean `alpha`.
pub fn weibull_bound_sample(rng: &mut ChaCha8Rng, alpha: f64) -> f64 {
    let e = unit_exponential(rng);
    0.5 * alpha * e * e
}

/// One constant phasor of intensity `r s_n` plus a circular Gaussian
/// background of mean intensity `s_n`.
pub fn rician_sample(rng: &mut ChaCha8Rng, r: f64, s_n: f64) -> f64 {
    let (x, y) = normal_pair(rng);
    let sigma = (0.5 * s_n).sqrt();
    let re = (r * s_n).sqrt() + sigma * x;
    let im = sigma * y;
    re * re + im * im
}

/// Draws from any model of the family.
pub fn sample(model: &DistributionModel, rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    (0..count)
        .map(|_| match model {
            DistributionModel::Exponential { s } => s * unit_exponential(rng),
            DistributionModel::KDist { mu, nu } => k_sample(rng, *mu, *nu as u32),
            DistributionModel::WeibullBound { alpha } => weibull_bound_sample(rng, *alpha),
            DistributionModel::Rician { r, s_n } => rician_sample(rng, *r, *s_n),
            DistributionModel::CompoundRician { r_samples, s_n } => {
                let r = r_samples[rng.random_range(0..r_samples.len())];
                rician_sample(rng, r, *s_n)
            }
        })
        .collect()
}

/// Worst relative error between empirical and model bin probabilities over
/// the three decades (10 bins each) ending at the empirical 99th
/// percentile of `I / <I>`. Model probabilities are exact bin integrals.
pub fn worst_bin_error(model: &DistributionModel, samples: &[f64]) -> f64 {
    let mean = model.mean();
    let mut xs: Vec<f64> = samples.iter().map(|s| s / mean).collect();
    xs.sort_by(|a, b| a.total_cmp(b));
    let top = xs[(0.99 * xs.len() as f64) as usize].log10();
    let n = xs.len() as f64;
    let mut worst: f64 = 0.0;
    for b in 0..30 {
        let lo = 10f64.powf(top - 3.0 + b as f64 / 10.0);
        let hi = 10f64.powf(top - 3.0 + (b + 1) as f64 / 10.0);
        let count = xs.partition_point(|&x| x < hi) - xs.partition_point(|&x| x < lo);
        let expected = model.probability_between(lo * mean, hi * mean, 1e-12);
        worst = worst.max((count as f64 / n / expected - 1.0).abs());
    }
    worst
}
