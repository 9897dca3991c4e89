use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DistributionModel;
use crate::spectral::PhasorList;
use crate::{Error, Result};

pub const DEFAULT_N_DOMINANT: usize = 4;
pub const DEFAULT_MC_SAMPLES: usize = 100_000;

/// Empirical ratio density g(r) with the diffuse background mean.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSamples {
    pub r_samples: Vec<f64>,
    /// Mean intensity of the non-dominant phasors, `sum |b_k|^2`.
    pub s_n: f64,
    /// Indices (into the phasor list) of the dominant phasors.
    pub dominant: Vec<usize>,
}

impl RatioSamples {
    pub fn into_model(self) -> DistributionModel {
        DistributionModel::CompoundRician {
            r_samples: self.r_samples,
            s_n: self.s_n,
        }
    }
}

/// Splits off the `n_dominant` largest phasors, treats the rest as an
/// exponential background of mean `s_n`, and samples the dominant resultant
/// `I0 = |sum b_k e^{i phi_k}|^2` over independent uniform phases to obtain
/// `r = I0 / s_n`.
pub fn build_g_of_r(phasors: &PhasorList, n_dominant: usize, mc_samples: usize, seed: u64) -> Result<RatioSamples> {
    if phasors.is_empty() || n_dominant == 0 || n_dominant >= phasors.len() {
        return Err(Error::InvalidParameter(format!(
            "need 0 < n_dominant ({n_dominant}) < phasor count ({})",
            phasors.len()
        )));
    }
    if mc_samples == 0 {
        return Err(Error::InvalidParameter("mc_samples must be positive".into()));
    }
    let order = phasors.order_by_magnitude();
    let (dominant, rest) = order.split_at(n_dominant);
    let s_n: f64 = rest.iter().map(|&k| phasors.coefficients[k].powi(2)).sum();
    if s_n <= 0.0 {
        return Err(Error::EmptyBackground);
    }
    let amplitudes: Vec<f64> = dominant.iter().map(|&k| phasors.coefficients[k]).collect();

    let r_samples = if amplitudes.len() == 1 {
        vec![amplitudes[0].powi(2) / s_n; mc_samples]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..mc_samples)
            .map(|_| {
                let (mut re, mut im) = (0.0, 0.0);
                for b in &amplitudes {
                    let (s, c) = (std::f64::consts::TAU * rng.random::<f64>()).sin_cos();
                    re += b * c;
                    im += b * s;
                }
                (re * re + im * im) / s_n
            })
            .collect()
    };
    Ok(RatioSamples {
        r_samples,
        s_n,
        dominant: dominant.to_vec(),
    })
}
