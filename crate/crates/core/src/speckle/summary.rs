use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Population statistics of an intensity sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeckleSummary {
    pub mean: f64,
    pub std_dev: f64,
    /// `std_dev / mean`.
    pub contrast: f64,
    /// `<I^n> / <I>^n` for `n = 2, 3, 4`.
    pub normalized_moments: [f64; 3],
    pub count: usize,
}

/// Mean, contrast and normalized moments, dividing by the sample count.
pub fn summarize(intensities: &[f64]) -> Result<SpeckleSummary> {
    if intensities.is_empty() {
        return Err(Error::EmptySeries);
    }
    let n = intensities.len() as f64;
    let mean = intensities.iter().sum::<f64>() / n;
    if mean <= 0.0 || !mean.is_finite() {
        return Err(Error::ZeroMean);
    }
    let variance = intensities.iter().map(|i| (i - mean).powi(2)).sum::<f64>() / n;
    let std_dev = variance.sqrt();
    let contrast = std_dev / mean;

    let mut moments = [0.0; 3];
    for &i in intensities {
        let x = i / mean;
        let x2 = x * x;
        moments[0] += x2;
        moments[1] += x2 * x;
        moments[2] += x2 * x2;
    }
    for m in &mut moments {
        *m /= n;
    }
    Ok(SpeckleSummary {
        mean,
        std_dev,
        contrast,
        normalized_moments: moments,
        count: intensities.len(),
    })
}
