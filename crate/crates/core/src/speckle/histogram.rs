use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Logarithmic binning on the normalized axis `I / <I>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSettings {
    pub bins_per_decade: usize,
    /// `log10` of the lowest edge.
    pub min_decade: i32,
    /// `log10` of the highest edge.
    pub max_decade: i32,
}

impl Default for HistogramSettings {
    fn default() -> Self {
        Self {
            bins_per_decade: 16,
            min_decade: -4,
            max_decade: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    /// `bins + 1` edges on the `I / <I>` axis.
    pub edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub counts: Vec<usize>,
    /// Samples below the lowest edge, zeros included.
    pub underflow: usize,
    pub overflow: usize,
    /// Mean used for normalization.
    pub mean: f64,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Geometric bin centres.
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect()
    }

    pub fn width(&self, bin: usize) -> f64 {
        self.edges[bin + 1] - self.edges[bin]
    }

    pub fn in_range(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `sum density * width`, one up to rounding.
    pub fn total_probability(&self) -> f64 {
        (0..self.bins()).map(|b| self.densities[b] * self.width(b)).sum()
    }
}

/// Density estimate of `I / <I>` on logarithmic bins, normalized over the
/// in-range samples.
pub fn log_histogram(intensities: &[f64], settings: &HistogramSettings) -> Result<Histogram> {
    if intensities.is_empty() {
        return Err(Error::EmptySeries);
    }
    if settings.bins_per_decade == 0 || settings.max_decade <= settings.min_decade {
        return Err(Error::InvalidParameter(format!("bad histogram settings {settings:?}")));
    }
    let mean = intensities.iter().sum::<f64>() / intensities.len() as f64;
    if mean <= 0.0 || !mean.is_finite() {
        return Err(Error::ZeroMean);
    }
    let bpd = settings.bins_per_decade as f64;
    let bins = settings.bins_per_decade * (settings.max_decade - settings.min_decade) as usize;
    let lo = settings.min_decade as f64;
    let edges: Vec<f64> = (0..=bins).map(|b| 10f64.powf(lo + b as f64 / bpd)).collect();

    let mut counts = vec![0usize; bins];
    let (mut underflow, mut overflow) = (0, 0);
    for &i in intensities {
        let x = i / mean;
        if !(x >= edges[0]) {
            underflow += 1;
            continue;
        }
        if x >= edges[bins] {
            overflow += 1;
            continue;
        }
        let mut b = (((x.log10() - lo) * bpd).floor() as usize).min(bins - 1);
        // Correct for rounding of log10 at bin edges.
        if x < edges[b] {
            b -= 1;
        } else if x >= edges[b + 1] {
            b += 1;
        }
        counts[b] += 1;
    }
    let in_range: usize = counts.iter().sum();
    if in_range == 0 {
        return Err(Error::AllUnderflow(intensities.len()));
    }
    let densities = (0..bins)
        .map(|b| counts[b] as f64 / (in_range as f64 * (edges[b + 1] - edges[b])))
        .collect();
    Ok(Histogram {
        edges,
        densities,
        counts,
        underflow,
        overflow,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_value_fills_one_bin() {
        let h = log_histogram(&[3.0; 50], &HistogramSettings::default()).unwrap();
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(h.in_range(), 50);
        assert!((h.total_probability() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zeros_underflow() {
        let h = log_histogram(&[0.0, 0.0, 1.0, 2.0], &HistogramSettings::default()).unwrap();
        assert_eq!(h.underflow, 2);
        assert_eq!(h.in_range(), 2);
    }

    #[test]
    fn all_out_of_range_is_an_error() {
        let settings = HistogramSettings {
            bins_per_decade: 4,
            min_decade: 1,
            max_decade: 2,
        };
        assert!(matches!(
            log_histogram(&[1.0, 1.0], &settings),
            Err(Error::AllUnderflow(2))
        ));
    }

    #[test]
    fn exponential_density_at_the_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let xs: Vec<f64> = (0..1_000_000).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let settings = HistogramSettings {
            bins_per_decade: 20,
            ..Default::default()
        };
        let h = log_histogram(&xs, &settings).unwrap();
        // Bins meeting at I/<I> = 1.
        let b = h.edges.iter().position(|&e| (e - 1.0).abs() < 1e-12).unwrap();
        let lo = h.edges[b];
        let hi = h.edges[b + 1];
        let expected = ((-lo).exp() - (-hi).exp()) / (hi - lo);
        assert!(((h.densities[b] - expected) / expected).abs() < 0.05);
        let at_one = 0.5 * (h.densities[b - 1] + h.densities[b]);
        assert!((at_one / (-1f64).exp() - 1.0).abs() < 0.05, "{at_one}");
    }

    proptest! {
        #[test]
        fn normalization_and_scale_invariance(
            xs in prop::collection::vec(1e-3f64..1e2, 1..300),
            c in 1e-4f64..1e4,
        ) {
            let s = HistogramSettings::default();
            let a = log_histogram(&xs, &s).unwrap();
            prop_assert!((a.total_probability() - 1.0).abs() < 1e-9);
            prop_assert_eq!(a.in_range() + a.underflow + a.overflow, xs.len());
            let scaled: Vec<f64> = xs.iter().map(|x| x * c).collect();
            let b = log_histogram(&scaled, &s).unwrap();
            for (da, db) in a.densities.iter().zip(&b.densities) {
                prop_assert!((da - db).abs() <= 1e-9 * da.max(1.0));
            }
        }
    }
}
