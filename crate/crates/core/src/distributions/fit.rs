use serde::{Deserialize, Serialize};

use super::{rician_contrast, DistributionModel};
use crate::speckle::summarize;
use crate::{Error, Result};

/// Which member of the family to fit by moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitKind {
    Exponential,
    /// Fixed shape when `nu` is given, otherwise `ν = 2/(C^2 - 1)`.
    KDist {
        #[serde(default)]
        nu: Option<f64>,
    },
    WeibullBound,
    Rician,
}

/// Largest ratio the Rician inversion searches.
pub const RICIAN_R_MAX: f64 = 1e6;

/// Solves `rician_contrast(r) = c` for `c` in `(0, 1]` by bisection, to
/// `1e-10` in contrast.
pub fn invert_rician_contrast(c: f64) -> Result<f64> {
    if !(c > 0.0) || c.is_nan() {
        return Err(Error::FitFailed {
            model: "rician",
            contrast: c,
            reason: "degenerate: zero contrast means r -> infinity".into(),
        });
    }
    if c > 1.0 {
        return Err(Error::FitFailed {
            model: "rician",
            contrast: c,
            reason: "contrast above 1 is not Rician-compatible".into(),
        });
    }
    if c < rician_contrast(RICIAN_R_MAX) {
        return Err(Error::FitFailed {
            model: "rician",
            contrast: c,
            reason: format!("r exceeds the search bound {RICIAN_R_MAX}"),
        });
    }
    // rician_contrast decreases monotonically in r.
    let (mut lo, mut hi) = (0.0, RICIAN_R_MAX);
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        let cm = rician_contrast(mid);
        if (cm - c).abs() < 1e-10 {
            return Ok(mid);
        }
        if cm > c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Moment-matching fit of one model to an intensity sample.
pub fn fit_by_moments(intensities: &[f64], kind: FitKind) -> Result<DistributionModel> {
    let summary = summarize(intensities)?;
    let mean = summary.mean;
    let c = summary.contrast;
    match kind {
        FitKind::Exponential => Ok(DistributionModel::Exponential { s: mean }),
        FitKind::WeibullBound => Ok(DistributionModel::WeibullBound { alpha: mean }),
        FitKind::KDist { nu: Some(nu) } => {
            if !(nu > 0.0) {
                return Err(Error::InvalidParameter(format!("nu must be positive, got {nu}")));
            }
            Ok(DistributionModel::KDist { mu: mean, nu })
        }
        FitKind::KDist { nu: None } => {
            if c <= 1.0 {
                return Err(Error::FitFailed {
                    model: "k",
                    contrast: c,
                    reason: "K contrast exceeds 1 for every shape; no nu > 0 solves it".into(),
                });
            }
            Ok(DistributionModel::KDist {
                mu: mean,
                nu: 2.0 / (c * c - 1.0),
            })
        }
        FitKind::Rician => {
            let r = invert_rician_contrast(c)?;
            Ok(DistributionModel::Rician {
                r,
                s_n: mean / (1.0 + r),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn exp(rng: &mut ChaCha8Rng) -> f64 {
        -(1.0 - rng.random::<f64>()).ln()
    }

    #[test]
    fn rician_inversion_round_trips() {
        for r in [0.0, 0.01, 0.5, 1.0, 2.0, 10.0, 1234.0] {
            let c = rician_contrast(r);
            let back = invert_rician_contrast(c).unwrap();
            assert!((rician_contrast(back) - c).abs() < 1e-10);
        }
        assert!(invert_rician_contrast(1.2).is_err());
        assert!(invert_rician_contrast(0.0).is_err());
    }

    #[test]
    fn exponential_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..100_000).map(|_| 2.0 * exp(&mut rng)).collect();
        let DistributionModel::Exponential { s } = fit_by_moments(&xs, FitKind::Exponential).unwrap() else {
            panic!()
        };
        assert!((s - 2.0).abs() < 0.04);
    }

    #[test]
    fn k_shape_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let xs: Vec<f64> = (0..200_000).map(|_| exp(&mut rng) * exp(&mut rng)).collect();
        let DistributionModel::KDist { nu, mu } = fit_by_moments(&xs, FitKind::KDist { nu: None }).unwrap() else {
            panic!()
        };
        assert!((nu - 1.0).abs() < 0.1, "{nu}");
        assert!((mu - 1.0).abs() < 0.02);
        let fixed = fit_by_moments(&xs, FitKind::KDist { nu: Some(2.0) }).unwrap();
        assert_eq!(fixed.parameters()[1], ("nu", 2.0));
    }

    #[test]
    fn degenerate_and_incompatible_fits() {
        let constant = vec![0.4; 20];
        assert!(matches!(
            fit_by_moments(&constant, FitKind::Rician),
            Err(Error::FitFailed { model: "rician", .. })
        ));
        assert!(fit_by_moments(&constant, FitKind::KDist { nu: None }).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let heavy: Vec<f64> = (0..10_000).map(|_| exp(&mut rng).powi(2)).collect();
        assert!(fit_by_moments(&heavy, FitKind::Rician).is_err());
    }

    #[test]
    fn rician_fit_preserves_mean() {
        let xs = [0.8, 1.1, 0.9, 1.3, 1.0, 0.7, 1.2];
        let m = fit_by_moments(&xs, FitKind::Rician).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((m.mean() - mean).abs() < 1e-12);
    }
}
