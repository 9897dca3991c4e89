//! Intensity distributions of random phasor sums.
//!
//! | model | construction | contrast |
//! |---|---|---|
//! | exponential | fully developed speckle | 1 |
//! | K (shape ν) | product of exponential/gamma intensities | `sqrt((ν+2)/ν)` |
//! | bound Weibull | square of an exponential intensity | `sqrt(5)` |
//! | Rician | one constant phasor over a diffuse background | `sqrt(1+2r)/(1+r)` |
//! | compound Rician | Rician averaged over a ratio density g(r) | from moments |
//!
//! Densities singular at `I = 0` (K with ν <= 1, Weibull) return
//! `f64::INFINITY` there.

mod compound;
mod fit;
mod ks;
pub mod quadrature;
pub mod special;

use serde::Serialize;

use crate::{Error, Result};

pub use compound::{build_g_of_r, RatioSamples, DEFAULT_MC_SAMPLES, DEFAULT_N_DOMINANT};
pub use fit::{fit_by_moments, invert_rician_contrast, FitKind};
pub use ks::{ks_distance, TabulatedCdf};

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

fn intensity(i: f64) -> Result<()> {
    if i >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("intensity must be >= 0, got {i}")))
    }
}

/// `s^-1 e^{-I/s}`.
pub fn pdf_exponential(i: f64, s: f64) -> Result<f64> {
    positive("s", s)?;
    intensity(i)?;
    Ok((-i / s).exp() / s)
}

/// K density with mean `mu` and shape `nu`:
/// `2ν/(μΓ(ν)) · (sqrt(Iν/μ))^{ν-1} · K_{ν-1}(2 sqrt(Iν/μ))`.
pub fn pdf_k(i: f64, mu: f64, nu: f64) -> Result<f64> {
    positive("mu", mu)?;
    positive("nu", nu)?;
    intensity(i)?;
    if i == 0.0 {
        // Finite limit only for ν > 1: Γ(ν-1)/Γ(ν) · ν/μ.
        return Ok(if nu > 1.0 {
            nu / (mu * (nu - 1.0))
        } else {
            f64::INFINITY
        });
    }
    let z = (i * nu / mu).sqrt();
    let log_prefactor = (2.0 * nu / mu).ln() - special::ln_gamma(nu) + (nu - 1.0) * z.ln();
    let k = special::bessel_k(nu - 1.0, 2.0 * z);
    if k == 0.0 {
        return Ok(0.0);
    }
    Ok((log_prefactor + k.ln()).exp())
}

/// Contrast `sqrt((ν+2)/ν)` of the K density.
pub fn k_contrast(nu: f64) -> f64 {
    ((nu + 2.0) / nu).sqrt()
}

/// Density of `I = X^2` with `X` exponential, mean `alpha`:
/// `α^-1 (2y)^{-1/2} e^{-sqrt(2y)}` with `y = I/α`.
pub fn pdf_weibull_bound(i: f64, alpha: f64) -> Result<f64> {
    positive("alpha", alpha)?;
    intensity(i)?;
    if i == 0.0 {
        return Ok(f64::INFINITY);
    }
    let u = (2.0 * i / alpha).sqrt();
    Ok((-u).exp() / (alpha * u))
}

/// Contrast of the bound-state Weibull density.
pub fn weibull_bound_contrast() -> f64 {
    5f64.sqrt()
}

/// Rician density: `s_n^-1 e^{-(r + I/s_n)} I0(2 sqrt(I r / s_n))`.
pub fn pdf_rician(i: f64, r: f64, s_n: f64) -> Result<f64> {
    positive("s_n", s_n)?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("r must be >= 0, got {r}")));
    }
    intensity(i)?;
    Ok(rician_unchecked(i, r, s_n))
}

#[inline]
fn rician_unchecked(i: f64, r: f64, s_n: f64) -> f64 {
    let x = 2.0 * (i * r / s_n).sqrt();
    special::bessel_i0_times_exp(x, r + i / s_n) / s_n
}

/// Contrast `sqrt(1+2r)/(1+r)` of the Rician density.
pub fn rician_contrast(r: f64) -> f64 {
    (1.0 + 2.0 * r).sqrt() / (1.0 + r)
}

/// Monte Carlo evaluation of `∫ R(I|r) g(r) dr`: the mean Rician density
/// over the supplied ratio samples.
pub fn pdf_compound_rician(i: f64, r_samples: &[f64], s_n: f64) -> Result<f64> {
    positive("s_n", s_n)?;
    intensity(i)?;
    if r_samples.is_empty() {
        return Err(Error::InvalidParameter("empty r sample set".into()));
    }
    Ok(r_samples.iter().map(|&r| rician_unchecked(i, r, s_n)).sum::<f64>() / r_samples.len() as f64)
}

/// One member of the distribution family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionModel {
    Exponential {
        s: f64,
    },
    KDist {
        mu: f64,
        nu: f64,
    },
    WeibullBound {
        alpha: f64,
    },
    Rician {
        r: f64,
        s_n: f64,
    },
    CompoundRician {
        #[serde(skip)]
        r_samples: Vec<f64>,
        s_n: f64,
    },
}

impl DistributionModel {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Exponential { .. } => "exponential",
            Self::KDist { .. } => "k",
            Self::WeibullBound { .. } => "weibull_bound",
            Self::Rician { .. } => "rician",
            Self::CompoundRician { .. } => "compound_rician",
        }
    }

    pub fn pdf(&self, i: f64) -> Result<f64> {
        match self {
            Self::Exponential { s } => pdf_exponential(i, *s),
            Self::KDist { mu, nu } => pdf_k(i, *mu, *nu),
            Self::WeibullBound { alpha } => pdf_weibull_bound(i, *alpha),
            Self::Rician { r, s_n } => pdf_rician(i, *r, *s_n),
            Self::CompoundRician { r_samples, s_n } => pdf_compound_rician(i, r_samples, *s_n),
        }
    }

    /// Closed-form mean implied by the parameters.
    pub fn mean(&self) -> f64 {
        match self {
            Self::Exponential { s } => *s,
            Self::KDist { mu, .. } => *mu,
            Self::WeibullBound { alpha } => *alpha,
            Self::Rician { r, s_n } => s_n * (1.0 + r),
            Self::CompoundRician { r_samples, s_n } => {
                s_n * (1.0 + r_samples.iter().sum::<f64>() / r_samples.len().max(1) as f64)
            }
        }
    }

    /// Closed-form contrast implied by the parameters.
    pub fn contrast(&self) -> f64 {
        match self {
            Self::Exponential { .. } => 1.0,
            Self::KDist { nu, .. } => k_contrast(*nu),
            Self::WeibullBound { .. } => weibull_bound_contrast(),
            Self::Rician { r, .. } => rician_contrast(*r),
            Self::CompoundRician { r_samples, s_n } => {
                // Rician moments: <I> = s(1+r), <I^2> = s^2 (2 + 4r + r^2).
                let m = r_samples.len().max(1) as f64;
                let mean_r = r_samples.iter().sum::<f64>() / m;
                let second = r_samples.iter().map(|r| 2.0 + 4.0 * r + r * r).sum::<f64>() / m;
                let mean = s_n * (1.0 + mean_r);
                let var = s_n * s_n * second - mean * mean;
                var.max(0.0).sqrt() / mean
            }
        }
    }

    /// Closed-form CDF where one exists.
    pub fn cdf_closed_form(&self, i: f64) -> Option<f64> {
        if i <= 0.0 {
            return Some(0.0);
        }
        match self {
            Self::Exponential { s } => Some(-(-i / s).exp_m1()),
            Self::WeibullBound { alpha } => Some(-(-(2.0 * i / alpha).sqrt()).exp_m1()),
            Self::KDist { mu, nu } if *nu == 1.0 => {
                let y = 2.0 * (i / mu).sqrt();
                Some(1.0 - y * special::bessel_k1(y))
            }
            _ => None,
        }
    }

    /// `∫_0^∞ I^k p(I) dI`, integrating in `u = sqrt(I)` to remove the
    /// inverse square-root singularities at the origin.
    pub fn moment_by_quadrature(&self, k: i32, tol: f64) -> f64 {
        let scale = self.mean().sqrt();
        quadrature::integrate_to_infinity(
            |u| {
                if u <= 0.0 {
                    return 0.0;
                }
                let i = u * u;
                i.powi(k) * self.pdf(i).unwrap_or(0.0) * 2.0 * u
            },
            scale,
            tol,
        )
    }

    /// `∫_a^b p(I) dI` in the `u = sqrt(I)` variable.
    pub fn probability_between(&self, a: f64, b: f64, tol: f64) -> f64 {
        quadrature::integrate(
            |u| {
                if u <= 0.0 {
                    return 0.0;
                }
                self.pdf(u * u).unwrap_or(0.0) * 2.0 * u
            },
            a.max(0.0).sqrt(),
            b.sqrt(),
            tol,
        )
    }

    /// Density on the normalized axis `x = I / <I>`.
    pub fn normalized_pdf(&self, x: f64) -> Result<f64> {
        let mean = self.mean();
        Ok(mean * self.pdf(x * mean)?)
    }

    /// Parameters as name/value pairs. For the compound Rician the ratio
    /// set is summarized by its size and mean.
    pub fn parameters(&self) -> Vec<(&'static str, f64)> {
        match self {
            Self::Exponential { s } => vec![("s", *s)],
            Self::KDist { mu, nu } => vec![("mu", *mu), ("nu", *nu)],
            Self::WeibullBound { alpha } => vec![("alpha", *alpha)],
            Self::Rician { r, s_n } => vec![("r", *r), ("s_n", *s_n)],
            Self::CompoundRician { r_samples, s_n } => vec![
                ("s_n", *s_n),
                ("r_mean", r_samples.iter().sum::<f64>() / r_samples.len().max(1) as f64),
                ("r_count", r_samples.len() as f64),
            ],
        }
    }
}
