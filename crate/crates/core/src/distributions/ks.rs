use rayon::prelude::*;

use super::DistributionModel;
use crate::{Error, Result};

const PANELS: usize = 240;
const GL_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

/// CDF tabulated in `u = sqrt(I)` with piecewise Gauss-Legendre panels and
/// cubic Hermite interpolation between panel edges (slopes from the density).
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    u_max: f64,
    du: f64,
    cdf: Vec<f64>,
    slope: Vec<f64>,
}

impl TabulatedCdf {
    /// Tabulates `model` on `[0, i_max]`. Past `i_max` the CDF is taken as 1.
    pub fn new(model: &DistributionModel, i_max: f64) -> Self {
        let u_max = i_max.sqrt();
        let du = u_max / PANELS as f64;
        // Density in u: p(u^2) 2u.
        let density = |u: f64| {
            if u <= 0.0 {
                0.0
            } else {
                model.pdf(u * u).unwrap_or(0.0) * 2.0 * u
            }
        };
        let panels: Vec<(f64, f64)> = (0..PANELS)
            .into_par_iter()
            .map(|p| {
                let a = p as f64 * du;
                let mid = a + 0.5 * du;
                let mass = GL_NODES
                    .iter()
                    .zip(GL_WEIGHTS)
                    .map(|(x, w)| w * density(mid + 0.5 * du * x))
                    .sum::<f64>()
                    * 0.5
                    * du;
                (mass, density(a + du))
            })
            .collect();
        let mut cdf = Vec::with_capacity(PANELS + 1);
        let mut slope = Vec::with_capacity(PANELS + 1);
        cdf.push(0.0);
        slope.push(density(du * 1e-9));
        let mut acc = 0.0;
        for (mass, end_slope) in panels {
            acc += mass;
            cdf.push(acc);
            slope.push(end_slope);
        }
        Self { u_max, du, cdf, slope }
    }

    pub fn eval(&self, i: f64) -> f64 {
        if i <= 0.0 {
            return 0.0;
        }
        let u = i.sqrt();
        if u >= self.u_max {
            return 1.0;
        }
        let p = ((u / self.du) as usize).min(PANELS - 1);
        let t = (u - p as f64 * self.du) / self.du;
        let (y0, y1) = (self.cdf[p], self.cdf[p + 1]);
        let (m0, m1) = (self.slope[p] * self.du, self.slope[p + 1] * self.du);
        let t2 = t * t;
        let t3 = t2 * t;
        let v =
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
        // Hermite cubics may overshoot the bracketing values slightly.
        v.clamp(y0, y1).clamp(0.0, 1.0)
    }
}

/// Kolmogorov-Smirnov distance `sup |F_emp - F_model|`.
pub fn ks_distance(samples: &[f64], model: &DistributionModel) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;

    let table;
    let cdf: Box<dyn Fn(f64) -> f64 + '_> = if model.cdf_closed_form(1.0).is_some() {
        Box::new(|i| model.cdf_closed_form(i).unwrap())
    } else {
        let i_max = (sorted[sorted.len() - 1] * 1.0001).max(50.0 * model.mean());
        table = TabulatedCdf::new(model, i_max);
        Box::new(|i| table.eval(i))
    };

    let mut d: f64 = 0.0;
    for (k, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - k as f64 / n).max((k + 1) as f64 / n - f);
    }
    Ok(d)
}
