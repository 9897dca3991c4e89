use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Sampling step used by the reference experiments, in units of `1/J`.
pub const DEFAULT_STEP: f64 = 100.0;
/// Width of each default observation window.
pub const DEFAULT_WINDOW_SPAN: f64 = 1e5;

fn positive_step(step: f64) -> Result<()> {
    if step > 0.0 && step.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!(
            "extent-based grids need a positive step, got {step}"
        )))
    }
}

/// Uniform grid `t_k = t_start + k * step`, `k = 0..count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub step: f64,
    pub count: usize,
    #[serde(default = "custom_label")]
    pub label: String,
}

fn custom_label() -> String {
    "custom".to_string()
}

impl TimeGrid {
    pub fn new(t_start: f64, step: f64, count: usize, label: impl Into<String>) -> Result<Self> {
        let grid = Self {
            t_start,
            step,
            count,
            label: label.into(),
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples, got {}",
                self.count
            )));
        }
        if !(self.t_start >= 0.0 && self.t_start.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "start time must be >= 0, got {}",
                self.t_start
            )));
        }
        if !(self.step >= 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidGrid(format!("step must be >= 0, got {}", self.step)));
        }
        Ok(())
    }

    /// `t = step, 2 step, ..., t_max`. The initial time is skipped since the
    /// amplitude there is a Kronecker delta.
    pub fn up_to(t_max: f64, step: f64) -> Result<Self> {
        positive_step(step)?;
        Self::new(step, step, (t_max / step).round() as usize, "custom")
    }

    /// Window `(t0, t0 + span]` sampled every `step`.
    pub fn window(t0: f64, span: f64, step: f64, label: impl Into<String>) -> Result<Self> {
        positive_step(step)?;
        Self::new(t0 + step, step, (span / step).round() as usize, label)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |k| self.t_start + k as f64 * self.step)
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + (self.count.saturating_sub(1)) as f64 * self.step
    }

    /// Successive phases decorrelate only when `step * J >> 1`.
    pub fn warnings(&self, hopping: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.step * hopping < 10.0 {
            out.push(format!(
                "grid '{}': step*J = {} < 10; successive samples are correlated",
                self.label,
                self.step * hopping
            ));
        }
        out
    }

    /// Divides the extent (sample count) by `factor`, keeping start and step.
    pub fn scaled(&self, factor: f64) -> Self {
        let count = ((self.count as f64 / factor).round() as usize).max(2);
        Self { count, ..self.clone() }
    }
}

/// Short `(0, 1e5]`, intermediate `(1e6, 1e6 + 1e5]` and long
/// `(1e9, 1e9 + 1e5]` windows, step 100.
pub fn default_windows() -> Vec<TimeGrid> {
    [(0.0, "short"), (1e6, "intermediate"), (1e9, "long")]
        .into_iter()
        .map(|(t0, label)| TimeGrid::window(t0, DEFAULT_WINDOW_SPAN, DEFAULT_STEP, label).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(TimeGrid::new(0.0, 1.0, 1, "x").is_err());
        assert!(TimeGrid::new(-1.0, 1.0, 5, "x").is_err());
        assert!(TimeGrid::new(0.0, f64::NAN, 5, "x").is_err());
        assert!(TimeGrid::new(0.0, 0.0, 2, "x").is_ok());
        assert!(TimeGrid::window(0.0, 1e5, 0.0, "x").is_err());
        assert!(TimeGrid::up_to(1e5, -1.0).is_err());
    }

    #[test]
    fn default_windows_layout() {
        let w = default_windows();
        assert_eq!(w.len(), 3);
        assert_eq!(w[0].t_start, 100.0);
        assert_eq!(w[0].t_end(), 1e5);
        assert_eq!(w[1].t_start, 1e6 + 100.0);
        assert_eq!(w[2].t_end(), 1e9 + 1e5);
        assert!(w.iter().all(|g| g.count == 1000 && g.warnings(1.0).is_empty()));
    }

    #[test]
    fn warns_on_short_step() {
        let g = TimeGrid::new(0.0, 1.0, 10, "fine").unwrap();
        assert_eq!(g.warnings(1.0).len(), 1);
    }

    #[test]
    fn scaling_keeps_step() {
        let g = TimeGrid::up_to(1e6, 100.0).unwrap();
        assert_eq!(g.count, 10_000);
        let s = g.scaled(10.0);
        assert_eq!((s.step, s.t_start, s.count), (100.0, 100.0, 1000));
        assert_eq!(g.scaled(1e9).count, 2);
    }
}
