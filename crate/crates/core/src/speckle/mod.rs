//! Intensity time series and their statistics.

mod ensemble;
mod grid;
mod histogram;
mod summary;

pub use ensemble::{ensemble_average, EnsemblePoint};
pub use grid::{default_windows, TimeGrid, DEFAULT_STEP, DEFAULT_WINDOW_SPAN};
pub use histogram::{log_histogram, Histogram, HistogramSettings};
pub use summary::{summarize, SpeckleSummary};

use serde::Serialize;

use crate::spectral::{Channel, ComplexAmplitude, PhasorList};
use crate::Result;

/// Anything that yields a transition amplitude at time `t`.
pub trait AmplitudeSource {
    fn amplitude(&self, t: f64) -> ComplexAmplitude;
}

impl AmplitudeSource for PhasorList {
    fn amplitude(&self, t: f64) -> ComplexAmplitude {
        self.evaluate(t)
    }
}

impl<F: Fn(f64) -> ComplexAmplitude> AmplitudeSource for F {
    fn amplitude(&self, t: f64) -> ComplexAmplitude {
        self(t)
    }
}

/// Where a series came from. Sites are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub channel: Channel,
    pub n: usize,
    pub w: f64,
    pub u: f64,
    pub seed: u64,
    pub input: (usize, usize),
    pub output: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntensitySeries {
    pub grid: TimeGrid,
    pub intensities: Vec<f64>,
    pub provenance: Option<Provenance>,
}

impl IntensitySeries {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.grid.times()
    }

    pub fn len(&self) -> usize {
        self.intensities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intensities.is_empty()
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }
}

/// `I(t) = |amplitude(t)|^2` on every grid point.
pub fn sample_series<S: AmplitudeSource + ?Sized>(source: &S, grid: &TimeGrid) -> IntensitySeries {
    let intensities = grid.times().map(|t| source.amplitude(t).intensity()).collect();
    IntensitySeries {
        grid: grid.clone(),
        intensities,
        provenance: None,
    }
}

/// One summary per window.
pub fn windowed_contrast<S: AmplitudeSource + ?Sized>(source: &S, windows: &[TimeGrid]) -> Result<Vec<SpeckleSummary>> {
    windows
        .iter()
        .map(|w| summarize(&sample_series(source, w).intensities))
        .collect()
}
