//! Speckle statistics of two interacting quantum particles on a weakly
//! disordered tight-binding chain.
//!
//! The crate builds the single-particle and two-particle Hamiltonians of a
//! disordered chain with on-site interaction, diagonalizes them, evaluates
//! exact transition amplitudes as phasor sums over eigenstates, and
//! characterizes the resulting intensity time series against the exponential,
//! K, Weibull, Rician and compound Rician families.
//!
//! Module map:
//! - [`model`]: chain parameters, disorder sampling, basis index maps and
//!   Hamiltonian construction for each subspace.
//! - [`spectral`]: dense symmetric eigendecomposition, transition amplitudes,
//!   phasor lists and bound-state classification.
//! - [`speckle`]: time grids, intensity series, contrast/moment summaries,
//!   log-binned histograms and ensemble averaging.
//! - [`distributions`]: special functions, densities, moment fits, the
//!   dominant-phasor construction of g(r) and KS distances.
//! - [`experiment`]: configuration, presets and the artifact-writing runner
//!   behind the `hbt-speckle` binary.

pub mod distributions;
pub mod error;
pub mod experiment;
pub mod model;
pub mod speckle;
pub mod spectral;

pub use error::{Error, Result};
