//! Exact propagation through eigendecompositions.
//!
//! Every transition amplitude `<out| e^{-iHt} |in>` is a phasor sum
//! `sum_k b_k e^{-i E_k t}` with real weights `b_k = v_{k,out} v_{k,in}`.
//! The decomposition is computed once and reused for arbitrarily many times.
//!
//! Phases `E_k t` are formed in double precision. At `t ~ 1e9` the phase
//! error is dominated by the eigenvalue error times `t`, which leaves the
//! intensity statistics unaffected since the phases are effectively random.

mod amplitude;
mod propagator;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::model::{BasisIndex, ChainSpec, HamiltonianMatrix, Subspace};
use crate::{Error, Result};

pub use amplitude::{
    bosonic_amplitude, bosonic_phasors, distinguishable_amplitude, distinguishable_phasors, fermionic_amplitude,
    fermionic_phasors, product_amplitude_u0, product_phasors_u0, transition_amplitude, DistinguishableSource,
};
pub use propagator::{Channel, DistinguishableMethod, Propagator};

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// stored as matrix columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub basis: BasisIndex,
    pub spec: ChainSpec,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub fn subspace(&self) -> Subspace {
        self.basis.subspace()
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Amplitude `<j|E_k>`.
    #[inline]
    pub fn component(&self, k: usize, j: usize) -> f64 {
        self.eigenvectors[(j, k)]
    }

    /// `max |V^T V - 1|`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.eigenvectors.transpose() * &self.eigenvectors;
        let n = self.dim();
        (gram - DMatrix::identity(n, n)).amax()
    }

    /// `V diag(E) V^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut scaled = self.eigenvectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= self.eigenvalues[k];
        }
        scaled * self.eigenvectors.transpose()
    }

    /// Probability weight of each eigenstate on the double-occupancy kets.
    pub fn double_occupancy_weights(&self) -> Vec<f64> {
        let doubles = self.basis.double_occupancy();
        (0..self.dim())
            .map(|k| doubles.iter().map(|&j| self.component(k, j).powi(2)).sum())
            .collect()
    }

    fn check_index(&self, idx: usize) -> Result<()> {
        if idx >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: idx,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    fn expect(&self, subspace: Subspace) -> Result<()> {
        if self.subspace() != subspace {
            return Err(Error::WrongSubspace {
                expected: subspace.to_string(),
                actual: self.subspace().to_string(),
            });
        }
        Ok(())
    }
}

/// Iteration budget handed to the implicit QR sweep.
pub fn iteration_budget(dim: usize) -> usize {
    10_000 + 100 * dim
}

/// Dense symmetric eigendecomposition with eigenvalues sorted ascending.
pub fn diagonalize(h: &HamiltonianMatrix) -> Result<SpectralDecomposition> {
    let m = &h.matrix;
    let asym = (m - m.transpose()).amax();
    if asym > 0.0 {
        return Err(Error::NotSymmetric(asym));
    }
    let budget = iteration_budget(h.dim());
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, budget)
        .ok_or(Error::NoConvergence { max_iterations: budget })?;

    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(h.dim(), h.dim(), |j, k| eig.eigenvectors[(j, order[k])]);
    Ok(SpectralDecomposition {
        basis: h.basis.clone(),
        spec: h.spec,
        eigenvalues,
        eigenvectors,
    })
}

/// A complex number `re + i im`; the modulus is `A`, the intensity `A^2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[repr(C)]
pub struct ComplexAmplitude {
    pub re: f64,
    pub im: f64,
}

impl ComplexAmplitude {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };
    pub const ONE: Self = Self { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// `e^{-i phase}`.
    pub fn unit(phase: f64) -> Self {
        let (s, c) = phase.sin_cos();
        Self { re: c, im: -s }
    }

    pub fn modulus(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn phase(self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn intensity(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.re * s, self.im * s)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).modulus()
    }
}

impl std::ops::Add for ComplexAmplitude {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl std::ops::Sub for ComplexAmplitude {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl std::ops::Mul for ComplexAmplitude {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhasorClass {
    Scattering,
    Bound,
}

/// Real phasor weights `b_k` with eigenvalues `E_k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhasorList {
    pub coefficients: Vec<f64>,
    pub energies: Vec<f64>,
    pub classes: Vec<PhasorClass>,
}

impl PhasorList {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn push(&mut self, coefficient: f64, energy: f64, class: PhasorClass) {
        self.coefficients.push(coefficient);
        self.energies.push(energy);
        self.classes.push(class);
    }

    /// Appends `other` with every weight multiplied by `factor`.
    pub fn extend_scaled(&mut self, other: &PhasorList, factor: f64) {
        for k in 0..other.len() {
            self.push(factor * other.coefficients[k], other.energies[k], other.classes[k]);
        }
    }

    /// `sum_k b_k e^{-i E_k t}`.
    pub fn evaluate(&self, t: f64) -> ComplexAmplitude {
        let (mut re, mut im) = (0.0, 0.0);
        for (b, e) in self.coefficients.iter().zip(&self.energies) {
            let (s, c) = (e * t).sin_cos();
            re += b * c;
            im -= b * s;
        }
        ComplexAmplitude::new(re, im)
    }

    /// `sum_k |b_k|^2`, the long-time mean intensity for a non-degenerate
    /// spectrum.
    pub fn total_weight(&self) -> f64 {
        self.coefficients.iter().map(|b| b * b).sum()
    }

    /// Keeps only phasors of class `class`.
    pub fn filter(&self, class: PhasorClass) -> PhasorList {
        let mut out = PhasorList::default();
        for k in 0..self.len() {
            if self.classes[k] == class {
                out.push(self.coefficients[k], self.energies[k], class);
            }
        }
        out
    }

    /// Indices sorted by decreasing `|b_k|`.
    pub fn order_by_magnitude(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.coefficients[b].abs().total_cmp(&self.coefficients[a].abs()));
        idx
    }
}

/// Phasor weights `b_k = v_{k,out} v_{k,in}` of one transition, with each
/// eigenstate labelled bound when its double-occupancy weight exceeds 1/2.
pub fn phasor_decomposition(dec: &SpectralDecomposition, input: usize, output: usize) -> Result<PhasorList> {
    dec.check_index(input)?;
    dec.check_index(output)?;
    let weights = dec.double_occupancy_weights();
    let mut list = PhasorList::default();
    for (k, &weight) in weights.iter().enumerate() {
        let class = if weight > BOUND_WEIGHT_THRESHOLD {
            PhasorClass::Bound
        } else {
            PhasorClass::Scattering
        };
        list.push(
            dec.component(k, output) * dec.component(k, input),
            dec.eigenvalues[k],
            class,
        );
    }
    Ok(list)
}

/// Double-occupancy weight above which an eigenstate counts as bound.
pub const BOUND_WEIGHT_THRESHOLD: f64 = 0.5;

/// Split of two-particle eigenstates into scattering and bound sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundClassification {
    /// Double-occupancy weight of every eigenstate, in eigenvalue order.
    pub weights: Vec<f64>,
    pub bound: Vec<bool>,
}

impl BoundClassification {
    pub fn bound_count(&self) -> usize {
        self.bound.iter().filter(|&&b| b).count()
    }

    pub fn bound_indices(&self) -> Vec<usize> {
        (0..self.bound.len()).filter(|&k| self.bound[k]).collect()
    }

    pub fn scattering_indices(&self) -> Vec<usize> {
        (0..self.bound.len()).filter(|&k| !self.bound[k]).collect()
    }
}

/// Labels an eigenstate bound iff its weight on the `|mm>` kets exceeds 1/2.
/// At weak interaction the bound count may differ from `N`; that is a
/// property of the spectrum, not an error.
pub fn classify_bound_states(dec: &SpectralDecomposition) -> Result<BoundClassification> {
    match dec.subspace() {
        Subspace::Bosonic | Subspace::Distinguishable => {}
        other => {
            return Err(Error::WrongSubspace {
                expected: "bosonic or distinguishable".into(),
                actual: other.to_string(),
            })
        }
    }
    let weights = dec.double_occupancy_weights();
    let bound = weights.iter().map(|&w| w > BOUND_WEIGHT_THRESHOLD).collect();
    Ok(BoundClassification { weights, bound })
}
