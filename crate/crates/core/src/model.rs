//! Chain specification, disorder sampling and Hamiltonian construction.
//!
//! Sites are 0-based throughout the library. A two-particle ket `(m, n)`
//! places particle `a` on site `m` and particle `b` on site `n`. The
//! symmetric and antisymmetric kets are `|mn>± = (|mn> ± |nm>)/√2` for
//! `m < n`, and the double-occupancy ket `|mm>+ = |mm>` for the bosonic
//! subspace. Single-particle kets are labelled `(m, m)` in [`BasisIndex`].

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parameters of a disordered chain with on-site interaction, in units of
/// the hopping energy when `j = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    /// Number of sites.
    pub n: usize,
    /// Nearest-neighbour hopping.
    pub j: f64,
    /// Disorder width; on-site energies are uniform on `[-w/2, w/2]`.
    pub w: f64,
    /// On-site interaction between the two particles.
    pub u: f64,
}

impl ChainSpec {
    pub fn new(n: usize, j: f64, w: f64, u: f64) -> Result<Self> {
        let spec = Self { n, j, w, u };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSpec(format!("need at least 2 sites, got {}", self.n)));
        }
        if !(self.j > 0.0 && self.j.is_finite()) {
            return Err(Error::InvalidSpec(format!("hopping must be positive, got {}", self.j)));
        }
        if !(self.w >= 0.0 && self.w.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "disorder width must be >= 0, got {}",
                self.w
            )));
        }
        if !(self.u >= 0.0 && self.u.is_finite()) {
            return Err(Error::InvalidSpec(format!("interaction must be >= 0, got {}", self.u)));
        }
        Ok(())
    }

    /// Same chain with a different interaction strength.
    pub fn with_interaction(&self, u: f64) -> Self {
        Self { u, ..*self }
    }
}

/// One sampled on-site potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    pub epsilons: Vec<f64>,
    pub seed: u64,
}

impl DisorderRealization {
    /// Wraps an explicit potential, e.g. a hand-chosen test configuration.
    pub fn from_epsilons(epsilons: Vec<f64>) -> Self {
        Self { epsilons, seed: 0 }
    }

    pub fn len(&self) -> usize {
        self.epsilons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epsilons.is_empty()
    }
}

/// Draws `n` i.i.d. on-site energies uniform on `[-w/2, w/2]`.
///
/// The generator is ChaCha8 seeded with `seed`, so the same `(spec, seed)`
/// reproduces the same vector bit for bit on every platform.
pub fn sample_disorder(spec: &ChainSpec, seed: u64) -> Result<DisorderRealization> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let epsilons = (0..spec.n).map(|_| spec.w * (rng.random::<f64>() - 0.5)).collect();
    Ok(DisorderRealization { epsilons, seed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subspace {
    SingleParticle,
    Distinguishable,
    Bosonic,
    Fermionic,
}

impl Subspace {
    pub fn dim(self, n: usize) -> usize {
        match self {
            Subspace::SingleParticle => n,
            Subspace::Distinguishable => n * n,
            Subspace::Bosonic => n * (n + 1) / 2,
            Subspace::Fermionic => n * n.saturating_sub(1) / 2,
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Subspace::SingleParticle => "single-particle",
            Subspace::Distinguishable => "distinguishable",
            Subspace::Bosonic => "bosonic",
            Subspace::Fermionic => "fermionic",
        };
        f.write_str(s)
    }
}

/// Bijection between site labels and flat basis indices of one subspace.
///
/// Orderings: distinguishable is row-major with `m` fast
/// (`index = m + n * N`); bosonic enumerates `m <= n` and fermionic `m < n`
/// lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisIndex {
    subspace: Subspace,
    n_sites: usize,
    states: Vec<(usize, usize)>,
    lookup: Vec<Option<usize>>,
}

impl BasisIndex {
    pub fn new(subspace: Subspace, n_sites: usize) -> Self {
        let mut states = Vec::with_capacity(subspace.dim(n_sites));
        match subspace {
            Subspace::SingleParticle => states.extend((0..n_sites).map(|m| (m, m))),
            Subspace::Distinguishable => {
                for n in 0..n_sites {
                    for m in 0..n_sites {
                        states.push((m, n));
                    }
                }
            }
            Subspace::Bosonic => {
                for m in 0..n_sites {
                    for n in m..n_sites {
                        states.push((m, n));
                    }
                }
            }
            Subspace::Fermionic => {
                for m in 0..n_sites {
                    for n in m + 1..n_sites {
                        states.push((m, n));
                    }
                }
            }
        }
        let mut lookup = vec![None; n_sites * n_sites];
        for (idx, &(m, n)) in states.iter().enumerate() {
            lookup[m + n * n_sites] = Some(idx);
        }
        Self {
            subspace,
            n_sites,
            states,
            lookup,
        }
    }

    pub fn subspace(&self) -> Subspace {
        self.subspace
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Flat index of the ket labelled exactly `(m, n)`, if it belongs to the
    /// basis. No canonicalization is applied.
    pub fn index_of(&self, m: usize, n: usize) -> Option<usize> {
        if m >= self.n_sites || n >= self.n_sites {
            return None;
        }
        self.lookup[m + n * self.n_sites]
    }

    /// Site labels of the flat index `idx`.
    pub fn state(&self, idx: usize) -> Option<(usize, usize)> {
        self.states.get(idx).copied()
    }

    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    /// Indices of the double-occupancy kets `|mm>`, if the subspace has any.
    pub fn double_occupancy(&self) -> Vec<usize> {
        match self.subspace {
            Subspace::SingleParticle | Subspace::Fermionic => Vec::new(),
            _ => (0..self.n_sites).filter_map(|m| self.index_of(m, m)).collect(),
        }
    }
}

/// Dense real symmetric Hamiltonian of one subspace.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    pub basis: BasisIndex,
    pub matrix: DMatrix<f64>,
    pub spec: ChainSpec,
    pub disorder: DisorderRealization,
}

impl HamiltonianMatrix {
    pub fn subspace(&self) -> Subspace {
        self.basis.subspace()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

fn check_inputs(spec: &ChainSpec, eps: &DisorderRealization) -> Result<()> {
    spec.validate()?;
    if eps.len() != spec.n {
        return Err(Error::LengthMismatch {
            expected: spec.n,
            actual: eps.len(),
        });
    }
    Ok(())
}

fn finish(basis: BasisIndex, matrix: DMatrix<f64>, spec: &ChainSpec, eps: &DisorderRealization) -> HamiltonianMatrix {
    HamiltonianMatrix {
        basis,
        matrix,
        spec: *spec,
        disorder: eps.clone(),
    }
}

/// Sets a symmetric off-diagonal pair.
fn couple(h: &mut DMatrix<f64>, i: usize, k: usize, value: f64) {
    h[(i, k)] = value;
    h[(k, i)] = value;
}

/// Open chain: diagonal `eps_j`, nearest-neighbour hopping `J`.
pub fn build_single_particle(spec: &ChainSpec, eps: &DisorderRealization) -> Result<HamiltonianMatrix> {
    check_inputs(spec, eps)?;
    let n = spec.n;
    let basis = BasisIndex::new(Subspace::SingleParticle, n);
    let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&eps.epsilons));
    for m in 0..n - 1 {
        couple(&mut h, m, m + 1, spec.j);
    }
    Ok(finish(basis, h, spec, eps))
}

/// Two distinguishable particles on the `N x N` grid of kets `|mn>`.
pub fn build_distinguishable(spec: &ChainSpec, eps: &DisorderRealization) -> Result<HamiltonianMatrix> {
    check_inputs(spec, eps)?;
    let n = spec.n;
    let basis = BasisIndex::new(Subspace::Distinguishable, n);
    let mut h = DMatrix::zeros(basis.dim(), basis.dim());
    let e = &eps.epsilons;
    for (i, &(m, q)) in basis.states().iter().enumerate() {
        h[(i, i)] = e[m] + e[q] + if m == q { spec.u } else { 0.0 };
        if m + 1 < n {
            couple(&mut h, i, basis.index_of(m + 1, q).unwrap(), spec.j);
        }
        if q + 1 < n {
            couple(&mut h, i, basis.index_of(m, q + 1).unwrap(), spec.j);
        }
    }
    Ok(finish(basis, h, spec, eps))
}

/// Symmetric sector: kets `|mn>+` with `m <= n`. Edges touching a
/// double-occupancy ket carry `√2 J`.
pub fn build_bosonic_block(spec: &ChainSpec, eps: &DisorderRealization) -> Result<HamiltonianMatrix> {
    check_inputs(spec, eps)?;
    let n = spec.n;
    let basis = BasisIndex::new(Subspace::Bosonic, n);
    let mut h = DMatrix::zeros(basis.dim(), basis.dim());
    let e = &eps.epsilons;
    let bound_coupling = std::f64::consts::SQRT_2 * spec.j;
    for (i, &(m, q)) in basis.states().iter().enumerate() {
        h[(i, i)] = e[m] + e[q] + if m == q { spec.u } else { 0.0 };
        // Each edge is visited from its lower-labelled end: moving m up or q up.
        let mut targets = Vec::with_capacity(2);
        if m < q {
            targets.push((m + 1, q));
        }
        if q + 1 < n {
            targets.push((m, q + 1));
        }
        for (tm, tq) in targets {
            let k = basis.index_of(tm, tq).unwrap();
            let value = if m == q || tm == tq { bound_coupling } else { spec.j };
            couple(&mut h, i, k, value);
        }
    }
    Ok(finish(basis, h, spec, eps))
}

/// Antisymmetric sector: kets `|mn>-` with `m < n`. Carries no interaction.
pub fn build_fermionic_block(spec: &ChainSpec, eps: &DisorderRealization) -> Result<HamiltonianMatrix> {
    check_inputs(spec, eps)?;
    let n = spec.n;
    let basis = BasisIndex::new(Subspace::Fermionic, n);
    let mut h = DMatrix::zeros(basis.dim(), basis.dim());
    let e = &eps.epsilons;
    for (i, &(m, q)) in basis.states().iter().enumerate() {
        h[(i, i)] = e[m] + e[q];
        if m + 1 < q {
            couple(&mut h, i, basis.index_of(m + 1, q).unwrap(), spec.j);
        }
        if q + 1 < n {
            couple(&mut h, i, basis.index_of(m, q + 1).unwrap(), spec.j);
        }
    }
    Ok(finish(basis, h, spec, eps))
}

/// Dispatches to the builder of `subspace`.
pub fn build(subspace: Subspace, spec: &ChainSpec, eps: &DisorderRealization) -> Result<HamiltonianMatrix> {
    match subspace {
        Subspace::SingleParticle => build_single_particle(spec, eps),
        Subspace::Distinguishable => build_distinguishable(spec, eps),
        Subspace::Bosonic => build_bosonic_block(spec, eps),
        Subspace::Fermionic => build_fermionic_block(spec, eps),
    }
}
