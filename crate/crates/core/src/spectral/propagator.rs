use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{
    bosonic_phasors, diagonalize, distinguishable_phasors, fermionic_phasors, phasor_decomposition,
    DistinguishableSource, PhasorList, SpectralDecomposition,
};
use crate::model::{build, ChainSpec, DisorderRealization, Subspace};
use crate::{Error, Result};

/// Which transition is observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// One particle, `f_m^p`; only the first site of each pair is used.
    Single,
    Distinguishable,
    Bosonic,
    Fermionic,
}

impl Channel {
    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Single => "single",
            Channel::Distinguishable => "distinguishable",
            Channel::Bosonic => "bosonic",
            Channel::Fermionic => "fermionic",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistinguishableMethod {
    /// Bosonic plus fermionic blocks, about 8x cheaper than the full space.
    #[default]
    Blocks,
    /// The full `N^2 x N^2` Hamiltonian.
    Full,
}

/// All decompositions of one `(spec, disorder)` pair, computed on first use
/// and shared by every channel and time grid that needs them.
#[derive(Debug)]
pub struct Propagator {
    spec: ChainSpec,
    disorder: DisorderRealization,
    method: DistinguishableMethod,
    single: OnceLock<SpectralDecomposition>,
    distinguishable: OnceLock<SpectralDecomposition>,
    bosonic: OnceLock<SpectralDecomposition>,
    fermionic: OnceLock<SpectralDecomposition>,
}

impl Propagator {
    pub fn new(spec: ChainSpec, disorder: DisorderRealization, method: DistinguishableMethod) -> Result<Self> {
        spec.validate()?;
        if disorder.len() != spec.n {
            return Err(Error::LengthMismatch {
                expected: spec.n,
                actual: disorder.len(),
            });
        }
        Ok(Self {
            spec,
            disorder,
            method,
            single: OnceLock::new(),
            distinguishable: OnceLock::new(),
            bosonic: OnceLock::new(),
            fermionic: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn disorder(&self) -> &DisorderRealization {
        &self.disorder
    }

    /// Decomposition of `subspace`, diagonalizing on first request.
    pub fn decomposition(&self, subspace: Subspace) -> Result<&SpectralDecomposition> {
        let cell = match subspace {
            Subspace::SingleParticle => &self.single,
            Subspace::Distinguishable => &self.distinguishable,
            Subspace::Bosonic => &self.bosonic,
            Subspace::Fermionic => &self.fermionic,
        };
        if let Some(dec) = cell.get() {
            return Ok(dec);
        }
        let dec = diagonalize(&build(subspace, &self.spec, &self.disorder)?)?;
        Ok(cell.get_or_init(|| dec))
    }

    /// Phasor list of the `channel` transition `input -> output` (0-based
    /// site pairs).
    pub fn phasors(&self, channel: Channel, input: (usize, usize), output: (usize, usize)) -> Result<PhasorList> {
        match channel {
            Channel::Single => {
                let dec = self.decomposition(Subspace::SingleParticle)?;
                for site in [input.0, output.0] {
                    if site >= self.spec.n {
                        return Err(Error::SiteOutOfRange { site, n: self.spec.n });
                    }
                }
                phasor_decomposition(dec, input.0, output.0)
            }
            Channel::Bosonic => bosonic_phasors(self.decomposition(Subspace::Bosonic)?, input, output),
            Channel::Fermionic => fermionic_phasors(self.decomposition(Subspace::Fermionic)?, input, output),
            Channel::Distinguishable => {
                let source = match self.method {
                    DistinguishableMethod::Full => {
                        DistinguishableSource::Full(self.decomposition(Subspace::Distinguishable)?)
                    }
                    DistinguishableMethod::Blocks => DistinguishableSource::Blocks {
                        bosonic: self.decomposition(Subspace::Bosonic)?,
                        fermionic: self.decomposition(Subspace::Fermionic)?,
                    },
                };
                distinguishable_phasors(source, input, output)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sample_disorder;

    #[test]
    fn methods_agree_and_decompositions_are_cached() {
        let spec = ChainSpec::new(5, 1.0, 0.2, 1.3).unwrap();
        let eps = sample_disorder(&spec, 21).unwrap();
        let blocks = Propagator::new(spec, eps.clone(), DistinguishableMethod::Blocks).unwrap();
        let full = Propagator::new(spec, eps, DistinguishableMethod::Full).unwrap();
        let a = blocks.phasors(Channel::Distinguishable, (0, 3), (4, 1)).unwrap();
        let b = full.phasors(Channel::Distinguishable, (0, 3), (4, 1)).unwrap();
        for t in [0.5, 17.0, 300.0] {
            assert!(a.evaluate(t).dist(b.evaluate(t)) < 1e-10);
        }
        let first = blocks.decomposition(Subspace::Bosonic).unwrap() as *const _;
        let second = blocks.decomposition(Subspace::Bosonic).unwrap() as *const _;
        assert_eq!(first, second);
    }

    #[test]
    fn rejects_mismatched_disorder_and_bad_sites() {
        let spec = ChainSpec::new(4, 1.0, 0.0, 0.0).unwrap();
        assert!(Propagator::new(
            spec,
            DisorderRealization::from_epsilons(vec![0.0; 3]),
            Default::default()
        )
        .is_err());
        let p = Propagator::new(
            spec,
            DisorderRealization::from_epsilons(vec![0.0; 4]),
            Default::default(),
        )
        .unwrap();
        assert!(p.phasors(Channel::Single, (4, 4), (0, 0)).is_err());
        assert!(p.phasors(Channel::Fermionic, (1, 1), (0, 2)).is_err());
    }
}
