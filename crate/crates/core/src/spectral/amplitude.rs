use std::f64::consts::FRAC_1_SQRT_2;

use super::{phasor_decomposition, ComplexAmplitude, PhasorClass, PhasorList, SpectralDecomposition};
use crate::model::Subspace;
use crate::{Error, Result};

/// `<out| e^{-iHt} |in>` for flat basis indices of `dec`.
pub fn transition_amplitude(
    dec: &SpectralDecomposition,
    input: usize,
    output: usize,
    t: f64,
) -> Result<ComplexAmplitude> {
    Ok(phasor_decomposition(dec, input, output)?.evaluate(t))
}

fn check_site(dec: &SpectralDecomposition, site: usize) -> Result<()> {
    let n = dec.basis.n_sites();
    if site >= n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    Ok(())
}

fn check_sites(dec: &SpectralDecomposition, sites: [usize; 4]) -> Result<()> {
    sites.into_iter().try_for_each(|s| check_site(dec, s))
}

/// Phasors of the product `f_m^p f_n^q` of two independent single-particle
/// propagations: weights `a_k1(m,p) a_k2(n,q)` at energies `E_k1 + E_k2`.
pub fn product_phasors_u0(
    single: &SpectralDecomposition,
    (m, n): (usize, usize),
    (p, q): (usize, usize),
) -> Result<PhasorList> {
    single.expect(Subspace::SingleParticle)?;
    check_sites(single, [m, n, p, q])?;
    let first = phasor_decomposition(single, m, p)?;
    let second = phasor_decomposition(single, n, q)?;
    let mut list = PhasorList::default();
    for k2 in 0..second.len() {
        for k1 in 0..first.len() {
            list.push(
                first.coefficients[k1] * second.coefficients[k2],
                first.energies[k1] + second.energies[k2],
                PhasorClass::Scattering,
            );
        }
    }
    Ok(list)
}

/// `h_mn^pq = f_m^p f_n^q`: the two-particle amplitude of distinguishable,
/// non-interacting particles.
pub fn product_amplitude_u0(
    single: &SpectralDecomposition,
    input: (usize, usize),
    output: (usize, usize),
    t: f64,
) -> Result<ComplexAmplitude> {
    single.expect(Subspace::SingleParticle)?;
    check_sites(single, [input.0, input.1, output.0, output.1])?;
    let f_mp = transition_amplitude(single, input.0, output.0, t)?;
    let f_nq = transition_amplitude(single, input.1, output.1, t)?;
    Ok(f_mp * f_nq)
}

fn ordered(m: usize, n: usize) -> (usize, usize) {
    if m <= n {
        (m, n)
    } else {
        (n, m)
    }
}

/// Phasors between the normalized symmetric kets `|mn>+` and `|pq>+`.
/// Either label order is accepted.
pub fn bosonic_phasors(
    dec: &SpectralDecomposition,
    (m, n): (usize, usize),
    (p, q): (usize, usize),
) -> Result<PhasorList> {
    dec.expect(Subspace::Bosonic)?;
    check_sites(dec, [m, n, p, q])?;
    let (a, b) = ordered(m, n);
    let (c, d) = ordered(p, q);
    let input = dec.basis.index_of(a, b).expect("canonical bosonic label");
    let output = dec.basis.index_of(c, d).expect("canonical bosonic label");
    phasor_decomposition(dec, input, output)
}

pub fn bosonic_amplitude(
    dec: &SpectralDecomposition,
    input: (usize, usize),
    output: (usize, usize),
    t: f64,
) -> Result<ComplexAmplitude> {
    Ok(bosonic_phasors(dec, input, output)?.evaluate(t))
}

/// Index and sign of `|mn>-` in terms of the canonical `m < n` ket.
fn fermionic_label(dec: &SpectralDecomposition, m: usize, n: usize) -> Result<(usize, f64)> {
    if m == n {
        return Err(Error::PauliExclusion(m));
    }
    let (a, b) = ordered(m, n);
    let sign = if m < n { 1.0 } else { -1.0 };
    Ok((dec.basis.index_of(a, b).expect("canonical fermionic label"), sign))
}

/// Phasors between antisymmetric kets. Swapping the labels of either ket
/// flips the sign of the amplitude.
pub fn fermionic_phasors(
    dec: &SpectralDecomposition,
    (m, n): (usize, usize),
    (p, q): (usize, usize),
) -> Result<PhasorList> {
    dec.expect(Subspace::Fermionic)?;
    check_sites(dec, [m, n, p, q])?;
    let (input, s_in) = fermionic_label(dec, m, n)?;
    let (output, s_out) = fermionic_label(dec, p, q)?;
    let list = phasor_decomposition(dec, input, output)?;
    if s_in * s_out > 0.0 {
        return Ok(list);
    }
    let mut flipped = PhasorList::default();
    flipped.extend_scaled(&list, -1.0);
    Ok(flipped)
}

pub fn fermionic_amplitude(
    dec: &SpectralDecomposition,
    input: (usize, usize),
    output: (usize, usize),
    t: f64,
) -> Result<ComplexAmplitude> {
    Ok(fermionic_phasors(dec, input, output)?.evaluate(t))
}

/// Where the distinguishable amplitude comes from: the full `N^2` space, or
/// the bosonic and fermionic blocks it decouples into.
#[derive(Debug, Clone, Copy)]
pub enum DistinguishableSource<'a> {
    Full(&'a SpectralDecomposition),
    Blocks {
        bosonic: &'a SpectralDecomposition,
        fermionic: &'a SpectralDecomposition,
    },
}

/// Components of `|mn>` on `|mn>+` and `|mn>-`.
fn symmetric_weights(m: usize, n: usize) -> (f64, f64) {
    match m.cmp(&n) {
        std::cmp::Ordering::Equal => (1.0, 0.0),
        std::cmp::Ordering::Less => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        std::cmp::Ordering::Greater => (FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    }
}

/// Phasors of `<pq| e^{-iHt} |mn>` for distinguishable particles.
///
/// With blocks, `|mn> = c+ |mn>+ + c- |mn>-`, so the amplitude is
/// `c+_in c+_out h_B + c-_in c-_out h_F`; the list is the union of the
/// scaled bosonic and fermionic phasors.
pub fn distinguishable_phasors(
    source: DistinguishableSource<'_>,
    input: (usize, usize),
    output: (usize, usize),
) -> Result<PhasorList> {
    match source {
        DistinguishableSource::Full(dec) => {
            dec.expect(Subspace::Distinguishable)?;
            check_sites(dec, [input.0, input.1, output.0, output.1])?;
            let i = dec.basis.index_of(input.0, input.1).unwrap();
            let o = dec.basis.index_of(output.0, output.1).unwrap();
            phasor_decomposition(dec, i, o)
        }
        DistinguishableSource::Blocks { bosonic, fermionic } => {
            fermionic.expect(Subspace::Fermionic)?;
            let (bp_in, bm_in) = symmetric_weights(input.0, input.1);
            let (bp_out, bm_out) = symmetric_weights(output.0, output.1);
            let mut list = PhasorList::default();
            list.extend_scaled(&bosonic_phasors(bosonic, input, output)?, bp_in * bp_out);
            let fermionic_factor = bm_in * bm_out;
            if fermionic_factor != 0.0 {
                // Signs are already carried by the symmetric weights.
                let (a, b) = ordered(input.0, input.1);
                let (c, d) = ordered(output.0, output.1);
                list.extend_scaled(&fermionic_phasors(fermionic, (a, b), (c, d))?, fermionic_factor);
            }
            Ok(list)
        }
    }
}

pub fn distinguishable_amplitude(
    source: DistinguishableSource<'_>,
    input: (usize, usize),
    output: (usize, usize),
    t: f64,
) -> Result<ComplexAmplitude> {
    Ok(distinguishable_phasors(source, input, output)?.evaluate(t))
}
