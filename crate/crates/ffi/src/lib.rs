//! C ABI over `hbt_speckle`.
//!
//! Every fallible function returns an [`HbtStatus`] and writes its result
//! through an out-pointer. On failure a description is kept per thread and
//! can be read with [`hbt_last_error`]. Sites are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hbt_speckle::distributions::{
    invert_rician_contrast, pdf_compound_rician, pdf_exponential, pdf_k, pdf_rician, pdf_weibull_bound,
};
use hbt_speckle::model::{sample_disorder, ChainSpec, DisorderRealization};
use hbt_speckle::speckle::{sample_series, summarize, TimeGrid};
use hbt_speckle::spectral::{Channel, DistinguishableMethod, PhasorClass, PhasorList, Propagator};
use hbt_speckle::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbtChannel {
    Single = 0,
    Distinguishable = 1,
    Bosonic = 2,
    Fermionic = 3,
}

impl From<HbtChannel> for Channel {
    fn from(c: HbtChannel) -> Self {
        match c {
            HbtChannel::Single => Channel::Single,
            HbtChannel::Distinguishable => Channel::Distinguishable,
            HbtChannel::Bosonic => Channel::Bosonic,
            HbtChannel::Fermionic => Channel::Fermionic,
        }
    }
}

/// Statistics of an intensity series.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HbtSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub contrast: f64,
    /// `<I^2>/<I>^2`, `<I^3>/<I>^3`, `<I^4>/<I>^4`.
    pub normalized_moments: [f64; 3],
    pub count: usize,
}

/// A disordered chain with its lazily computed eigendecompositions.
pub struct HbtChain(Propagator);

/// Phasor decomposition of one transition amplitude.
pub struct HbtPhasors(PhasorList);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HbtStatus {
    match e {
        Error::IndexOutOfRange { .. } | Error::SiteOutOfRange { .. } | Error::PauliExclusion(_) => {
            HbtStatus::OutOfRange
        }
        Error::NotSymmetric(_)
        | Error::NoConvergence { .. }
        | Error::ZeroMean
        | Error::FitFailed { .. }
        | Error::EmptyBackground
        | Error::AllUnderflow(_) => HbtStatus::Numerical,
        _ => HbtStatus::InvalidArgument,
    }
}

struct Failure(HbtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(HbtStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure and converts panics into a status.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> HbtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HbtStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HbtStatus::Panic
        }
    }
}

unsafe fn slice<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hbt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL after a
/// successful one. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn hbt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Chain of `n` sites with hopping `j`, on-site interaction `u` and
/// disorder drawn uniformly from `[-w/2, w/2]` with `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hbt_chain_new(
    n: usize,
    j: f64,
    w: f64,
    u: f64,
    seed: u64,
    out: *mut *mut HbtChain,
) -> HbtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = ChainSpec::new(n, j, w, u)?;
        let eps = sample_disorder(&spec, seed)?;
        let chain = Propagator::new(spec, eps, DistinguishableMethod::Blocks)?;
        out.write(Box::into_raw(Box::new(HbtChain(chain))));
        Ok(())
    })
}

/// Chain with explicit on-site energies `epsilons[0..n]`.
///
/// # Safety
/// `epsilons` must point to `n` readable doubles and `out` to writable
/// storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hbt_chain_with_disorder(
    n: usize,
    j: f64,
    u: f64,
    epsilons: *const f64,
    out: *mut *mut HbtChain,
) -> HbtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let eps = slice(epsilons, n, "epsilons")?;
        if eps.iter().any(|e| !e.is_finite()) {
            return Err(Failure(HbtStatus::InvalidArgument, "non-finite on-site energy".into()));
        }
        let width = eps.iter().fold(0.0f64, |a, e| a.max(2.0 * e.abs()));
        let spec = ChainSpec::new(n, j, width, u)?;
        let chain = Propagator::new(
            spec,
            DisorderRealization::from_epsilons(eps.to_vec()),
            DistinguishableMethod::Blocks,
        )?;
        out.write(Box::into_raw(Box::new(HbtChain(chain))));
        Ok(())
    })
}

/// # Safety
/// `chain` must be NULL or a handle from `hbt_chain_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hbt_chain_free(chain: *mut HbtChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Copies the on-site energies into `out[0..len]`; `len` must be at least
/// the number of sites.
///
/// # Safety
/// `chain` must be a live handle and `out` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn hbt_chain_disorder(chain: *const HbtChain, out: *mut f64, len: usize) -> HbtStatus {
    guard(|| {
        let chain = chain.as_ref().ok_or_else(|| null("chain"))?;
        let eps = &chain.0.disorder().epsilons;
        if len < eps.len() {
            return Err(Failure(
                HbtStatus::BufferTooSmall,
                format!("need {} doubles, got {len}", eps.len()),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(eps.as_ptr(), out, eps.len());
        Ok(())
    })
}

/// Phasors of the `channel` transition `(m, n) -> (p, q)`. The single
/// channel uses `m` and `p` only.
///
/// # Safety
/// `chain` must be a live handle and `out` writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hbt_phasors_new(
    chain: *const HbtChain,
    channel: HbtChannel,
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    out: *mut *mut HbtPhasors,
) -> HbtStatus {
    guard(|| {
        let chain = chain.as_ref().ok_or_else(|| null("chain"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let list = chain.0.phasors(channel.into(), (m, n), (p, q))?;
        out.write(Box::into_raw(Box::new(HbtPhasors(list))));
        Ok(())
    })
}

/// # Safety
/// `phasors` must be NULL or a handle from `hbt_phasors_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hbt_phasors_free(phasors: *mut HbtPhasors) {
    if !phasors.is_null() {
        drop(Box::from_raw(phasors));
    }
}

/// Number of phasors, or 0 for NULL.
///
/// # Safety
/// `phasors` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hbt_phasors_len(phasors: *const HbtPhasors) -> usize {
    phasors.as_ref().map_or(0, |p| p.0.len())
}

/// Coefficient, energy and bound flag of phasor `k`. Any out-pointer may
/// be NULL.
///
/// # Safety
/// `phasors` must be a live handle; non-NULL out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hbt_phasors_get(
    phasors: *const HbtPhasors,
    k: usize,
    coefficient: *mut f64,
    energy: *mut f64,
    bound: *mut bool,
) -> HbtStatus {
    guard(|| {
        let list = &phasors.as_ref().ok_or_else(|| null("phasors"))?.0;
        if k >= list.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                dim: list.len(),
            }
            .into());
        }
        if !coefficient.is_null() {
            coefficient.write(list.coefficients[k]);
        }
        if !energy.is_null() {
            energy.write(list.energies[k]);
        }
        if !bound.is_null() {
            bound.write(list.classes[k] == PhasorClass::Bound);
        }
        Ok(())
    })
}

/// Amplitude `sum_k b_k exp(-i E_k t)`.
///
/// # Safety
/// `phasors` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hbt_phasors_amplitude(
    phasors: *const HbtPhasors,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> HbtStatus {
    guard(|| {
        let list = &phasors.as_ref().ok_or_else(|| null("phasors"))?.0;
        let a = list.evaluate(t);
        write(re, a.re, "re")?;
        write(im, a.im, "im")
    })
}

/// Intensities at `t_start + i * step` for `i < count`, written to
/// `out[0..count]`.
///
/// # Safety
/// `phasors` must be a live handle and `out` must point to `count`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hbt_phasors_intensity_series(
    phasors: *const HbtPhasors,
    t_start: f64,
    step: f64,
    count: usize,
    out: *mut f64,
) -> HbtStatus {
    guard(|| {
        let list = &phasors.as_ref().ok_or_else(|| null("phasors"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let grid = TimeGrid::new(t_start, step, count, "ffi")?;
        let series = sample_series(list, &grid);
        ptr::copy_nonoverlapping(series.intensities.as_ptr(), out, count);
        Ok(())
    })
}

/// Mean, contrast and normalized moments of `intensities[0..len]`.
///
/// # Safety
/// `intensities` must point to `len` readable doubles and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn hbt_summarize(intensities: *const f64, len: usize, out: *mut HbtSummary) -> HbtStatus {
    guard(|| {
        let s = summarize(slice(intensities, len, "intensities")?)?;
        let summary = HbtSummary {
            mean: s.mean,
            std_dev: s.std_dev,
            contrast: s.contrast,
            normalized_moments: s.normalized_moments,
            count: s.count,
        };
        write(out, summary, "out")
    })
}

fn pdf_call(out: *mut f64, f: impl FnOnce() -> hbt_speckle::Result<f64>) -> HbtStatus {
    guard(|| {
        let v = f()?;
        // SAFETY: callers of the public wrappers guarantee `out` is NULL or writable.
        unsafe { write(out, v, "out") }
    })
}

/// Exponential density `exp(-i/s)/s`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hbt_pdf_exponential(i: f64, s: f64, out: *mut f64) -> HbtStatus {
    pdf_call(out, || pdf_exponential(i, s))
}

/// K density with mean `mu` and shape `nu`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hbt_pdf_k(i: f64, mu: f64, nu: f64, out: *mut f64) -> HbtStatus {
    pdf_call(out, || pdf_k(i, mu, nu))
}

/// Stretched-exponential density of mean `alpha` with contrast sqrt(5).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hbt_pdf_weibull_bound(i: f64, alpha: f64, out: *mut f64) -> HbtStatus {
    pdf_call(out, || pdf_weibull_bound(i, alpha))
}

/// Rician density with dominant-to-diffuse ratio `r` and diffuse mean `s_n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hbt_pdf_rician(i: f64, r: f64, s_n: f64, out: *mut f64) -> HbtStatus {
    pdf_call(out, || pdf_rician(i, r, s_n))
}

/// Rician density averaged over `r_samples[0..len]`.
///
/// # Safety
/// `r_samples` must point to `len` readable doubles and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn hbt_pdf_compound_rician(
    i: f64,
    r_samples: *const f64,
    len: usize,
    s_n: f64,
    out: *mut f64,
) -> HbtStatus {
    guard(|| {
        let v = pdf_compound_rician(i, slice(r_samples, len, "r_samples")?, s_n)?;
        write(out, v, "out")
    })
}

/// Ratio `r` of the Rician law whose contrast is `c`, for `0 < c <= 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hbt_rician_ratio_for_contrast(c: f64, out: *mut f64) -> HbtStatus {
    pdf_call(out, || invert_rician_contrast(c))
}
