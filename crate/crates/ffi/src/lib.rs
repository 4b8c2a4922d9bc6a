//! C ABI over `qchaos`.
//!
//! Matrices and eigensystems are opaque heap handles created by `qc_*`
//! constructors and released with the matching `*_free`. Every fallible call
//! returns a [`QcStatus`]; on failure `qc_last_error_message` describes the
//! most recent error on the calling thread. Matrix data crosses the boundary
//! as separate row-major real and imaginary `double` arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use qchaos::algorithms::{build_grover, build_qft_closed, GroverSpec};
use qchaos::dynamics::overlap_series;
use qchaos::linalg::{
    eig_unitary_with, unitarity_defect, ClusterBasis, Complex64, ComplexMatrix, EigOptions,
    EigenSystem, StateVector,
};
use qchaos::perturbations::{perturbed_grover_with, perturbed_qft};
use qchaos::rng::member_rng;
use qchaos::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonUnitary = 4,
    Numerical = 5,
    Panic = 6,
}

/// Opaque dense complex matrix.
pub struct QcMatrix {
    inner: ComplexMatrix,
}

/// Opaque eigen-decomposition of a unitary matrix.
pub struct QcEigenSystem {
    inner: EigenSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QcStatus {
    match e {
        Error::NonUnitaryInput { .. } => QcStatus::NonUnitary,
        Error::DimensionMismatch { .. } => QcStatus::DimensionMismatch,
        Error::NoConvergence(_)
        | Error::ZeroVector
        | Error::EmptySample
        | Error::DomainError { .. } => QcStatus::Numerical,
        _ => QcStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (QcStatus, String)>) -> QcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QcStatus::Panic
        }
    }
}

fn lib<T>(r: qchaos::Result<T>) -> Result<T, (QcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (QcStatus, String) {
    (QcStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: String) -> (QcStatus, String) {
    (QcStatus::InvalidArgument, msg)
}

unsafe fn out_matrix(out: *mut *mut QcMatrix, m: ComplexMatrix) -> Result<(), (QcStatus, String)> {
    *out = Box::into_raw(Box::new(QcMatrix { inner: m }));
    Ok(())
}

unsafe fn matrix_ref<'a>(m: *const QcMatrix) -> Result<&'a ComplexMatrix, (QcStatus, String)> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| null("matrix"))
}

unsafe fn eig_ref<'a>(e: *const QcEigenSystem) -> Result<&'a EigenSystem, (QcStatus, String)> {
    e.as_ref()
        .map(|e| &e.inner)
        .ok_or_else(|| null("eigensystem"))
}

/// NUL-terminated message for the last failure on this thread, or NULL if
/// none. Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Exact Grover operator for `n` qubits and marked index `xi`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qc_matrix_grover(
    n: usize,
    xi: usize,
    out: *mut *mut QcMatrix,
) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = lib(GroverSpec::new(n, xi))?;
        out_matrix(out, build_grover(&spec))
    })
}

/// Exact `n`-qubit QFT.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qc_matrix_qft(n: usize, out: *mut *mut QcMatrix) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out_matrix(out, lib(build_qft_closed(n))?)
    })
}

/// Grover operator with independent rotation layers of strength `epsilon`,
/// drawn from `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qc_matrix_perturbed_grover(
    n: usize,
    xi: usize,
    epsilon: f64,
    seed: u64,
    out: *mut *mut QcMatrix,
) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = lib(GroverSpec::new(n, xi))?;
        out_matrix(
            out,
            lib(perturbed_grover_with(
                &spec,
                epsilon,
                &mut member_rng(seed, 0),
            ))?,
        )
    })
}

/// QFT with relative phase noise of strength `epsilon`, drawn from `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qc_matrix_perturbed_qft(
    n: usize,
    epsilon: f64,
    seed: u64,
    out: *mut *mut QcMatrix,
) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out_matrix(
            out,
            lib(perturbed_qft(n, epsilon, &mut member_rng(seed, 0)))?,
        )
    })
}

/// Matrix from `dim * dim` row-major real and imaginary parts.
///
/// # Safety
/// `re` and `im` must each point to `dim * dim` readable doubles; `out` must
/// be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn qc_matrix_from_parts(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QcMatrix,
) -> QcStatus {
    guard(|| {
        if re.is_null() || im.is_null() || out.is_null() {
            return Err(null("re, im or out"));
        }
        let len = dim
            .checked_mul(dim)
            .ok_or_else(|| invalid(format!("dimension {dim} overflows")))?;
        let re = slice::from_raw_parts(re, len);
        let im = slice::from_raw_parts(im, len);
        let data = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        out_matrix(out, lib(ComplexMatrix::from_row_major(dim, data))?)
    })
}

/// Row count of `m`, or 0 when `m` is NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qc_matrix_dim(m: *const QcMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.dim())
}

/// Copies `m` into row-major `re` / `im` buffers of `len` doubles each.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must each be writable for `len`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn qc_matrix_copy_out(
    m: *const QcMatrix,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QcStatus {
    guard(|| {
        let m = matrix_ref(m)?;
        if re.is_null() || im.is_null() {
            return Err(null("re or im"));
        }
        let data = m.as_slice();
        if len != data.len() {
            return Err((
                QcStatus::DimensionMismatch,
                format!("buffer holds {len} entries, matrix has {}", data.len()),
            ));
        }
        let re = slice::from_raw_parts_mut(re, len);
        let im = slice::from_raw_parts_mut(im, len);
        for (k, z) in data.iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// `max |U^dagger U - I|` entrywise.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qc_matrix_unitarity_defect(m: *const QcMatrix, out: *mut f64) -> QcStatus {
    guard(|| {
        let m = matrix_ref(m)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = unitarity_defect(m);
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_matrix_free(m: *mut QcMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Eigen-decomposition of a unitary `m`. Degenerate eigenspaces get a
/// basis rotated by a Haar matrix drawn from `seed`. A nonpositive
/// `degeneracy_tolerance` selects the default `1e-8 * 2 pi / N`.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn qc_eig(
    m: *const QcMatrix,
    degeneracy_tolerance: f64,
    seed: u64,
    out: *mut *mut QcEigenSystem,
) -> QcStatus {
    guard(|| {
        let m = matrix_ref(m)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = EigOptions {
            degeneracy_tolerance: (degeneracy_tolerance > 0.0).then_some(degeneracy_tolerance),
            basis: ClusterBasis::Randomized { seed },
        };
        let es = lib(eig_unitary_with(m, &opts))?;
        *out = Box::into_raw(Box::new(QcEigenSystem { inner: es }));
        Ok(())
    })
}

/// Dimension of `e`, or 0 when `e` is NULL.
///
/// # Safety
/// `e` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qc_eig_dim(e: *const QcEigenSystem) -> usize {
    e.as_ref().map_or(0, |e| e.inner.dim())
}

/// Sorted eigenphases `phi` (eigenvalue `exp(-i phi)`) into `out[0..len]`.
///
/// # Safety
/// `e` must be a live handle and `out` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qc_eig_phases(
    e: *const QcEigenSystem,
    out: *mut f64,
    len: usize,
) -> QcStatus {
    guard(|| {
        let e = eig_ref(e)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if len != e.phases.len() {
            return Err((
                QcStatus::DimensionMismatch,
                format!("buffer holds {len} phases, spectrum has {}", e.phases.len()),
            ));
        }
        slice::from_raw_parts_mut(out, len).copy_from_slice(&e.phases);
        Ok(())
    })
}

/// Component `row` of eigenvector `col`.
///
/// # Safety
/// `e` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn qc_eig_vector_component(
    e: *const QcEigenSystem,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> QcStatus {
    guard(|| {
        let e = eig_ref(e)?;
        if re.is_null() || im.is_null() {
            return Err(null("re or im"));
        }
        let dim = e.dim();
        if row >= dim || col >= dim {
            return Err(invalid(format!("({row}, {col}) outside {dim} x {dim}")));
        }
        let z = e.vectors[(row, col)];
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// # Safety
/// `e` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_eig_free(e: *mut QcEigenSystem) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Fidelities `|<U^k psi | V^k psi>|^2` for `k = 1..=k_max` into `out`,
/// which must hold `k_max` doubles. `psi` is given by `dim` real and
/// imaginary parts and must be normalized.
///
/// # Safety
/// `u` and `v` must be live handles; `psi_re`, `psi_im` readable for `dim`
/// doubles; `out` writable for `k_max` doubles.
#[no_mangle]
pub unsafe extern "C" fn qc_overlap_series(
    u: *const QcMatrix,
    v: *const QcMatrix,
    psi_re: *const f64,
    psi_im: *const f64,
    dim: usize,
    k_max: usize,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let u = matrix_ref(u)?;
        let v = matrix_ref(v)?;
        if psi_re.is_null() || psi_im.is_null() || out.is_null() {
            return Err(null("psi_re, psi_im or out"));
        }
        let re = slice::from_raw_parts(psi_re, dim);
        let im = slice::from_raw_parts(psi_im, dim);
        let psi = lib(StateVector::new(
            re.iter()
                .zip(im)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect(),
        ))?;
        let series = lib(overlap_series(u, v, &psi, k_max))?;
        slice::from_raw_parts_mut(out, k_max).copy_from_slice(&series.fidelities);
        Ok(())
    })
}
