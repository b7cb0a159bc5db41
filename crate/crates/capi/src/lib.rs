//! C ABI for the spincat simulator: opaque handles, integer status codes,
//! and a thread-local last-error message.
//!
//! Ownership rules: every function that returns a handle through an `out`
//! parameter transfers ownership to the caller, who must release it with the
//! matching `*_free`. Handles are never mutated in place; operations return
//! fresh handles. All functions are safe to call from multiple threads as
//! long as each handle is used from one thread at a time.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64 as C64;

use spincat::analytics;
use spincat::cats;
use spincat::dynamics::{self, Method, PhysicalParams, PropagatorConfig};
use spincat::spinalg::{
    coherent_vector, dyad, overlap, CoherentSpec, DickeVector, SpinOperator, SpinSystem,
};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpincatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateInput = 3,
    NumericalFailure = 4,
    InternalPanic = 5,
}

/// Propagation method selector for `spincat_propagate`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpincatMethod {
    AdaptiveRk = 0,
    FixedRk4 = 1,
    DenseExpmOracle = 2,
}

/// Opaque ket in the Dicke basis.
pub struct SpincatVector {
    inner: DickeVector,
}

/// Opaque operator in the Dicke basis.
pub struct SpincatOperator {
    inner: SpinOperator,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let owned = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn status_from(err: &spincat::Error) -> SpincatStatus {
    use spincat::Error::*;
    set_error(&err.to_string());
    match err {
        LevelOutOfRange { .. }
        | ThetaOutOfRange { .. }
        | SystemMismatch { .. }
        | VectorLength { .. }
        | MatrixShape { .. }
        | NegativeTime { .. }
        | InvalidComponentCount { .. }
        | ZeroGamma => SpincatStatus::InvalidArgument,
        ZeroCatCoefficients | DegenerateCat { .. } | ZeroDispersiveShift | ZeroTrace => {
            SpincatStatus::DegenerateInput
        }
        StepUnderflow { .. }
        | DenseOracleTooLarge { .. }
        | NonPositiveSample { .. }
        | TooFewSamples { .. }
        | RankDeficientFit => SpincatStatus::NumericalFailure,
    }
}

/// Message for the most recent failure on this thread; valid until the next
/// failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn spincat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn guard<F: FnOnce() -> SpincatStatus>(f: F) -> SpincatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            SpincatStatus::InternalPanic
        }
    }
}

macro_rules! nonnull {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => {
                set_error("null pointer argument");
                return SpincatStatus::NullPointer;
            }
        }
    };
}

fn write_handle<T>(out: *mut *mut T, value: T) -> SpincatStatus {
    if out.is_null() {
        set_error("null output pointer");
        return SpincatStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    SpincatStatus::Ok
}

fn write_f64(out: *mut c_double, value: f64) -> SpincatStatus {
    if out.is_null() {
        set_error("null output pointer");
        return SpincatStatus::NullPointer;
    }
    unsafe { *out = value };
    SpincatStatus::Ok
}

fn params(g: c_double, kappa: c_double, delta: c_double, two_j: u32) -> PhysicalParams {
    PhysicalParams {
        g,
        kappa,
        delta,
        n_atoms: two_j,
    }
}

macro_rules! check_two_j {
    ($two_j:expr) => {
        if $two_j == 0 {
            set_error("two_j must be at least 1");
            return SpincatStatus::InvalidArgument;
        }
    };
}

/// Spin coherent state |θ,φ⟩ for the spin j = `two_j`/2.
///
/// # Safety
/// `out` must be a valid pointer; the returned handle must be released with
/// `spincat_vector_free`.
#[no_mangle]
pub unsafe extern "C" fn spincat_coherent_vector(
    two_j: u32,
    theta: c_double,
    phi: c_double,
    out: *mut *mut SpincatVector,
) -> SpincatStatus {
    guard(|| {
        check_two_j!(two_j);
        match CoherentSpec::new(theta, phi) {
            Ok(spec) => {
                let v = coherent_vector(&spec, SpinSystem::new(two_j));
                write_handle(out, SpincatVector { inner: v })
            }
            Err(e) => status_from(&e),
        }
    })
}

/// Normalized superposition c₁|θ₁,φ₁⟩ + c₂|θ₂,φ₂⟩.
///
/// # Safety
/// See `spincat_coherent_vector`.
#[no_mangle]
pub unsafe extern "C" fn spincat_cat_vector(
    two_j: u32,
    theta1: c_double,
    phi1: c_double,
    theta2: c_double,
    phi2: c_double,
    c1_re: c_double,
    c1_im: c_double,
    c2_re: c_double,
    c2_im: c_double,
    out: *mut *mut SpincatVector,
) -> SpincatStatus {
    guard(|| {
        check_two_j!(two_j);
        let build = || -> Result<DickeVector, spincat::Error> {
            let a = CoherentSpec::new(theta1, phi1)?;
            let b = CoherentSpec::new(theta2, phi2)?;
            let spec = cats::CatSpec::new(a, b, C64::new(c1_re, c1_im), C64::new(c2_re, c2_im));
            cats::build_cat(&spec, SpinSystem::new(two_j))
        };
        match build() {
            Ok(v) => write_handle(out, SpincatVector { inner: v }),
            Err(e) => status_from(&e),
        }
    })
}

/// Three-step preparation of a long-lived symmetric cat (resonant pulse,
/// dispersive splitting for t = π/(2η), final π/2 pulse).
///
/// # Safety
/// See `spincat_coherent_vector`.
#[no_mangle]
pub unsafe extern "C" fn spincat_prepare_long_lived_cat(
    two_j: u32,
    theta: c_double,
    phi: c_double,
    g: c_double,
    kappa: c_double,
    delta: c_double,
    out: *mut *mut SpincatVector,
) -> SpincatStatus {
    guard(|| {
        check_two_j!(two_j);
        let sys = SpinSystem::new(two_j);
        match cats::prepare_long_lived_cat(theta, phi, &params(g, kappa, delta, two_j), sys) {
            Ok(v) => write_handle(out, SpincatVector { inner: v }),
            Err(e) => status_from(&e),
        }
    })
}

/// Dispersive (effectively unitary) evolution of a ket for `t` seconds.
///
/// # Safety
/// `psi` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn spincat_dispersive_evolve(
    psi: *const SpincatVector,
    g: c_double,
    kappa: c_double,
    delta: c_double,
    t: c_double,
    out: *mut *mut SpincatVector,
) -> SpincatStatus {
    guard(|| {
        let psi = nonnull!(psi);
        let p = params(g, kappa, delta, psi.inner.sys().two_j());
        let evolved = dynamics::propagate_dispersive(&psi.inner, &p, t);
        write_handle(out, SpincatVector { inner: evolved })
    })
}

/// Dimension 2j+1 of the ket.
///
/// # Safety
/// `v` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spincat_vector_dim(
    v: *const SpincatVector,
    out: *mut usize,
) -> SpincatStatus {
    guard(|| {
        let v = nonnull!(v);
        if out.is_null() {
            set_error("null output pointer");
            return SpincatStatus::NullPointer;
        }
        unsafe { *out = v.inner.sys().dim() };
        SpincatStatus::Ok
    })
}

/// Copy amplitudes as interleaved (re, im) pairs; `buffer` must hold
/// 2·(2j+1) doubles.
///
/// # Safety
/// `v` must be a live handle and `buffer` writable for `2*dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn spincat_vector_amplitudes(
    v: *const SpincatVector,
    buffer: *mut c_double,
    buffer_len: usize,
) -> SpincatStatus {
    guard(|| {
        let v = nonnull!(v);
        let dim = v.inner.sys().dim();
        if buffer.is_null() {
            set_error("null buffer");
            return SpincatStatus::NullPointer;
        }
        if buffer_len != 2 * dim {
            set_error("buffer length must be 2*(2j+1)");
            return SpincatStatus::InvalidArgument;
        }
        let slice = unsafe { std::slice::from_raw_parts_mut(buffer, buffer_len) };
        for (k, amp) in v.inner.amp().iter().enumerate() {
            slice[2 * k] = amp.re;
            slice[2 * k + 1] = amp.im;
        }
        SpincatStatus::Ok
    })
}

/// ⟨a|b⟩.
///
/// # Safety
/// `a` and `b` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn spincat_vector_overlap(
    a: *const SpincatVector,
    b: *const SpincatVector,
    re: *mut c_double,
    im: *mut c_double,
) -> SpincatStatus {
    guard(|| {
        let a = nonnull!(a);
        let b = nonnull!(b);
        match overlap(&a.inner, &b.inner) {
            Ok(z) => {
                let s = write_f64(re, z.re);
                if s != SpincatStatus::Ok {
                    return s;
                }
                write_f64(im, z.im)
            }
            Err(e) => status_from(&e),
        }
    })
}

/// The dyad |a⟩⟨b| as a new operator handle.
///
/// # Safety
/// `a` and `b` must be live handles; release the result with
/// `spincat_operator_free`.
#[no_mangle]
pub unsafe extern "C" fn spincat_vector_dyad(
    a: *const SpincatVector,
    b: *const SpincatVector,
    out: *mut *mut SpincatOperator,
) -> SpincatStatus {
    guard(|| {
        let a = nonnull!(a);
        let b = nonnull!(b);
        match dyad(&a.inner, &b.inner) {
            Ok(op) => write_handle(out, SpincatOperator { inner: op }),
            Err(e) => status_from(&e),
        }
    })
}

/// Best symmetric-pair decomposition {(θ,φ), (π−θ,φ)} of a ket.
///
/// # Safety
/// `v` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spincat_symmetric_decomposition(
    v: *const SpincatVector,
    theta: *mut c_double,
    phi: *mut c_double,
    captured: *mut c_double,
) -> SpincatStatus {
    guard(|| {
        let v = nonnull!(v);
        let fit = cats::symmetric_decomposition(&v.inner);
        for (ptr, value) in [(theta, fit.theta), (phi, fit.phi), (captured, fit.captured)] {
            let s = write_f64(ptr, value);
            if s != SpincatStatus::Ok {
                return s;
            }
        }
        SpincatStatus::Ok
    })
}

/// # Safety
/// `v` must be a handle from this library, not yet freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn spincat_vector_free(v: *mut SpincatVector) {
    if !v.is_null() {
        drop(unsafe { Box::from_raw(v) });
    }
}

/// Operator from a row-major interleaved (re, im) dense matrix of shape
/// (2j+1)×(2j+1); `data` holds 2·dim² doubles.
///
/// # Safety
/// `data` must be readable for `2*dim*dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn spincat_operator_from_dense(
    two_j: u32,
    data: *const c_double,
    data_len: usize,
    out: *mut *mut SpincatOperator,
) -> SpincatStatus {
    guard(|| {
        check_two_j!(two_j);
        let sys = SpinSystem::new(two_j);
        let dim = sys.dim();
        if data.is_null() {
            set_error("null data pointer");
            return SpincatStatus::NullPointer;
        }
        if data_len != 2 * dim * dim {
            set_error("data length must be 2*(2j+1)^2");
            return SpincatStatus::InvalidArgument;
        }
        let slice = unsafe { std::slice::from_raw_parts(data, data_len) };
        let mat = nalgebra_matrix_from_row_major(dim, slice);
        match SpinOperator::new(sys, mat) {
            Ok(op) => write_handle(out, SpincatOperator { inner: op }),
            Err(e) => status_from(&e),
        }
    })
}

fn nalgebra_matrix_from_row_major(dim: usize, slice: &[f64]) -> nalgebra::DMatrix<C64> {
    nalgebra::DMatrix::from_fn(dim, dim, |r, c| {
        let base = 2 * (r * dim + c);
        C64::new(slice[base], slice[base + 1])
    })
}

/// # Safety
/// `op` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spincat_operator_dim(
    op: *const SpincatOperator,
    out: *mut usize,
) -> SpincatStatus {
    guard(|| {
        let op = nonnull!(op);
        if out.is_null() {
            set_error("null output pointer");
            return SpincatStatus::NullPointer;
        }
        unsafe { *out = op.inner.sys().dim() };
        SpincatStatus::Ok
    })
}

/// Copy the operator as a row-major interleaved (re, im) array of
/// 2·dim² doubles.
///
/// # Safety
/// `op` must be a live handle and `buffer` writable for `2*dim*dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn spincat_operator_elements(
    op: *const SpincatOperator,
    buffer: *mut c_double,
    buffer_len: usize,
) -> SpincatStatus {
    guard(|| {
        let op = nonnull!(op);
        let dim = op.inner.sys().dim();
        if buffer.is_null() {
            set_error("null buffer");
            return SpincatStatus::NullPointer;
        }
        if buffer_len != 2 * dim * dim {
            set_error("buffer length must be 2*(2j+1)^2");
            return SpincatStatus::InvalidArgument;
        }
        let slice = unsafe { std::slice::from_raw_parts_mut(buffer, buffer_len) };
        for r in 0..dim {
            for c in 0..dim {
                let z = op.inner.element(r, c);
                let base = 2 * (r * dim + c);
                slice[base] = z.re;
                slice[base + 1] = z.im;
            }
        }
        SpincatStatus::Ok
    })
}

/// e^{Λτ}ρ with the chosen method. Non-positive `rel_tol`, `abs_tol` or
/// `max_step` select the defaults (1e-10, 1e-13, 0.1/(j+1)).
///
/// # Safety
/// `rho` must be a live handle; release the result with
/// `spincat_operator_free`.
#[no_mangle]
pub unsafe extern "C" fn spincat_propagate(
    rho: *const SpincatOperator,
    tau: c_double,
    method: SpincatMethod,
    rel_tol: c_double,
    abs_tol: c_double,
    max_step: c_double,
    out: *mut *mut SpincatOperator,
) -> SpincatStatus {
    guard(|| {
        let rho = nonnull!(rho);
        let defaults = PropagatorConfig::default();
        let cfg = PropagatorConfig {
            method: match method {
                SpincatMethod::AdaptiveRk => Method::AdaptiveRk,
                SpincatMethod::FixedRk4 => Method::FixedRk4,
                SpincatMethod::DenseExpmOracle => Method::DenseExpmOracle,
            },
            rel_tol: if rel_tol > 0.0 {
                rel_tol
            } else {
                defaults.rel_tol
            },
            abs_tol: if abs_tol > 0.0 {
                abs_tol
            } else {
                defaults.abs_tol
            },
            max_step: (max_step > 0.0).then_some(max_step),
        };
        match dynamics::propagate(&rho.inner, tau, &cfg) {
            Ok(op) => write_handle(out, SpincatOperator { inner: op }),
            Err(e) => status_from(&e),
        }
    })
}

/// Hilbert–Schmidt norm tr ρρ†.
///
/// # Safety
/// `op` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spincat_norm_hs(
    op: *const SpincatOperator,
    out: *mut c_double,
) -> SpincatStatus {
    guard(|| {
        let op = nonnull!(op);
        write_f64(out, spincat::observables::norm_hs(&op.inner))
    })
}

/// Entrywise absolute-sum norm in the Dicke basis.
///
/// # Safety
/// `op` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spincat_norm_abs(
    op: *const SpincatOperator,
    out: *mut c_double,
) -> SpincatStatus {
    guard(|| {
        let op = nonnull!(op);
        write_f64(out, spincat::observables::norm_abs(&op.inner))
    })
}

/// Normalized Bloch vector (⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)/tr ρ into `out[3]`.
///
/// # Safety
/// `op` must be a live handle and `out` writable for 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn spincat_bloch_vector(
    op: *const SpincatOperator,
    out: *mut c_double,
) -> SpincatStatus {
    guard(|| {
        let op = nonnull!(op);
        if out.is_null() {
            set_error("null output pointer");
            return SpincatStatus::NullPointer;
        }
        match spincat::observables::bloch_vector(&op.inner) {
            Ok(b) => {
                let slice = unsafe { std::slice::from_raw_parts_mut(out, 3) };
                slice.copy_from_slice(&b);
                SpincatStatus::Ok
            }
            Err(e) => status_from(&e),
        }
    })
}

/// # Safety
/// `op` must be a handle from this library, not yet freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn spincat_operator_free(op: *mut SpincatOperator) {
    if !op.is_null() {
        drop(unsafe { Box::from_raw(op) });
    }
}

/// Dispersive phase-shift rate η = g²δ/(κ²+δ²).
#[no_mangle]
pub extern "C" fn spincat_eta(
    g: c_double,
    kappa: c_double,
    delta: c_double,
    out: *mut c_double,
) -> SpincatStatus {
    write_f64(out, params(g, kappa, delta, 1).eta())
}

/// Classical time scale κ/(N g²).
#[no_mangle]
pub extern "C" fn spincat_t_class(
    g: c_double,
    kappa: c_double,
    n_atoms: u32,
    out: *mut c_double,
) -> SpincatStatus {
    write_f64(
        out,
        PhysicalParams {
            g,
            kappa,
            delta: 0.0,
            n_atoms,
        }
        .t_class(),
    )
}

/// Splitting time π/(m·η); `m` must be even and positive, η nonzero.
#[no_mangle]
pub extern "C" fn spincat_multi_component_time(
    g: c_double,
    kappa: c_double,
    delta: c_double,
    m: i64,
    out: *mut c_double,
) -> SpincatStatus {
    match cats::multi_component_times(&params(g, kappa, delta, 1), m) {
        Ok(t) => write_f64(out, t),
        Err(e) => status_from(&e),
    }
}

/// cos²α between J₋|γ⟩ and |γ⟩ in closed form.
#[no_mangle]
pub extern "C" fn spincat_cos2_alpha(
    theta: c_double,
    j: c_double,
    out: *mut c_double,
) -> SpincatStatus {
    write_f64(out, analytics::cos2_alpha(theta, j))
}

/// Initial decay rate of the Hilbert–Schmidt norm of |γ₁⟩⟨γ₂|, split into
/// classical-scale and fast (∝ j) parts.
#[no_mangle]
pub extern "C" fn spincat_n1_initial_slope(
    theta1: c_double,
    phi1: c_double,
    theta2: c_double,
    phi2: c_double,
    j: c_double,
    slow: *mut c_double,
    fast: *mut c_double,
    total: *mut c_double,
) -> SpincatStatus {
    let s = analytics::n1_initial_slope(theta1, phi1, theta2, phi2, j);
    for (ptr, value) in [(slow, s.slow), (fast, s.fast), (total, s.total)] {
        let status = write_f64(ptr, value);
        if status != SpincatStatus::Ok {
            return status;
        }
    }
    SpincatStatus::Ok
}

/// Fast decoherence rate 2j(γ₁−γ₂)²(1−γ₁γ₂)²/((1+γ₁²)(1+γ₂²))².
#[no_mangle]
pub extern "C" fn spincat_n2_rate_general(
    gamma1: c_double,
    gamma2: c_double,
    j: c_double,
    out: *mut c_double,
) -> SpincatStatus {
    write_f64(out, analytics::n2_rate_general(gamma1, gamma2, j))
}

/// Linear and quadratic exponent coefficients for the mirror pair (γ, 1/γ).
#[no_mangle]
pub extern "C" fn spincat_n2_coeffs_symmetric(
    gamma1: c_double,
    linear: *mut c_double,
    quadratic: *mut c_double,
) -> SpincatStatus {
    match analytics::n2_coeffs_symmetric(gamma1) {
        Ok((a, b)) => {
            let s = write_f64(linear, a);
            if s != SpincatStatus::Ok {
                return s;
            }
            write_f64(quadratic, b)
        }
        Err(e) => status_from(&e),
    }
}

/// Diagonal-state decay rate γ⁴((γ²−1)/(γ²+1))².
#[no_mangle]
pub extern "C" fn spincat_n2_rate_diagonal(gamma: c_double, out: *mut c_double) -> SpincatStatus {
    write_f64(out, analytics::n2_rate_diagonal(gamma))
}

/// Exact polar-pair norms (e^{−2τ}, e^{−τ}).
#[no_mangle]
pub extern "C" fn spincat_polar_cat_norms(
    tau: c_double,
    n1: *mut c_double,
    n2: *mut c_double,
) -> SpincatStatus {
    let (a, b) = analytics::polar_cat_norms(tau);
    let s = write_f64(n1, a);
    if s != SpincatStatus::Ok {
        return s;
    }
    write_f64(n2, b)
}

/// Overdamped-pendulum trajectory θ(τ) = 2·arctan(tan(θ₀/2)·e^τ).
#[no_mangle]
pub extern "C" fn spincat_classical_theta(
    theta0: c_double,
    tau: c_double,
    out: *mut c_double,
) -> SpincatStatus {
    write_f64(out, analytics::classical_theta(theta0, tau))
}

const _: () = {
    // The C enum must stay in sync with clap-facing strings and docs; a
    // compile-time pin against accidental renumbering.
    assert!(SpincatStatus::Ok as c_int == 0);
    assert!(SpincatMethod::AdaptiveRk as c_int == 0);
};
