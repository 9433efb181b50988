//! C ABI over the multilayer engine.
//!
//! Every function returns an [`IorelStatus`]. On failure a human-readable
//! message is stored per thread and can be read with [`iorel_last_error`].
//! Stacks are opaque handles created by [`iorel_stack_from_toml`] or
//! [`iorel_stack_from_file`] and released with [`iorel_stack_free`].
//! Polarization and side selectors are plain integers (see the `IOREL_POL_*`
//! and `IOREL_SIDE_*` constants) so that out-of-range values from C are
//! reported instead of being undefined behavior.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use iorel::commutators::commutator_set_from;
use iorel::thermal::emission_w;
use iorel::{load_stack, scatter_set, Error, ModeContext, Polarization, Side, Stack};
use num_complex::Complex64;

pub const IOREL_POL_S: u32 = 0;
pub const IOREL_POL_P: u32 = 1;
pub const IOREL_SIDE_0: u32 = 0;
pub const IOREL_SIDE_N: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IorelStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    Regime = 5,
    Numerical = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IorelComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for IorelComplex {
    fn from(z: Complex64) -> Self {
        IorelComplex { re: z.re, im: z.im }
    }
}

/// Generalized reflection and transmission of the whole stack.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IorelCoefficients {
    pub r0n: IorelComplex,
    pub t0n: IorelComplex,
    pub rn0: IorelComplex,
    pub tn0: IorelComplex,
}

/// Outer-region commutator coefficients divided by the mode normalization.
/// Index 0 is side 0, index 1 is side n.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IorelCommutators {
    pub c_in: [f64; 2],
    pub c_out: [f64; 2],
    pub c_cross: IorelComplex,
}

/// Intraplate 2x2 commutator matrix of one interior layer and its noise amplitudes.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IorelIntraplate {
    pub c: [[IorelComplex; 2]; 2],
    pub xi: [f64; 2],
}

/// Opaque stack handle.
pub struct IorelStack {
    inner: Stack,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: IorelStatus,
    message: String,
}

impl Failure {
    fn new(status: IorelStatus, message: impl Into<String>) -> Self {
        Failure { status, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) | Error::Table(_) => IorelStatus::Parse,
            Error::Passivity { .. }
            | Error::Thickness { .. }
            | Error::OutOfTable { .. }
            | Error::NonAbsorbingOuter(_) => IorelStatus::Validation,
            Error::Region { .. }
            | Error::InvalidArgument(_)
            | Error::OutsideRegion { .. }
            | Error::Dimension(_) => IorelStatus::InvalidArgument,
            Error::NoBosonicInput { .. } | Error::NonPositiveOutput { .. } | Error::Regime(_) => IorelStatus::Regime,
            Error::SingularInterface { .. }
            | Error::NotPsd { .. }
            | Error::NegativeEmission { .. }
            | Error::Accuracy(_) => IorelStatus::Numerical,
            Error::Io(_) => IorelStatus::Io,
        };
        Failure::new(status, e.to_string())
    }
}

fn set_last_error(message: Option<&str>) {
    let cs = message.map(|m| CString::new(m.replace('\0', " ")).unwrap_or_default());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = cs);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IorelStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let what = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Failure::new(IorelStatus::Panic, format!("internal panic: {what}")))
    });
    match outcome {
        Ok(()) => {
            set_last_error(None);
            IorelStatus::Ok
        }
        Err(f) => {
            set_last_error(Some(&f.message));
            f.status
        }
    }
}

fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(IorelStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure::new(IorelStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

fn stack_arg<'a>(p: *const IorelStack) -> Result<&'a Stack, Failure> {
    if p.is_null() {
        return Err(Failure::new(IorelStatus::NullPointer, "stack handle is null"));
    }
    // SAFETY: non-null handles come from iorel_stack_from_* and are not yet freed.
    Ok(unsafe { &(*p).inner })
}

fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    if p.is_null() {
        return Err(Failure::new(IorelStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: caller provides a valid, writable location.
    Ok(unsafe { &mut *p })
}

fn pol_arg(q: u32) -> Result<Polarization, Failure> {
    match q {
        IOREL_POL_S => Ok(Polarization::S),
        IOREL_POL_P => Ok(Polarization::P),
        _ => Err(Failure::new(IorelStatus::InvalidArgument, format!("polarization {q} (expected 0 = s, 1 = p)"))),
    }
}

fn side_arg(side: u32) -> Result<Side, Failure> {
    match side {
        IOREL_SIDE_0 => Ok(Side::Zero),
        IOREL_SIDE_N => Ok(Side::N),
        _ => Err(Failure::new(IorelStatus::InvalidArgument, format!("side {side} (expected 0 or 1)"))),
    }
}

fn install(out: *mut *mut IorelStack, stack: Stack) -> Result<(), Failure> {
    let slot = out_arg(out, "output handle pointer")?;
    *slot = Box::into_raw(Box::new(IorelStack { inner: stack }));
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn iorel_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null after a success.
///
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn iorel_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Parse a stack from TOML text. On success `*out` owns a new handle.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iorel_stack_from_toml(toml: *const c_char, out: *mut *mut IorelStack) -> IorelStatus {
    guard(|| {
        let text = str_arg(toml, "toml text")?;
        install(out, load_stack(text)?)
    })
}

/// Read and parse a stack file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iorel_stack_from_file(path: *const c_char, out: *mut *mut IorelStack) -> IorelStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        install(out, iorel::stack::load_stack_file(std::path::Path::new(path))?)
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `stack` must be null or a handle not previously freed.
#[no_mangle]
pub unsafe extern "C" fn iorel_stack_free(stack: *mut IorelStack) {
    if !stack.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(stack))));
    }
}

/// Number of interfaces n (regions are 0..=n, interior layers 1..n-1).
///
/// # Safety
/// `stack` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iorel_stack_interfaces(stack: *const IorelStack, out: *mut usize) -> IorelStatus {
    guard(|| {
        let n = stack_arg(stack)?.n();
        *out_arg(out, "out")? = n;
        Ok(())
    })
}

/// Generalized outer coefficients at (omega in rad/s, k in 1/m).
///
/// # Safety
/// `stack` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iorel_coefficients(
    stack: *const IorelStack,
    omega: f64,
    k: f64,
    pol: u32,
    out: *mut IorelCoefficients,
) -> IorelStatus {
    guard(|| {
        let ctx = ModeContext::new(stack_arg(stack)?, omega, k)?;
        let ss = scatter_set(&ctx, pol_arg(pol)?)?;
        *out_arg(out, "out")? = IorelCoefficients {
            r0n: ss.r0n.into(),
            t0n: ss.t0n.into(),
            rn0: ss.rn0.into(),
            tn0: ss.tn0.into(),
        };
        Ok(())
    })
}

/// Outer-region commutator coefficients.
///
/// # Safety
/// `stack` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iorel_commutators(
    stack: *const IorelStack,
    omega: f64,
    k: f64,
    pol: u32,
    out: *mut IorelCommutators,
) -> IorelStatus {
    guard(|| {
        let ctx = ModeContext::new(stack_arg(stack)?, omega, k)?;
        let cs = commutator_set_from(&ctx, &scatter_set(&ctx, pol_arg(pol)?)?)?;
        *out_arg(out, "out")? = IorelCommutators {
            c_in: cs.c_in,
            c_out: cs.c_out,
            c_cross: cs.c_cross.into(),
        };
        Ok(())
    })
}

/// Intraplate matrix of interior layer `layer` (1 <= layer < n).
///
/// # Safety
/// `stack` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iorel_intraplate(
    stack: *const IorelStack,
    omega: f64,
    k: f64,
    pol: u32,
    layer: usize,
    out: *mut IorelIntraplate,
) -> IorelStatus {
    guard(|| {
        let ctx = ModeContext::new(stack_arg(stack)?, omega, k)?;
        let cs = commutator_set_from(&ctx, &scatter_set(&ctx, pol_arg(pol)?)?)?;
        let blk = cs.layers.iter().find(|b| b.j == layer).ok_or_else(|| {
            Failure::new(
                IorelStatus::InvalidArgument,
                format!("layer {layer} is not an interior layer (1..{})", ctx.n()),
            )
        })?;
        *out_arg(out, "out")? = IorelIntraplate {
            c: blk.c.map(|row| row.map(IorelComplex::from)),
            xi: blk.xi,
        };
        Ok(())
    })
}

/// Thermal emission into side `side` at temperature `temperature` in kelvin.
///
/// # Safety
/// `stack` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iorel_emission(
    stack: *const IorelStack,
    omega: f64,
    k: f64,
    pol: u32,
    temperature: f64,
    side: u32,
    out: *mut f64,
) -> IorelStatus {
    guard(|| {
        let ctx = ModeContext::new(stack_arg(stack)?, omega, k)?;
        *out_arg(out, "out")? = emission_w(&ctx, pol_arg(pol)?, temperature, side_arg(side)?)?;
        Ok(())
    })
}
