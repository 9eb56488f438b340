//! C ABI for `hkline`.
//!
//! Every function returns an [`HklStatus`]. Outputs go through caller-provided
//! pointers and are written only on success. The message for the most recent
//! failure on the calling thread is available from [`hkl_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hkline::ghspace::{asd_residual, gh_potential, rotation_lift_f, sphere_period, GhConfig, GhPoint, MonopoleData};
use hkline::hkquotient::{dynkin_signs, DynkinGraph, DynkinKind};
use hkline::numcalc::FdScheme;
use hkline::suite::{run_suite, RunConfig};
use hkline::twistor::{transition_guv, TwistorPointU};
use hkline::Error;
use num_complex::Complex64;

/// Result codes shared by all entry points.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HklStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Model = 4,
    Pole = 5,
    NoConvergence = 6,
    Config = 7,
    Numerical = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Opaque Gibbons–Hawking configuration.
pub struct HklGhConfig {
    inner: GhConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HklStatus {
    match e {
        Error::Domain(_) => HklStatus::Domain,
        Error::Model(_) | Error::NonFree { .. } => HklStatus::Model,
        Error::Pole(_) => HklStatus::Pole,
        Error::Convergence { .. } => HklStatus::NoConvergence,
        Error::Config(_) => HklStatus::Config,
        Error::Invalid(_) => HklStatus::InvalidArgument,
        Error::Io(_) => HklStatus::Io,
        Error::Structure { .. } | Error::Metric(_) => HklStatus::Numerical,
    }
}

struct Fail(HklStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(HklStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HklStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HklStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HklStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn config<'a>(cfg: *const HklGhConfig) -> Result<&'a GhConfig, Fail> {
    cfg.as_ref().map(|h| &h.inner).ok_or_else(|| null("config"))
}

unsafe fn point3(x: *const f64) -> Result<[f64; 3], Fail> {
    let s = slice(x, 3, "x")?;
    Ok([s[0], s[1], s[2]])
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(HklStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Message for the last failure on this thread, or null. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn hkl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code; "unknown" for values outside [`HklStatus`].
#[no_mangle]
pub extern "C" fn hkl_status_name(code: i32) -> *const c_char {
    let s: &'static CStr = match code {
        0 => c"ok",
        1 => c"null pointer",
        2 => c"invalid argument",
        3 => c"domain error",
        4 => c"model error",
        5 => c"pole",
        6 => c"no convergence",
        7 => c"config error",
        8 => c"numerical error",
        9 => c"io error",
        10 => c"buffer too small",
        11 => c"panic",
        _ => c"unknown",
    };
    s.as_ptr()
}

/// Creates a configuration with strictly increasing centers on the x₁-axis and constant `c`.
///
/// # Safety
/// `centers` must point to `count` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hkl_gh_config_new(
    centers: *const f64,
    count: usize,
    c: f64,
    out: *mut *mut HklGhConfig,
) -> HklStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = GhConfig::new(slice(centers, count, "centers")?.to_vec(), c)?;
        write(out, Box::into_raw(Box::new(HklGhConfig { inner })), "out")
    })
}

/// Releases a configuration. Null is ignored.
///
/// # Safety
/// `cfg` must come from [`hkl_gh_config_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hkl_gh_config_free(cfg: *mut HklGhConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Number of centers.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hkl_gh_num_centers(cfg: *const HklGhConfig, out: *mut usize) -> HklStatus {
    guard(|| write(out, config(cfg)?.num_centers(), "out"))
}

/// Harmonic potential V at `x[3]`.
///
/// # Safety
/// `cfg` must be a live handle, `x` must hold 3 doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hkl_gh_potential(cfg: *const HklGhConfig, x: *const f64, out: *mut f64) -> HklStatus {
    guard(|| write(out, gh_potential(config(cfg)?, &point3(x)?)?, "out"))
}

/// Value of the lifted-rotation function f at `x[3]` (defined on the axis).
///
/// # Safety
/// As for [`hkl_gh_potential`].
#[no_mangle]
pub unsafe extern "C" fn hkl_gh_rotation_f(cfg: *const HklGhConfig, x: *const f64, out: *mut f64) -> HklStatus {
    guard(|| write(out, rotation_lift_f(config(cfg)?, &point3(x)?)?, "out"))
}

/// Integral of ω₁ over the sphere above segment `segment`, computed on a `resolution`-node grid.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hkl_gh_period(
    cfg: *const HklGhConfig,
    segment: usize,
    resolution: usize,
    out: *mut f64,
) -> HklStatus {
    guard(|| write(out, sphere_period(config(cfg)?, segment, resolution)?, "out"))
}

/// Largest self-dual component of the invariant curvature at `(x[3], theta)`, using a
/// fourth-order stencil with step `h`.
///
/// # Safety
/// As for [`hkl_gh_potential`].
#[no_mangle]
pub unsafe extern "C" fn hkl_gh_asd_residual(
    cfg: *const HklGhConfig,
    x: *const f64,
    theta: f64,
    h: f64,
    out: *mut f64,
) -> HklStatus {
    guard(|| {
        let gc = config(cfg)?;
        let scheme = FdScheme::new(h, 4)?;
        let pt = GhPoint::new(gc, point3(x)?, theta)?;
        write(out, asd_residual(gc, &MonopoleData::from_config(gc), &pt, &scheme)?, "out")
    })
}

/// Sign assignment on the extended diagram named by `diagram` (e.g. "A3", "D5", "E8").
///
/// On success `*len` is the node count and `*solvable` tells whether signs exist;
/// `signs` receives ±1 per node when solvable. Returns `BufferTooSmall` with `*len`
/// set when `capacity` is short.
///
/// # Safety
/// `diagram` must be a NUL-terminated string, `signs` must hold `capacity` ints,
/// and `len` and `solvable` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hkl_dynkin_signs(
    diagram: *const c_char,
    signs: *mut i32,
    capacity: usize,
    len: *mut usize,
    solvable: *mut bool,
) -> HklStatus {
    guard(|| {
        if len.is_null() || solvable.is_null() {
            return Err(null("len or solvable"));
        }
        let kind: DynkinKind = text(diagram, "diagram")?.parse()?;
        let graph = DynkinGraph::extended(kind)?;
        let found = dynkin_signs(&graph)?;
        let nodes = graph.vertices;
        len.write(nodes);
        let Some(c) = found else {
            solvable.write(false);
            return Ok(());
        };
        if capacity < nodes {
            return Err(Fail(HklStatus::BufferTooSmall, format!("need {nodes} entries, got {capacity}")));
        }
        if signs.is_null() {
            return Err(null("signs"));
        }
        for (i, s) in c.iter().enumerate() {
            signs.add(i).write(*s as i32);
        }
        solvable.write(true);
        Ok(())
    })
}

/// Transition function g_UV = exp(−Σ vᵢξᵢ / 2ζ). `v` and `xi` hold `n` complex
/// numbers as interleaved (re, im) pairs.
///
/// # Safety
/// `v` and `xi` must hold `2n` doubles; `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hkl_transition_guv(
    v: *const f64,
    xi: *const f64,
    n: usize,
    zeta_re: f64,
    zeta_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HklStatus {
    guard(|| {
        let pairs = |p: &[f64]| p.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect::<Vec<_>>();
        let pt = TwistorPointU::new(
            pairs(slice(v, 2 * n, "v")?),
            pairs(slice(xi, 2 * n, "xi")?),
            Complex64::new(zeta_re, zeta_im),
        )?;
        let g = transition_guv(&pt)?;
        if out_im.is_null() {
            return Err(null("out_im"));
        }
        write(out_re, g.re, "out_re")?;
        write(out_im, g.im, "out_im")
    })
}

/// Runs a verification suite configured by `key = value` text and returns the JSON
/// report in `*json` (release with [`hkl_string_free`]). `*pass` receives the verdict.
/// Failing checks are reported through `*pass`, not the status.
///
/// # Safety
/// `config_text` must be a NUL-terminated string; `json` and `pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hkl_run_suite(config_text: *const c_char, json: *mut *mut c_char, pass: *mut bool) -> HklStatus {
    guard(|| {
        if json.is_null() || pass.is_null() {
            return Err(null("json or pass"));
        }
        let cfg = RunConfig::from_text(text(config_text, "config_text")?)?;
        let report = run_suite(&cfg)?;
        let s = CString::new(report.to_json()).map_err(|e| Fail(HklStatus::Numerical, e.to_string()))?;
        pass.write(report.pass);
        json.write(s.into_raw());
        Ok(())
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hkl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
