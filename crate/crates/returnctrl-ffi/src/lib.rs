//! C ABI over the returnctrl workbench.
//!
//! Every handle is opaque and owned by the caller once returned; release it
//! with the matching `*_free`. Functions return an [`RcStatus`] and leave a
//! message for [`rc_last_error`] on failure. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;
use std::sync::Arc;

use num_complex::Complex64;
use returnctrl::io::{execute, Command, RunConfig};
use returnctrl::nonlinear::Reaction;
use returnctrl::pde::Field;
use returnctrl::trajectory::{assemble_trajectory, build_model, ReferenceTrajectory};
use returnctrl::{Error, Scalar};

/// Status codes. The positive ones match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcStatus {
    Ok = 0,
    /// invalid configuration, parameters or I/O
    Config = 2,
    /// the reference trajectory or frozen coefficients could not be built
    Construction = 3,
    /// an iteration did not converge
    Convergence = 4,
    /// a required pointer was null
    NullArgument = 10,
    /// a string argument was not UTF-8
    InvalidUtf8 = 11,
    /// caller buffer too small
    BufferTooSmall = 12,
    /// internal panic; the handle arguments are left untouched
    Panic = 99,
}

impl From<&Error> for RcStatus {
    fn from(e: &Error) -> Self {
        match e.exit_code() {
            3 => RcStatus::Construction,
            4 => RcStatus::Convergence,
            _ => RcStatus::Config,
        }
    }
}

/// Run configuration.
pub struct RcConfig {
    inner: RunConfig,
}

/// Finished command run.
pub struct RcRun {
    summary: CString,
}

enum Traj {
    Real(Arc<ReferenceTrajectory<f64>>),
    Complex(Arc<ReferenceTrajectory<Complex64>>),
}

/// Reference trajectory sampled on the configured grid.
pub struct RcTrajectory {
    inner: Traj,
}

/// Which trajectory field to copy out.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcField {
    UBar = 0,
    VBar = 1,
    HBar = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn fail(e: &Error) -> RcStatus {
    set_error(e.to_string());
    RcStatus::from(e)
}

/// Runs `f` with panics mapped to [`RcStatus::Panic`].
fn guard(f: impl FnOnce() -> RcStatus) -> RcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            RcStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, RcStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(RcStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        RcStatus::InvalidUtf8
    })
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn rc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn rc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default configuration.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn rc_config_default(out: *mut *mut RcConfig) -> RcStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return RcStatus::NullArgument;
        }
        *out = Box::into_raw(Box::new(RcConfig { inner: RunConfig::default() }));
        RcStatus::Ok
    })
}

/// Parses and validates a TOML configuration.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_config_from_toml(toml: *const c_char, out: *mut *mut RcConfig) -> RcStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return RcStatus::NullArgument;
        }
        let text = match read_str(toml) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match RunConfig::from_toml(text).and_then(|c| c.validate().map(|_| c)) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(RcConfig { inner: c }));
                RcStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Sets the command by its CLI name, e.g. `"solve-control"`.
///
/// # Safety
/// `cfg` must come from this library; `name` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rc_config_set_command(cfg: *mut RcConfig, name: *const c_char) -> RcStatus {
    guard(|| {
        let Some(cfg) = cfg.as_mut() else {
            set_error("null config");
            return RcStatus::NullArgument;
        };
        let name = match read_str(name) {
            Ok(n) => n,
            Err(s) => return s,
        };
        let cmd = [
            Command::BuildTrajectory,
            Command::SolveControl,
            Command::RunNonlinear,
            Command::DemoObstruction,
            Command::Observability,
        ]
        .into_iter()
        .find(|c| c.name() == name);
        match cmd {
            Some(c) => {
                cfg.inner.command = Some(c);
                RcStatus::Ok
            }
            None => fail(&Error::Config(format!("unknown command {name:?}"))),
        }
    })
}

/// Sets the output directory of [`rc_run`].
///
/// # Safety
/// `cfg` must come from this library; `dir` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rc_config_set_out(cfg: *mut RcConfig, dir: *const c_char) -> RcStatus {
    guard(|| {
        let Some(cfg) = cfg.as_mut() else {
            set_error("null config");
            return RcStatus::NullArgument;
        };
        match read_str(dir) {
            Ok(d) => {
                cfg.inner.out = Some(PathBuf::from(d));
                RcStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Sets the seed.
///
/// # Safety
/// `cfg` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn rc_config_set_seed(cfg: *mut RcConfig, seed: u64) -> RcStatus {
    guard(|| match cfg.as_mut() {
        Some(c) => {
            c.inner.seed = seed;
            RcStatus::Ok
        }
        None => {
            set_error("null config");
            RcStatus::NullArgument
        }
    })
}

/// # Safety
/// `cfg` must come from this library or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn rc_config_free(cfg: *mut RcConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Runs the configured command and writes its artifacts. A run that writes
/// its results but fails afterwards (a Picard budget exhausted) still
/// returns the error status and no handle.
///
/// # Safety
/// `cfg` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_run(cfg: *const RcConfig, out: *mut *mut RcRun) -> RcStatus {
    guard(|| {
        let (Some(cfg), false) = (cfg.as_ref(), out.is_null()) else {
            set_error("null argument");
            return RcStatus::NullArgument;
        };
        let mut c = cfg.inner.clone();
        if c.out.is_none() {
            if let Some(cmd) = c.command {
                c.out = Some(PathBuf::from("out").join(cmd.name()));
            }
        }
        let summary = match c.validate().and_then(|_| execute(&c)) {
            Ok(s) => s,
            Err(e) => return fail(&e),
        };
        let text = serde_json::to_string(&summary).unwrap_or_default();
        match CString::new(text) {
            Ok(summary) => {
                *out = Box::into_raw(Box::new(RcRun { summary }));
                RcStatus::Ok
            }
            Err(_) => fail(&Error::Serialization("summary contains NUL".into())),
        }
    })
}

/// Summary JSON of a run, owned by the handle.
///
/// # Safety
/// `run` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn rc_run_summary_json(run: *const RcRun) -> *const c_char {
    run.as_ref().map_or(ptr::null(), |r| r.summary.as_ptr())
}

/// # Safety
/// `run` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn rc_run_free(run: *mut RcRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

fn build<S: Scalar>(c: &RunConfig) -> returnctrl::Result<Arc<ReferenceTrajectory<S>>> {
    // without an explicit [trajectory] table the grid-resolvable construction
    let bump = c.bump(Command::SolveControl);
    let m = Arc::new(build_model::<S>(&bump, c.kind)?);
    let g = Reaction::new(c.coupling_c, c.kind.power() as u32);
    let grid = c.grid.grid()?;
    Ok(Arc::new(assemble_trajectory(m, &grid, (c.omega[0], c.omega[1]), &g)?))
}

/// Builds the reference trajectory of `cfg.kind` on the configured grid.
///
/// # Safety
/// `cfg` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_trajectory_build(cfg: *const RcConfig, out: *mut *mut RcTrajectory) -> RcStatus {
    guard(|| {
        let (Some(cfg), false) = (cfg.as_ref(), out.is_null()) else {
            set_error("null argument");
            return RcStatus::NullArgument;
        };
        let c = &cfg.inner;
        let t = if c.kind.is_complex() {
            build::<Complex64>(c).map(Traj::Complex)
        } else {
            build::<f64>(c).map(Traj::Real)
        };
        match t {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RcTrajectory { inner }));
                RcStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Grid shape: interior nodes per level, number of time levels and whether
/// values are complex.
///
/// # Safety
/// `t` must come from this library; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_trajectory_shape(
    t: *const RcTrajectory,
    nx: *mut usize,
    levels: *mut usize,
    is_complex: *mut bool,
) -> RcStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            set_error("null trajectory");
            return RcStatus::NullArgument;
        };
        if nx.is_null() || levels.is_null() || is_complex.is_null() {
            set_error("null output pointer");
            return RcStatus::NullArgument;
        }
        let (g, c) = match &t.inner {
            Traj::Real(r) => (r.grid, false),
            Traj::Complex(r) => (r.grid, true),
        };
        *nx = g.nx;
        *levels = g.levels();
        *is_complex = c;
        RcStatus::Ok
    })
}

fn copy_out<S: Scalar>(f: &Field<S>, buf: &mut [f64]) {
    let per = if S::COMPLEX { 2 } else { 1 };
    for (k, v) in f.data.iter().enumerate() {
        buf[per * k] = v.re();
        if S::COMPLEX {
            buf[per * k + 1] = v.im();
        }
    }
}

/// Copies a field into `buf`, level-major (`buf[n * nx + j]`), with
/// `(re, im)` pairs for complex trajectories. `len` counts doubles.
///
/// # Safety
/// `t` must come from this library and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rc_trajectory_copy_field(
    t: *const RcTrajectory,
    which: RcField,
    buf: *mut f64,
    len: usize,
) -> RcStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            set_error("null trajectory");
            return RcStatus::NullArgument;
        };
        if buf.is_null() {
            set_error("null buffer");
            return RcStatus::NullArgument;
        }
        let need = match &t.inner {
            Traj::Real(r) => r.u_bar.data.len(),
            Traj::Complex(r) => 2 * r.u_bar.data.len(),
        };
        if len < need {
            set_error(format!("buffer holds {len} doubles, need {need}"));
            return RcStatus::BufferTooSmall;
        }
        let out = std::slice::from_raw_parts_mut(buf, need);
        match &t.inner {
            Traj::Real(r) => copy_out(pick(r, which), out),
            Traj::Complex(r) => copy_out(pick(r, which), out),
        }
        RcStatus::Ok
    })
}

fn pick<S: Scalar>(r: &ReferenceTrajectory<S>, which: RcField) -> &Field<S> {
    match which {
        RcField::UBar => &r.u_bar,
        RcField::VBar => &r.v_bar,
        RcField::HBar => &r.h_bar,
    }
}

/// Max-norm of a field, or a negative value for a null handle.
///
/// # Safety
/// `t` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn rc_trajectory_sup_norm(t: *const RcTrajectory, which: RcField) -> f64 {
    match t.as_ref() {
        Some(t) => match &t.inner {
            Traj::Real(r) => pick(r, which).sup_norm(),
            Traj::Complex(r) => pick(r, which).sup_norm(),
        },
        None => -1.0,
    }
}

/// # Safety
/// `t` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn rc_trajectory_free(t: *mut RcTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}
