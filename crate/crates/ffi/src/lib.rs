//! C ABI over `aicon-tol`.
//!
//! Problem sets are opaque handles. Every fallible call returns a
//! [`TolStatus`]; on failure the message is available from
//! [`tol_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use aicon_tol::baselines::{baseline_scores, BaselineKind};
use aicon_tol::domain::{generate_problem_set, load_problem_set, DomainError, Problem};
use aicon_tol::harness::{kendall_tau_b, HarnessError};
use aicon_tol::solver::{score_problem_set, solve_problem, Outcome, RunSpec, SolverError, SolverParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TolStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    Io = 5,
    Degenerate = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TolBaselineKind {
    OptimalMoves = 0,
    BfsFromStart = 1,
    BfsFromGoal = 2,
    BfsBidirectional = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TolOutcome {
    Solved = 0,
    Stalled = 1,
    StepCap = 2,
}

/// Solver parameters; start from `tol_solver_params_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolSolverParams {
    pub alpha: f64,
    pub beta: f64,
    pub max_depth: u32,
    pub theta_legal: f64,
    pub theta_correct: f64,
    pub empty_row_activation: f64,
    pub probe_scale: f64,
    pub step_cap_factor: u32,
    pub step_cap_offset: u32,
}

impl From<SolverParams> for TolSolverParams {
    fn from(p: SolverParams) -> Self {
        TolSolverParams {
            alpha: p.alpha,
            beta: p.beta,
            max_depth: p.max_depth as u32,
            theta_legal: p.theta_legal,
            theta_correct: p.theta_correct,
            empty_row_activation: p.empty_row_activation,
            probe_scale: p.probe_scale,
            step_cap_factor: p.step_cap_factor,
            step_cap_offset: p.step_cap_offset,
        }
    }
}

impl From<TolSolverParams> for SolverParams {
    fn from(p: TolSolverParams) -> Self {
        SolverParams {
            alpha: p.alpha,
            beta: p.beta,
            max_depth: p.max_depth as usize,
            theta_legal: p.theta_legal,
            theta_correct: p.theta_correct,
            empty_row_activation: p.empty_row_activation,
            probe_scale: p.probe_scale,
            step_cap_factor: p.step_cap_factor,
            step_cap_offset: p.step_cap_offset,
        }
    }
}

/// Opaque problem set.
pub struct TolProblemSet {
    problems: Vec<Problem>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(TolStatus, String);

impl From<DomainError> for Failure {
    fn from(e: DomainError) -> Self {
        let status = match e {
            DomainError::Parse { .. } => TolStatus::Parse,
            DomainError::Validation(_) => TolStatus::Validation,
            DomainError::Io(_) => TolStatus::Io,
            _ => TolStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        Failure(TolStatus::InvalidArgument, e.to_string())
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let status = match e {
            HarnessError::DegenerateInput(_) => TolStatus::Degenerate,
            _ => TolStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TolStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> TolStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TolStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TolStatus::Panic
        }
    }
}

unsafe fn set_ref<'a>(set: *const TolProblemSet) -> Result<&'a [Problem], Failure> {
    set.as_ref().map(|s| s.problems.as_slice()).ok_or_else(|| null("problem set"))
}

unsafe fn out_slice<'a, T>(ptr: *mut T, len: usize, needed: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    if len < needed {
        return Err(Failure(TolStatus::BufferTooSmall, format!("{what} holds {len} values, {needed} needed")));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, needed))
}

fn params_from(params: *const TolSolverParams) -> Result<SolverParams, Failure> {
    let p: SolverParams = match unsafe { params.as_ref() } {
        Some(p) => (*p).into(),
        None => SolverParams::default(),
    };
    p.validate()?;
    Ok(p)
}

#[no_mangle]
pub extern "C" fn tol_solver_params_default() -> TolSolverParams {
    SolverParams::default().into()
}

/// Generates `per_bin` problems for each optimal move count 1..=8.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn tol_problem_set_generate(seed: u64, per_bin: u32, out: *mut *mut TolProblemSet) -> TolStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let bins = (1..=8).map(|k| (k, per_bin as usize)).collect();
        let problems = generate_problem_set(seed, &bins)?;
        if problems.is_empty() {
            return Err(Failure(TolStatus::InvalidArgument, "per_bin must be positive".into()));
        }
        *out = Box::into_raw(Box::new(TolProblemSet { problems }));
        Ok(())
    })
}

/// Loads a JSON-lines problem set.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn tol_problem_set_load(path: *const c_char, out: *mut *mut TolProblemSet) -> TolStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure(TolStatus::InvalidArgument, "path is not UTF-8".into()))?;
        let problems = load_problem_set(path)?;
        *out = Box::into_raw(Box::new(TolProblemSet { problems }));
        Ok(())
    })
}

/// Number of problems, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tol_problem_set_len(set: *const TolProblemSet) -> usize {
    set.as_ref().map_or(0, |s| s.problems.len())
}

/// # Safety
/// `set` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tol_problem_set_optimal_moves(set: *const TolProblemSet, out: *mut u32, len: usize) -> TolStatus {
    guard(|| {
        let problems = set_ref(set)?;
        let out = out_slice(out, len, problems.len(), "out")?;
        for (o, p) in out.iter_mut().zip(problems) {
            *o = p.optimal_moves;
        }
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tol_problem_set_free(set: *mut TolProblemSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Scores every problem. `params` may be null for defaults. Both output
/// arrays must hold at least as many values as the set has problems.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn tol_score_problem_set(
    set: *const TolProblemSet,
    params: *const TolSolverParams,
    runs: u32,
    noise: f64,
    seed: u64,
    additional_moves: *mut f64,
    success_rate: *mut f64,
    len: usize,
) -> TolStatus {
    guard(|| {
        let problems = set_ref(set)?;
        let params = params_from(params)?;
        let add = out_slice(additional_moves, len, problems.len(), "additional_moves")?;
        let succ = out_slice(success_rate, len, problems.len(), "success_rate")?;
        let scores = score_problem_set(problems, &params, &RunSpec { runs, noise, seed })?;
        for (k, s) in scores.problems.iter().enumerate() {
            add[k] = s.additional_moves;
            succ[k] = s.success_rate;
        }
        Ok(())
    })
}

/// Runs one unperturbed episode on problem `index`.
///
/// # Safety
/// Pointers must be valid; `params` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn tol_run_episode(
    set: *const TolProblemSet,
    index: usize,
    params: *const TolSolverParams,
    outcome: *mut TolOutcome,
    moves_taken: *mut u32,
) -> TolStatus {
    guard(|| {
        let problems = set_ref(set)?;
        let params = params_from(params)?;
        if outcome.is_null() || moves_taken.is_null() {
            return Err(null("output"));
        }
        let problem = problems
            .get(index)
            .ok_or_else(|| Failure(TolStatus::InvalidArgument, format!("index {index} out of range")))?;
        let result = solve_problem(problem, &params, None)?;
        *outcome = match result.outcome {
            Outcome::Solved => TolOutcome::Solved,
            Outcome::Stalled => TolOutcome::Stalled,
            Outcome::StepCap => TolOutcome::StepCap,
        };
        *moves_taken = result.moves_taken;
        Ok(())
    })
}

/// `kind` is a `TolBaselineKind` value.
///
/// # Safety
/// `set` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn tol_baseline_scores(set: *const TolProblemSet, kind: i32, out: *mut f64, len: usize) -> TolStatus {
    guard(|| {
        let problems = set_ref(set)?;
        let out = out_slice(out, len, problems.len(), "out")?;
        let kind = match kind {
            k if k == TolBaselineKind::OptimalMoves as i32 => BaselineKind::OptimalMoves,
            k if k == TolBaselineKind::BfsFromStart as i32 => BaselineKind::BfsFromStart,
            k if k == TolBaselineKind::BfsFromGoal as i32 => BaselineKind::BfsFromGoal,
            k if k == TolBaselineKind::BfsBidirectional as i32 => BaselineKind::BfsBidirectional,
            other => return Err(Failure(TolStatus::InvalidArgument, format!("unknown baseline kind {other}"))),
        };
        out.copy_from_slice(&baseline_scores(problems, kind).scores);
        Ok(())
    })
}

/// Kendall's tau-b of two length-`len` arrays.
///
/// # Safety
/// `u` and `v` must hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tol_kendall_tau_b(u: *const f64, v: *const f64, len: usize, out: *mut f64) -> TolStatus {
    guard(|| {
        if u.is_null() || v.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let u = std::slice::from_raw_parts(u, len);
        let v = std::slice::from_raw_parts(v, len);
        *out = kendall_tau_b(u, v)?;
        Ok(())
    })
}

/// Copy of the calling thread's last error message, or null if the last call
/// succeeded. Release it with `tol_string_free`.
#[no_mangle]
pub extern "C" fn tol_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn tol_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
