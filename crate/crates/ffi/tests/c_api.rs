use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use aicon_tol_ffi::*;

fn last_error() -> Option<String> {
    let p = tol_last_error_message();
    if p.is_null() {
        return None;
    }
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { tol_string_free(p) };
    Some(s)
}

fn generated(per_bin: u32) -> *mut TolProblemSet {
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { tol_problem_set_generate(11, per_bin, &mut set) }, TolStatus::Ok);
    assert!(!set.is_null());
    set
}

#[test]
fn generate_query_free() {
    let set = generated(3);
    let n = unsafe { tol_problem_set_len(set) };
    assert_eq!(n, 24);
    let mut moves = vec![0u32; n];
    assert_eq!(unsafe { tol_problem_set_optimal_moves(set, moves.as_mut_ptr(), n) }, TolStatus::Ok);
    assert_eq!(moves[0], 1);
    assert_eq!(moves[23], 8);
    unsafe { tol_problem_set_free(set) };
    unsafe { tol_problem_set_free(ptr::null_mut()) };
}

#[test]
fn scores_and_episodes() {
    let set = generated(1);
    let n = unsafe { tol_problem_set_len(set) };
    let params = tol_solver_params_default();
    assert_eq!((params.alpha, params.beta, params.max_depth), (0.5, 0.5, 4));
    let (mut add, mut succ) = (vec![0.0; n], vec![0.0; n]);
    let status = unsafe { tol_score_problem_set(set, &params, 1, 0.05, 0, add.as_mut_ptr(), succ.as_mut_ptr(), n) };
    assert_eq!(status, TolStatus::Ok);
    assert_eq!((add[0], succ[0]), (0.0, 1.0));

    let (mut outcome, mut taken) = (TolOutcome::StepCap, 0u32);
    assert_eq!(unsafe { tol_run_episode(set, 0, ptr::null(), &mut outcome, &mut taken) }, TolStatus::Ok);
    assert_eq!((outcome, taken), (TolOutcome::Solved, 1));
    assert_eq!(unsafe { tol_run_episode(set, 99, ptr::null(), &mut outcome, &mut taken) }, TolStatus::InvalidArgument);
    assert!(last_error().unwrap().contains("out of range"));

    let mut bad = params;
    bad.alpha = 0.0;
    let status = unsafe { tol_score_problem_set(set, &bad, 1, 0.05, 0, add.as_mut_ptr(), succ.as_mut_ptr(), n) };
    assert_eq!(status, TolStatus::InvalidArgument);
    assert!(last_error().unwrap().contains("alpha"));
    unsafe { tol_problem_set_free(set) };
}

#[test]
fn baselines_and_buffers() {
    let set = generated(1);
    let n = unsafe { tol_problem_set_len(set) };
    let mut out = vec![0.0; n];
    let kind = TolBaselineKind::OptimalMoves as i32;
    assert_eq!(unsafe { tol_baseline_scores(set, kind, out.as_mut_ptr(), n) }, TolStatus::Ok);
    assert_eq!(out, (1..=8).map(f64::from).collect::<Vec<_>>());
    assert_eq!(unsafe { tol_baseline_scores(set, kind, out.as_mut_ptr(), n - 1) }, TolStatus::BufferTooSmall);
    assert_eq!(unsafe { tol_baseline_scores(set, 17, out.as_mut_ptr(), n) }, TolStatus::InvalidArgument);
    assert_eq!(unsafe { tol_baseline_scores(ptr::null(), kind, out.as_mut_ptr(), n) }, TolStatus::NullPointer);
    unsafe { tol_problem_set_free(set) };
}

#[test]
fn kendall() {
    let (u, v) = ([1.0, 2.0, 2.0, 3.0], [1.0, 2.0, 3.0, 4.0]);
    let mut tau = 0.0;
    assert_eq!(unsafe { tol_kendall_tau_b(u.as_ptr(), v.as_ptr(), 4, &mut tau) }, TolStatus::Ok);
    assert!((tau - 5.0 / 30f64.sqrt()).abs() < 1e-12);
    assert!(last_error().is_none());
    let c = [1.0, 1.0, 1.0, 1.0];
    assert_eq!(unsafe { tol_kendall_tau_b(c.as_ptr(), v.as_ptr(), 4, &mut tau) }, TolStatus::Degenerate);
    assert!(last_error().is_some());
}

#[test]
fn load_errors() {
    let mut set = ptr::null_mut();
    let missing = CString::new("/nonexistent/problems.jsonl").unwrap();
    assert_eq!(unsafe { tol_problem_set_load(missing.as_ptr(), &mut set) }, TolStatus::Io);
    assert!(set.is_null());
    let dir = std::env::temp_dir().join(format!("aicon-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.jsonl");
    std::fs::write(&path, "{not json}\n").unwrap();
    let cpath = CString::new(path.to_str().unwrap()).unwrap();
    assert_eq!(unsafe { tol_problem_set_load(cpath.as_ptr(), &mut set) }, TolStatus::Parse);
    assert!(last_error().unwrap().contains("line 1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

/// The generated header must compile as C; skipped when no C compiler is present.
#[test]
fn header_compiles_as_c() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let dir = std::env::temp_dir().join(format!("aicon-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"aicon_tol.h\"\n\
         int probe(void) {\n\
           TolProblemSet *set = 0;\n\
           TolSolverParams p = tol_solver_params_default();\n\
           if (tol_problem_set_generate(1, 3, &set) != TOL_STATUS_OK) return 1;\n\
           double out[24];\n\
           tol_baseline_scores(set, TOL_BASELINE_KIND_BFS_BIDIRECTIONAL, out, 24);\n\
           tol_problem_set_free(set);\n\
           return (int)p.max_depth;\n\
         }\n",
    )
    .unwrap();
    let result = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-c", "-I", include])
        .arg(&src)
        .arg("-o")
        .arg(dir.join("use_header.o"))
        .output();
    match result {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(e) => eprintln!("skipping C compile check: {e}"),
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
