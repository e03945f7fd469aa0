#ifndef AICON_TOL_H
#define AICON_TOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum TolBaselineKind {
  TOL_BASELINE_KIND_OPTIMAL_MOVES = 0,
  TOL_BASELINE_KIND_BFS_FROM_START = 1,
  TOL_BASELINE_KIND_BFS_FROM_GOAL = 2,
  TOL_BASELINE_KIND_BFS_BIDIRECTIONAL = 3,
} TolBaselineKind;

typedef enum TolOutcome {
  TOL_OUTCOME_SOLVED = 0,
  TOL_OUTCOME_STALLED = 1,
  TOL_OUTCOME_STEP_CAP = 2,
} TolOutcome;

typedef enum TolStatus {
  TOL_STATUS_OK = 0,
  TOL_STATUS_NULL_POINTER = 1,
  TOL_STATUS_INVALID_ARGUMENT = 2,
  TOL_STATUS_PARSE = 3,
  TOL_STATUS_VALIDATION = 4,
  TOL_STATUS_IO = 5,
  TOL_STATUS_DEGENERATE = 6,
  TOL_STATUS_BUFFER_TOO_SMALL = 7,
  TOL_STATUS_PANIC = 8,
} TolStatus;

/**
 * Opaque problem set.
 */
typedef struct TolProblemSet TolProblemSet;

/**
 * Solver parameters; start from `tol_solver_params_default`.
 */
typedef struct TolSolverParams {
  double alpha;
  double beta;
  uint32_t max_depth;
  double theta_legal;
  double theta_correct;
  double empty_row_activation;
  double probe_scale;
  uint32_t step_cap_factor;
  uint32_t step_cap_offset;
} TolSolverParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct TolSolverParams tol_solver_params_default(void);

/**
 * Generates `per_bin` problems for each optimal move count 1..=8.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum TolStatus tol_problem_set_generate(uint64_t seed,
                                        uint32_t per_bin,
                                        struct TolProblemSet **out);

/**
 * Loads a JSON-lines problem set.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid handle slot.
 */
enum TolStatus tol_problem_set_load(const char *path, struct TolProblemSet **out);

/**
 * Number of problems, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t tol_problem_set_len(const struct TolProblemSet *set);

/**
 * # Safety
 * `set` must be a live handle and `out` must hold `len` values.
 */
enum TolStatus tol_problem_set_optimal_moves(const struct TolProblemSet *set,
                                             uint32_t *out,
                                             size_t len);

/**
 * # Safety
 * `set` must be null or a handle not yet freed.
 */
void tol_problem_set_free(struct TolProblemSet *set);

/**
 * Scores every problem. `params` may be null for defaults. Both output
 * arrays must hold at least as many values as the set has problems.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum TolStatus tol_score_problem_set(const struct TolProblemSet *set,
                                     const struct TolSolverParams *params,
                                     uint32_t runs,
                                     double noise,
                                     uint64_t seed,
                                     double *additional_moves,
                                     double *success_rate,
                                     size_t len);

/**
 * Runs one unperturbed episode on problem `index`.
 *
 * # Safety
 * Pointers must be valid; `params` may be null for defaults.
 */
enum TolStatus tol_run_episode(const struct TolProblemSet *set,
                               size_t index,
                               const struct TolSolverParams *params,
                               enum TolOutcome *outcome,
                               uint32_t *moves_taken);

/**
 * `kind` is a `TolBaselineKind` value.
 *
 * # Safety
 * `set` must be a live handle and `out` must hold `len` values.
 */
enum TolStatus tol_baseline_scores(const struct TolProblemSet *set,
                                   int32_t kind,
                                   double *out,
                                   size_t len);

/**
 * Kendall's tau-b of two length-`len` arrays.
 *
 * # Safety
 * `u` and `v` must hold `len` values; `out` must be valid.
 */
enum TolStatus tol_kendall_tau_b(const double *u, const double *v, size_t len, double *out);

/**
 * Copy of the calling thread's last error message, or null if the last call
 * succeeded. Release it with `tol_string_free`.
 */
char *tol_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void tol_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AICON_TOL_H */
