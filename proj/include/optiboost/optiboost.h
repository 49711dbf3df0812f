/* C interface to the optiboost library.
 *
 * Every object is an opaque handle created and destroyed by these
 * functions.  Calls that can fail return an ob_status; OB_OK means
 * success, anything else names the contract that broke and leaves a
 * human-readable message in ob_last_error() (thread local).  Handles are
 * immutable after creation and safe to share across threads reading them.
 */

#ifndef OPTIBOOST_H
#define OPTIBOOST_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  OB_OK = 0,
  OB_ERR_IO = 1,
  OB_ERR_PARSE = 2,
  OB_ERR_LABEL = 3,
  OB_ERR_EMPTY_DATASET = 4,
  OB_ERR_SHAPE = 5,
  OB_ERR_ENTRY = 6,
  OB_ERR_DEGENERATE_POOL = 7,
  OB_ERR_DOMAIN = 8,
  OB_ERR_PRECONDITION = 9,
  OB_ERR_NUMERICAL_DRIFT = 10,
  OB_ERR_NOT_STARTED = 11,
  OB_ERR_INSUFFICIENT_HISTORY = 12,
  OB_ERR_DIGEST_MISMATCH = 13,
  OB_ERR_TRUNCATED_TRACE = 14,
  OB_ERR_REPLAY_MISMATCH = 15,
  OB_ERR_WEAK_LEARNING_VIOLATION = 16,
  OB_ERR_PERFECT_HYPOTHESIS = 17,
  OB_ERR_INTERNAL = 18,
} ob_status;

typedef enum {
  OB_HALT_T_MAX = 0,
  OB_HALT_WEAK_LEARNING_VIOLATION = 1,
  OB_HALT_PERFECT_HYPOTHESIS = 2,
} ob_halt_reason;

typedef struct ob_dataset ob_dataset;
typedef struct ob_pool ob_pool;
typedef struct ob_run ob_run;
typedef struct ob_report ob_report;
typedef struct ob_verification ob_verification;

/* Zeroed fields select defaults: t_max 10000, the built-in checkpoint
 * cadence, sv_window 100, sv_delta 1e-3, sv_weight_floor 1e-6 / n. */
typedef struct {
  size_t t_max;
  int emit_weights;
  size_t checkpoint_every;
  size_t sv_window;
  double sv_delta;
  double sv_weight_floor;
} ob_run_config;

/* Message describing the most recent failure on this thread. */
const char* ob_last_error(void);
const char* ob_status_name(ob_status status);

/* ---- datasets ---- */

/* label_column may be NULL or empty to take the last column. */
ob_status ob_dataset_load(const char* path, const char* label_column,
                          ob_dataset** out);
/* features is row-major n x d; labels holds +1 / -1. */
ob_status ob_dataset_create(const double* features, const int* labels, size_t n,
                            size_t d, ob_dataset** out);
size_t ob_dataset_n(const ob_dataset* data);
size_t ob_dataset_d(const ob_dataset* data);
double ob_dataset_feature(const ob_dataset* data, size_t i, size_t c);
int ob_dataset_label(const ob_dataset* data, size_t i);
ob_status ob_dataset_write_csv(const ob_dataset* data, const char* path);
void ob_dataset_free(ob_dataset* data);

/* ---- hypothesis pools ---- */

ob_status ob_pool_enumerate_stumps(const ob_dataset* data, ob_pool** out);
ob_status ob_pool_load_matrix(const char* path, const ob_dataset* data,
                              ob_pool** out);
/* raw_rows is row-major m x n with entries +1 / -1. */
ob_status ob_pool_create(const int8_t* raw_rows, size_t m, const ob_dataset* data,
                         ob_pool** out);
size_t ob_pool_m(const ob_pool* pool);
int ob_pool_raw_entry(const ob_pool* pool, size_t j, size_t i);
int ob_pool_mistake_entry(const ob_pool* pool, size_t j, size_t i);
const char* ob_pool_hypothesis_id(const ob_pool* pool, size_t j);
void ob_pool_free(ob_pool* pool);

/* Writes the 16-hex-digit content digest of (data, pool) into buffer,
 * which must hold at least 17 bytes. */
ob_status ob_content_digest(const ob_dataset* data, const ob_pool* pool,
                            char* buffer, size_t size);

/* ---- boosting runs ---- */

/* config may be NULL for all defaults.  Halting on a weak-learning
 * violation or a perfect hypothesis is a recorded outcome, not an error. */
ob_status ob_boost_run(const ob_dataset* data, const ob_pool* pool,
                       const ob_run_config* config, ob_run** out);
/* Replays a serialized trace against its inputs (digest checked) and
 * returns the reconstructed run. */
ob_status ob_replay_trace(const char* trace_path, const ob_dataset* data,
                          const ob_pool* pool, ob_run** out);
size_t ob_run_iterations(const ob_run* run);
ob_halt_reason ob_run_halt_reason(const ob_run* run);
ob_status ob_run_record(const ob_run* run, size_t t, size_t* j, double* edge,
                        double* alpha, double* log_partition);
ob_status ob_run_weight(const ob_run* run, size_t i, double* weight);
ob_status ob_run_margin(const ob_run* run, size_t i, double* margin);
double ob_run_coeff_sum(const ob_run* run);
ob_status ob_run_write_trace(const ob_run* run, const char* path);
void ob_run_free(ob_run* run);

/* ---- analytics ---- */

/* Zero / nonpositive parameters select the defaults quoted above. */
ob_status ob_run_analyze(const ob_run* run, size_t sv_window, double sv_delta,
                         double sv_weight_floor, ob_report** out);
size_t ob_report_t(const ob_report* report);
double ob_report_coeff_sum(const ob_report* report);
double ob_report_theta(const ob_report* report);
double ob_report_ratio(const ob_report* report);
double ob_report_expected_margin(const ob_report* report);
double ob_report_expected_normalized_margin(const ob_report* report);
double ob_report_entropy(const ob_report* report);
double ob_report_lower_bound(const ob_report* report);
double ob_report_upper_bound(const ob_report* report);
ob_status ob_report_normalized_margin(const ob_report* report, size_t i,
                                      double* out);
ob_status ob_report_lambda(const ob_report* report, size_t j, double* out);
size_t ob_report_support_vector_count(const ob_report* report);
size_t ob_report_support_vector(const ob_report* report, size_t k);
size_t ob_report_weight_support_vector_count(const ob_report* report);
size_t ob_report_weight_support_vector(const ob_report* report, size_t k);
/* Emits per_example.csv, per_iteration.csv, per_dichotomy.csv under dir. */
ob_status ob_run_write_report_csvs(const ob_run* run, const ob_report* report,
                                   const char* dir);
void ob_report_free(ob_report* report);

/* ---- verification ---- */

/* lags may be NULL with lag_count 0 for the default {1, 10, 100}. */
ob_status ob_verify_trace(const char* trace_path, const ob_dataset* data,
                          const ob_pool* pool, const size_t* lags,
                          size_t lag_count, ob_verification** out);
int ob_verification_all_passed(const ob_verification* verification);
size_t ob_verification_check_count(const ob_verification* verification);
const char* ob_verification_check_name(const ob_verification* verification,
                                       size_t k);
/* "pass", "fail" or "skipped". */
const char* ob_verification_check_status(const ob_verification* verification,
                                         size_t k);
double ob_verification_check_violation(const ob_verification* verification,
                                       size_t k);
ob_status ob_verification_write_json(const ob_verification* verification,
                                     const char* path);
void ob_verification_free(ob_verification* verification);

/* Finite-time convergence certificate on a completed run.
 * outcome: 1 pass, 0 fail, 2 skipped (run halted before t_max). */
ob_status ob_run_certify(const ob_run* run, double tol, size_t window,
                         double sv_delta, int* outcome, double* worst_violation);

#ifdef __cplusplus
}
#endif

#endif /* OPTIBOOST_H */
