#include "optiboost/optiboost.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "core/analytics.hpp"
#include "core/booster.hpp"
#include "core/dataset.hpp"
#include "core/digest.hpp"
#include "core/errors.hpp"
#include "core/hypothesis_pool.hpp"
#include "core/trace.hpp"
#include "core/verifier.hpp"

struct ob_dataset {
  optiboost::Dataset impl;
};

struct ob_pool {
  optiboost::DichotomyPool impl;
};

struct ob_run {
  optiboost::RunResult impl;
};

struct ob_report {
  optiboost::AnalyticsReport impl;
};

struct ob_verification {
  optiboost::VerificationReport impl;
};

namespace {

thread_local std::string g_last_error;

ob_status status_from_code(optiboost::ErrorCode code) {
  using optiboost::ErrorCode;
  switch (code) {
    case ErrorCode::io: return OB_ERR_IO;
    case ErrorCode::parse: return OB_ERR_PARSE;
    case ErrorCode::label: return OB_ERR_LABEL;
    case ErrorCode::empty_dataset: return OB_ERR_EMPTY_DATASET;
    case ErrorCode::shape: return OB_ERR_SHAPE;
    case ErrorCode::entry: return OB_ERR_ENTRY;
    case ErrorCode::degenerate_pool: return OB_ERR_DEGENERATE_POOL;
    case ErrorCode::domain: return OB_ERR_DOMAIN;
    case ErrorCode::precondition: return OB_ERR_PRECONDITION;
    case ErrorCode::numerical_drift: return OB_ERR_NUMERICAL_DRIFT;
    case ErrorCode::not_started: return OB_ERR_NOT_STARTED;
    case ErrorCode::insufficient_history: return OB_ERR_INSUFFICIENT_HISTORY;
    case ErrorCode::digest_mismatch: return OB_ERR_DIGEST_MISMATCH;
    case ErrorCode::truncated_trace: return OB_ERR_TRUNCATED_TRACE;
    case ErrorCode::replay_mismatch: return OB_ERR_REPLAY_MISMATCH;
    case ErrorCode::weak_learning_violation: return OB_ERR_WEAK_LEARNING_VIOLATION;
    case ErrorCode::perfect_hypothesis: return OB_ERR_PERFECT_HYPOTHESIS;
    case ErrorCode::internal: return OB_ERR_INTERNAL;
  }
  return OB_ERR_INTERNAL;
}

template <typename Body>
ob_status guarded(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return OB_OK;
  } catch (const optiboost::Error& e) {
    g_last_error = std::string(optiboost::error_code_name(e.code())) + ": " + e.what();
    return status_from_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = std::string("InternalError: ") + e.what();
    return OB_ERR_INTERNAL;
  }
}

ob_status require(bool condition, const char* message) {
  if (condition) {
    return OB_OK;
  }
  g_last_error = std::string("PreconditionError: ") + message;
  return OB_ERR_PRECONDITION;
}

optiboost::RunConfig normalize_config(const ob_run_config* config) {
  optiboost::RunConfig out;
  if (config == nullptr) {
    return out;
  }
  out.t_max = config->t_max > 0 ? config->t_max : out.t_max;
  out.emit_weights = config->emit_weights != 0;
  out.checkpoint_every = config->checkpoint_every;
  out.sv_window = config->sv_window > 0 ? config->sv_window : out.sv_window;
  out.sv_delta = config->sv_delta > 0.0 ? config->sv_delta : out.sv_delta;
  out.sv_weight_floor =
      config->sv_weight_floor > 0.0 ? config->sv_weight_floor : out.sv_weight_floor;
  return out;
}

double relative_diff(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

extern "C" {

const char* ob_last_error(void) { return g_last_error.c_str(); }

const char* ob_status_name(ob_status status) {
  switch (status) {
    case OB_OK: return "OK";
    case OB_ERR_IO: return "IoError";
    case OB_ERR_PARSE: return "ParseError";
    case OB_ERR_LABEL: return "LabelError";
    case OB_ERR_EMPTY_DATASET: return "EmptyDataset";
    case OB_ERR_SHAPE: return "ShapeError";
    case OB_ERR_ENTRY: return "EntryError";
    case OB_ERR_DEGENERATE_POOL: return "DegeneratePool";
    case OB_ERR_DOMAIN: return "DomainError";
    case OB_ERR_PRECONDITION: return "PreconditionError";
    case OB_ERR_NUMERICAL_DRIFT: return "NumericalDrift";
    case OB_ERR_NOT_STARTED: return "NotStarted";
    case OB_ERR_INSUFFICIENT_HISTORY: return "InsufficientHistory";
    case OB_ERR_DIGEST_MISMATCH: return "DigestMismatch";
    case OB_ERR_TRUNCATED_TRACE: return "TruncatedTrace";
    case OB_ERR_REPLAY_MISMATCH: return "ReplayMismatch";
    case OB_ERR_WEAK_LEARNING_VIOLATION: return "WeakLearningViolation";
    case OB_ERR_PERFECT_HYPOTHESIS: return "PerfectHypothesis";
    case OB_ERR_INTERNAL: return "InternalError";
  }
  return "UnknownError";
}

ob_status ob_dataset_load(const char* path, const char* label_column,
                          ob_dataset** out) {
  if (ob_status s = require(path != nullptr && out != nullptr,
                            "ob_dataset_load: path and out are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    auto handle = new ob_dataset{optiboost::load_dataset(
        path, label_column == nullptr ? "" : label_column)};
    *out = handle;
  });
}

ob_status ob_dataset_create(const double* features, const int* labels, size_t n,
                            size_t d, ob_dataset** out) {
  if (ob_status s = require(features != nullptr && labels != nullptr && out != nullptr,
                            "ob_dataset_create: features, labels and out are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    std::vector<std::vector<double>> rows(n);
    for (size_t i = 0; i < n; ++i) {
      rows[i].assign(features + i * d, features + (i + 1) * d);
    }
    std::vector<int> labels_vec(labels, labels + n);
    *out = new ob_dataset{
        optiboost::make_dataset(std::move(rows), std::move(labels_vec))};
  });
}

size_t ob_dataset_n(const ob_dataset* data) { return data->impl.n; }

size_t ob_dataset_d(const ob_dataset* data) { return data->impl.d; }

double ob_dataset_feature(const ob_dataset* data, size_t i, size_t c) {
  return data->impl.features[i][c];
}

int ob_dataset_label(const ob_dataset* data, size_t i) {
  return data->impl.labels[i];
}

ob_status ob_dataset_write_csv(const ob_dataset* data, const char* path) {
  if (ob_status s = require(data != nullptr && path != nullptr,
                            "ob_dataset_write_csv: data and path are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] { optiboost::write_dataset_csv(data->impl, path); });
}

void ob_dataset_free(ob_dataset* data) { delete data; }

ob_status ob_pool_enumerate_stumps(const ob_dataset* data, ob_pool** out) {
  if (ob_status s = require(data != nullptr && out != nullptr,
                            "ob_pool_enumerate_stumps: data and out are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    *out = new ob_pool{optiboost::enumerate_stumps(data->impl)};
  });
}

ob_status ob_pool_load_matrix(const char* path, const ob_dataset* data,
                              ob_pool** out) {
  if (ob_status s = require(path != nullptr && data != nullptr && out != nullptr,
                            "ob_pool_load_matrix: path, data and out are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    *out = new ob_pool{optiboost::load_dichotomy_matrix(path, data->impl)};
  });
}

ob_status ob_pool_create(const int8_t* raw_rows, size_t m, const ob_dataset* data,
                         ob_pool** out) {
  if (ob_status s = require(raw_rows != nullptr && data != nullptr && out != nullptr,
                            "ob_pool_create: raw_rows, data and out are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    const size_t n = data->impl.n;
    std::vector<std::vector<int8_t>> rows(m);
    std::vector<std::string> ids(m);
    for (size_t j = 0; j < m; ++j) {
      rows[j].assign(raw_rows + j * n, raw_rows + (j + 1) * n);
      ids[j] = "row " + std::to_string(j);
    }
    *out = new ob_pool{optiboost::make_pool(rows, std::move(ids), data->impl)};
  });
}

size_t ob_pool_m(const ob_pool* pool) { return pool->impl.m; }

int ob_pool_raw_entry(const ob_pool* pool, size_t j, size_t i) {
  return pool->impl.raw[j][i];
}

int ob_pool_mistake_entry(const ob_pool* pool, size_t j, size_t i) {
  return pool->impl.mistake[j][i];
}

const char* ob_pool_hypothesis_id(const ob_pool* pool, size_t j) {
  return pool->impl.hypothesis_ids[j].c_str();
}

void ob_pool_free(ob_pool* pool) { delete pool; }

ob_status ob_content_digest(const ob_dataset* data, const ob_pool* pool,
                            char* buffer, size_t size) {
  if (ob_status s = require(data != nullptr && pool != nullptr && buffer != nullptr,
                            "ob_content_digest: data, pool and buffer are required");
      s != OB_OK) {
    return s;
  }
  if (ob_status s = require(size >= 17, "ob_content_digest: buffer under 17 bytes");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    std::string digest = optiboost::run_digest(data->impl, pool->impl);
    std::memcpy(buffer, digest.c_str(), digest.size() + 1);
  });
}

ob_status ob_boost_run(const ob_dataset* data, const ob_pool* pool,
                       const ob_run_config* config, ob_run** out) {
  if (ob_status s = require(data != nullptr && pool != nullptr && out != nullptr,
                            "ob_boost_run: data, pool and out are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    *out = new ob_run{
        optiboost::run_boosting(data->impl, pool->impl, normalize_config(config))};
  });
}

ob_status ob_replay_trace(const char* trace_path, const ob_dataset* data,
                          const ob_pool* pool, ob_run** out) {
  if (ob_status s = require(trace_path != nullptr && data != nullptr &&
                                pool != nullptr && out != nullptr,
                            "ob_replay_trace: all arguments are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    optiboost::Trace trace = optiboost::read_trace(trace_path);
    std::string digest = optiboost::run_digest(data->impl, pool->impl);
    if (trace.dataset_digest != digest || trace.n != data->impl.n ||
        trace.m != pool->impl.m) {
      optiboost::fail(optiboost::ErrorCode::digest_mismatch,
                      std::string(trace_path) + ": trace digest " +
                          trace.dataset_digest + " does not match inputs with digest " +
                          digest);
    }
    optiboost::RunResult replay =
        optiboost::run_boosting(data->impl, pool->impl, trace.config);
    if (replay.trace.records.size() != trace.records.size() ||
        replay.trace.halt != trace.halt) {
      optiboost::fail(optiboost::ErrorCode::replay_mismatch,
                      std::string(trace_path) + ": replay produced " +
                          std::to_string(replay.trace.records.size()) +
                          " iterations, trace holds " +
                          std::to_string(trace.records.size()));
    }
    for (size_t k = 0; k < trace.records.size(); ++k) {
      const optiboost::IterationRecord& a = trace.records[k];
      const optiboost::IterationRecord& b = replay.trace.records[k];
      if (a.selected != b.selected || relative_diff(a.edge, b.edge) > 1e-9 ||
          relative_diff(a.alpha, b.alpha) > 1e-9 ||
          relative_diff(a.log_partition, b.log_partition) > 1e-9) {
        optiboost::fail(optiboost::ErrorCode::replay_mismatch,
                        std::string(trace_path) + ": record " + std::to_string(k) +
                            " does not match its replay");
      }
    }
    *out = new ob_run{std::move(replay)};
  });
}

size_t ob_run_iterations(const ob_run* run) {
  return run->impl.trace.records.size();
}

ob_halt_reason ob_run_halt_reason(const ob_run* run) {
  switch (run->impl.trace.halt) {
    case optiboost::HaltReason::t_max_reached: return OB_HALT_T_MAX;
    case optiboost::HaltReason::weak_learning_violation:
      return OB_HALT_WEAK_LEARNING_VIOLATION;
    case optiboost::HaltReason::perfect_hypothesis:
      return OB_HALT_PERFECT_HYPOTHESIS;
  }
  return OB_HALT_T_MAX;
}

ob_status ob_run_record(const ob_run* run, size_t t, size_t* j, double* edge,
                        double* alpha, double* log_partition) {
  if (ob_status s = require(run != nullptr, "ob_run_record: run is required");
      s != OB_OK) {
    return s;
  }
  if (ob_status s = require(t < run->impl.trace.records.size(),
                            "ob_run_record: iteration out of range");
      s != OB_OK) {
    return s;
  }
  const optiboost::IterationRecord& rec = run->impl.trace.records[t];
  if (j != nullptr) *j = rec.selected;
  if (edge != nullptr) *edge = rec.edge;
  if (alpha != nullptr) *alpha = rec.alpha;
  if (log_partition != nullptr) *log_partition = rec.log_partition;
  return OB_OK;
}

ob_status ob_run_weight(const ob_run* run, size_t i, double* weight) {
  if (ob_status s = require(run != nullptr && weight != nullptr,
                            "ob_run_weight: run and weight are required");
      s != OB_OK) {
    return s;
  }
  if (ob_status s = require(i < run->impl.state.log_weights.size(),
                            "ob_run_weight: example out of range");
      s != OB_OK) {
    return s;
  }
  *weight = std::exp(run->impl.state.log_weights[i]);
  return OB_OK;
}

ob_status ob_run_margin(const ob_run* run, size_t i, double* margin) {
  if (ob_status s = require(run != nullptr && margin != nullptr,
                            "ob_run_margin: run and margin are required");
      s != OB_OK) {
    return s;
  }
  if (ob_status s = require(i < run->impl.state.margins.size(),
                            "ob_run_margin: example out of range");
      s != OB_OK) {
    return s;
  }
  *margin = run->impl.state.margins[i].value();
  return OB_OK;
}

double ob_run_coeff_sum(const ob_run* run) { return run->impl.state.coeff_total(); }

ob_status ob_run_write_trace(const ob_run* run, const char* path) {
  if (ob_status s = require(run != nullptr && path != nullptr,
                            "ob_run_write_trace: run and path are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] { optiboost::write_trace(run->impl.trace, path); });
}

void ob_run_free(ob_run* run) { delete run; }

ob_status ob_run_analyze(const ob_run* run, size_t sv_window, double sv_delta,
                         double sv_weight_floor, ob_report** out) {
  if (ob_status s = require(run != nullptr && out != nullptr,
                            "ob_run_analyze: run and out are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    *out = new ob_report{optiboost::analyze(
        run->impl.state, run->impl.trace, run->impl.history,
        sv_window > 0 ? sv_window : 100, sv_delta > 0.0 ? sv_delta : 1e-3,
        sv_weight_floor > 0.0 ? sv_weight_floor : 0.0)};
  });
}

size_t ob_report_t(const ob_report* report) { return report->impl.t; }

double ob_report_coeff_sum(const ob_report* report) { return report->impl.coeff_sum; }

double ob_report_theta(const ob_report* report) { return report->impl.theta; }

double ob_report_ratio(const ob_report* report) { return report->impl.ratio; }

double ob_report_expected_margin(const ob_report* report) {
  return report->impl.expected_margin;
}

double ob_report_expected_normalized_margin(const ob_report* report) {
  return report->impl.expected_normalized_margin;
}

double ob_report_entropy(const ob_report* report) { return report->impl.entropy; }

double ob_report_lower_bound(const ob_report* report) {
  return report->impl.lower_bound;
}

double ob_report_upper_bound(const ob_report* report) {
  return report->impl.upper_bound;
}

ob_status ob_report_normalized_margin(const ob_report* report, size_t i,
                                      double* out) {
  if (ob_status s = require(report != nullptr && out != nullptr,
                            "ob_report_normalized_margin: report and out are required");
      s != OB_OK) {
    return s;
  }
  if (ob_status s = require(i < report->impl.normalized_margins.size(),
                            "ob_report_normalized_margin: example out of range");
      s != OB_OK) {
    return s;
  }
  *out = report->impl.normalized_margins[i];
  return OB_OK;
}

ob_status ob_report_lambda(const ob_report* report, size_t j, double* out) {
  if (ob_status s = require(report != nullptr && out != nullptr,
                            "ob_report_lambda: report and out are required");
      s != OB_OK) {
    return s;
  }
  if (ob_status s = require(j < report->impl.lambda.size(),
                            "ob_report_lambda: row out of range");
      s != OB_OK) {
    return s;
  }
  *out = report->impl.lambda[j];
  return OB_OK;
}

size_t ob_report_support_vector_count(const ob_report* report) {
  return report->impl.support_vectors_margin.size();
}

size_t ob_report_support_vector(const ob_report* report, size_t k) {
  return report->impl.support_vectors_margin[k];
}

size_t ob_report_weight_support_vector_count(const ob_report* report) {
  return report->impl.support_vectors_weight.size();
}

size_t ob_report_weight_support_vector(const ob_report* report, size_t k) {
  return report->impl.support_vectors_weight[k];
}

ob_status ob_run_write_report_csvs(const ob_run* run, const ob_report* report,
                                   const char* dir) {
  if (ob_status s = require(run != nullptr && report != nullptr && dir != nullptr,
                            "ob_run_write_report_csvs: all arguments are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    optiboost::write_report_csvs(report->impl, run->impl.trace.records,
                                 run->impl.stats, dir);
  });
}

void ob_report_free(ob_report* report) { delete report; }

ob_status ob_verify_trace(const char* trace_path, const ob_dataset* data,
                          const ob_pool* pool, const size_t* lags,
                          size_t lag_count, ob_verification** out) {
  if (ob_status s = require(trace_path != nullptr && data != nullptr &&
                                pool != nullptr && out != nullptr,
                            "ob_verify_trace: trace_path, data, pool and out are required");
      s != OB_OK) {
    return s;
  }
  if (ob_status s = require(lags != nullptr || lag_count == 0,
                            "ob_verify_trace: lags may only be NULL when empty");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    std::vector<size_t> lag_vec;
    if (lag_count == 0) {
      lag_vec = {1, 10, 100};
    } else {
      lag_vec.assign(lags, lags + lag_count);
    }
    *out = new ob_verification{
        optiboost::verify_trace(trace_path, data->impl, pool->impl, lag_vec)};
  });
}

int ob_verification_all_passed(const ob_verification* verification) {
  return verification->impl.all_passed() ? 1 : 0;
}

size_t ob_verification_check_count(const ob_verification* verification) {
  return verification->impl.checks.size();
}

const char* ob_verification_check_name(const ob_verification* verification,
                                       size_t k) {
  return verification->impl.checks[k].check_name.c_str();
}

const char* ob_verification_check_status(const ob_verification* verification,
                                         size_t k) {
  return optiboost::check_status_name(verification->impl.checks[k].status);
}

double ob_verification_check_violation(const ob_verification* verification,
                                       size_t k) {
  return verification->impl.checks[k].worst_violation;
}

ob_status ob_verification_write_json(const ob_verification* verification,
                                     const char* path) {
  if (ob_status s = require(verification != nullptr && path != nullptr,
                            "ob_verification_write_json: verification and path are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    std::string text = optiboost::verification_to_json(verification->impl);
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      optiboost::fail(optiboost::ErrorCode::io, std::string("cannot write ") + path);
    }
    file << text << "\n";
    if (!file) {
      optiboost::fail(optiboost::ErrorCode::io, std::string("write failed for ") + path);
    }
  });
}

void ob_verification_free(ob_verification* verification) { delete verification; }

ob_status ob_run_certify(const ob_run* run, double tol, size_t window,
                         double sv_delta, int* outcome, double* worst_violation) {
  if (ob_status s = require(run != nullptr && outcome != nullptr,
                            "ob_run_certify: run and outcome are required");
      s != OB_OK) {
    return s;
  }
  return guarded([&] {
    optiboost::CheckResult result = optiboost::certify_convergence(
        run->impl.trace, run->impl.history, tol > 0.0 ? tol : 1e-3,
        window > 0 ? window : 100, sv_delta > 0.0 ? sv_delta : 1e-3);
    switch (result.status) {
      case optiboost::CheckStatus::pass: *outcome = 1; break;
      case optiboost::CheckStatus::fail: *outcome = 0; break;
      case optiboost::CheckStatus::skipped: *outcome = 2; break;
    }
    if (worst_violation != nullptr) {
      *worst_violation = result.worst_violation;
    }
  });
}

}  // extern "C"
