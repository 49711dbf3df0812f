#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace optiboost {

/// Run configuration snapshot.  Zero means "derive the default" for
/// checkpoint_every (built-in cadence) and sv_weight_floor (1e-6 / n).
/// Only the fields that influence trace content (t_max, emit_weights,
/// checkpoint_every) persist in trace headers; the sv_* fields steer
/// analysis and never affect a run.
struct RunConfig {
  size_t t_max = 10000;
  bool emit_weights = false;
  size_t checkpoint_every = 0;
  size_t sv_window = 100;
  double sv_delta = 1e-3;
  double sv_weight_floor = 0.0;
};

enum class HaltReason {
  t_max_reached,
  weak_learning_violation,
  perfect_hypothesis,
};

const char* halt_reason_name(HaltReason reason);

/// One completed boosting iteration: chosen row, its edge, and the closed
/// form coefficient and log partition.
struct IterationRecord {
  size_t t = 0;
  size_t selected = 0;
  double edge = 0.0;
  double alpha = 0.0;
  double log_partition = 0.0;
};

/// Append-only account of a full run, sufficient to replay it exactly.
struct Trace {
  size_t n = 0;
  size_t m = 0;
  std::string dataset_digest;
  RunConfig config;
  std::vector<IterationRecord> records;
  std::vector<std::vector<double>> weights;  // post-update w_{t+1}; only when config.emit_weights
  HaltReason halt = HaltReason::t_max_reached;
};

/// Renders the trace as JSON lines: a header object, one object per
/// iteration, and a closing halt object.  Reals carry 17 significant
/// digits; key order is fixed, so equal traces serialize byte-identically.
std::string trace_to_jsonl(const Trace& trace);

void write_trace(const Trace& trace, const std::string& path);

/// Parses and validates a trace file.  Structural damage of any kind
/// (bad JSON, missing fields, non-consecutive iterations, absent halt
/// line) is reported as TruncatedTrace.
Trace read_trace(const std::string& path);

}  // namespace optiboost
