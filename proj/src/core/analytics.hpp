#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "core/booster.hpp"
#include "core/trace.hpp"

namespace optiboost {

/// Every derived quantity of interest at iteration t: margin geometry,
/// coefficient shares, entropy, the bounds on the expected margin, and the
/// detected support-vector sets.
struct AnalyticsReport {
  size_t t = 0;
  double coeff_sum = 0.0;                  // A_t
  std::vector<double> margins;             // mar_{t,i}
  std::vector<double> normalized_margins;  // mar_{t,i} / A_t
  std::vector<double> beta_norm_plus;      // beta+_{t,i} / A_t
  std::vector<double> lambda;              // dense over all m rows, sums to 1
  std::vector<long> selection_counts;      // how often each row won the argmax
  double ratio = 0.0;                      // -sum log(1-r^2) / sum log((1+r)/(1-r))
  double expected_margin = 0.0;            // E_{w_{t+1}}[mar_t]
  double expected_normalized_margin = 0.0;
  double entropy = 0.0;                    // H(w_{t+1})
  double lower_bound = 0.0;                // -log n - sum 0.5 log(1-r_k^2)
  double upper_bound = 0.0;                //         - sum 0.5 log(1-r_k^2)
  double theta = 0.0;                      // min_i normalized margin
  std::vector<size_t> support_vectors_margin;  // margin criterion, sorted
  std::vector<size_t> support_vectors_weight;  // weight-floor criterion, sorted
};

/// Shannon entropy in nats of a probability vector.  Entries must be
/// nonnegative and sum to 1 within 1e-9.
double entropy(std::span<const double> weights);

/// The running quotient whose limit is the asymptotic support-vector
/// margin: (-sum log(1 - r_k^2)) / (sum log((1+r_k)/(1-r_k))).
double ratio_from_records(const std::vector<IterationRecord>& records);

/// Indices whose normalized margin stays within delta of the minimum at
/// every one of the trailing `window` checkpoints.
std::vector<size_t> detect_support_vectors(
    const std::vector<std::vector<double>>& margin_history, size_t window,
    double delta);

/// Indices whose weight stays above weight_floor at every one of the
/// trailing `window` checkpoints.  weight_history holds linear weights.
std::vector<size_t> detect_support_vectors_by_weight(
    const std::vector<std::vector<double>>& weight_history, size_t window,
    double weight_floor);

/// Full report at the current state.  Support-vector sets are filled only
/// when the history reaches sv_window checkpoints; a zero sv_weight_floor
/// means the 1e-6 / n default.
AnalyticsReport analyze(const BoostState& state, const Trace& trace,
                        const std::vector<Checkpoint>& history,
                        size_t sv_window = 100, double sv_delta = 1e-3,
                        double sv_weight_floor = 0.0);

/// Distance between two checkpointed series entries together with the
/// telescoping bound they must obey.
struct GapEntry {
  size_t t_from = 0;
  size_t t_to = 0;
  size_t index = 0;  // example i for margins, row j for lambda
  double gap = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct GapReport {
  size_t lag = 0;
  std::vector<GapEntry> margin_gaps;
  std::vector<GapEntry> lambda_gaps;
  bool all_pass = true;
  double worst_violation = 0.0;  // max over entries of gap - bound
};

/// For every pair of checkpoints exactly `lag` iterations apart, the gap
/// of each normalized margin and each lambda share against the bound
/// 2 (A_{t+l} - A_t) / A_{t+l}, with 1e-12 slack on pass/fail.
GapReport convergence_gaps(const std::vector<Checkpoint>& history, size_t lag);

/// |expected normalized margin - running ratio|; always at most
/// (log n) / A_t.
double expected_margin_gap(const AnalyticsReport& report);

/// Writes per_example.csv, per_iteration.csv and per_dichotomy.csv under
/// out_dir, creating it if needed.  records and stats must be parallel.
void write_report_csvs(const AnalyticsReport& report,
                       const std::vector<IterationRecord>& records,
                       const std::vector<IterationStats>& stats,
                       const std::string& out_dir);

}  // namespace optiboost
