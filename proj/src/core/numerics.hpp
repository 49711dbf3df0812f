#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace optiboost {

/// Neumaier compensated accumulator.  Long running sums of per-iteration
/// quantities must hold absolute error near machine epsilon even after
/// tens of thousands of additions; a bare double does not.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  void add(double value);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// log(sum_i exp(values[i])), max-shifted, accumulated in ascending index
/// order so results are bit-reproducible across runs.
double log_sum_exp(std::span<const double> values);

/// Coefficient for a dichotomy with edge r: 0.5 * log((1 + r) / (1 - r)).
/// Requires |r| < 1.
double alpha_from_edge(double edge);

/// Closed form of the log partition drop per step: 0.5 * log(1 - r^2),
/// written as 0.5 * log1p(-r^2) to keep precision near r = 0.
double log_partition_from_edge(double edge);

/// Shannon entropy in nats of the distribution exp(log_weights), which the
/// caller guarantees is normalized.  Uses the 0 * log 0 = 0 convention.
double entropy_from_log_weights(std::span<const double> log_weights);

/// Shortest-fixed formatting used everywhere a double crosses a process
/// boundary: 17 significant digits round-trip any IEEE-754 binary64 exactly.
std::string format_g17(double value);

}  // namespace optiboost
