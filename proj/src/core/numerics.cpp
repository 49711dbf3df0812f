#include "core/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "core/errors.hpp"

namespace optiboost {

void CompensatedSum::add(double value) {
  double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    fail(ErrorCode::domain, "log_sum_exp of an empty sequence");
  }
  double max_value = *std::max_element(values.begin(), values.end());
  if (std::isinf(max_value) && max_value < 0) {
    return max_value;
  }
  CompensatedSum total;
  for (double v : values) {
    total.add(std::exp(v - max_value));
  }
  return max_value + std::log(total.value());
}

double alpha_from_edge(double edge) {
  if (!(std::abs(edge) < 1.0)) {
    fail(ErrorCode::domain, "edge " + format_g17(edge) + " lies outside (-1, 1)");
  }
  return 0.5 * std::log((1.0 + edge) / (1.0 - edge));
}

double log_partition_from_edge(double edge) {
  if (!(std::abs(edge) < 1.0)) {
    fail(ErrorCode::domain, "edge " + format_g17(edge) + " lies outside (-1, 1)");
  }
  return 0.5 * std::log1p(-edge * edge);
}

double entropy_from_log_weights(std::span<const double> log_weights) {
  CompensatedSum h;
  for (double lw : log_weights) {
    double w = std::exp(lw);
    if (w > 0.0) {
      h.add(-w * lw);
    }
  }
  return h.value();
}

std::string format_g17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace optiboost
