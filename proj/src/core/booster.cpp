#include "core/booster.hpp"

#include <cmath>
#include <limits>

#include "core/digest.hpp"
#include "core/errors.hpp"

namespace optiboost {

namespace {

Checkpoint make_checkpoint(const BoostState& state, size_t m) {
  Checkpoint cp;
  cp.t = state.t;
  cp.coeff_sum = state.coeff_total();
  cp.log_partition_sum = state.log_partition_sum.value();
  const size_t n = state.log_weights.size();
  cp.normalized_margins.resize(n);
  for (size_t i = 0; i < n; ++i) {
    cp.normalized_margins[i] = state.margins[i].value() / cp.coeff_sum;
  }
  cp.lambda.assign(m, 0.0);
  for (const auto& [j, tally] : state.alpha_by_dichotomy) {
    cp.lambda[j] = tally.alpha.value() / cp.coeff_sum;
  }
  cp.log_weights = state.log_weights;
  return cp;
}

IterationStats compute_stats(const BoostState& state, double closed_log_partition_sum) {
  const size_t n = state.log_weights.size();
  IterationStats s;
  s.coeff_sum = state.coeff_total();
  s.ratio = -closed_log_partition_sum / s.coeff_sum;
  CompensatedSum expected;
  for (size_t i = 0; i < n; ++i) {
    expected.add(std::exp(state.log_weights[i]) * state.margins[i].value());
  }
  s.expected_margin = expected.value();
  s.entropy = entropy_from_log_weights(state.log_weights);
  s.upper_bound = -closed_log_partition_sum;
  s.lower_bound = -std::log(static_cast<double>(n)) - closed_log_partition_sum;
  double theta = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    theta = std::min(theta, state.margins[i].value() / s.coeff_sum);
  }
  s.theta = theta;
  return s;
}

}  // namespace

BoostState init_state(size_t n) {
  if (n < 2) {
    fail(ErrorCode::precondition,
         "boosting needs at least 2 examples, got " + std::to_string(n));
  }
  BoostState state;
  state.log_weights.assign(n, -std::log(static_cast<double>(n)));
  state.margins.assign(n, CompensatedSum{});
  state.beta_plus.assign(n, CompensatedSum{});
  return state;
}

EdgeChoice select_edge(const BoostState& state, const DichotomyPool& pool) {
  const size_t n = state.log_weights.size();
  if (pool.n != n) {
    fail(ErrorCode::shape, "pool is over " + std::to_string(pool.n) +
                               " examples, state over " + std::to_string(n));
  }
  if (pool.m == 0) {
    fail(ErrorCode::precondition, "empty pool");
  }
  std::vector<double> weights(n);
  for (size_t i = 0; i < n; ++i) {
    weights[i] = std::exp(state.log_weights[i]);
  }
  size_t best = 0;
  double best_edge = -std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < pool.m; ++j) {
    const double* row = pool.mistake_row(j);
    double edge = 0.0;
    for (size_t i = 0; i < n; ++i) {
      edge += weights[i] * row[i];
    }
    if (edge > best_edge) {
      best_edge = edge;
      best = j;
    }
  }
  if (best_edge <= 0.0) {
    fail(ErrorCode::weak_learning_violation,
         "best edge " + format_g17(best_edge) + " at t=" + std::to_string(state.t) +
             " is not positive");
  }
  if (best_edge >= 1.0 - 1e-12) {
    fail(ErrorCode::perfect_hypothesis,
         "row " + std::to_string(best) + " has edge " + format_g17(best_edge) +
             " at t=" + std::to_string(state.t));
  }
  return {best, best_edge};
}

Coefficients edge_to_coefficients(double edge) {
  if (!(edge > 0.0 && edge < 1.0)) {
    fail(ErrorCode::domain, "edge " + format_g17(edge) + " lies outside (0, 1)");
  }
  return {alpha_from_edge(edge), log_partition_from_edge(edge)};
}

double apply_update(BoostState& state, const DichotomyPool& pool, size_t selected,
                    double edge, double alpha, double log_partition) {
  const size_t n = state.log_weights.size();
  if (pool.n != n) {
    fail(ErrorCode::shape, "pool is over " + std::to_string(pool.n) +
                               " examples, state over " + std::to_string(n));
  }
  if (selected >= pool.m) {
    fail(ErrorCode::precondition, "row " + std::to_string(selected) +
                                      " outside the pool of " + std::to_string(pool.m));
  }
  Coefficients closed = edge_to_coefficients(edge);
  if (std::abs(closed.alpha - alpha) > 1e-9 ||
      std::abs(closed.log_partition - log_partition) > 1e-9) {
    fail(ErrorCode::precondition,
         "coefficients disagree with edge " + format_g17(edge));
  }

  const std::vector<int8_t>& eta = pool.mistake[selected];
  std::vector<double> shifted(n);
  for (size_t i = 0; i < n; ++i) {
    shifted[i] = state.log_weights[i] - (eta[i] > 0 ? alpha : -alpha);
  }
  double exact = log_sum_exp(shifted);
  if (std::abs(exact - log_partition) > 1e-9) {
    fail(ErrorCode::numerical_drift,
         "log partition drifted from its closed form by " +
             format_g17(std::abs(exact - log_partition)) + " at t=" +
             std::to_string(state.t));
  }
  for (size_t i = 0; i < n; ++i) {
    state.log_weights[i] = shifted[i] - exact;
  }
  for (size_t i = 0; i < n; ++i) {
    if (eta[i] > 0) {
      state.margins[i].add(alpha);
      state.beta_plus[i].add(alpha);
    } else {
      state.margins[i].add(-alpha);
    }
  }
  state.coeff_sum.add(alpha);
  state.log_partition_sum.add(exact);
  DichotomyTally& tally = state.alpha_by_dichotomy[selected];
  tally.alpha.add(alpha);
  tally.count += 1;
  state.t += 1;
  return exact;
}

bool checkpoint_due(size_t s, size_t every) {
  if (every > 0) {
    return s % every == 0;
  }
  if (s <= 1000) {
    return true;
  }
  size_t stride = (s + 999) / 1000;
  return s % stride == 0;
}

RunResult run_boosting(const Dataset& data, const DichotomyPool& pool,
                       const RunConfig& config) {
  if (config.t_max < 1) {
    fail(ErrorCode::precondition, "t_max must be at least 1");
  }
  if (pool.n != data.n) {
    fail(ErrorCode::shape, "pool is over " + std::to_string(pool.n) +
                               " examples, dataset has " + std::to_string(data.n));
  }
  RunResult result;
  result.state = init_state(data.n);
  result.trace.n = data.n;
  result.trace.m = pool.m;
  result.trace.dataset_digest = run_digest(data, pool);
  result.trace.config = config;
  result.trace.halt = HaltReason::t_max_reached;

  CompensatedSum closed_log_partition_sum;
  for (size_t t = 0; t < config.t_max; ++t) {
    EdgeChoice choice;
    try {
      choice = select_edge(result.state, pool);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::weak_learning_violation) {
        result.trace.halt = HaltReason::weak_learning_violation;
        break;
      }
      if (e.code() == ErrorCode::perfect_hypothesis) {
        result.trace.halt = HaltReason::perfect_hypothesis;
        break;
      }
      throw;
    }
    Coefficients co = edge_to_coefficients(choice.edge);
    apply_update(result.state, pool, choice.selected, choice.edge, co.alpha,
                 co.log_partition);
    result.trace.records.push_back(
        {t, choice.selected, choice.edge, co.alpha, co.log_partition});
    if (config.emit_weights) {
      std::vector<double> w(data.n);
      for (size_t i = 0; i < data.n; ++i) {
        w[i] = std::exp(result.state.log_weights[i]);
      }
      result.trace.weights.push_back(std::move(w));
    }
    closed_log_partition_sum.add(co.log_partition);
    result.stats.push_back(
        compute_stats(result.state, closed_log_partition_sum.value()));
    if (checkpoint_due(t + 1, config.checkpoint_every)) {
      result.history.push_back(make_checkpoint(result.state, pool.m));
    }
  }

  if (result.state.t >= 1 &&
      (result.history.empty() || result.history.back().t != result.state.t)) {
    result.history.push_back(make_checkpoint(result.state, pool.m));
  }
  return result;
}

}  // namespace optiboost
