#include "core/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "core/digest.hpp"
#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace optiboost {

namespace {

/// Accumulates the worst violation for one named check.  Never observing
/// anything leaves the check skipped.
class Check {
 public:
  Check(std::string name, double tolerance)
      : name_(std::move(name)), tolerance_(tolerance) {}

  void observe(double violation, long long t, long long index) {
    if (!observed_ || violation > worst_) {
      worst_ = violation;
      t_ = t;
      index_ = index;
    }
    observed_ = true;
  }

  CheckResult result() const {
    CheckResult r;
    r.check_name = name_;
    if (!observed_) {
      r.status = CheckStatus::skipped;
      return r;
    }
    r.status = worst_ > tolerance_ ? CheckStatus::fail : CheckStatus::pass;
    r.worst_violation = worst_;
    r.location_t = t_;
    r.location_index = index_;
    return r;
  }

 private:
  std::string name_;
  double tolerance_;
  bool observed_ = false;
  double worst_ = 0.0;
  long long t_ = -1;
  long long index_ = -1;
};

double relative_diff(double recorded, double replayed) {
  double scale = std::max(std::abs(recorded), std::abs(replayed));
  if (scale == 0.0) {
    return 0.0;
  }
  return std::abs(recorded - replayed) / scale;
}

struct Snapshot {
  bool valid = false;
  size_t t = 0;
  double coeff_sum = 0.0;
  std::vector<double> normalized_margins;
  std::vector<double> lambda;
};

}  // namespace

const char* check_status_name(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "unknown";
}

bool VerificationReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return c.status == CheckStatus::fail;
  });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const CheckResult& c : checks) {
    if (c.check_name == name) {
      return &c;
    }
  }
  return nullptr;
}

VerificationReport verify_trace(const std::string& trace_path, const Dataset& data,
                                const DichotomyPool& pool,
                                const std::vector<size_t>& lags) {
  Trace trace = read_trace(trace_path);
  std::string digest = run_digest(data, pool);
  if (trace.dataset_digest != digest || trace.n != data.n || trace.m != pool.m) {
    fail(ErrorCode::digest_mismatch,
         trace_path + ": trace digest " + trace.dataset_digest + " over " +
             std::to_string(trace.n) + "x" + std::to_string(trace.m) +
             " does not match inputs with digest " + digest);
  }

  const size_t n = data.n;
  const size_t m = pool.m;
  const double log_n = std::log(static_cast<double>(n));

  std::vector<size_t> use_lags(lags);
  std::sort(use_lags.begin(), use_lags.end());
  use_lags.erase(std::unique(use_lags.begin(), use_lags.end()), use_lags.end());

  Check values("recorded_values_match", 1e-9);
  Check weights_match("recorded_weights_match", 1e-9);
  Check eq1("weight_information_identity", 1e-9);
  Check partition("partition_closed_form", 1e-9);
  Check coefficient_forms("record_coefficient_forms", 1e-12);
  Check bounds("expected_margin_bounds", 1e-12);
  Check entropy_id("entropy_identity", 1e-9);
  Check envelope("expected_normalized_margin_envelope", 1e-12);
  Check simplex("lambda_simplex", 1e-12);
  Check beta("beta_identities", 1e-12);
  Check halt("halt_reason_match", 0.5);
  std::vector<Check> margin_cauchy;
  std::vector<Check> lambda_cauchy;
  for (size_t lag : use_lags) {
    margin_cauchy.emplace_back("margin_cauchy_bound_lag" + std::to_string(lag), 1e-12);
    lambda_cauchy.emplace_back("lambda_cauchy_bound_lag" + std::to_string(lag), 1e-12);
  }

  // Ring of trailing per-iteration snapshots, large enough for the widest
  // lag that can ever pair (bounded by the record count).
  size_t max_lag = 0;
  for (size_t lag : use_lags) {
    if (lag <= trace.records.size()) {
      max_lag = std::max(max_lag, lag);
    }
  }
  const size_t ring_size = max_lag + 1;
  std::vector<Snapshot> ring(ring_size);

  BoostState state = init_state(n);
  std::vector<CompensatedSum> beta_minus(n);
  CompensatedSum recorded_partition_sum;
  std::vector<double> nm_scratch(n);
  std::vector<double> lambda_scratch(m);

  bool replay_halted_early = false;
  for (size_t k = 0; k < trace.records.size(); ++k) {
    const IterationRecord& rec = trace.records[k];
    const long long t = static_cast<long long>(k);

    EdgeChoice choice;
    try {
      choice = select_edge(state, pool);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::weak_learning_violation ||
          e.code() == ErrorCode::perfect_hypothesis) {
        // The trace claims an iteration the dynamics cannot reach.
        halt.observe(1.0, t, -1);
        replay_halted_early = true;
        break;
      }
      throw;
    }
    Coefficients co = edge_to_coefficients(choice.edge);

    double mismatch = 0.0;
    if (rec.selected != choice.selected) {
      mismatch = std::abs(static_cast<double>(rec.selected) -
                          static_cast<double>(choice.selected));
    }
    mismatch = std::max({mismatch, relative_diff(rec.edge, choice.edge),
                         relative_diff(rec.alpha, co.alpha),
                         relative_diff(rec.log_partition, co.log_partition)});
    values.observe(mismatch, t, -1);

    if (std::abs(rec.edge) < 1.0) {
      coefficient_forms.observe(std::abs(rec.alpha - alpha_from_edge(rec.edge)), t, -1);
      coefficient_forms.observe(
          std::abs(rec.log_partition - log_partition_from_edge(rec.edge)), t, -1);
    } else {
      coefficient_forms.observe(1e300, t, -1);
    }

    double exact = apply_update(state, pool, choice.selected, choice.edge, co.alpha,
                                co.log_partition);
    partition.observe(std::abs(exact - co.log_partition), t, -1);
    recorded_partition_sum.add(rec.log_partition);

    const std::vector<int8_t>& eta = pool.mistake[choice.selected];
    for (size_t i = 0; i < n; ++i) {
      if (eta[i] < 0) {
        beta_minus[i].add(co.alpha);
      }
    }

    const double coeff_total = state.coeff_total();
    const double partition_total = recorded_partition_sum.value();
    for (size_t i = 0; i < n; ++i) {
      nm_scratch[i] = state.margins[i].value() / coeff_total;
    }

    for (size_t i = 0; i < n; ++i) {
      double margin_value = state.margins[i].value();
      eq1.observe(
          std::abs(-state.log_weights[i] - (log_n + margin_value + partition_total)),
          t, static_cast<long long>(i));
      double bp = state.beta_plus[i].value() / coeff_total;
      double bm = beta_minus[i].value() / coeff_total;
      beta.observe(std::abs(bp + bm - 1.0), t, static_cast<long long>(i));
      beta.observe(std::abs((bp - bm) - nm_scratch[i]), t, static_cast<long long>(i));
    }

    if (trace.config.emit_weights) {
      const std::vector<double>& recorded = trace.weights[k];
      for (size_t i = 0; i < n; ++i) {
        weights_match.observe(
            relative_diff(recorded[i], std::exp(state.log_weights[i])), t,
            static_cast<long long>(i));
      }
    }

    CompensatedSum expected;
    for (size_t i = 0; i < n; ++i) {
      expected.add(std::exp(state.log_weights[i]) * state.margins[i].value());
    }
    const double expected_margin = expected.value();
    const double upper = -partition_total;
    const double lower = -log_n - partition_total;
    bounds.observe(std::max(lower - expected_margin, expected_margin - upper), t, -1);
    const double h = entropy_from_log_weights(state.log_weights);
    entropy_id.observe(std::abs(h - (log_n + expected_margin + partition_total)), t, -1);
    const double ratio_t = -partition_total / coeff_total;
    const double gap = ratio_t - expected_margin / coeff_total;
    envelope.observe(std::max(-gap, gap - log_n / coeff_total), t, -1);

    std::fill(lambda_scratch.begin(), lambda_scratch.end(), 0.0);
    CompensatedSum coeff_mass;
    for (const auto& [j, tally] : state.alpha_by_dichotomy) {
      lambda_scratch[j] = tally.alpha.value() / coeff_total;
      coeff_mass.add(tally.alpha.value());
    }
    simplex.observe(std::abs(coeff_mass.value() / coeff_total - 1.0), t, -1);

    for (size_t lag_index = 0; lag_index < use_lags.size(); ++lag_index) {
      size_t lag = use_lags[lag_index];
      if (lag == 0) {
        margin_cauchy[lag_index].observe(0.0, t, -1);
        lambda_cauchy[lag_index].observe(0.0, t, -1);
        continue;
      }
      if (k < lag) {
        continue;
      }
      const Snapshot& old = ring[(k - lag) % ring_size];
      if (!old.valid || old.t != k - lag) {
        continue;
      }
      double bound = 2.0 * (coeff_total - old.coeff_sum) / coeff_total;
      for (size_t i = 0; i < n; ++i) {
        margin_cauchy[lag_index].observe(
            std::abs(nm_scratch[i] - old.normalized_margins[i]) - bound, t,
            static_cast<long long>(i));
      }
      for (size_t j = 0; j < m; ++j) {
        lambda_cauchy[lag_index].observe(
            std::abs(lambda_scratch[j] - old.lambda[j]) - bound, t,
            static_cast<long long>(j));
      }
    }

    Snapshot& slot = ring[k % ring_size];
    slot.valid = true;
    slot.t = k;
    slot.coeff_sum = coeff_total;
    slot.normalized_margins = nm_scratch;
    slot.lambda = lambda_scratch;
  }

  if (!replay_halted_early) {
    const size_t completed = trace.records.size();
    if (trace.halt == HaltReason::t_max_reached) {
      halt.observe(completed == trace.config.t_max ? 0.0 : 1.0,
                   static_cast<long long>(completed), -1);
    } else if (completed >= trace.config.t_max) {
      halt.observe(1.0, static_cast<long long>(completed), -1);
    } else {
      try {
        select_edge(state, pool);
        // The dynamics continue where the trace claims they halted.
        halt.observe(1.0, static_cast<long long>(completed), -1);
      } catch (const Error& e) {
        bool matches =
            (e.code() == ErrorCode::weak_learning_violation &&
             trace.halt == HaltReason::weak_learning_violation) ||
            (e.code() == ErrorCode::perfect_hypothesis &&
             trace.halt == HaltReason::perfect_hypothesis);
        if (e.code() != ErrorCode::weak_learning_violation &&
            e.code() != ErrorCode::perfect_hypothesis) {
          throw;
        }
        halt.observe(matches ? 0.0 : 1.0, static_cast<long long>(completed), -1);
      }
    }
  }

  VerificationReport report;
  report.checks.push_back(values.result());
  report.checks.push_back(weights_match.result());
  report.checks.push_back(eq1.result());
  report.checks.push_back(partition.result());
  report.checks.push_back(coefficient_forms.result());
  report.checks.push_back(bounds.result());
  report.checks.push_back(entropy_id.result());
  report.checks.push_back(envelope.result());
  report.checks.push_back(simplex.result());
  report.checks.push_back(beta.result());
  for (size_t lag_index = 0; lag_index < use_lags.size(); ++lag_index) {
    report.checks.push_back(margin_cauchy[lag_index].result());
    report.checks.push_back(lambda_cauchy[lag_index].result());
  }
  report.checks.push_back(halt.result());
  return report;
}

CheckResult certify_convergence(const Trace& trace,
                                const std::vector<Checkpoint>& history,
                                double tol, size_t window, double sv_delta) {
  CheckResult result;
  result.check_name = "convergence_certificate";
  if (trace.halt != HaltReason::t_max_reached) {
    result.status = CheckStatus::skipped;
    return result;
  }
  if (window == 0 || history.size() < window) {
    fail(ErrorCode::insufficient_history,
         "need " + std::to_string(window) + " checkpoints, have " +
             std::to_string(history.size()));
  }

  const Checkpoint& last = history.back();
  const size_t n = last.normalized_margins.size();
  const size_t first = history.size() - window;

  double worst_gap = 0.0;
  long long worst_t = -1;
  long long worst_i = -1;
  bool stable = true;
  std::set<size_t> final_candidates;
  bool have_reference = false;
  std::set<size_t> reference;

  for (size_t k = first; k < history.size(); ++k) {
    const Checkpoint& cp = history[k];
    double theta = *std::min_element(cp.normalized_margins.begin(),
                                     cp.normalized_margins.end());
    std::set<size_t> candidates;
    for (size_t i = 0; i < n; ++i) {
      if (cp.normalized_margins[i] <= theta + sv_delta) {
        candidates.insert(i);
      }
      double gap = std::abs(last.normalized_margins[i] - cp.normalized_margins[i]);
      if (gap > worst_gap) {
        worst_gap = gap;
        worst_t = static_cast<long long>(cp.t);
        worst_i = static_cast<long long>(i);
      }
    }
    if (!have_reference) {
      reference = candidates;
      have_reference = true;
    } else if (candidates != reference) {
      stable = false;
    }
    if (k + 1 == history.size()) {
      final_candidates = candidates;
    }
  }

  bool pass = worst_gap <= tol && stable && final_candidates.size() >= 2;
  result.status = pass ? CheckStatus::pass : CheckStatus::fail;
  result.worst_violation = pass || worst_gap > tol ? worst_gap : 1.0 + tol;
  result.location_t = worst_t;
  result.location_index = worst_i;
  return result;
}

std::string verification_to_json(const VerificationReport& report) {
  std::string out = "{";
  for (size_t k = 0; k < report.checks.size(); ++k) {
    const CheckResult& c = report.checks[k];
    if (k > 0) {
      out += ',';
    }
    out += "\"" + c.check_name + "\":{\"status\":\"";
    out += check_status_name(c.status);
    out += "\",\"worst_violation\":" + format_g17(c.worst_violation);
    out += ",\"location\":{\"t\":" + std::to_string(c.location_t);
    out += ",\"index\":" + std::to_string(c.location_index) + "}}";
  }
  out += "}";
  return out;
}

}  // namespace optiboost
