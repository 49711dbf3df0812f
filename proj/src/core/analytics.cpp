#include "core/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace optiboost {

namespace {

double theta_of(const std::vector<double>& normalized_margins) {
  double theta = std::numeric_limits<double>::infinity();
  for (double v : normalized_margins) {
    theta = std::min(theta, v);
  }
  return theta;
}

std::vector<size_t> surviving_indices(const std::vector<char>& keep) {
  std::vector<size_t> out;
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace

double entropy(std::span<const double> weights) {
  CompensatedSum total;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) {
      fail(ErrorCode::domain,
           "weight " + std::to_string(i) + " is negative: " + format_g17(weights[i]));
    }
    total.add(weights[i]);
  }
  if (std::abs(total.value() - 1.0) > 1e-9) {
    fail(ErrorCode::domain,
         "weights sum to " + format_g17(total.value()) + ", not 1");
  }
  CompensatedSum h;
  for (double w : weights) {
    if (w > 0.0) {
      h.add(-w * std::log(w));
    }
  }
  return h.value();
}

double ratio_from_records(const std::vector<IterationRecord>& records) {
  if (records.empty()) {
    fail(ErrorCode::not_started, "no completed iterations");
  }
  CompensatedSum numerator;    // -sum log(1 - r_k^2)
  CompensatedSum denominator;  // sum log((1+r_k)/(1-r_k))
  for (const IterationRecord& rec : records) {
    numerator.add(-2.0 * rec.log_partition);
    denominator.add(2.0 * rec.alpha);
  }
  return numerator.value() / denominator.value();
}

std::vector<size_t> detect_support_vectors(
    const std::vector<std::vector<double>>& margin_history, size_t window,
    double delta) {
  if (window == 0 || margin_history.size() < window) {
    fail(ErrorCode::insufficient_history,
         "need " + std::to_string(window) + " checkpoints, have " +
             std::to_string(margin_history.size()));
  }
  const size_t n = margin_history.back().size();
  std::vector<char> keep(n, 1);
  for (size_t k = margin_history.size() - window; k < margin_history.size(); ++k) {
    const std::vector<double>& nm = margin_history[k];
    double theta = theta_of(nm);
    for (size_t i = 0; i < n; ++i) {
      if (nm[i] > theta + delta) {
        keep[i] = 0;
      }
    }
  }
  return surviving_indices(keep);
}

std::vector<size_t> detect_support_vectors_by_weight(
    const std::vector<std::vector<double>>& weight_history, size_t window,
    double weight_floor) {
  if (window == 0 || weight_history.size() < window) {
    fail(ErrorCode::insufficient_history,
         "need " + std::to_string(window) + " checkpoints, have " +
             std::to_string(weight_history.size()));
  }
  const size_t n = weight_history.back().size();
  std::vector<char> keep(n, 1);
  for (size_t k = weight_history.size() - window; k < weight_history.size(); ++k) {
    const std::vector<double>& w = weight_history[k];
    for (size_t i = 0; i < n; ++i) {
      if (!(w[i] > weight_floor)) {
        keep[i] = 0;
      }
    }
  }
  return surviving_indices(keep);
}

AnalyticsReport analyze(const BoostState& state, const Trace& trace,
                        const std::vector<Checkpoint>& history, size_t sv_window,
                        double sv_delta, double sv_weight_floor) {
  if (state.t == 0) {
    fail(ErrorCode::not_started, "no completed iterations to analyze");
  }
  const size_t n = state.log_weights.size();
  AnalyticsReport report;
  report.t = state.t;
  report.coeff_sum = state.coeff_total();

  report.margins.resize(n);
  report.normalized_margins.resize(n);
  report.beta_norm_plus.resize(n);
  for (size_t i = 0; i < n; ++i) {
    report.margins[i] = state.margins[i].value();
    report.normalized_margins[i] = report.margins[i] / report.coeff_sum;
    report.beta_norm_plus[i] = state.beta_plus[i].value() / report.coeff_sum;
  }
  report.theta = theta_of(report.normalized_margins);

  report.lambda.assign(trace.m, 0.0);
  report.selection_counts.assign(trace.m, 0);
  for (const auto& [j, tally] : state.alpha_by_dichotomy) {
    report.lambda[j] = tally.alpha.value() / report.coeff_sum;
    report.selection_counts[j] = tally.count;
  }

  report.ratio = ratio_from_records(trace.records);
  CompensatedSum partition_sum;
  for (const IterationRecord& rec : trace.records) {
    partition_sum.add(rec.log_partition);
  }
  report.upper_bound = -partition_sum.value();
  report.lower_bound = -std::log(static_cast<double>(n)) - partition_sum.value();

  CompensatedSum expected;
  for (size_t i = 0; i < n; ++i) {
    expected.add(std::exp(state.log_weights[i]) * report.margins[i]);
  }
  report.expected_margin = expected.value();
  report.expected_normalized_margin = report.expected_margin / report.coeff_sum;
  report.entropy = entropy_from_log_weights(state.log_weights);

  if (sv_window > 0 && history.size() >= sv_window) {
    std::vector<std::vector<double>> margin_history;
    std::vector<std::vector<double>> weight_history;
    margin_history.reserve(sv_window);
    weight_history.reserve(sv_window);
    for (size_t k = history.size() - sv_window; k < history.size(); ++k) {
      margin_history.push_back(history[k].normalized_margins);
      std::vector<double> w(n);
      for (size_t i = 0; i < n; ++i) {
        w[i] = std::exp(history[k].log_weights[i]);
      }
      weight_history.push_back(std::move(w));
    }
    double floor = sv_weight_floor > 0.0
                       ? sv_weight_floor
                       : 1e-6 / static_cast<double>(n);
    report.support_vectors_margin =
        detect_support_vectors(margin_history, sv_window, sv_delta);
    report.support_vectors_weight =
        detect_support_vectors_by_weight(weight_history, sv_window, floor);
  }
  return report;
}

GapReport convergence_gaps(const std::vector<Checkpoint>& history, size_t lag) {
  GapReport report;
  report.lag = lag;
  bool found_pair = false;
  for (size_t a = 0; a < history.size(); ++a) {
    size_t want = history[a].t + lag;
    size_t b = a;
    while (b < history.size() && history[b].t < want) {
      ++b;
    }
    if (b >= history.size() || history[b].t != want) {
      continue;
    }
    found_pair = true;
    const Checkpoint& from = history[a];
    const Checkpoint& to = history[b];
    double bound = 2.0 * (to.coeff_sum - from.coeff_sum) / to.coeff_sum;
    for (size_t i = 0; i < from.normalized_margins.size(); ++i) {
      GapEntry entry;
      entry.t_from = from.t;
      entry.t_to = to.t;
      entry.index = i;
      entry.gap = std::abs(to.normalized_margins[i] - from.normalized_margins[i]);
      entry.bound = bound;
      entry.pass = entry.gap <= bound + 1e-12;
      report.worst_violation = std::max(report.worst_violation, entry.gap - bound);
      report.all_pass = report.all_pass && entry.pass;
      report.margin_gaps.push_back(entry);
    }
    for (size_t j = 0; j < from.lambda.size(); ++j) {
      GapEntry entry;
      entry.t_from = from.t;
      entry.t_to = to.t;
      entry.index = j;
      entry.gap = std::abs(to.lambda[j] - from.lambda[j]);
      entry.bound = bound;
      entry.pass = entry.gap <= bound + 1e-12;
      report.worst_violation = std::max(report.worst_violation, entry.gap - bound);
      report.all_pass = report.all_pass && entry.pass;
      report.lambda_gaps.push_back(entry);
    }
  }
  if (!found_pair) {
    fail(ErrorCode::insufficient_history,
         "no checkpoint pair is exactly " + std::to_string(lag) +
             " iterations apart");
  }
  return report;
}

double expected_margin_gap(const AnalyticsReport& report) {
  return std::abs(report.expected_normalized_margin - report.ratio);
}

void write_report_csvs(const AnalyticsReport& report,
                       const std::vector<IterationRecord>& records,
                       const std::vector<IterationStats>& stats,
                       const std::string& out_dir) {
  if (records.size() != stats.size()) {
    fail(ErrorCode::internal, "records and stats differ in length");
  }
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  {
    std::ofstream file(dir / "per_example.csv");
    if (!file) {
      fail(ErrorCode::io, "cannot write per_example.csv under " + out_dir);
    }
    file << "i,margin,normalized_margin,beta_plus_norm,"
            "is_support_vector_margin_criterion,is_support_vector_weight_criterion\n";
    const auto& sv_m = report.support_vectors_margin;
    const auto& sv_w = report.support_vectors_weight;
    for (size_t i = 0; i < report.margins.size(); ++i) {
      bool in_m = std::binary_search(sv_m.begin(), sv_m.end(), i);
      bool in_w = std::binary_search(sv_w.begin(), sv_w.end(), i);
      file << i << ',' << format_g17(report.margins[i]) << ','
           << format_g17(report.normalized_margins[i]) << ','
           << format_g17(report.beta_norm_plus[i]) << ',' << (in_m ? 1 : 0) << ','
           << (in_w ? 1 : 0) << '\n';
    }
  }
  {
    std::ofstream file(dir / "per_iteration.csv");
    if (!file) {
      fail(ErrorCode::io, "cannot write per_iteration.csv under " + out_dir);
    }
    file << "t,edge,alpha,logZ,A,ratio,expected_margin,entropy,"
            "lower_bound,upper_bound,theta\n";
    for (size_t k = 0; k < records.size(); ++k) {
      const IterationRecord& rec = records[k];
      const IterationStats& st = stats[k];
      file << rec.t << ',' << format_g17(rec.edge) << ',' << format_g17(rec.alpha)
           << ',' << format_g17(rec.log_partition) << ','
           << format_g17(st.coeff_sum) << ',' << format_g17(st.ratio) << ','
           << format_g17(st.expected_margin) << ',' << format_g17(st.entropy)
           << ',' << format_g17(st.lower_bound) << ','
           << format_g17(st.upper_bound) << ',' << format_g17(st.theta) << '\n';
    }
  }
  {
    std::ofstream file(dir / "per_dichotomy.csv");
    if (!file) {
      fail(ErrorCode::io, "cannot write per_dichotomy.csv under " + out_dir);
    }
    file << "j,lambda,selection_count\n";
    for (size_t j = 0; j < report.lambda.size(); ++j) {
      file << j << ',' << format_g17(report.lambda[j]) << ','
           << report.selection_counts[j] << '\n';
    }
  }
}

}  // namespace optiboost
