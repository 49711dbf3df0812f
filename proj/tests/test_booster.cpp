#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "core/booster.hpp"
#include "core/errors.hpp"

#include "testutil.hpp"

using namespace optiboost;

namespace {

ErrorCode code_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

double weight(const BoostState& state, size_t i) {
  return std::exp(state.log_weights[i]);
}

}  // namespace

TEST_CASE("first two iterations on the interval pool match hand computation") {
  Dataset data = testutil::interval3();
  DichotomyPool pool = testutil::interval3_pool(data);
  BoostState state = init_state(3);

  EdgeChoice c0 = select_edge(state, pool);
  CHECK(c0.selected == 0);  // rows 0 and 1 tie at 1/3; smallest index wins
  CHECK(c0.edge == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  Coefficients k0 = edge_to_coefficients(c0.edge);
  CHECK(std::abs(k0.alpha - 0.5 * std::log(2.0)) <= 1e-12);
  CHECK(std::abs(k0.log_partition - 0.5 * std::log(8.0 / 9.0)) <= 1e-12);
  apply_update(state, pool, c0.selected, c0.edge, k0.alpha, k0.log_partition);
  CHECK(std::abs(weight(state, 0) - 0.25) <= 1e-12);
  CHECK(std::abs(weight(state, 1) - 0.25) <= 1e-12);
  CHECK(std::abs(weight(state, 2) - 0.50) <= 1e-12);

  EdgeChoice c1 = select_edge(state, pool);
  CHECK(c1.selected == 1);
  CHECK(std::abs(c1.edge - 0.5) <= 1e-12);
  Coefficients k1 = edge_to_coefficients(c1.edge);
  CHECK(std::abs(k1.alpha - 0.5 * std::log(3.0)) <= 1e-12);
  apply_update(state, pool, c1.selected, c1.edge, k1.alpha, k1.log_partition);
  CHECK(std::abs(weight(state, 0) - 1.0 / 6.0) <= 1e-12);
  CHECK(std::abs(weight(state, 1) - 1.0 / 2.0) <= 1e-12);
  CHECK(std::abs(weight(state, 2) - 1.0 / 3.0) <= 1e-12);

  CHECK(std::abs(state.margin(0) - 0.5 * std::log(6.0)) <= 1e-12);
  CHECK(std::abs(state.margin(1) - 0.5 * std::log(2.0 / 3.0)) <= 1e-12);
  CHECK(std::abs(state.margin(2) - 0.5 * std::log(1.5)) <= 1e-12);
  CHECK(std::abs(state.coeff_total() - 0.5 * std::log(6.0)) <= 1e-12);
}

TEST_CASE("interval pool keeps the edge sequence 1/(t+1) after warmup") {
  Dataset data = testutil::interval3();
  DichotomyPool pool = testutil::interval3_pool(data);
  RunResult run = run_boosting(data, pool, RunConfig{.t_max = 50});
  REQUIRE(run.trace.records.size() == 50);
  CHECK(run.trace.halt == HaltReason::t_max_reached);
  CHECK(run.trace.records[0].edge == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(run.trace.records[1].edge == doctest::Approx(0.5).epsilon(1e-15));
  for (size_t t = 2; t < 50; ++t) {
    CHECK(std::abs(run.trace.records[t].edge - 1.0 / static_cast<double>(t + 1)) <=
          1e-12);
    CHECK(run.trace.records[t].selected == (t % 2 == 0 ? 0 : 1));
  }
}

TEST_CASE("library agrees with an independent linear-domain reference") {
  std::mt19937_64 rng(20260816);
  for (int trial = 0; trial < 20; ++trial) {
    size_t n = 3 + rng() % 10;
    size_t m = 2 + rng() % 20;
    Dataset data = testutil::random_dataset(rng, n, 1 + rng() % 4);
    DichotomyPool pool =
        make_pool(testutil::random_raw_rows(rng, data, m),
                  std::vector<std::string>(m, "r"), data);
    RunResult run = run_boosting(data, pool, RunConfig{.t_max = 30});
    std::vector<size_t> chosen;
    for (const IterationRecord& rec : run.trace.records) {
      chosen.push_back(rec.selected);
    }
    testutil::NaiveRun naive = testutil::naive_boost(data, pool, 30, &chosen);

    // Every library choice attains the reference's maximum edge up to
    // rounding; exact tie-breaking is pinned by the deterministic cases.
    CHECK(static_cast<double>(naive.max_follow_gap) <= 1e-12);
    REQUIRE(run.trace.records.size() == naive.steps.size());
    for (size_t t = 0; t < naive.steps.size(); ++t) {
      const IterationRecord& rec = run.trace.records[t];
      const testutil::NaiveStep& ref = naive.steps[t];
      CHECK(rec.selected == ref.selected);
      CHECK(std::abs(rec.edge - static_cast<double>(ref.edge)) <= 1e-12);
      CHECK(std::abs(rec.alpha - static_cast<double>(ref.alpha)) <= 1e-12);
      CHECK(std::abs(rec.log_partition - static_cast<double>(ref.log_partition)) <=
            1e-11);
    }
    if (!naive.steps.empty()) {
      for (size_t i = 0; i < n; ++i) {
        CHECK(std::abs(std::exp(run.state.log_weights[i]) -
                       static_cast<double>(naive.weights.back()[i])) <= 1e-11);
        CHECK(std::abs(run.state.margin(i) - static_cast<double>(naive.margins[i])) <=
              1e-11);
      }
    }
    CHECK(run.trace.halt == (naive.halted_weak
                                 ? HaltReason::weak_learning_violation
                                 : naive.halted_perfect
                                       ? HaltReason::perfect_hypothesis
                                       : HaltReason::t_max_reached));
  }
}

TEST_CASE("weights stay normalized and the argmax is exact at every step") {
  std::mt19937_64 rng(7);
  Dataset data = testutil::random_dataset(rng, 12, 3);
  DichotomyPool pool = enumerate_stumps(data);
  BoostState state = init_state(data.n);
  for (int t = 0; t < 200; ++t) {
    EdgeChoice choice;
    try {
      choice = select_edge(state, pool);
    } catch (const Error&) {
      break;
    }
    // Recompute the argmax independently; ties must keep the smallest index.
    double best = -2.0;
    size_t best_j = 0;
    for (size_t j = 0; j < pool.m; ++j) {
      double edge = 0.0;
      for (size_t i = 0; i < data.n; ++i) {
        edge += std::exp(state.log_weights[i]) * pool.mistake_row(j)[i];
      }
      if (edge > best) {
        best = edge;
        best_j = j;
      }
    }
    CHECK(choice.selected == best_j);
    CHECK(std::abs(choice.edge - best) <= 1e-12);
    CHECK(choice.edge > 0.0);
    CHECK(choice.edge < 1.0);

    Coefficients k = edge_to_coefficients(choice.edge);
    CHECK(k.alpha > 0.0);
    apply_update(state, pool, choice.selected, choice.edge, k.alpha, k.log_partition);

    double total = 0.0;
    for (size_t i = 0; i < data.n; ++i) {
      total += std::exp(state.log_weights[i]);
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
  CHECK(state.t > 0);
}

TEST_CASE("margins always equal the coefficient-weighted mistake sums") {
  Dataset data = testutil::interval3();
  DichotomyPool pool = enumerate_stumps(data);
  RunResult run = run_boosting(data, pool, RunConfig{.t_max = 300});
  std::vector<long double> margins(data.n, 0.0L);
  long double coeff = 0.0L;
  for (const IterationRecord& rec : run.trace.records) {
    coeff += rec.alpha;
    for (size_t i = 0; i < data.n; ++i) {
      margins[i] += rec.alpha * pool.mistake[rec.selected][i];
    }
  }
  CHECK(std::abs(run.state.coeff_total() - static_cast<double>(coeff)) <= 1e-12);
  for (size_t i = 0; i < data.n; ++i) {
    CHECK(std::abs(run.state.margin(i) - static_cast<double>(margins[i])) <= 1e-12);
  }
}

TEST_CASE("beta splits partition the coefficient mass") {
  std::mt19937_64 rng(11);
  Dataset data = testutil::random_dataset(rng, 8, 2);
  DichotomyPool pool = enumerate_stumps(data);
  RunResult run = run_boosting(data, pool, RunConfig{.t_max = 400});
  REQUIRE(run.state.t > 0);
  for (size_t i = 0; i < data.n; ++i) {
    double beta_plus = run.state.beta_plus[i].value();
    double beta_minus = run.state.coeff_total() - beta_plus;
    CHECK(std::abs(beta_plus - beta_minus - run.state.margin(i)) <= 1e-9);
    CHECK(beta_plus >= 0.0);
    CHECK(beta_minus >= -1e-15);
  }
}

TEST_CASE("alpha tallies account for every selection") {
  Dataset data = testutil::interval3();
  DichotomyPool pool = testutil::interval3_pool(data);
  RunResult run = run_boosting(data, pool, RunConfig{.t_max = 101});
  long count = 0;
  double mass = 0.0;
  for (const auto& [j, tally] : run.state.alpha_by_dichotomy) {
    CHECK(j < pool.m);
    count += tally.count;
    mass += tally.alpha.value();
  }
  CHECK(count == 101);
  CHECK(std::abs(mass - run.state.coeff_total()) <= 1e-12);
  CHECK(run.state.alpha_by_dichotomy.at(0).count == 51);  // even iterations
  CHECK(run.state.alpha_by_dichotomy.at(1).count == 50);
}

TEST_CASE("degenerate pools halt with the documented reasons") {
  Dataset data = optiboost::make_dataset({{0.0}, {1.0}}, {-1, 1});
  // Perfect stump exists: halt before any record is written.
  DichotomyPool stumps = enumerate_stumps(data);
  RunResult perfect = run_boosting(data, stumps, RunConfig{.t_max = 5});
  CHECK(perfect.trace.records.empty());
  CHECK(perfect.trace.halt == HaltReason::perfect_hypothesis);
  CHECK(perfect.state.t == 0);

  // A single zero-edge row: weak learning fails immediately.
  DichotomyPool weak = make_pool({{1, 1}}, {"row 0"}, data);
  RunResult violated = run_boosting(data, weak, RunConfig{.t_max = 5});
  CHECK(violated.trace.records.empty());
  CHECK(violated.trace.halt == HaltReason::weak_learning_violation);
}

TEST_CASE("select_edge throws typed halts") {
  Dataset data = optiboost::make_dataset({{0.0}, {1.0}}, {-1, 1});
  DichotomyPool weak = make_pool({{1, 1}}, {"row 0"}, data);
  BoostState state = init_state(2);
  CHECK(code_of([&] { select_edge(state, weak); }) ==
        ErrorCode::weak_learning_violation);
  DichotomyPool perfect = make_pool({{-1, 1}}, {"row 0"}, data);
  CHECK(code_of([&] { select_edge(state, perfect); }) ==
        ErrorCode::perfect_hypothesis);
}

TEST_CASE("preconditions are enforced") {
  CHECK(code_of([] { init_state(1); }) == ErrorCode::precondition);
  CHECK(code_of([] { edge_to_coefficients(0.0); }) == ErrorCode::domain);
  CHECK(code_of([] { edge_to_coefficients(1.0); }) == ErrorCode::domain);
  CHECK(code_of([] { edge_to_coefficients(-0.5); }) == ErrorCode::domain);
  Dataset data = testutil::interval3();
  DichotomyPool pool = testutil::interval3_pool(data);
  CHECK(code_of([&] { run_boosting(data, pool, RunConfig{.t_max = 0}); }) ==
        ErrorCode::precondition);
  BoostState state = init_state(3);
  // Inconsistent alpha for the claimed edge is rejected before mutating.
  CHECK(code_of([&] { apply_update(state, pool, 0, 1.0 / 3.0, 0.9, -0.05); }) ==
        ErrorCode::precondition);
  CHECK(state.t == 0);
}

TEST_CASE("emitted weights are the post-update distribution") {
  Dataset data = testutil::interval3();
  DichotomyPool pool = testutil::interval3_pool(data);
  RunResult run =
      run_boosting(data, pool, RunConfig{.t_max = 3, .emit_weights = true});
  REQUIRE(run.trace.weights.size() == 3);
  CHECK(std::abs(run.trace.weights[0][0] - 0.25) <= 1e-12);
  CHECK(std::abs(run.trace.weights[0][2] - 0.50) <= 1e-12);
  CHECK(std::abs(run.trace.weights[1][1] - 0.50) <= 1e-12);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(run.trace.weights[2][i] ==
          doctest::Approx(std::exp(run.state.log_weights[i])).epsilon(1e-15));
  }
}

TEST_CASE("checkpoint cadence is dense early and harmonic later") {
  CHECK(checkpoint_due(1, 0));
  CHECK(checkpoint_due(1000, 0));
  CHECK_FALSE(checkpoint_due(1001, 0));  // stride 2 past 1000
  CHECK(checkpoint_due(1002, 0));
  CHECK_FALSE(checkpoint_due(2002, 0));  // stride 3 past 2000
  CHECK(checkpoint_due(2001, 0));
  CHECK(checkpoint_due(2001, 3));        // explicit stride overrides
  CHECK_FALSE(checkpoint_due(2000, 3));
  CHECK(checkpoint_due(9990, 0));        // stride 10 near 10^4
  CHECK_FALSE(checkpoint_due(9991, 0));
}

TEST_CASE("history respects the explicit checkpoint stride plus final") {
  Dataset data = testutil::interval3();
  DichotomyPool pool = testutil::interval3_pool(data);
  RunResult run =
      run_boosting(data, pool, RunConfig{.t_max = 10, .checkpoint_every = 4});
  REQUIRE(run.history.size() == 3);
  CHECK(run.history[0].t == 4);
  CHECK(run.history[1].t == 8);
  CHECK(run.history[2].t == 10);  // final state always checkpointed
  for (const Checkpoint& cp : run.history) {
    CHECK(cp.normalized_margins.size() == data.n);
    CHECK(cp.lambda.size() == pool.m);
    CHECK(cp.log_weights.size() == data.n);
    CHECK(cp.coeff_sum > 0.0);
  }
}

TEST_CASE("per-iteration stats track the documented scalar series") {
  Dataset data = testutil::interval3();
  DichotomyPool pool = testutil::interval3_pool(data);
  RunResult run = run_boosting(data, pool, RunConfig{.t_max = 2});
  REQUIRE(run.stats.size() == 2);
  const IterationStats& s1 = run.stats[1];
  double a = 0.5 * std::log(6.0);
  CHECK(std::abs(s1.coeff_sum - a) <= 1e-12);
  double log_z_sum = 0.5 * std::log(8.0 / 9.0) + 0.5 * std::log(0.75);
  CHECK(std::abs(s1.upper_bound + log_z_sum) <= 1e-12);
  CHECK(std::abs(s1.lower_bound - (-std::log(3.0) - log_z_sum)) <= 1e-12);
  CHECK(std::abs(s1.ratio - (-2.0 * log_z_sum) / (2.0 * a)) <= 1e-12);
  double expected = std::exp(-std::log(6.0)) * 0.5 * std::log(6.0) +
                    0.5 * 0.5 * std::log(2.0 / 3.0) +
                    (1.0 / 3.0) * 0.5 * std::log(1.5);
  CHECK(std::abs(s1.expected_margin - expected) <= 1e-12);
  CHECK(std::abs(s1.theta - std::log(2.0 / 3.0) / std::log(6.0)) <= 1e-12);
  CHECK(s1.lower_bound <= s1.expected_margin + 1e-12);
  CHECK(s1.expected_margin <= s1.upper_bound + 1e-12);
}
