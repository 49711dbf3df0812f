#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "core/dataset.hpp"
#include "core/hypothesis_pool.hpp"
#include "core/numerics.hpp"
#include "core/trace.hpp"

namespace optiboost {

/// Coefficient mass accumulated by one dichotomy, plus how often it won.
struct DichotomyTally {
  CompensatedSum alpha;
  long count = 0;
};

/// Mutable state of the boosting loop after t completed iterations.
/// Weights live in log domain: non-minimum-margin examples decay
/// exponentially and would underflow linear storage on long runs.
/// Running sums are compensated so identities checked to 1e-12 absolute
/// still hold after tens of thousands of added coefficients.
struct BoostState {
  size_t t = 0;
  std::vector<double> log_weights;           // log w_t, normalized each step
  std::vector<CompensatedSum> margins;       // mar_{t-1,i} = sum_k eta_{k,i} alpha_k
  std::vector<CompensatedSum> beta_plus;     // coefficient mass where eta_{k,i} = +1
  CompensatedSum coeff_sum;                  // A_t = sum_k alpha_k
  CompensatedSum log_partition_sum;          // sum_k log Z_k (exact partition)
  std::map<size_t, DichotomyTally> alpha_by_dichotomy;

  double margin(size_t i) const { return margins[i].value(); }
  double coeff_total() const { return coeff_sum.value(); }
};

/// Uniform distribution over n examples, everything else zeroed.  n >= 2.
BoostState init_state(size_t n);

/// The exact argmax of Algorithm 1: weights are exponentiated once, each
/// mistake row is dotted in ascending index order, rows are scanned in
/// ascending order keeping the first maximum, so ties resolve to the
/// smallest row index.
struct EdgeChoice {
  size_t selected = 0;
  double edge = 0.0;
};
EdgeChoice select_edge(const BoostState& state, const DichotomyPool& pool);

/// alpha = 0.5 log((1+r)/(1-r)), logZ = 0.5 log(1-r^2), for r in (0,1).
struct Coefficients {
  double alpha = 0.0;
  double log_partition = 0.0;
};
Coefficients edge_to_coefficients(double edge);

/// One weight update in log domain.  The exact log partition is the
/// logsumexp of the shifted log weights; it must agree with the closed
/// form to 1e-9 or the step aborts with NumericalDrift, because their
/// equality is a theorem and drift can only mean a defect.  Returns the
/// exact log partition.
double apply_update(BoostState& state, const DichotomyPool& pool, size_t selected,
                    double edge, double alpha, double log_partition);

/// Snapshot of derived per-example and per-dichotomy series at one
/// recorded iteration, used for windowed convergence checks.
struct Checkpoint {
  size_t t = 0;                            // state.t after the update
  double coeff_sum = 0.0;                  // A_t
  double log_partition_sum = 0.0;
  std::vector<double> normalized_margins;  // mar_{t,i} / A_t
  std::vector<double> lambda;              // dense over all m rows
  std::vector<double> log_weights;         // log w_{t+1}
};

/// Scalar series recorded at every iteration, one row per completed t.
struct IterationStats {
  double coeff_sum = 0.0;         // A after this iteration
  double ratio = 0.0;             // -sum log(1-r^2) / sum log((1+r)/(1-r))
  double expected_margin = 0.0;   // E_{w_{t+1}}[mar_t]
  double entropy = 0.0;           // H(w_{t+1})
  double lower_bound = 0.0;       // -log n - sum 0.5 log(1-r_k^2)
  double upper_bound = 0.0;       //         - sum 0.5 log(1-r_k^2)
  double theta = 0.0;             // min_i normalized margin
};

struct RunResult {
  BoostState state;
  Trace trace;
  std::vector<Checkpoint> history;
  std::vector<IterationStats> stats;
};

/// True when iteration count s is recorded under the default cadence:
/// every iteration through 1000, then every ceil(s/1000)-th.  A positive
/// `every` overrides with that fixed stride.
bool checkpoint_due(size_t s, size_t every);

/// Runs the full loop: select, convert, update, record; halts at t_max or
/// on a weak-learning violation (max edge <= 0) or a perfect hypothesis
/// (max edge >= 1 - 1e-12).  Halts are recorded outcomes, never aborts,
/// so partial traces stay analyzable.
RunResult run_boosting(const Dataset& data, const DichotomyPool& pool,
                       const RunConfig& config);

}  // namespace optiboost
