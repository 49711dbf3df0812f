#pragma once

#include <string>
#include <vector>

#include "core/booster.hpp"
#include "core/dataset.hpp"
#include "core/hypothesis_pool.hpp"
#include "core/trace.hpp"

namespace optiboost {

enum class CheckStatus { pass, fail, skipped };

const char* check_status_name(CheckStatus status);

/// Outcome of one named check: the worst violation seen and where.
/// A fail status always means worst_violation exceeded the check's
/// tolerance; location fields are -1 when not applicable.
struct CheckResult {
  std::string check_name;
  CheckStatus status = CheckStatus::pass;
  double worst_violation = 0.0;
  long long location_t = -1;
  long long location_index = -1;  // example i or row j
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
};

/// Replays the traced run from scratch against the given inputs and
/// asserts every identity and bound the trace is supposed to witness:
/// recorded values match the recomputation, the weight-information
/// identity, the closed-form partition, the expected-margin bounds and
/// envelope, the entropy identity, per-record coefficient forms, the
/// normalized-margin and lambda Cauchy bounds at the given lags, the
/// lambda simplex, the beta splits, and the recorded halt reason.
/// Throws DigestMismatch when the trace was made from different inputs
/// and TruncatedTrace when the file is structurally damaged.
VerificationReport verify_trace(const std::string& trace_path, const Dataset& data,
                                const DichotomyPool& pool,
                                const std::vector<size_t>& lags = {1, 10, 100});

/// Finite-time convergence certificate over the trailing window of
/// checkpoints: the final normalized margins moved at most tol from every
/// windowed checkpoint, the margin-criterion candidate set stayed stable,
/// and at least two examples share the minimum margin.  Skipped when the
/// run halted before t_max, since the asymptotic statements assume the
/// loop never degenerates.
CheckResult certify_convergence(const Trace& trace,
                                const std::vector<Checkpoint>& history,
                                double tol, size_t window,
                                double sv_delta = 1e-3);

/// Deterministic JSON rendering of a verification report.
std::string verification_to_json(const VerificationReport& report);

}  // namespace optiboost
