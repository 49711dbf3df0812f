#include "core/errors.hpp"

namespace optiboost {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return "IoError";
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::label: return "LabelError";
    case ErrorCode::empty_dataset: return "EmptyDataset";
    case ErrorCode::shape: return "ShapeError";
    case ErrorCode::entry: return "EntryError";
    case ErrorCode::degenerate_pool: return "DegeneratePool";
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::precondition: return "PreconditionError";
    case ErrorCode::numerical_drift: return "NumericalDrift";
    case ErrorCode::not_started: return "NotStarted";
    case ErrorCode::insufficient_history: return "InsufficientHistory";
    case ErrorCode::digest_mismatch: return "DigestMismatch";
    case ErrorCode::truncated_trace: return "TruncatedTrace";
    case ErrorCode::replay_mismatch: return "ReplayMismatch";
    case ErrorCode::weak_learning_violation: return "WeakLearningViolation";
    case ErrorCode::perfect_hypothesis: return "PerfectHypothesis";
    case ErrorCode::internal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace optiboost
