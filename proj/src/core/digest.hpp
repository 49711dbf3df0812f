#pragma once

#include <cstdint>
#include <string>

#include "core/dataset.hpp"
#include "core/hypothesis_pool.hpp"

namespace optiboost {

/// FNV-1a 64-bit hash over a byte string.
uint64_t fnv1a64(const std::string& bytes);

/// Content digest binding a trace to its inputs.  Built from a canonical
/// text rendering of the dataset and the deduplicated raw pool rows, so two
/// pools with identical rows digest identically regardless of how they were
/// constructed.  Returned as 16 lowercase hex digits.
std::string run_digest(const Dataset& data, const DichotomyPool& pool);

}  // namespace optiboost
