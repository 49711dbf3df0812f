#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace optiboost {

/// The finite hypothesis space as its trace on the training set: raw holds
/// one labelling dichotomy per hypothesis, mistake holds the same rows
/// multiplied elementwise by the labels.  Rows are deduplicated; ids name
/// the first construction that produced each kept row.
struct DichotomyPool {
  std::vector<std::vector<int8_t>> raw;      // m rows of n entries, each +1/-1
  std::vector<std::vector<int8_t>> mistake;  // mistake[j][i] = labels[i] * raw[j][i]
  std::vector<double> mistake_dense;         // row-major copy of mistake for dot products
  std::vector<std::string> hypothesis_ids;
  size_t m = 0;
  size_t n = 0;

  const double* mistake_row(size_t j) const { return mistake_dense.data() + j * n; }
};

/// Builds a pool from raw prediction rows: validates entries, deduplicates
/// keeping first occurrence, derives the mistake matrix from data.labels.
DichotomyPool make_pool(const std::vector<std::vector<int8_t>>& raw_rows,
                        std::vector<std::string> ids, const Dataset& data);

/// Enumerates every decision stump over the dataset: feature-major, one
/// threshold below each column minimum then midpoints of consecutive
/// distinct sorted values, polarity +1 before -1.  A stump predicts
/// polarity * sign(x_f - threshold) with sign(0) := +1.
DichotomyPool enumerate_stumps(const Dataset& data);

/// Loads an explicit m x n matrix of {+1, 1, -1} entries, one hypothesis
/// per row, no header.  Column count must equal data.n.
DichotomyPool load_dichotomy_matrix(const std::string& path, const Dataset& data);

}  // namespace optiboost
