#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace optiboost {

/// A fixed labeled training set.  Immutable after construction; every other
/// module consumes it by const reference.
struct Dataset {
  std::vector<std::vector<double>> features;  // n rows, d columns, all finite
  std::vector<int> labels;                    // n entries, each +1 or -1
  size_t n = 0;
  size_t d = 0;
};

/// Validates invariants and assembles a Dataset from parts.
Dataset make_dataset(std::vector<std::vector<double>> features,
                     std::vector<int> labels);

/// Loads a CSV file: optional header row (auto-detected when any first-row
/// cell is non-numeric), features in file order, labels in {+1, 1, -1}.
/// label_column selects the label by header name; empty means last column.
Dataset load_dataset(const std::string& path,
                     const std::string& label_column = "");

/// Writes features plus a trailing label column, headerless, reals at
/// 17 significant digits so a reload reproduces the Dataset exactly.
void write_dataset_csv(const Dataset& data, const std::string& path);

bool datasets_equal(const Dataset& a, const Dataset& b);

}  // namespace optiboost
