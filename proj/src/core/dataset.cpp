#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace optiboost {

namespace {

bool row_is_fully_numeric(const std::vector<std::string>& cells) {
  double ignored = 0.0;
  return std::all_of(cells.begin(), cells.end(), [&](const std::string& c) {
    return parse_real_cell(c, ignored);
  });
}

int coerce_label(const std::string& cell, size_t row) {
  double value = 0.0;
  if (!parse_real_cell(cell, value)) {
    fail(ErrorCode::parse,
         "row " + std::to_string(row) + ": non-numeric label cell '" + cell + "'");
  }
  if (value == 1.0) {
    return 1;
  }
  if (value == -1.0) {
    return -1;
  }
  fail(ErrorCode::label,
       "row " + std::to_string(row) + ": label " + cell + " is not +1 or -1");
}

}  // namespace

Dataset make_dataset(std::vector<std::vector<double>> features,
                     std::vector<int> labels) {
  if (features.size() != labels.size()) {
    fail(ErrorCode::shape, "feature rows (" + std::to_string(features.size()) +
                               ") and labels (" + std::to_string(labels.size()) +
                               ") differ in count");
  }
  if (features.size() < 2) {
    fail(ErrorCode::empty_dataset,
         "need at least 2 examples, got " + std::to_string(features.size()));
  }
  size_t d = features.front().size();
  if (d == 0) {
    fail(ErrorCode::parse, "dataset has no feature columns");
  }
  for (size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != d) {
      fail(ErrorCode::parse, "row " + std::to_string(i) + " has " +
                                 std::to_string(features[i].size()) +
                                 " feature cells, expected " + std::to_string(d));
    }
    for (double v : features[i]) {
      if (!std::isfinite(v)) {
        fail(ErrorCode::parse,
             "row " + std::to_string(i) + " contains a non-finite feature");
      }
    }
    if (labels[i] != 1 && labels[i] != -1) {
      fail(ErrorCode::label, "row " + std::to_string(i) + ": label " +
                                 std::to_string(labels[i]) + " is not +1 or -1");
    }
  }
  Dataset data;
  data.n = features.size();
  data.d = d;
  data.features = std::move(features);
  data.labels = std::move(labels);
  return data;
}

Dataset load_dataset(const std::string& path, const std::string& label_column) {
  auto cells = read_csv_cells(path);
  if (cells.empty()) {
    fail(ErrorCode::empty_dataset, path + ": no rows");
  }
  size_t first_data_row = 0;
  std::vector<std::string> header;
  if (!row_is_fully_numeric(cells.front())) {
    header = cells.front();
    first_data_row = 1;
  }

  size_t columns = 0;
  if (first_data_row < cells.size()) {
    columns = cells[first_data_row].size();
  } else if (!header.empty()) {
    columns = header.size();
  }
  if (columns < 2) {
    fail(ErrorCode::parse, path + ": need at least one feature column and a label column");
  }

  size_t label_index = columns - 1;
  if (!label_column.empty()) {
    if (header.empty()) {
      fail(ErrorCode::parse,
           path + ": label column '" + label_column + "' named but file has no header");
    }
    auto it = std::find(header.begin(), header.end(), label_column);
    if (it == header.end()) {
      fail(ErrorCode::parse,
           path + ": label column '" + label_column + "' not in header");
    }
    label_index = static_cast<size_t>(it - header.begin());
  }

  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  for (size_t r = first_data_row; r < cells.size(); ++r) {
    const auto& row = cells[r];
    size_t data_row = r - first_data_row;
    if (row.size() != columns) {
      fail(ErrorCode::parse, path + ": row " + std::to_string(data_row) + " has " +
                                 std::to_string(row.size()) + " cells, expected " +
                                 std::to_string(columns));
    }
    std::vector<double> feature_row;
    feature_row.reserve(columns - 1);
    for (size_t c = 0; c < columns; ++c) {
      if (c == label_index) {
        continue;
      }
      double value = 0.0;
      if (!parse_real_cell(row[c], value)) {
        fail(ErrorCode::parse, path + ": row " + std::to_string(data_row) +
                                   ": non-numeric cell '" + row[c] + "'");
      }
      feature_row.push_back(value);
    }
    features.push_back(std::move(feature_row));
    labels.push_back(coerce_label(row[label_index], data_row));
  }

  if (features.size() < 2) {
    fail(ErrorCode::empty_dataset, path + ": need at least 2 examples, got " +
                                       std::to_string(features.size()));
  }
  return make_dataset(std::move(features), std::move(labels));
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream file(path);
  if (!file) {
    fail(ErrorCode::io, "cannot write " + path);
  }
  for (size_t i = 0; i < data.n; ++i) {
    std::string line;
    for (double v : data.features[i]) {
      line += format_g17(v);
      line += ',';
    }
    line += data.labels[i] > 0 ? "1" : "-1";
    file << line << '\n';
  }
  if (!file) {
    fail(ErrorCode::io, "write failed for " + path);
  }
}

bool datasets_equal(const Dataset& a, const Dataset& b) {
  return a.n == b.n && a.d == b.d && a.features == b.features &&
         a.labels == b.labels;
}

}  // namespace optiboost
