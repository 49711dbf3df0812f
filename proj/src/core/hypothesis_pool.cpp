#include "core/hypothesis_pool.hpp"

#include <algorithm>
#include <unordered_set>

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace optiboost {

namespace {

std::string row_key(const std::vector<int8_t>& row) {
  std::string key(row.size(), '\0');
  for (size_t i = 0; i < row.size(); ++i) {
    key[i] = row[i] > 0 ? '+' : '-';
  }
  return key;
}

}  // namespace

DichotomyPool make_pool(const std::vector<std::vector<int8_t>>& raw_rows,
                        std::vector<std::string> ids, const Dataset& data) {
  if (raw_rows.size() != ids.size()) {
    fail(ErrorCode::internal, "pool rows and ids differ in count");
  }
  DichotomyPool pool;
  pool.n = data.n;
  std::unordered_set<std::string> seen;
  for (size_t j = 0; j < raw_rows.size(); ++j) {
    const auto& row = raw_rows[j];
    if (row.size() != data.n) {
      fail(ErrorCode::shape, "pool row " + std::to_string(j) + " has " +
                                 std::to_string(row.size()) +
                                 " entries, expected " + std::to_string(data.n));
    }
    for (int8_t e : row) {
      if (e != 1 && e != -1) {
        fail(ErrorCode::entry,
             "pool row " + std::to_string(j) + " contains an entry outside {+1, -1}");
      }
    }
    if (seen.insert(row_key(row)).second) {
      pool.raw.push_back(row);
      pool.hypothesis_ids.push_back(std::move(ids[j]));
    }
  }
  pool.m = pool.raw.size();
  if (pool.m == 0) {
    fail(ErrorCode::degenerate_pool, "pool deduplicated to zero rows");
  }
  pool.mistake.reserve(pool.m);
  pool.mistake_dense.reserve(pool.m * pool.n);
  for (const auto& row : pool.raw) {
    std::vector<int8_t> mistake_row(pool.n);
    for (size_t i = 0; i < pool.n; ++i) {
      mistake_row[i] = static_cast<int8_t>(data.labels[i] * row[i]);
      pool.mistake_dense.push_back(static_cast<double>(mistake_row[i]));
    }
    pool.mistake.push_back(std::move(mistake_row));
  }
  return pool;
}

DichotomyPool enumerate_stumps(const Dataset& data) {
  std::vector<std::vector<int8_t>> rows;
  std::vector<std::string> ids;
  for (size_t f = 0; f < data.d; ++f) {
    std::vector<double> values(data.n);
    for (size_t i = 0; i < data.n; ++i) {
      values[i] = data.features[i][f];
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<double> thresholds;
    thresholds.push_back(values.front() - 1.0);
    for (size_t k = 0; k + 1 < values.size(); ++k) {
      thresholds.push_back(0.5 * (values[k] + values[k + 1]));
    }

    for (double theta : thresholds) {
      for (int polarity : {1, -1}) {
        std::vector<int8_t> row(data.n);
        for (size_t i = 0; i < data.n; ++i) {
          int sign = data.features[i][f] >= theta ? 1 : -1;
          row[i] = static_cast<int8_t>(polarity * sign);
        }
        rows.push_back(std::move(row));
        ids.push_back("stump feature=" + std::to_string(f) +
                      " threshold=" + format_g17(theta) +
                      " polarity=" + (polarity > 0 ? "+1" : "-1"));
      }
    }
  }
  return make_pool(rows, std::move(ids), data);
}

DichotomyPool load_dichotomy_matrix(const std::string& path, const Dataset& data) {
  auto cells = read_csv_cells(path);
  if (cells.empty()) {
    fail(ErrorCode::degenerate_pool, path + ": no hypothesis rows");
  }
  std::vector<std::vector<int8_t>> rows;
  std::vector<std::string> ids;
  for (size_t j = 0; j < cells.size(); ++j) {
    const auto& line = cells[j];
    if (line.size() != data.n) {
      fail(ErrorCode::shape, path + ": row " + std::to_string(j) + " has " +
                                 std::to_string(line.size()) +
                                 " columns, expected " + std::to_string(data.n));
    }
    std::vector<int8_t> row(data.n);
    for (size_t i = 0; i < data.n; ++i) {
      double value = 0.0;
      if (!parse_real_cell(line[i], value) || (value != 1.0 && value != -1.0)) {
        fail(ErrorCode::entry, path + ": row " + std::to_string(j) + ": entry '" +
                                   line[i] + "' is not +1 or -1");
      }
      row[i] = value > 0 ? 1 : -1;
    }
    rows.push_back(std::move(row));
    ids.push_back("row " + std::to_string(j));
  }
  return make_pool(rows, std::move(ids), data);
}

}  // namespace optiboost
