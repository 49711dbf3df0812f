#include "core/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "core/errors.hpp"

namespace optiboost {

namespace {

std::string trim(const std::string& text) {
  size_t begin = 0;
  size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return text.substr(begin, end - begin);
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::vector<std::vector<std::string>> read_csv_cells(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    fail(ErrorCode::io, "cannot open " + path);
  }
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(file, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (trim(line).empty()) {
      continue;
    }
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

bool parse_real_cell(const std::string& cell, double& out) {
  if (cell.empty()) {
    return false;
  }
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') {
    ++begin;
    if (begin == end) {
      return false;
    }
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return false;
  }
  out = value;
  return true;
}

}  // namespace optiboost
