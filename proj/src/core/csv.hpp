#pragma once

#include <string>
#include <vector>

namespace optiboost {

/// Reads a comma-separated file into trimmed string cells.  Blank lines are
/// skipped, CRLF endings tolerated.  Quoting is not supported; the formats
/// this library consumes are plain numeric tables.
std::vector<std::vector<std::string>> read_csv_cells(const std::string& path);

/// Splits one line into trimmed cells.  Exposed for in-memory parsing.
std::vector<std::string> split_csv_line(const std::string& line);

/// Strict full-cell real parse (optional leading '+', decimal-point reals).
/// Returns false on any leftover characters or non-finite result.
bool parse_real_cell(const std::string& cell, double& out);

}  // namespace optiboost
