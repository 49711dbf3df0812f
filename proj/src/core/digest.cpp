#include "core/digest.hpp"

#include <cstdio>

#include "core/numerics.hpp"

namespace optiboost {

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t hash = 14695981039346656037ULL;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string run_digest(const Dataset& data, const DichotomyPool& pool) {
  std::string canonical;
  canonical.reserve(64 + data.n * (data.d * 24 + 4) + pool.m * (pool.n + 1));
  canonical += "dataset " + std::to_string(data.n) + " " + std::to_string(data.d) + "\n";
  for (size_t i = 0; i < data.n; ++i) {
    for (size_t c = 0; c < data.d; ++c) {
      if (c > 0) {
        canonical += ',';
      }
      canonical += format_g17(data.features[i][c]);
    }
    canonical += data.labels[i] > 0 ? ";+1\n" : ";-1\n";
  }
  canonical += "pool " + std::to_string(pool.m) + "\n";
  for (const auto& row : pool.raw) {
    for (int8_t e : row) {
      canonical += e > 0 ? '+' : '-';
    }
    canonical += '\n';
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return hex;
}

}  // namespace optiboost
