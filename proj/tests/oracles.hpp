#pragma once

// Test-only brute-force oracles, deliberately independent of the library
// implementations they are checked against.

#include <algorithm>
#include <set>
#include <vector>

#include "dsbs/rng.hpp"

namespace oracles {

// Literal recall/precision/harmonic-mean evaluation on std::set.
inline double brute_f_pair(const std::set<int>& ci, const std::set<int>& cj) {
  std::vector<int> common;
  std::set_intersection(ci.begin(), ci.end(), cj.begin(), cj.end(), std::back_inserter(common));
  if (common.empty()) return 0.0;
  const double re = static_cast<double>(common.size()) / static_cast<double>(ci.size());
  const double pr = static_cast<double>(common.size()) / static_cast<double>(cj.size());
  return 2.0 * re * pr / (re + pr);
}

inline double brute_per_class_f(const std::set<int>& ci,
                                const std::vector<std::set<int>>& dt) {
  double best = 0.0;
  for (const auto& cj : dt) best = std::max(best, brute_f_pair(ci, cj));
  return best;
}

inline double brute_f_measure(const std::vector<std::set<int>>& gt,
                              const std::vector<std::set<int>>& dt) {
  double z = 0.0;
  double sum = 0.0;
  for (const auto& ci : gt) {
    z += static_cast<double>(ci.size());
    sum += static_cast<double>(ci.size()) * brute_per_class_f(ci, dt);
  }
  return sum / z;
}

// Random partition of {0..n-1} into up to max_parts non-empty parts.
inline std::vector<std::set<int>> random_partition(int n, int max_parts, dsbs::Rng& rng) {
  const int parts = 1 + rng.below(max_parts);
  std::vector<std::set<int>> out(static_cast<std::size_t>(parts));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(rng.below(parts))].insert(i);
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& s) { return s.empty(); }),
            out.end());
  return out;
}

}  // namespace oracles
