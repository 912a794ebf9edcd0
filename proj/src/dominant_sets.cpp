#include "dsbs/dominant_sets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>

namespace dsbs {

namespace {

void check_subset(const SimilarityMatrix& w, const VertexSubset& s) {
  if (s.empty()) throw std::invalid_argument("vertex subset must be non-empty");
  int prev = -1;
  for (int v : s) {
    if (v < 0 || v >= w.size()) {
      throw std::invalid_argument("vertex " + std::to_string(v) + " out of range");
    }
    if (v <= prev) throw std::invalid_argument("vertex subset must be sorted and duplicate-free");
    prev = v;
  }
}

bool contains(const VertexSubset& s, int v) {
  return std::binary_search(s.begin(), s.end(), v);
}

// Memoized evaluation of the subset-weight recursion over the vertices of
// `universe` (bit i of a mask refers to universe[i]).
class SubsetWeights {
 public:
  SubsetWeights(const SimilarityMatrix& w, VertexSubset universe)
      : w_(w), universe_(std::move(universe)) {}

  double weight(std::uint32_t mask, int pos) {
    const std::uint64_t key = (static_cast<std::uint64_t>(mask) << 5) | static_cast<std::uint32_t>(pos);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    double result;
    if (std::popcount(mask) == 1) {
      result = 1.0;
    } else {
      const std::uint32_t rest = mask & ~(1u << pos);
      const int rest_size = std::popcount(rest);
      result = 0.0;
      for (std::uint32_t bits = rest; bits != 0; bits &= bits - 1) {
        const int j = std::countr_zero(bits);
        double degree = 0.0;
        for (std::uint32_t kb = rest; kb != 0; kb &= kb - 1) {
          degree += entry(j, std::countr_zero(kb));
        }
        const double phi = entry(pos, j) - degree / rest_size;
        result += phi * weight(rest, j);
      }
    }
    memo_.emplace(key, result);
    return result;
  }

  double total(std::uint32_t mask) {
    double sum = 0.0;
    for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1) {
      sum += weight(mask, std::countr_zero(bits));
    }
    return sum;
  }

 private:
  double entry(int a, int b) const {
    return w_(universe_[static_cast<std::size_t>(a)], universe_[static_cast<std::size_t>(b)]);
  }

  const SimilarityMatrix& w_;
  VertexSubset universe_;
  std::unordered_map<std::uint64_t, double> memo_;
};

}  // namespace

double average_weighted_degree(const SimilarityMatrix& w, const VertexSubset& s, int i) {
  check_subset(w, s);
  if (!contains(s, i)) {
    throw std::invalid_argument("vertex " + std::to_string(i) + " is not in the subset");
  }
  double sum = 0.0;
  for (int j : s) sum += w(i, j);
  return sum / static_cast<double>(s.size());
}

double relative_similarity(const SimilarityMatrix& w, const VertexSubset& s, int i, int j) {
  check_subset(w, s);
  if (!contains(s, i)) {
    throw std::invalid_argument("vertex " + std::to_string(i) + " is not in the subset");
  }
  if (contains(s, j)) {
    throw std::invalid_argument("vertex " + std::to_string(j) + " must be outside the subset");
  }
  if (j < 0 || j >= w.size()) {
    throw std::invalid_argument("vertex " + std::to_string(j) + " out of range");
  }
  return w(i, j) - average_weighted_degree(w, s, i);
}

double subset_weight(const SimilarityMatrix& w, const VertexSubset& s, int i, int cap) {
  check_subset(w, s);
  if (static_cast<int>(s.size()) > cap) {
    throw std::length_error("subset size " + std::to_string(s.size()) +
                            " exceeds the oracle cap " + std::to_string(cap));
  }
  const auto it = std::lower_bound(s.begin(), s.end(), i);
  if (it == s.end() || *it != i) {
    throw std::invalid_argument("vertex " + std::to_string(i) + " is not in the subset");
  }
  SubsetWeights weights(w, s);
  const std::uint32_t full = (1u << s.size()) - 1u;
  return weights.weight(full, static_cast<int>(it - s.begin()));
}

double total_weight(const SimilarityMatrix& w, const VertexSubset& s, int cap) {
  check_subset(w, s);
  if (static_cast<int>(s.size()) > cap) {
    throw std::length_error("subset size " + std::to_string(s.size()) +
                            " exceeds the oracle cap " + std::to_string(cap));
  }
  SubsetWeights weights(w, s);
  return weights.total((1u << s.size()) - 1u);
}

DominanceResult is_dominant(const SimilarityMatrix& w, const VertexSubset& s, double tol, int cap) {
  check_subset(w, s);
  const int size = static_cast<int>(s.size());
  if (size > cap || size + 1 > cap) {
    throw std::length_error("dominance test over " + std::to_string(size) +
                            " vertices exceeds the oracle cap " + std::to_string(cap));
  }

  DominanceResult result;
  SubsetWeights weights(w, s);
  const std::uint32_t full = (1u << size) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (weights.total(mask) <= 0.0) return result;  // precondition violated
  }
  result.precondition_ok = true;

  for (int pos = 0; pos < size; ++pos) {
    if (!(weights.weight(full, pos) > tol)) return result;
  }
  for (int v = 0; v < w.size(); ++v) {
    if (contains(s, v)) continue;
    VertexSubset extended = s;
    extended.insert(std::lower_bound(extended.begin(), extended.end(), v), v);
    const auto it = std::lower_bound(extended.begin(), extended.end(), v);
    SubsetWeights ext(w, extended);
    const double a = ext.weight((1u << extended.size()) - 1u, static_cast<int>(it - extended.begin()));
    if (!(a < -tol)) return result;
  }
  result.dominant = true;
  return result;
}

CharacteristicVector uniform_characteristic_vector(int n) {
  if (n <= 0) throw std::invalid_argument("characteristic vector needs at least one vertex");
  return CharacteristicVector(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
}

namespace {

void check_simplex(const CharacteristicVector& x) {
  double sum = 0.0;
  for (double v : x) {
    if (!(v >= 0.0)) throw std::invalid_argument("characteristic vector has a negative component");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("characteristic vector components must sum to 1");
  }
}

// x_out = x .* (Wx) / (x'Wx); the denominator is accumulated from the same
// products as the numerators so the updated components sum to 1 up to
// rounding. Returns x'Wx.
double step_into(const SimilarityMatrix& w, const CharacteristicVector& x,
                 std::vector<double>& wx, CharacteristicVector& x_out) {
  const int n = w.size();
  double quad = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto row = w.row(i);
    double dot = 0.0;
    for (int j = 0; j < n; ++j) dot += row[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    wx[static_cast<std::size_t>(i)] = dot;
    quad += x[static_cast<std::size_t>(i)] * dot;
  }
  if (!(quad > 0.0)) {
    throw DegenerateGraphError("x'Wx is not positive: no similarity mass on the active vertices");
  }
  for (int i = 0; i < n; ++i) {
    x_out[static_cast<std::size_t>(i)] =
        x[static_cast<std::size_t>(i)] * wx[static_cast<std::size_t>(i)] / quad;
  }
  return quad;
}

}  // namespace

CharacteristicVector replicator_step(const SimilarityMatrix& w, const CharacteristicVector& x) {
  if (static_cast<int>(x.size()) != w.size()) {
    throw std::invalid_argument("characteristic vector length does not match the matrix");
  }
  check_simplex(x);
  std::vector<double> wx(x.size());
  CharacteristicVector out(x.size());
  step_into(w, x, wx, out);
  return out;
}

CharacteristicVector run_replicator(const SimilarityMatrix& w, CharacteristicVector x0, double th,
                                    int max_iter, const ReplicatorObserver& observer) {
  if (static_cast<int>(x0.size()) != w.size()) {
    throw std::invalid_argument("characteristic vector length does not match the matrix");
  }
  if (!(th > 0.0)) throw std::invalid_argument("convergence threshold must be positive");
  check_simplex(x0);

  CharacteristicVector x = std::move(x0);
  CharacteristicVector next(x.size());
  std::vector<double> wx(x.size());
  for (int iter = 1; iter <= max_iter; ++iter) {
    step_into(w, x, wx, next);
    double max_delta = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      max_delta = std::max(max_delta, std::abs(next[i] - x[i]));
    }
    x.swap(next);
    if (observer) observer(iter, x);
    if (max_delta <= th) break;
  }
  return x;
}

VertexSubset extract_support(const CharacteristicVector& x, double delta) {
  if (x.empty()) throw std::invalid_argument("cannot extract support of an empty vector");
  if (!(delta > 0.0)) throw std::invalid_argument("support threshold must be positive");
  VertexSubset support;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > delta) support.push_back(static_cast<int>(i));
  }
  if (support.empty()) {
    int best = 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (x[i] > x[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    support.push_back(best);
  }
  return support;
}

Clustering peel_clustering(const SimilarityMatrix& w, double th, double delta, int max_iter) {
  Clustering clusters;
  VertexSubset active(static_cast<std::size_t>(w.size()));
  for (int i = 0; i < w.size(); ++i) active[static_cast<std::size_t>(i)] = i;

  while (!active.empty()) {
    const SimilarityMatrix sub = w.submatrix(active);
    try {
      const CharacteristicVector x = run_replicator(
          sub, uniform_characteristic_vector(sub.size()), th, max_iter);
      const VertexSubset local = extract_support(x, delta);
      VertexSubset cluster;
      cluster.reserve(local.size());
      for (int pos : local) cluster.push_back(active[static_cast<std::size_t>(pos)]);
      clusters.push_back(cluster);

      VertexSubset remaining;
      remaining.reserve(active.size() - local.size());
      std::size_t drop = 0;
      for (std::size_t pos = 0; pos < active.size(); ++pos) {
        if (drop < local.size() && static_cast<int>(pos) == local[drop]) {
          ++drop;
        } else {
          remaining.push_back(active[pos]);
        }
      }
      active.swap(remaining);
    } catch (const DegenerateGraphError&) {
      for (int v : active) clusters.push_back({v});
      active.clear();
    }
  }
  return clusters;
}

}  // namespace dsbs
