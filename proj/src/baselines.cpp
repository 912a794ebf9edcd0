#include "dsbs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "dsbs/rng.hpp"
#include "dsbs/stage2.hpp"

namespace dsbs {

BaselineResult cbs_select(const Partition& partition, int k) {
  const int l = partition.bands;
  if (k < 2 || k > l) {
    throw std::invalid_argument("cbs k must be in [2, " + std::to_string(l) + "], got " +
                                std::to_string(k));
  }

  // |Pearson correlation| between band spectra over the partition pixels
  std::vector<double> abs_corr(static_cast<std::size_t>(l) * static_cast<std::size_t>(l), 0.0);
  for (int i = 0; i < l; ++i) {
    for (int j = i + 1; j < l; ++j) {
      const double c = std::abs(pearson_correlation(partition.band(i), partition.band(j)));
      abs_corr[static_cast<std::size_t>(i) * static_cast<std::size_t>(l) + static_cast<std::size_t>(j)] = c;
      abs_corr[static_cast<std::size_t>(j) * static_cast<std::size_t>(l) + static_cast<std::size_t>(i)] = c;
    }
  }
  const auto corr = [&](int a, int b) {
    return abs_corr[static_cast<std::size_t>(a) * static_cast<std::size_t>(l) +
                    static_cast<std::size_t>(b)];
  };

  BaselineResult result;
  result.method = "cbs";

  int seed_a = 0, seed_b = 1;
  double seed_c = corr(0, 1);
  for (int i = 0; i < l; ++i) {
    for (int j = i + 1; j < l; ++j) {
      if (corr(i, j) < seed_c) {  // strict: ties keep the lexicographically first pair
        seed_c = corr(i, j);
        seed_a = i;
        seed_b = j;
      }
    }
  }
  result.selected = {seed_a, seed_b};
  result.trace.push_back({seed_a, seed_c});
  result.trace.push_back({seed_b, seed_c});

  std::vector<bool> taken(static_cast<std::size_t>(l), false);
  taken[static_cast<std::size_t>(seed_a)] = taken[static_cast<std::size_t>(seed_b)] = true;
  while (static_cast<int>(result.selected.size()) < k) {
    int best = -1;
    double best_worst = std::numeric_limits<double>::infinity();
    for (int cand = 0; cand < l; ++cand) {
      if (taken[static_cast<std::size_t>(cand)]) continue;
      double worst = 0.0;
      for (int s : result.selected) worst = std::max(worst, corr(cand, s));
      if (worst < best_worst) {
        best_worst = worst;
        best = cand;
      }
    }
    result.selected.push_back(best);
    result.trace.push_back({best, best_worst});
    taken[static_cast<std::size_t>(best)] = true;
  }
  return result;
}

namespace {

// Fixed 50/50 stratified split used for every SFS candidate evaluation;
// train takes the larger half of odd classes.
Split sfs_split(const Partition& partition, std::uint64_t seed) {
  std::map<int, std::vector<int>> by_class;
  for (int p = 0; p < partition.size(); ++p) {
    by_class[partition.pixels[static_cast<std::size_t>(p)].label].push_back(p);
  }
  Split out;
  Rng rng(seed);
  for (auto& [label, idx] : by_class) {
    if (idx.size() < 2) {
      throw std::runtime_error("class " + std::to_string(label) +
                               " needs at least 2 samples for the sfs split");
    }
    rng.shuffle(idx);
    const std::size_t n_train = (idx.size() + 1) / 2;
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace

BaselineResult sfs_select(const Partition& partition, const ClassifierSpec& classifier,
                          std::uint64_t seed, int max_k, double min_gain) {
  const int l = partition.bands;
  if (max_k < 1 || max_k > l) {
    throw std::invalid_argument("sfs max_k must be in [1, " + std::to_string(l) + "], got " +
                                std::to_string(max_k));
  }

  const Split validation = sfs_split(partition, seed);

  BaselineResult result;
  result.method = "sfs";
  double current_acc = 0.0;
  std::vector<bool> taken(static_cast<std::size_t>(l), false);

  while (static_cast<int>(result.selected.size()) < max_k) {
    int best = -1;
    double best_acc = -1.0;
    std::vector<int> candidate = result.selected;
    candidate.push_back(0);
    for (int band = 0; band < l; ++band) {
      if (taken[static_cast<std::size_t>(band)]) continue;
      candidate.back() = band;
      const double acc = classify_accuracy(partition, validation, candidate, classifier);
      if (acc > best_acc) {  // strict: ties keep the lowest band index
        best_acc = acc;
        best = band;
      }
    }
    const bool first = result.selected.empty();
    if (!first && !(best_acc - current_acc > min_gain)) break;
    result.selected.push_back(best);
    result.trace.push_back({best, best_acc});
    taken[static_cast<std::size_t>(best)] = true;
    current_acc = best_acc;
  }
  return result;
}

}  // namespace dsbs
