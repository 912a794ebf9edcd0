#include "dsbs/stage1.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "dsbs/parallel.hpp"

namespace dsbs {

namespace {

void check_params(const PixelSimilarityParams& p) {
  if (p.c_d < 0.0 || p.c_s < 0.0) {
    throw std::invalid_argument("similarity coefficients must be nonnegative");
  }
  if (!(p.th > 0.0) || !(p.delta > 0.0) || p.max_iter < 1) {
    throw std::invalid_argument("replicator parameters must be positive");
  }
}

}  // namespace

SimilarityMatrix pixel_similarity_matrix(const Partition& partition, int band,
                                         const PixelSimilarityParams& params) {
  check_params(params);
  if (partition.size() == 0) throw std::invalid_argument("partition is empty");
  if (band < 0 || band >= partition.bands) {
    throw std::invalid_argument("band " + std::to_string(band) + " out of range");
  }

  const int k = partition.size();
  const auto r = partition.band(band);
  std::vector<double> dense(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < k; ++i) {
    const auto& pi = partition.pixels[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      const auto& pj = partition.pixels[static_cast<std::size_t>(j)];
      const double dr = static_cast<double>(pi.row - pj.row);
      const double dc = static_cast<double>(pi.col - pj.col);
      const double d2 = dr * dr + dc * dc;
      const double dref = std::abs(r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)]);
      const double v = std::exp(-params.c_d * d2) * std::exp(-params.c_s * dref);
      dense[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)] = v;
      dense[static_cast<std::size_t>(j) * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] = v;
    }
  }
  return SimilarityMatrix(k, std::move(dense));
}

Clustering cluster_band_pixels(const Partition& partition, int band,
                               const PixelSimilarityParams& params) {
  const SimilarityMatrix w = pixel_similarity_matrix(partition, band, params);
  return peel_clustering(w, params.th, params.delta, params.max_iter);
}

std::vector<int> assign_clusters_to_classes(const Clustering& clustering,
                                            const Partition& partition) {
  std::vector<int> assigned;
  assigned.reserve(clustering.size());
  for (const auto& cluster : clustering) {
    std::map<int, int> votes;
    for (int pixel : cluster) {
      if (pixel < 0 || pixel >= partition.size()) {
        throw std::invalid_argument("cluster refers to pixel " + std::to_string(pixel) +
                                    " outside the partition");
      }
      votes[partition.pixels[static_cast<std::size_t>(pixel)].label] += 1;
    }
    int best_label = 0;
    int best_count = -1;
    for (const auto& [label, count] : votes) {  // ascending label: ties keep the lowest
      if (count > best_count) {
        best_label = label;
        best_count = count;
      }
    }
    assigned.push_back(best_label);
  }
  return assigned;
}

namespace {

int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  int count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace

double f_pair(const std::vector<int>& gt_set, const std::vector<int>& dt_set) {
  if (gt_set.empty() || dt_set.empty()) {
    throw std::invalid_argument("f_pair requires non-empty sets");
  }
  const int common = intersection_size(gt_set, dt_set);
  if (common == 0) return 0.0;
  const double recall = static_cast<double>(common) / static_cast<double>(gt_set.size());
  const double precision = static_cast<double>(common) / static_cast<double>(dt_set.size());
  return 2.0 * recall * precision / (recall + precision);
}

double f_measure(const std::vector<std::vector<int>>& gt, const Clustering& dt) {
  double z = 0.0;
  for (const auto& c : gt) z += static_cast<double>(c.size());
  if (z <= 0.0) throw std::invalid_argument("f_measure requires a non-empty ground truth");

  double sum = 0.0;
  for (const auto& c : gt) {
    double best = 0.0;
    for (const auto& d : dt) best = std::max(best, f_pair(c, d));
    sum += static_cast<double>(c.size()) * best;
  }
  return sum / z;
}

double per_class_f(const std::vector<std::vector<int>>& gt, const Clustering& dt,
                   int class_index) {
  if (class_index < 0 || class_index >= static_cast<int>(gt.size()) ||
      gt[static_cast<std::size_t>(class_index)].empty()) {
    throw std::invalid_argument("class " + std::to_string(class_index) +
                                " is absent from the ground truth");
  }
  double best = 0.0;
  for (const auto& d : dt) best = std::max(best, f_pair(gt[static_cast<std::size_t>(class_index)], d));
  return best;
}

std::vector<std::vector<int>> ground_truth_sets(const Partition& partition) {
  const std::vector<int> labels = partition.class_labels();
  std::vector<std::vector<int>> sets(labels.size());
  for (int p = 0; p < partition.size(); ++p) {
    const int label = partition.pixels[static_cast<std::size_t>(p)].label;
    const auto it = std::lower_bound(labels.begin(), labels.end(), label);
    sets[static_cast<std::size_t>(it - labels.begin())].push_back(p);
  }
  return sets;
}

BandEvaluation evaluate_band(const Partition& partition, int band,
                             const PixelSimilarityParams& params) {
  BandEvaluation eval;
  eval.clustering = cluster_band_pixels(partition, band, params);
  eval.cluster_class = assign_clusters_to_classes(eval.clustering, partition);

  const auto gt = ground_truth_sets(partition);
  eval.performance.per_class_f.reserve(gt.size());
  double sum = 0.0;
  for (int i = 0; i < static_cast<int>(gt.size()); ++i) {
    const double f = per_class_f(gt, eval.clustering, i);
    eval.performance.per_class_f.push_back(f);
    sum += f;
  }
  eval.performance.f_tot = sum / static_cast<double>(gt.size());
  return eval;
}

std::vector<BandPerformance> evaluate_all_bands(const Partition& partition,
                                                const PixelSimilarityParams& params,
                                                int threads) {
  check_params(params);
  if (partition.size() == 0) throw std::invalid_argument("partition is empty");
  std::vector<BandPerformance> out(static_cast<std::size_t>(partition.bands));
  parallel_for(0, partition.bands, threads, [&](int band) {
    out[static_cast<std::size_t>(band)] = evaluate_band(partition, band, params).performance;
  });
  return out;
}

double rescaled_spectral_coefficient(double c_s, double reference_mean, double target_mean) {
  if (!(reference_mean > 0.0) || !(target_mean > 0.0)) {
    throw std::invalid_argument("mean reflectances must be positive to rescale c_s");
  }
  return c_s * reference_mean / target_mean;
}

}  // namespace dsbs
