#pragma once

#include <span>
#include <vector>

#include "dsbs/dominant_sets.hpp"
#include "dsbs/similarity_matrix.hpp"
#include "dsbs/stage1.hpp"

namespace dsbs {

struct BandSimilarityParams {
  double c_b = 200.0;  // correlation coefficient
  double c_v = 30.0;   // profile-distance coefficient (1/F unit)
  double t_b = 1e-6;   // replicator convergence threshold
  double delta = 1e-5; // support membership threshold
  int max_iter = 10000;
};

/// Band clusters, per-band selection scores and the chosen representative
/// of each cluster.
struct SelectionResult {
  std::vector<VertexSubset> clusters;  // partition of {0..L-1}, extraction order
  std::vector<double> eta;             // score of each band within its own cluster
  std::vector<int> selected;           // one band per cluster
};

/// Sample Pearson correlation; 0 by convention when either input has zero
/// variance.
double pearson_correlation(std::span<const double> f, std::span<const double> g);

/// Similarity of two bands given their F-profile correlation and mean
/// absolute profile difference:
/// exp(-c_b * (1 - corr)) * exp(-c_v * mean_abs_diff).
double band_pair_similarity(double correlation, double mean_abs_diff,
                            const BandSimilarityParams& params);

/// L x L band similarity from the stage-1 per-class F profiles.
SimilarityMatrix band_similarity_matrix(const std::vector<BandPerformance>& perf,
                                        const BandSimilarityParams& params);

/// Peel-off clustering of bands over band_similarity_matrix.
std::vector<VertexSubset> cluster_bands(const std::vector<BandPerformance>& perf,
                                        const BandSimilarityParams& params);

/// Selection score of band l inside cluster z:
/// eta = F_tot(l) * sum_{j in D_z} w_b(l, j).
double band_score(int band, int cluster_index, const std::vector<BandPerformance>& perf,
                  const SimilarityMatrix& w_b, const std::vector<VertexSubset>& clusters);

/// Full stage 2: cluster the bands and pick the highest-scoring band of each
/// cluster (ties go to the lowest band index).
SelectionResult select_bands(const std::vector<BandPerformance>& perf,
                             const BandSimilarityParams& params);

}  // namespace dsbs
