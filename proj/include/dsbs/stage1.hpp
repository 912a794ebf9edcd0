#pragma once

#include <vector>

#include "dsbs/dominant_sets.hpp"
#include "dsbs/hsi.hpp"
#include "dsbs/similarity_matrix.hpp"

namespace dsbs {

struct PixelSimilarityParams {
  double c_d = 0.3;    // spatial coefficient (1/pixel^2)
  double c_s = 0.01;   // spectral coefficient (1/reflectance unit)
  double th = 1e-6;    // replicator convergence threshold (L-infinity)
  double delta = 1e-5; // support membership threshold
  int max_iter = 10000;
};

/// Per-band result of stage 1: one F value per class present in the
/// partition (ascending label order) and their mean.
struct BandPerformance {
  std::vector<double> per_class_f;
  double f_tot = 0.0;
};

struct BandEvaluation {
  Clustering clustering;
  std::vector<int> cluster_class;  // majority label per cluster
  BandPerformance performance;
};

/// K x K pixel similarity for one band:
/// w(i,j) = exp(-c_d * d_ij^2) * exp(-c_s * |r(i) - r(j)|), zero diagonal,
/// with d_ij the Euclidean distance between original image coordinates.
SimilarityMatrix pixel_similarity_matrix(const Partition& partition, int band,
                                         const PixelSimilarityParams& params);

/// Peel-off clustering of the band's pixels.
Clustering cluster_band_pixels(const Partition& partition, int band,
                               const PixelSimilarityParams& params);

/// Majority ground-truth label per cluster; ties go to the lowest label.
std::vector<int> assign_clusters_to_classes(const Clustering& clustering,
                                            const Partition& partition);

/// Harmonic mean of recall and precision between a ground-truth class and a
/// cluster, both given as pixel-index sets; 0 when they do not overlap.
double f_pair(const std::vector<int>& gt_set, const std::vector<int>& dt_set);

/// Size-weighted best-match F over all classes:
/// F = (1/Z) * sum_i |C_i| * max_j f(C_i, D_j), Z = sum_i |C_i|.
double f_measure(const std::vector<std::vector<int>>& gt, const Clustering& dt);

/// Single-class restriction of the F-measure: max_j f(C_i, D_j).
double per_class_f(const std::vector<std::vector<int>>& gt, const Clustering& dt, int class_index);

/// Pixel-index sets per class present in the partition, ascending label
/// order (parallel to Partition::class_labels()).
std::vector<std::vector<int>> ground_truth_sets(const Partition& partition);

/// Full stage-1 pipeline for one band: cluster, assign, score.
BandEvaluation evaluate_band(const Partition& partition, int band,
                             const PixelSimilarityParams& params);

/// Stage 1 over every band; band evaluations are independent and run on up
/// to `threads` workers, collected in band order.
std::vector<BandPerformance> evaluate_all_bands(const Partition& partition,
                                                const PixelSimilarityParams& params,
                                                int threads = 1);

/// Spectral coefficient carried from a reference dataset to a target one,
/// scaled by the ratio of mean reflectances so c_s * |dr| keeps its scale.
double rescaled_spectral_coefficient(double c_s, double reference_mean, double target_mean);

}  // namespace dsbs
