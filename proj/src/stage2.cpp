#include "dsbs/stage2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dsbs {

namespace {

void check_params(const BandSimilarityParams& p) {
  if (p.c_b < 0.0 || p.c_v < 0.0) {
    throw std::invalid_argument("band similarity coefficients must be nonnegative");
  }
  if (!(p.t_b > 0.0) || !(p.delta > 0.0) || p.max_iter < 1) {
    throw std::invalid_argument("replicator parameters must be positive");
  }
}

void check_profiles(const std::vector<BandPerformance>& perf) {
  if (perf.empty()) throw std::invalid_argument("no band performances given");
  const std::size_t p = perf.front().per_class_f.size();
  if (p == 0) throw std::invalid_argument("band performances have no classes");
  for (const auto& bp : perf) {
    if (bp.per_class_f.size() != p) {
      throw std::invalid_argument("band performances have inconsistent class counts");
    }
  }
}

}  // namespace

double pearson_correlation(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) {
    throw std::invalid_argument("correlation inputs must have equal length");
  }
  if (f.empty()) throw std::invalid_argument("correlation inputs must be non-empty");

  // zero variance means an exactly constant signal; rounding in the mean
  // would otherwise leave a spurious residual variance
  const auto constant = [](std::span<const double> v) {
    for (double x : v) {
      if (x != v[0]) return false;
    }
    return true;
  };
  if (constant(f) || constant(g)) return 0.0;

  const double n = static_cast<double>(f.size());
  double mf = 0.0, mg = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mf += f[i];
    mg += g[i];
  }
  mf /= n;
  mg /= n;

  double sff = 0.0, sgg = 0.0, sfg = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double df = f[i] - mf;
    const double dg = g[i] - mg;
    sff += df * df;
    sgg += dg * dg;
    sfg += df * dg;
  }
  if (sff <= 0.0 || sgg <= 0.0) return 0.0;  // flat profile carries no co-variation
  return std::clamp(sfg / std::sqrt(sff * sgg), -1.0, 1.0);
}

double band_pair_similarity(double correlation, double mean_abs_diff,
                            const BandSimilarityParams& params) {
  check_params(params);
  return std::exp(-params.c_b * (1.0 - correlation)) * std::exp(-params.c_v * mean_abs_diff);
}

SimilarityMatrix band_similarity_matrix(const std::vector<BandPerformance>& perf,
                                        const BandSimilarityParams& params) {
  check_params(params);
  check_profiles(perf);
  const int l = static_cast<int>(perf.size());
  if (l < 2) throw std::invalid_argument("band similarity needs at least 2 bands");
  const std::size_t p = perf.front().per_class_f.size();

  SimilarityMatrix w(l);
  for (int i = 0; i < l; ++i) {
    const auto& fi = perf[static_cast<std::size_t>(i)].per_class_f;
    for (int j = i + 1; j < l; ++j) {
      const auto& fj = perf[static_cast<std::size_t>(j)].per_class_f;
      const double corr = pearson_correlation(fi, fj);
      double mad = 0.0;
      for (std::size_t c = 0; c < p; ++c) mad += std::abs(fi[c] - fj[c]);
      mad /= static_cast<double>(p);
      w.set(i, j, band_pair_similarity(corr, mad, params));
    }
  }
  return w;
}

std::vector<VertexSubset> cluster_bands(const std::vector<BandPerformance>& perf,
                                        const BandSimilarityParams& params) {
  check_params(params);
  check_profiles(perf);
  if (perf.size() == 1) return {{0}};
  const SimilarityMatrix w = band_similarity_matrix(perf, params);
  return peel_clustering(w, params.t_b, params.delta, params.max_iter);
}

double band_score(int band, int cluster_index, const std::vector<BandPerformance>& perf,
                  const SimilarityMatrix& w_b, const std::vector<VertexSubset>& clusters) {
  if (cluster_index < 0 || cluster_index >= static_cast<int>(clusters.size())) {
    throw std::invalid_argument("cluster index " + std::to_string(cluster_index) + " out of range");
  }
  const auto& cluster = clusters[static_cast<std::size_t>(cluster_index)];
  if (!std::binary_search(cluster.begin(), cluster.end(), band)) {
    throw std::invalid_argument("band " + std::to_string(band) + " is not in cluster " +
                                std::to_string(cluster_index));
  }
  double sim = 0.0;
  for (int j : cluster) sim += w_b(band, j);  // the diagonal term contributes 0
  return perf[static_cast<std::size_t>(band)].f_tot * sim;
}

SelectionResult select_bands(const std::vector<BandPerformance>& perf,
                             const BandSimilarityParams& params) {
  check_params(params);
  check_profiles(perf);

  SelectionResult result;
  const int l = static_cast<int>(perf.size());
  if (l == 1) {
    result.clusters = {{0}};
    result.eta = {0.0};
    result.selected = {0};
    return result;
  }

  const SimilarityMatrix w_b = band_similarity_matrix(perf, params);
  result.clusters = peel_clustering(w_b, params.t_b, params.delta, params.max_iter);
  result.eta.assign(static_cast<std::size_t>(l), 0.0);
  for (int z = 0; z < static_cast<int>(result.clusters.size()); ++z) {
    const auto& cluster = result.clusters[static_cast<std::size_t>(z)];
    int best_band = -1;
    double best_eta = -1.0;
    for (int band : cluster) {
      const double eta = band_score(band, z, perf, w_b, result.clusters);
      result.eta[static_cast<std::size_t>(band)] = eta;
      if (eta > best_eta) {  // strict: ties keep the lowest band index
        best_eta = eta;
        best_band = band;
      }
    }
    result.selected.push_back(best_band);
  }
  return result;
}

}  // namespace dsbs
