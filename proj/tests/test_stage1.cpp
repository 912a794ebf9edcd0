#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "dsbs/hsi.hpp"
#include "dsbs/stage1.hpp"
#include "oracles.hpp"

using namespace dsbs;

namespace {

// Partition built directly from (row, col, label) triples and band-major
// spectra, bypassing cube extraction.
Partition make_partition(const std::vector<PartitionPixel>& pixels,
                         const std::vector<std::vector<double>>& bands) {
  Partition p;
  p.source_rows = 64;
  p.source_cols = 64;
  p.bands = static_cast<int>(bands.size());
  p.pixels = pixels;
  for (const auto& band : bands) {
    REQUIRE(band.size() == pixels.size());
    p.spectra.insert(p.spectra.end(), band.begin(), band.end());
  }
  return p;
}

std::vector<std::set<int>> to_sets(const std::vector<std::vector<int>>& v) {
  std::vector<std::set<int>> out;
  for (const auto& s : v) out.emplace_back(s.begin(), s.end());
  return out;
}

}  // namespace

TEST_CASE("pixel similarity matrix values") {
  const Partition p = make_partition(
      {{0, 0, 1}, {0, 1, 1}, {2, 0, 2}},
      {{10.0, 10.0, 60.0}});

  SUBCASE("zero coefficients give the complete graph") {
    const SimilarityMatrix w = pixel_similarity_matrix(p, 0, {0.0, 0.0, 1e-6, 1e-5, 100});
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) CHECK(w(i, j) == (i == j ? 0.0 : 1.0));
    }
  }
  SUBCASE("adjacent pixels, equal reflectance, c_d = 0.3") {
    const SimilarityMatrix w = pixel_similarity_matrix(p, 0, {0.3, 0.0, 1e-6, 1e-5, 100});
    CHECK(w(0, 1) == doctest::Approx(std::exp(-0.3)).epsilon(1e-12));
    CHECK(w(0, 1) == doctest::Approx(0.7408).epsilon(1e-4));
  }
  SUBCASE("d = 2, dr = 50, c_d = 0.3, c_s = 0.01") {
    const SimilarityMatrix w = pixel_similarity_matrix(p, 0, {0.3, 0.01, 1e-6, 1e-5, 100});
    CHECK(w(0, 2) == doctest::Approx(std::exp(-1.2) * std::exp(-0.5)).epsilon(1e-12));
    CHECK(w(0, 2) == doctest::Approx(0.1827).epsilon(1e-3));
  }
  SUBCASE("bad inputs") {
    CHECK_THROWS_AS(pixel_similarity_matrix(p, 5, {}), std::invalid_argument);
    CHECK_THROWS_AS(pixel_similarity_matrix(p, 0, {-1.0, 0.0, 1e-6, 1e-5, 100}),
                    std::invalid_argument);
  }
}

TEST_CASE("pixel clustering per band") {
  SUBCASE("two separated blobs of different size") {
    // blob A: 4 pixels near the origin, blob B: 3 pixels far away
    const Partition p = make_partition(
        {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}, {20, 20, 2}, {20, 21, 2}, {21, 20, 2}},
        {{5, 5, 5, 5, 5, 5, 5}});
    const Clustering c = cluster_band_pixels(p, 0, {1.0, 0.0, 1e-9, 1e-5, 10000});
    REQUIRE(c.size() == 2);
    CHECK(c[0] == VertexSubset{0, 1, 2, 3});
    CHECK(c[1] == VertexSubset{4, 5, 6});
  }
  SUBCASE("single pixel") {
    const Partition p = make_partition({{0, 0, 1}}, {{1.0}});
    CHECK(cluster_band_pixels(p, 0, {}) == Clustering{{0}});
  }
  SUBCASE("uniform reflectance with no spatial term is one cluster") {
    const Partition p = make_partition({{0, 0, 1}, {5, 0, 1}, {9, 3, 2}, {2, 7, 2}},
                                       {{3.5, 3.5, 3.5, 3.5}});
    const Clustering c = cluster_band_pixels(p, 0, {0.0, 1.0, 1e-6, 1e-5, 1000});
    REQUIRE(c.size() == 1);
    CHECK(c[0] == VertexSubset{0, 1, 2, 3});
  }
}

TEST_CASE("cluster class assignment") {
  const Partition p = make_partition(
      {{0, 0, 1}, {0, 1, 1}, {0, 2, 2}, {1, 0, 1}, {1, 1, 2}, {2, 0, 3}, {2, 1, 3}, {2, 2, 3}},
      {{0, 0, 0, 0, 0, 0, 0, 0}});

  const std::vector<int> classes =
      assign_clusters_to_classes({{0, 1, 2}, {3, 4}, {5, 6, 7}}, p);
  CHECK(classes == std::vector<int>{1, 1, 3});  // majority, tie to lowest, unanimous
}

TEST_CASE("f_pair") {
  CHECK(f_pair({1, 2, 3}, {1, 2, 3}) == 1.0);
  CHECK(f_pair({1, 2}, {3, 4}) == 0.0);
  CHECK(f_pair({1, 2, 3}, {1, 2, 3, 4}) == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  CHECK_THROWS_AS(f_pair({}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(f_pair({1}, {}), std::invalid_argument);

  // harmonic-mean symmetry: swapping the sets swaps Re and Pr only
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> a, b;
    for (int i = 0; i < 12; ++i) {
      if (rng.below(2)) a.push_back(i);
      if (rng.below(2)) b.push_back(i);
    }
    if (a.empty() || b.empty()) continue;
    const double fab = f_pair(a, b);
    CHECK(fab == f_pair(b, a));
    CHECK(fab >= 0.0);
    CHECK(fab <= 1.0);
  }
}

TEST_CASE("f_measure") {
  SUBCASE("perfect clustering") {
    CHECK(f_measure({{0, 1, 2}, {3, 4}}, {{0, 1, 2}, {3, 4}}) == 1.0);
  }
  SUBCASE("classes {3,1} merged into one cluster") {
    const double f = f_measure({{0, 1, 2}, {3}}, {{0, 1, 2, 3}});
    CHECK(f == doctest::Approx(26.0 / 35.0).epsilon(1e-12));
  }
  SUBCASE("all singletons against one class") {
    for (int n : {2, 5, 9}) {
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      Clustering singletons;
      for (int i = 0; i < n; ++i) singletons.push_back({i});
      CHECK(f_measure({all}, singletons) == doctest::Approx(2.0 / (n + 1)).epsilon(1e-12));
    }
  }
  SUBCASE("empty ground truth") {
    CHECK_THROWS_AS(f_measure({}, {{0}}), std::invalid_argument);
  }
  SUBCASE("invariant under cluster reordering") {
    const std::vector<std::vector<int>> gt{{0, 1, 4}, {2, 3}, {5, 6, 7}};
    const Clustering dt{{0, 1}, {2, 3, 4}, {5}, {6, 7}};
    Clustering shuffled{{6, 7}, {5}, {0, 1}, {2, 3, 4}};
    CHECK(f_measure(gt, dt) == f_measure(gt, shuffled));
  }
}

TEST_CASE("per-class F") {
  SUBCASE("perfect clustering gives 1 for every class") {
    const std::vector<std::vector<int>> gt{{0, 1}, {2, 3, 4}};
    for (int i = 0; i < 2; ++i) CHECK(per_class_f(gt, {{0, 1}, {2, 3, 4}}, i) == 1.0);
  }
  SUBCASE("class inside a cluster twice its size") {
    CHECK(per_class_f({{0, 1, 2}}, {{0, 1, 2, 3, 4, 5}}, 0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("class split evenly across two pure clusters") {
    CHECK(per_class_f({{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, 0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("absent class") {
    CHECK_THROWS_AS(per_class_f({{0, 1}}, {{0, 1}}, 2), std::invalid_argument);
  }
}

TEST_CASE("f values agree with the brute-force oracle") {
  Rng rng(314);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.below(19);
    const auto gt_sets = oracles::random_partition(n, 4, rng);
    const auto dt_sets = oracles::random_partition(n, 5, rng);

    std::vector<std::vector<int>> gt, dt;
    for (const auto& s : gt_sets) gt.emplace_back(s.begin(), s.end());
    for (const auto& s : dt_sets) dt.emplace_back(s.begin(), s.end());

    CHECK(f_measure(gt, dt) ==
          doctest::Approx(oracles::brute_f_measure(gt_sets, dt_sets)).epsilon(1e-12));
    for (std::size_t i = 0; i < gt.size(); ++i) {
      CHECK(per_class_f(gt, dt, static_cast<int>(i)) ==
            doctest::Approx(oracles::brute_per_class_f(gt_sets[i], dt_sets)).epsilon(1e-12));
    }
  }
}

TEST_CASE("band evaluation end to end") {
  SyntheticSpec spec;
  spec.classes = 2;
  spec.bands = 3;
  spec.rows = 10;
  spec.cols = 6;
  spec.informative_bands = {1};
  spec.sigma = 0.05;
  spec.seed = 11;
  const auto [cube, gt] = generate_synthetic(spec);
  const Partition p = extract_partition(cube, gt, {}, {}, 1000, 3);

  const PixelSimilarityParams params{0.0, 5.0, 1e-6, 1e-5, 10000};
  const auto perf = evaluate_all_bands(p, params, 2);
  REQUIRE(perf.size() == 3);
  for (const auto& bp : perf) {
    REQUIRE(bp.per_class_f.size() == 2);
    double mean = (bp.per_class_f[0] + bp.per_class_f[1]) / 2.0;
    CHECK(bp.f_tot == doctest::Approx(mean).epsilon(1e-12));
    for (double f : bp.per_class_f) {
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
    }
  }
  // the informative band must outscore both noise bands
  CHECK(perf[1].f_tot > perf[0].f_tot);
  CHECK(perf[1].f_tot > perf[2].f_tot);

  SUBCASE("deterministic and thread-count independent") {
    const auto serial = evaluate_all_bands(p, params, 1);
    for (int b = 0; b < 3; ++b) {
      CHECK(serial[b].f_tot == perf[b].f_tot);
      CHECK(serial[b].per_class_f == perf[b].per_class_f);
    }
  }
}

TEST_CASE("single band and single class edge cases") {
  const Partition one_band = make_partition({{0, 0, 1}, {0, 1, 1}, {3, 3, 2}},
                                            {{1.0, 1.0, 9.0}});
  const auto perf = evaluate_all_bands(one_band, {0.0, 1.0, 1e-6, 1e-5, 1000});
  CHECK(perf.size() == 1);

  const Partition one_class = make_partition({{0, 0, 1}, {0, 1, 1}, {3, 3, 1}},
                                             {{1.0, 1.0, 9.0}});
  const auto single = evaluate_all_bands(one_class, {0.0, 1.0, 1e-6, 1e-5, 1000});
  REQUIRE(single[0].per_class_f.size() == 1);
  CHECK(single[0].f_tot == single[0].per_class_f[0]);
}

TEST_CASE("constant reflectance offset leaves the band evaluation unchanged") {
  SyntheticSpec spec;
  spec.classes = 2;
  spec.bands = 2;
  spec.rows = 8;
  spec.cols = 5;
  spec.informative_bands = {0};
  spec.sigma = 0.05;
  spec.seed = 23;
  const auto [cube, gt] = generate_synthetic(spec);
  const Partition p = extract_partition(cube, gt, {}, {}, 1000, 3);

  Partition shifted = p;
  for (int i = 0; i < p.size(); ++i) {
    shifted.spectra[static_cast<std::size_t>(i)] += 2.0;  // exact in double for f32 inputs
  }

  const PixelSimilarityParams params{0.1, 3.0, 1e-6, 1e-5, 10000};
  const SimilarityMatrix wa = pixel_similarity_matrix(p, 0, params);
  const SimilarityMatrix wb = pixel_similarity_matrix(shifted, 0, params);
  CHECK(wa.data() == wb.data());

  const BandEvaluation ea = evaluate_band(p, 0, params);
  const BandEvaluation eb = evaluate_band(shifted, 0, params);
  CHECK(ea.performance.per_class_f == eb.performance.per_class_f);
  CHECK(ea.performance.f_tot == eb.performance.f_tot);
  CHECK(ea.clustering == eb.clustering);
}

TEST_CASE("spectral coefficient rescaling") {
  CHECK(rescaled_spectral_coefficient(0.01, 200.0, 100.0) == doctest::Approx(0.02));
  CHECK(rescaled_spectral_coefficient(0.01, 100.0, 200.0) == doctest::Approx(0.005));
  CHECK_THROWS_AS(rescaled_spectral_coefficient(0.01, 0.0, 1.0), std::invalid_argument);
}
