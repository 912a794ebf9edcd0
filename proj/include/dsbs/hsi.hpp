#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dsbs {

/// L-band reflectance volume, band-sequential storage (band, row, col).
struct HyperCube {
  int bands = 0;
  int rows = 0;
  int cols = 0;
  std::vector<float> data;

  float at(int band, int row, int col) const {
    return data[(static_cast<std::size_t>(band) * static_cast<std::size_t>(rows) +
                 static_cast<std::size_t>(row)) * static_cast<std::size_t>(cols) +
                static_cast<std::size_t>(col)];
  }
  float& at(int band, int row, int col) {
    return data[(static_cast<std::size_t>(band) * static_cast<std::size_t>(rows) +
                 static_cast<std::size_t>(row)) * static_cast<std::size_t>(cols) +
                static_cast<std::size_t>(col)];
  }
};

/// Integer class-label grid; label 0 marks unclassified pixels.
struct GroundTruth {
  int rows = 0;
  int cols = 0;
  std::vector<int> labels;
  int num_classes = 0;  // highest label present

  int at(int row, int col) const {
    return labels[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(col)];
  }
};

struct PartitionPixel {
  int row = 0;
  int col = 0;
  int label = 0;  // always >= 1
};

/// Labeled pixel subset of a cube together with its spectra, the working set
/// both selection stages and the evaluation harness operate on. Spectra are
/// stored band-major so per-band access is contiguous.
struct Partition {
  int source_rows = 0;
  int source_cols = 0;
  int bands = 0;
  std::vector<PartitionPixel> pixels;
  std::vector<double> spectra;  // bands x K

  int size() const { return static_cast<int>(pixels.size()); }

  double reflectance(int band, int pixel) const {
    return spectra[static_cast<std::size_t>(band) * pixels.size() +
                   static_cast<std::size_t>(pixel)];
  }

  std::span<const double> band(int b) const {
    return {spectra.data() + static_cast<std::size_t>(b) * pixels.size(), pixels.size()};
  }

  /// Distinct labels present, ascending.
  std::vector<int> class_labels() const;
};

/// Rectangle in image coordinates; rows < 0 selects the full image.
struct Region {
  int row0 = 0;
  int col0 = 0;
  int rows = -1;
  int cols = -1;
};

struct SyntheticSpec {
  int classes = 0;
  int bands = 0;
  int rows = 0;
  int cols = 0;
  std::vector<int> informative_bands;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Reads a raw band-sequential cube of 32-bit little-endian floats described
/// by a JSON sidecar header (keys: bands, rows, cols, dtype, interleave).
HyperCube load_cube(const std::string& data_path, const std::string& header_path);

void save_cube(const HyperCube& cube, const std::string& data_path,
               const std::string& header_path);

/// ASCII grid of rows x cols nonnegative integers; class count = max label.
GroundTruth load_ground_truth(const std::string& path, int rows, int cols);

void save_ground_truth(const GroundTruth& gt, const std::string& path);

/// Collects the labeled pixels of `region` whose class is in `classes`
/// (empty set = every class). When more than max_pixels qualify, subsamples
/// per class with largest-remainder targets so class proportions survive
/// within one pixel. Pixel order is the image scan order.
Partition extract_partition(const HyperCube& cube, const GroundTruth& gt, const Region& region,
                            const std::set<int>& classes, int max_pixels, std::uint64_t seed);

/// Desk-scale test cube: P contiguous class stripes whose mean spectra agree
/// everywhere except on the informative bands, where class means are spaced
/// by max(5*sigma, 1), plus iid Gaussian noise of the given sigma.
std::pair<HyperCube, GroundTruth> generate_synthetic(const SyntheticSpec& spec);

SyntheticSpec load_synthetic_spec(const std::string& path);

/// New cube keeping only the listed bands, in the given order.
HyperCube reduce_bands(const HyperCube& cube, const std::vector<int>& bands);

double mean_reflectance(const Partition& partition);

}  // namespace dsbs
