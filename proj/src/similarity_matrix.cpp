#include "dsbs/similarity_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dsbs {

SimilarityMatrix::SimilarityMatrix(int n) {
  if (n < 0) throw std::invalid_argument("similarity matrix size must be nonnegative");
  n_ = n;
  w_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
}

SimilarityMatrix::SimilarityMatrix(int n, std::vector<double> dense) {
  if (n < 0) throw std::invalid_argument("similarity matrix size must be nonnegative");
  if (dense.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("similarity matrix storage does not match size " +
                                std::to_string(n));
  }
  n_ = n;
  w_ = std::move(dense);
  const auto at = [&](int i, int j) {
    return w_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
              static_cast<std::size_t>(j)];
  };
  for (int i = 0; i < n_; ++i) {
    if (at(i, i) != 0.0) {
      throw std::invalid_argument("similarity matrix diagonal must be zero at " +
                                  std::to_string(i));
    }
    for (int j = i + 1; j < n_; ++j) {
      const double v = at(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw std::invalid_argument("similarity out of [0,1] at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      }
      if (v != at(j, i)) {
        throw std::invalid_argument("similarity matrix not symmetric at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
      }
    }
  }
}

void SimilarityMatrix::check_index(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw std::out_of_range("similarity matrix index (" + std::to_string(i) + "," +
                            std::to_string(j) + ") out of range for n=" + std::to_string(n_));
  }
}

void SimilarityMatrix::set(int i, int j, double v) {
  check_index(i, j);
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw std::invalid_argument("similarity value must be finite and in [0,1]");
  }
  if (i == j) {
    if (v != 0.0) throw std::invalid_argument("similarity matrix diagonal must stay zero");
    return;
  }
  w_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] = v;
  w_[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)] = v;
}

SimilarityMatrix SimilarityMatrix::submatrix(std::span<const int> keep) const {
  const int m = static_cast<int>(keep.size());
  SimilarityMatrix out(m);
  for (int a = 0; a < m; ++a) {
    check_index(keep[static_cast<std::size_t>(a)], 0);
    const auto src = row(keep[static_cast<std::size_t>(a)]);
    for (int b = 0; b < m; ++b) {
      out.w_[static_cast<std::size_t>(a) * static_cast<std::size_t>(m) +
             static_cast<std::size_t>(b)] = src[static_cast<std::size_t>(keep[static_cast<std::size_t>(b)])];
    }
  }
  return out;
}

}  // namespace dsbs
