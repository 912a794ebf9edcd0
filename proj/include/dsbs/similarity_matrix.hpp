#pragma once

#include <span>
#include <vector>

namespace dsbs {

/// Symmetric nonnegative pairwise-similarity matrix with a zero diagonal:
/// the edge-weight matrix of an undirected graph without self-loops.
/// Entries lie in [0, 1]; a zero entry means the vertex pair is unconnected.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;

  /// n x n matrix of zeros (the fully disconnected graph).
  explicit SimilarityMatrix(int n);

  /// Takes ownership of row-major dense storage and validates every
  /// invariant (shape, symmetry, zero diagonal, range, finiteness).
  SimilarityMatrix(int n, std::vector<double> dense);

  int size() const { return n_; }

  double operator()(int i, int j) const {
    return w_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
              static_cast<std::size_t>(j)];
  }

  /// Symmetric write of w(i,j) = w(j,i) = v. Rejects diagonal writes with
  /// v != 0 and values outside [0, 1].
  void set(int i, int j, double v);

  std::span<const double> row(int i) const {
    return {w_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_),
            static_cast<std::size_t>(n_)};
  }

  /// Principal submatrix over `keep` (indices must be valid and distinct).
  SimilarityMatrix submatrix(std::span<const int> keep) const;

  const std::vector<double>& data() const { return w_; }

 private:
  void check_index(int i, int j) const;

  int n_ = 0;
  std::vector<double> w_;
};

}  // namespace dsbs
