#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "dsbs/similarity_matrix.hpp"

namespace dsbs {

/// Set of vertex ids, kept sorted ascending with no duplicates.
using VertexSubset = std::vector<int>;

/// Disjoint vertex subsets covering all vertices, in extraction order.
using Clustering = std::vector<VertexSubset>;

/// Nonnegative weights over the vertices summing to 1.
using CharacteristicVector = std::vector<double>;

/// The subset-weight recursion is exponential in |S|; these functions exist
/// as a ground-truth oracle for small graphs, not as a clustering path.
inline constexpr int kOracleSubsetCap = 12;

/// Thrown when the replicator quotient x'Wx is not positive, i.e. the
/// active vertices carry no similarity mass. Callers treat each remaining
/// vertex as its own cluster.
struct DegenerateGraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Average weighted degree of i with respect to s: (1/|s|) * sum_{j in s} w(i,j).
double average_weighted_degree(const SimilarityMatrix& w, const VertexSubset& s, int i);

/// Similarity of external vertex j to i in s, relative to i's average degree
/// in s: w(i,j) - average_weighted_degree(w, s, i).
double relative_similarity(const SimilarityMatrix& w, const VertexSubset& s, int i, int j);

/// Recursive subset weight a_S(i): 1 for singletons, otherwise the
/// relative-similarity-weighted sum over S\{i}. Memoized over subsets;
/// refuses |s| > cap with std::length_error.
double subset_weight(const SimilarityMatrix& w, const VertexSubset& s, int i,
                     int cap = kOracleSubsetCap);

/// Total subset weight A(S) = sum_{i in S} a_S(i).
double total_weight(const SimilarityMatrix& w, const VertexSubset& s,
                    int cap = kOracleSubsetCap);

struct DominanceResult {
  /// A(U) > 0 held for every non-empty U subseteq s. When false the
  /// dominance conditions are not evaluated and `dominant` stays false.
  bool precondition_ok = false;
  bool dominant = false;
  explicit operator bool() const { return precondition_ok && dominant; }
};

/// Dominance test: a_S(i) > tol for every internal vertex and
/// a_{S u {i}}(i) < -tol for every external vertex. Requires |s| and |s|+1
/// within the oracle cap.
DominanceResult is_dominant(const SimilarityMatrix& w, const VertexSubset& s, double tol,
                            int cap = kOracleSubsetCap);

/// Uniform vector 1/n, the normalized form of the all-ones start.
CharacteristicVector uniform_characteristic_vector(int n);

/// One replicator update x_i' = x_i (Wx)_i / (x'Wx). Preserves the simplex;
/// throws DegenerateGraphError when x'Wx <= 0.
CharacteristicVector replicator_step(const SimilarityMatrix& w, const CharacteristicVector& x);

using ReplicatorObserver = std::function<void(int iter, const CharacteristicVector& x)>;

/// Iterates replicator_step until max_i |x_i(t+1) - x_i(t)| <= th or
/// max_iter steps. The observer, when given, sees x after every step.
CharacteristicVector run_replicator(const SimilarityMatrix& w, CharacteristicVector x0, double th,
                                    int max_iter, const ReplicatorObserver& observer = {});

/// Support of a converged vector: {i : x_i > delta}, falling back to the
/// lowest-index argmax when the threshold empties it.
VertexSubset extract_support(const CharacteristicVector& x, double delta);

/// Peel-off clustering: run the replicator from a uniform start on the
/// unclustered vertices, extract the support as a cluster, remove it and
/// repeat. A degenerate remainder becomes singleton clusters.
Clustering peel_clustering(const SimilarityMatrix& w, double th, double delta, int max_iter);

}  // namespace dsbs
