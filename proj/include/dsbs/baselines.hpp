#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsbs/evaluation.hpp"
#include "dsbs/hsi.hpp"

namespace dsbs {

struct BaselineTraceStep {
  int band = 0;
  double criterion = 0.0;  // CBS: worst |corr| against the set; SFS: accuracy
};

struct BaselineResult {
  std::string method;
  std::vector<int> selected;  // selection order
  std::vector<BaselineTraceStep> trace;
};

/// Correlation band selection: seed with the band pair of minimum absolute
/// Pearson correlation over the partition's pixel spectra, then repeatedly
/// add the band whose worst |correlation| against the selected set is
/// smallest, until k bands are chosen. Ties go to the lowest band index.
BaselineResult cbs_select(const Partition& partition, int k);

/// Sequential forward selection: greedily add the band that maximizes
/// held-out accuracy on a fixed seeded 50/50 stratified split of the
/// partition. After the mandatory first band, a band is accepted only while
/// the accuracy gain exceeds min_gain; stops at max_k bands.
BaselineResult sfs_select(const Partition& partition, const ClassifierSpec& classifier,
                          std::uint64_t seed, int max_k, double min_gain);

}  // namespace dsbs
