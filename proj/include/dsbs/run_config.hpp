#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dsbs/evaluation.hpp"
#include "dsbs/hsi.hpp"
#include "dsbs/stage1.hpp"
#include "dsbs/stage2.hpp"

namespace dsbs {

/// Resolved run settings: a flat key=value config file plus command-line
/// overrides. A seed is mandatory; nothing falls back to wall-clock state.
struct RunConfig {
  std::string cube_path;
  std::string header_path;
  std::string gt_path;
  std::string out_dir = ".";

  Region region;            // full image unless set
  std::set<int> classes;    // empty = every labeled class
  int max_pixels = 2000;

  PixelSimilarityParams stage1;
  double cs_ref_mean = 0.0;  // > 0 rescales c_s by reference/target mean reflectance

  BandSimilarityParams stage2;

  int cbs_k = 0;            // 0 = match the dsbs cluster count
  int sfs_max_k = 0;        // 0 = all bands
  double sfs_min_gain = 0.0;

  std::vector<int> n_train = {5, 10, 20};
  int repetitions = 20;
  ClassifierSpec classifier;
  std::vector<std::string> methods = {"dsbs", "cbs", "sfs"};

  bool has_seed = false;
  std::uint64_t seed = 0;
  int threads = 0;          // 0 = hardware concurrency
  bool emit_cube = false;
};

/// Parses one `key=value` assignment (file line or --set override).
void apply_config_override(RunConfig& config, const std::string& key, const std::string& value);

RunConfig load_run_config(const std::string& path);

/// Requires the seed and whatever paths the command needs to be set.
void require_seed(const RunConfig& config);

/// Sorted key=value pairs of the resolved config, echoed into artifacts.
/// Excludes `threads`, which does not affect results.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& config);

std::string classifier_to_string(const ClassifierSpec& spec);
ClassifierSpec classifier_from_string(const std::string& text);

}  // namespace dsbs
