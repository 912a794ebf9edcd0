#pragma once

#include <string>

#include "dsbs/run_config.hpp"

namespace dsbs {

/// Stage-1 driver: writes <out>/band_scores.csv with one row per band
/// (band_index, f_class_<label>..., f_tot).
void cmd_score_bands(const RunConfig& config);

/// Full selection pipeline: writes <out>/selection.json and, when
/// emit_cube is set, <out>/reduced.bsq + <out>/reduced.hdr.json holding the
/// whole image restricted to the selected bands.
void cmd_select(const RunConfig& config);

/// Runs one baseline ("cbs" or "sfs") and writes <out>/selection.json with
/// the stage-2 schema plus the method trace. CBS requires k in the config.
void cmd_baseline(const RunConfig& config, const std::string& method);

/// Comparison protocol: selects bands with every configured method, sweeps
/// training sizes on identical splits, and writes <out>/report.csv,
/// <out>/report.svg and <out>/selections.json.
void cmd_compare(const RunConfig& config);

/// Generates a synthetic cube triplet <prefix>.bsq/.hdr.json/.gt.txt.
void cmd_synth(const std::string& spec_path, const std::string& out_prefix);

/// Debug dump of the first replicator run on the given band's pixel
/// similarity matrix: <out>/replicator_trace.csv with columns
/// iter,x_0..x_{K-1}.
void cmd_replicator_trace(const RunConfig& config, int band);

}  // namespace dsbs
