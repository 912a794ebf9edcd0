#include "dsbs/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "dsbs/baselines.hpp"
#include "dsbs/dominant_sets.hpp"
#include "dsbs/rng.hpp"

namespace dsbs {

namespace {

// Salts for deriving independent sub-seeds from the one configured seed.
constexpr std::uint64_t kSeedSubsample = 0xA1;
constexpr std::uint64_t kSeedSfs = 0xB2;
constexpr std::uint64_t kSeedCurves = 0xC3;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Inputs {
  HyperCube cube;
  GroundTruth gt;
  Partition partition;
};

Inputs load_inputs(const RunConfig& config) {
  require_seed(config);
  if (config.cube_path.empty() || config.header_path.empty() || config.gt_path.empty()) {
    throw std::invalid_argument("cube, header and gt paths are all required");
  }
  Inputs in;
  in.cube = load_cube(config.cube_path, config.header_path);
  in.gt = load_ground_truth(config.gt_path, in.cube.rows, in.cube.cols);
  in.partition = extract_partition(in.cube, in.gt, config.region, config.classes,
                                   config.max_pixels, Rng::mix(config.seed, kSeedSubsample));
  return in;
}

PixelSimilarityParams effective_stage1(const RunConfig& config, const Partition& partition) {
  PixelSimilarityParams params = config.stage1;
  if (config.cs_ref_mean > 0.0) {
    params.c_s = rescaled_spectral_coefficient(params.c_s, config.cs_ref_mean,
                                               mean_reflectance(partition));
  }
  return params;
}

nlohmann::json params_json(const RunConfig& config) {
  nlohmann::json params;
  for (const auto& [key, value] : config_echo(config)) params[key] = value;
  return params;
}

nlohmann::json selection_json(const SelectionResult& selection) {
  nlohmann::json j;
  j["clusters"] = selection.clusters;
  j["eta"] = selection.eta;
  j["selected"] = selection.selected;
  return j;
}

nlohmann::json baseline_json(const BaselineResult& baseline) {
  nlohmann::json j;
  j["clusters"] = nlohmann::json::array();
  j["eta"] = nlohmann::json::array();
  j["selected"] = baseline.selected;
  j["method"] = baseline.method;
  auto trace = nlohmann::json::array();
  for (const auto& step : baseline.trace) {
    trace.push_back({{"band", step.band}, {"criterion", step.criterion}});
  }
  j["trace"] = trace;
  return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("short write on " + path);
}

void ensure_out_dir(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
}

// Band sets per configured method. CBS follows the dsbs cluster count unless
// k is set explicitly; SFS picks its own size.
struct MethodSelections {
  std::vector<std::pair<std::string, std::vector<int>>> bands;  // config order
  nlohmann::json details = nlohmann::json::object();
};

MethodSelections select_all_methods(const RunConfig& config, const Partition& partition,
                                    const std::vector<BandPerformance>& perf) {
  if (config.methods.empty()) throw std::invalid_argument("no methods configured");
  for (const auto& m : config.methods) {
    if (m != "dsbs" && m != "cbs" && m != "sfs") {
      throw std::invalid_argument("unknown method '" + m + "' (expected dsbs, cbs or sfs)");
    }
  }

  MethodSelections out;
  SelectionResult dsbs_selection;
  bool have_dsbs = false;
  const auto dsbs_bands = [&]() -> const SelectionResult& {
    if (!have_dsbs) {
      dsbs_selection = select_bands(perf, config.stage2);
      have_dsbs = true;
    }
    return dsbs_selection;
  };

  for (const auto& method : config.methods) {
    if (method == "dsbs") {
      const SelectionResult& sel = dsbs_bands();
      std::vector<int> bands = sel.selected;
      std::sort(bands.begin(), bands.end());
      out.bands.emplace_back(method, bands);
      out.details[method] = selection_json(sel);
    } else if (method == "cbs") {
      int k = config.cbs_k;
      if (k <= 0) {
        k = std::max(2, static_cast<int>(dsbs_bands().selected.size()));
        k = std::min(k, partition.bands);
      }
      const BaselineResult cbs = cbs_select(partition, k);
      std::vector<int> bands = cbs.selected;
      std::sort(bands.begin(), bands.end());
      out.bands.emplace_back(method, bands);
      out.details[method] = baseline_json(cbs);
    } else {
      const int max_k = config.sfs_max_k > 0 ? config.sfs_max_k : partition.bands;
      const BaselineResult sfs = sfs_select(partition, config.classifier,
                                            Rng::mix(config.seed, kSeedSfs), max_k,
                                            config.sfs_min_gain);
      std::vector<int> bands = sfs.selected;
      std::sort(bands.begin(), bands.end());
      out.bands.emplace_back(method, bands);
      out.details[method] = baseline_json(sfs);
    }
  }
  return out;
}

}  // namespace

void cmd_score_bands(const RunConfig& config) {
  const Inputs in = load_inputs(config);
  const PixelSimilarityParams params = effective_stage1(config, in.partition);
  const auto perf = evaluate_all_bands(in.partition, params, config.threads);
  const auto labels = in.partition.class_labels();

  ensure_out_dir(config);
  const std::string path =
      (std::filesystem::path(config.out_dir) / "band_scores.csv").string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& [key, value] : config_echo(config)) out << "# " << key << '=' << value << "\n";
  out << "band_index";
  for (int label : labels) out << ",f_class_" << label;
  out << ",f_tot\n";
  for (std::size_t band = 0; band < perf.size(); ++band) {
    out << band;
    for (double f : perf[band].per_class_f) out << ',' << format_double(f);
    out << ',' << format_double(perf[band].f_tot) << "\n";
  }
  if (!out) throw std::runtime_error("short write on " + path);
}

void cmd_select(const RunConfig& config) {
  const Inputs in = load_inputs(config);
  const PixelSimilarityParams params = effective_stage1(config, in.partition);
  const auto perf = evaluate_all_bands(in.partition, params, config.threads);
  const SelectionResult selection = select_bands(perf, config.stage2);

  ensure_out_dir(config);
  nlohmann::json j = selection_json(selection);
  j["params"] = params_json(config);
  write_json(j, (std::filesystem::path(config.out_dir) / "selection.json").string());

  if (config.emit_cube) {
    std::vector<int> bands = selection.selected;
    std::sort(bands.begin(), bands.end());
    const HyperCube reduced = reduce_bands(in.cube, bands);
    save_cube(reduced, (std::filesystem::path(config.out_dir) / "reduced.bsq").string(),
              (std::filesystem::path(config.out_dir) / "reduced.hdr.json").string());
  }
}

void cmd_baseline(const RunConfig& config, const std::string& method) {
  const Inputs in = load_inputs(config);

  BaselineResult result;
  if (method == "cbs") {
    if (config.cbs_k < 2) {
      throw std::invalid_argument("cbs needs k >= 2 (config key 'k' or --k)");
    }
    result = cbs_select(in.partition, config.cbs_k);
  } else if (method == "sfs") {
    const int max_k = config.sfs_max_k > 0 ? config.sfs_max_k : in.partition.bands;
    result = sfs_select(in.partition, config.classifier, Rng::mix(config.seed, kSeedSfs), max_k,
                        config.sfs_min_gain);
  } else {
    throw std::invalid_argument("unknown baseline method '" + method + "'");
  }

  ensure_out_dir(config);
  nlohmann::json j = baseline_json(result);
  j["params"] = params_json(config);
  write_json(j, (std::filesystem::path(config.out_dir) / "selection.json").string());
}

void cmd_compare(const RunConfig& config) {
  const Inputs in = load_inputs(config);
  const PixelSimilarityParams params = effective_stage1(config, in.partition);

  const bool needs_stage1 =
      std::find(config.methods.begin(), config.methods.end(), "dsbs") != config.methods.end() ||
      config.cbs_k <= 0;
  std::vector<BandPerformance> perf;
  if (needs_stage1) perf = evaluate_all_bands(in.partition, params, config.threads);

  const MethodSelections selections = select_all_methods(config, in.partition, perf);

  // one split sequence for every method
  const std::uint64_t curve_seed = Rng::mix(config.seed, kSeedCurves);
  std::vector<NamedCurve> curves;
  for (const auto& [method, bands] : selections.bands) {
    curves.push_back({method, accuracy_curve(in.partition, bands, config.classifier,
                                             config.n_train, config.repetitions, curve_seed,
                                             config.threads)});
  }

  ensure_out_dir(config);
  emit_report(curves, config.out_dir, config_echo(config));

  nlohmann::json j;
  j["selections"] = selections.details;
  j["params"] = params_json(config);
  write_json(j, (std::filesystem::path(config.out_dir) / "selections.json").string());
}

void cmd_synth(const std::string& spec_path, const std::string& out_prefix) {
  const SyntheticSpec spec = load_synthetic_spec(spec_path);
  const auto [cube, gt] = generate_synthetic(spec);
  if (!std::filesystem::path(out_prefix).parent_path().empty()) {
    std::filesystem::create_directories(std::filesystem::path(out_prefix).parent_path());
  }
  save_cube(cube, out_prefix + ".bsq", out_prefix + ".hdr.json");
  save_ground_truth(gt, out_prefix + ".gt.txt");
}

void cmd_replicator_trace(const RunConfig& config, int band) {
  const Inputs in = load_inputs(config);
  const PixelSimilarityParams params = effective_stage1(config, in.partition);
  const SimilarityMatrix w = pixel_similarity_matrix(in.partition, band, params);

  ensure_out_dir(config);
  const std::string path =
      (std::filesystem::path(config.out_dir) / "replicator_trace.csv").string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& [key, value] : config_echo(config)) out << "# " << key << '=' << value << "\n";
  out << "iter";
  for (int i = 0; i < w.size(); ++i) out << ",x_" << i;
  out << "\n";

  const auto dump_row = [&](int iter, const CharacteristicVector& x) {
    out << iter;
    for (double v : x) out << ',' << format_double(v);
    out << "\n";
  };
  const CharacteristicVector x0 = uniform_characteristic_vector(w.size());
  dump_row(0, x0);
  try {
    run_replicator(w, x0, params.th, params.max_iter, dump_row);
  } catch (const DegenerateGraphError&) {
    // nothing to iterate; the trace keeps just the initial row
  }
  if (!out) throw std::runtime_error("short write on " + path);
}

}  // namespace dsbs
