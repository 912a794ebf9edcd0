#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsbs/commands.hpp"
#include "dsbs/run_config.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::string out_dir;
  std::string seed;
  int threads = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key=value config file");
  cmd->add_option("--set", args.overrides, "override any config key, e.g. --set c_s=5");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "run seed (required here or in the config)");
  cmd->add_option("--threads", args.threads, "worker threads (0 = all cores)");
}

dsbs::RunConfig resolve(const CommonArgs& args) {
  dsbs::RunConfig config;
  if (!args.config_path.empty()) config = dsbs::load_run_config(args.config_path);
  for (const auto& assignment : args.overrides) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got '" + assignment + "'");
    }
    dsbs::apply_config_override(config, assignment.substr(0, eq), assignment.substr(eq + 1));
  }
  if (!args.out_dir.empty()) dsbs::apply_config_override(config, "out", args.out_dir);
  if (!args.seed.empty()) dsbs::apply_config_override(config, "seed", args.seed);
  if (args.threads >= 0) config.threads = args.threads;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dominant-sets band selection for hyperspectral cubes"};
  app.require_subcommand(1);

  CommonArgs score_args, select_args, baseline_args, compare_args, trace_args;
  bool emit_cube = false;
  std::string baseline_method;
  int baseline_k = 0;
  std::string methods;
  int trace_band = 0;
  std::string synth_spec, synth_prefix;

  CLI::App* score = app.add_subcommand("score-bands", "stage 1: per-band F scores as CSV");
  add_common(score, score_args);

  CLI::App* select = app.add_subcommand("select", "full band selection, JSON output");
  add_common(select, select_args);
  select->add_flag("--emit-cube", emit_cube, "also write the reduced cube");

  CLI::App* baseline = app.add_subcommand("baseline", "run a baseline selector");
  add_common(baseline, baseline_args);
  baseline->add_option("--method", baseline_method, "cbs or sfs")->required();
  baseline->add_option("--k", baseline_k, "number of bands for cbs");

  CLI::App* compare = app.add_subcommand("compare", "accuracy-vs-training-size report");
  add_common(compare, compare_args);
  compare->add_option("--methods", methods, "comma list of dsbs,cbs,sfs");

  CLI::App* trace = app.add_subcommand("replicator-trace", "debug: dump replicator iterates");
  add_common(trace, trace_args);
  trace->add_option("--band", trace_band, "band whose pixel graph to trace");

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic cube triplet");
  synth->add_option("--spec", synth_spec, "synthetic spec file")->required();
  synth->add_option("--out-prefix", synth_prefix, "output path prefix")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed()) {
      dsbs::cmd_score_bands(resolve(score_args));
    } else if (select->parsed()) {
      dsbs::RunConfig config = resolve(select_args);
      if (emit_cube) config.emit_cube = true;
      dsbs::cmd_select(config);
    } else if (baseline->parsed()) {
      dsbs::RunConfig config = resolve(baseline_args);
      if (baseline_k > 0) config.cbs_k = baseline_k;
      dsbs::cmd_baseline(config, baseline_method);
    } else if (compare->parsed()) {
      dsbs::RunConfig config = resolve(compare_args);
      if (!methods.empty()) dsbs::apply_config_override(config, "methods", methods);
      dsbs::cmd_compare(config);
    } else if (trace->parsed()) {
      dsbs::cmd_replicator_trace(resolve(trace_args), trace_band);
    } else if (synth->parsed()) {
      dsbs::cmd_synth(synth_spec, synth_prefix);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
