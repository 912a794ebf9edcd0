#include "dsbs/run_config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dsbs {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
  std::vector<int> out;
  std::istringstream vs(value);
  std::string tok;
  while (std::getline(vs, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad integer '" + tok + "' in " + key);
    }
  }
  return out;
}

std::vector<std::string> parse_string_list(const std::string& value) {
  std::vector<std::string> out;
  std::istringstream vs(value);
  std::string tok;
  while (std::getline(vs, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw std::invalid_argument("bad boolean '" + value + "' for " + key);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::string classifier_to_string(const ClassifierSpec& spec) {
  switch (spec.kind) {
    case ClassifierSpec::Kind::kNearestNeighbor:
      return "1nn";
    case ClassifierSpec::Kind::kNearestClassMean:
      return "nearest-mean";
    case ClassifierSpec::Kind::kExternal:
      return "external:" + spec.command;
  }
  return "1nn";
}

ClassifierSpec classifier_from_string(const std::string& text) {
  ClassifierSpec spec;
  if (text == "1nn") {
    spec.kind = ClassifierSpec::Kind::kNearestNeighbor;
  } else if (text == "nearest-mean") {
    spec.kind = ClassifierSpec::Kind::kNearestClassMean;
  } else if (text.rfind("external:", 0) == 0) {
    spec.kind = ClassifierSpec::Kind::kExternal;
    spec.command = text.substr(9);
    if (spec.command.empty()) throw std::invalid_argument("external classifier needs a command");
  } else {
    throw std::invalid_argument("unknown classifier '" + text +
                                "' (expected 1nn, nearest-mean or external:<command>)");
  }
  return spec;
}

void apply_config_override(RunConfig& config, const std::string& raw_key,
                           const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  try {
    if (key == "cube") {
      config.cube_path = value;
    } else if (key == "header") {
      config.header_path = value;
    } else if (key == "gt") {
      config.gt_path = value;
    } else if (key == "out") {
      config.out_dir = value;
    } else if (key == "region") {
      const auto v = parse_int_list(value, key);
      if (v.size() != 4) throw std::invalid_argument("region needs row0,col0,rows,cols");
      config.region = {v[0], v[1], v[2], v[3]};
    } else if (key == "classes") {
      const auto v = parse_int_list(value, key);
      config.classes = std::set<int>(v.begin(), v.end());
    } else if (key == "max_pixels") {
      config.max_pixels = std::stoi(value);
    } else if (key == "c_d") {
      config.stage1.c_d = std::stod(value);
    } else if (key == "c_s") {
      config.stage1.c_s = std::stod(value);
    } else if (key == "th") {
      config.stage1.th = std::stod(value);
    } else if (key == "delta") {
      config.stage1.delta = std::stod(value);
    } else if (key == "max_iter") {
      config.stage1.max_iter = std::stoi(value);
      config.stage2.max_iter = config.stage1.max_iter;
    } else if (key == "cs_ref_mean") {
      config.cs_ref_mean = std::stod(value);
    } else if (key == "c_b") {
      config.stage2.c_b = std::stod(value);
    } else if (key == "c_v") {
      config.stage2.c_v = std::stod(value);
    } else if (key == "t_b") {
      config.stage2.t_b = std::stod(value);
    } else if (key == "delta_b") {
      config.stage2.delta = std::stod(value);
    } else if (key == "k") {
      config.cbs_k = std::stoi(value);
    } else if (key == "max_k") {
      config.sfs_max_k = std::stoi(value);
    } else if (key == "min_gain") {
      config.sfs_min_gain = std::stod(value);
    } else if (key == "n_train") {
      config.n_train = parse_int_list(value, key);
    } else if (key == "repetitions") {
      config.repetitions = std::stoi(value);
    } else if (key == "classifier") {
      config.classifier = classifier_from_string(value);
    } else if (key == "methods") {
      config.methods = parse_string_list(value);
    } else if (key == "seed") {
      config.seed = std::stoull(value);
      config.has_seed = true;
    } else if (key == "threads") {
      config.threads = std::stoi(value);
    } else if (key == "emit_cube") {
      config.emit_cube = parse_bool(value, key);
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value '" + value + "' for config key '" + key + "'");
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);

  RunConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply_config_override(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return config;
}

void require_seed(const RunConfig& config) {
  if (!config.has_seed) {
    throw std::invalid_argument("a seed is required (config key 'seed' or --seed)");
  }
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> echo;
  echo.emplace_back("c_b", format_double(config.stage2.c_b));
  echo.emplace_back("c_d", format_double(config.stage1.c_d));
  echo.emplace_back("c_s", format_double(config.stage1.c_s));
  echo.emplace_back("c_v", format_double(config.stage2.c_v));
  echo.emplace_back("classes", join_ints({config.classes.begin(), config.classes.end()}));
  echo.emplace_back("classifier", classifier_to_string(config.classifier));
  echo.emplace_back("cs_ref_mean", format_double(config.cs_ref_mean));
  echo.emplace_back("cube", config.cube_path);
  echo.emplace_back("delta", format_double(config.stage1.delta));
  echo.emplace_back("delta_b", format_double(config.stage2.delta));
  echo.emplace_back("emit_cube", config.emit_cube ? "1" : "0");
  echo.emplace_back("gt", config.gt_path);
  echo.emplace_back("header", config.header_path);
  echo.emplace_back("k", std::to_string(config.cbs_k));
  echo.emplace_back("max_iter", std::to_string(config.stage1.max_iter));
  echo.emplace_back("max_k", std::to_string(config.sfs_max_k));
  echo.emplace_back("max_pixels", std::to_string(config.max_pixels));
  {
    std::string m;
    for (std::size_t i = 0; i < config.methods.size(); ++i) {
      if (i) m += ',';
      m += config.methods[i];
    }
    echo.emplace_back("methods", m);
  }
  echo.emplace_back("min_gain", format_double(config.sfs_min_gain));
  echo.emplace_back("n_train", join_ints(config.n_train));
  echo.emplace_back("out", config.out_dir);
  {
    std::string r;
    if (config.region.rows >= 0) {
      r = join_ints({config.region.row0, config.region.col0, config.region.rows,
                     config.region.cols});
    }
    echo.emplace_back("region", r);
  }
  echo.emplace_back("repetitions", std::to_string(config.repetitions));
  echo.emplace_back("seed", std::to_string(config.seed));
  echo.emplace_back("t_b", format_double(config.stage2.t_b));
  echo.emplace_back("th", format_double(config.stage1.th));
  return echo;
}

}  // namespace dsbs
