#include "dsbs/hsi.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dsbs/rng.hpp"

namespace dsbs {

std::vector<int> Partition::class_labels() const {
  std::vector<int> labels;
  for (const auto& p : pixels) labels.push_back(p.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

namespace {

std::uint32_t to_le32(float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  return bits;  // host is little-endian; files are declared f32le
}

float from_le32(std::uint32_t bits) {
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace

HyperCube load_cube(const std::string& data_path, const std::string& header_path) {
  std::ifstream header_in(header_path);
  if (!header_in) throw std::runtime_error("cannot open cube header: " + header_path);
  nlohmann::json header;
  try {
    header_in >> header;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed cube header " + header_path + ": " + e.what());
  }
  for (const char* key : {"bands", "rows", "cols", "dtype", "interleave"}) {
    if (!header.contains(key)) {
      throw std::runtime_error("cube header " + header_path + " is missing key '" + key + "'");
    }
  }
  const std::string dtype = header["dtype"].get<std::string>();
  if (dtype != "f32le") throw std::runtime_error("unsupported cube dtype '" + dtype + "'");
  const std::string interleave = header["interleave"].get<std::string>();
  if (interleave != "bsq") {
    throw std::runtime_error("unsupported cube interleave '" + interleave + "'");
  }

  HyperCube cube;
  cube.bands = header["bands"].get<int>();
  cube.rows = header["rows"].get<int>();
  cube.cols = header["cols"].get<int>();
  if (cube.bands < 1 || cube.rows < 1 || cube.cols < 1) {
    throw std::runtime_error("cube dimensions must all be at least 1");
  }

  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open cube data: " + data_path);
  in.seekg(0, std::ios::end);
  const std::streamoff actual = in.tellg();
  const std::size_t count = static_cast<std::size_t>(cube.bands) *
                            static_cast<std::size_t>(cube.rows) *
                            static_cast<std::size_t>(cube.cols);
  const std::streamoff expected = static_cast<std::streamoff>(count * 4);
  if (actual != expected) {
    throw std::runtime_error("cube data " + data_path + " is " + std::to_string(actual) +
                             " bytes, expected " + std::to_string(expected));
  }
  in.seekg(0);

  std::vector<std::uint32_t> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), expected);
  if (!in) throw std::runtime_error("short read on cube data: " + data_path);

  cube.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const float v = from_le32(raw[i]);
    if (!std::isfinite(v)) {
      throw std::runtime_error("non-finite value in " + data_path + " at byte offset " +
                               std::to_string(i * 4));
    }
    cube.data[i] = v;
  }
  return cube;
}

void save_cube(const HyperCube& cube, const std::string& data_path,
               const std::string& header_path) {
  const std::size_t count = static_cast<std::size_t>(cube.bands) *
                            static_cast<std::size_t>(cube.rows) *
                            static_cast<std::size_t>(cube.cols);
  if (cube.data.size() != count) {
    throw std::runtime_error("cube storage does not match its dimensions");
  }

  nlohmann::json header;
  header["bands"] = cube.bands;
  header["rows"] = cube.rows;
  header["cols"] = cube.cols;
  header["dtype"] = "f32le";
  header["interleave"] = "bsq";
  std::ofstream header_out(header_path);
  if (!header_out) throw std::runtime_error("cannot write cube header: " + header_path);
  header_out << header.dump(2) << "\n";

  std::ofstream out(data_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write cube data: " + data_path);
  std::vector<std::uint32_t> raw(count);
  for (std::size_t i = 0; i < count; ++i) raw[i] = to_le32(cube.data[i]);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(count * 4));
  if (!out) throw std::runtime_error("short write on cube data: " + data_path);
}

GroundTruth load_ground_truth(const std::string& path, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::runtime_error("ground truth dimensions must be positive");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ground truth: " + path);

  GroundTruth gt;
  gt.rows = rows;
  gt.cols = cols;
  gt.labels.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));

  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<int> values;
    int v;
    while (ls >> v) values.push_back(v);
    if (!ls.eof()) {
      throw std::runtime_error(path + ": non-integer token on line " + std::to_string(row + 1));
    }
    if (values.empty()) continue;  // blank line
    if (row >= rows) throw std::runtime_error(path + ": more rows than the declared " +
                                              std::to_string(rows));
    if (static_cast<int>(values.size()) != cols) {
      throw std::runtime_error(path + ": row " + std::to_string(row + 1) + " has " +
                               std::to_string(values.size()) + " entries, expected " +
                               std::to_string(cols));
    }
    for (int label : values) {
      if (label < 0) {
        throw std::runtime_error(path + ": negative label on row " + std::to_string(row + 1));
      }
      gt.labels.push_back(label);
      gt.num_classes = std::max(gt.num_classes, label);
    }
    ++row;
  }
  if (row != rows) {
    throw std::runtime_error(path + ": found " + std::to_string(row) + " rows, expected " +
                             std::to_string(rows));
  }
  return gt;
}

void save_ground_truth(const GroundTruth& gt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ground truth: " + path);
  for (int r = 0; r < gt.rows; ++r) {
    for (int c = 0; c < gt.cols; ++c) {
      if (c) out << ' ';
      out << gt.at(r, c);
    }
    out << '\n';
  }
}

namespace {

// Largest-remainder apportionment of `total` among counts; every target is
// within one of the exact proportional share.
std::map<int, int> stratified_targets(const std::map<int, int>& counts, int total) {
  int sum = 0;
  for (const auto& [label, count] : counts) sum += count;

  std::map<int, int> targets;
  std::vector<std::pair<double, int>> remainders;  // (-fraction, label): ties to low label
  int assigned = 0;
  for (const auto& [label, count] : counts) {
    const double exact = static_cast<double>(total) * count / sum;
    const int base = static_cast<int>(exact);
    targets[label] = base;
    assigned += base;
    remainders.push_back({-(exact - base), label});
  }
  std::sort(remainders.begin(), remainders.end());
  for (int i = 0; i < total - assigned; ++i) {
    targets[remainders[static_cast<std::size_t>(i)].second] += 1;
  }
  return targets;
}

}  // namespace

Partition extract_partition(const HyperCube& cube, const GroundTruth& gt, const Region& region,
                            const std::set<int>& classes, int max_pixels, std::uint64_t seed) {
  if (gt.rows != cube.rows || gt.cols != cube.cols) {
    throw std::invalid_argument("ground truth dimensions do not match the cube");
  }
  Region r = region;
  if (r.rows < 0) r = {0, 0, cube.rows, cube.cols};
  if (r.row0 < 0 || r.col0 < 0 || r.rows < 1 || r.cols < 1 || r.row0 + r.rows > cube.rows ||
      r.col0 + r.cols > cube.cols) {
    throw std::invalid_argument("region lies outside the image");
  }
  if (max_pixels < 1) throw std::invalid_argument("max_pixels must be positive");

  std::vector<PartitionPixel> eligible;
  for (int row = r.row0; row < r.row0 + r.rows; ++row) {
    for (int col = r.col0; col < r.col0 + r.cols; ++col) {
      const int label = gt.at(row, col);
      if (label == 0) continue;
      if (!classes.empty() && classes.find(label) == classes.end()) continue;
      eligible.push_back({row, col, label});
    }
  }
  if (eligible.empty()) {
    throw std::runtime_error("empty partition: no labeled pixels match the region and classes");
  }

  std::vector<PartitionPixel> chosen;
  if (static_cast<int>(eligible.size()) <= max_pixels) {
    chosen = std::move(eligible);
  } else {
    std::map<int, std::vector<int>> by_class;  // label -> indices into eligible
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      by_class[eligible[i].label].push_back(static_cast<int>(i));
    }
    std::map<int, int> counts;
    for (const auto& [label, idx] : by_class) counts[label] = static_cast<int>(idx.size());
    const std::map<int, int> targets = stratified_targets(counts, max_pixels);

    Rng rng(seed);
    std::vector<int> keep;
    for (auto& [label, idx] : by_class) {
      const int want = targets.at(label);
      // partial Fisher-Yates: the first `want` entries become the sample
      for (int i = 0; i < want; ++i) {
        const int j = i + rng.below(static_cast<int>(idx.size()) - i);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
      }
      keep.insert(keep.end(), idx.begin(), idx.begin() + want);
    }
    std::sort(keep.begin(), keep.end());  // restore scan order
    chosen.reserve(keep.size());
    for (int i : keep) chosen.push_back(eligible[static_cast<std::size_t>(i)]);
  }

  Partition partition;
  partition.source_rows = cube.rows;
  partition.source_cols = cube.cols;
  partition.bands = cube.bands;
  partition.pixels = std::move(chosen);
  const std::size_t k = partition.pixels.size();
  partition.spectra.resize(static_cast<std::size_t>(cube.bands) * k);
  for (int band = 0; band < cube.bands; ++band) {
    for (std::size_t p = 0; p < k; ++p) {
      partition.spectra[static_cast<std::size_t>(band) * k + p] =
          cube.at(band, partition.pixels[p].row, partition.pixels[p].col);
    }
  }
  return partition;
}

std::pair<HyperCube, GroundTruth> generate_synthetic(const SyntheticSpec& spec) {
  if (spec.classes < 2) throw std::invalid_argument("synthetic spec needs at least 2 classes");
  if (spec.sigma < 0.0) throw std::invalid_argument("synthetic noise sigma must be nonnegative");
  if (spec.bands < 1 || spec.rows < 1 || spec.cols < 1) {
    throw std::invalid_argument("synthetic dimensions must be positive");
  }
  if (spec.rows < spec.classes) {
    throw std::invalid_argument("synthetic cube needs at least one row per class");
  }
  std::vector<bool> informative(static_cast<std::size_t>(spec.bands), false);
  for (int b : spec.informative_bands) {
    if (b < 0 || b >= spec.bands) {
      throw std::invalid_argument("informative band " + std::to_string(b) + " out of range");
    }
    informative[static_cast<std::size_t>(b)] = true;
  }

  GroundTruth gt;
  gt.rows = spec.rows;
  gt.cols = spec.cols;
  gt.num_classes = spec.classes;
  gt.labels.resize(static_cast<std::size_t>(spec.rows) * static_cast<std::size_t>(spec.cols));
  for (int row = 0; row < spec.rows; ++row) {
    const int label = 1 + std::min(spec.classes - 1, row * spec.classes / spec.rows);
    for (int col = 0; col < spec.cols; ++col) {
      gt.labels[static_cast<std::size_t>(row) * static_cast<std::size_t>(spec.cols) +
                static_cast<std::size_t>(col)] = label;
    }
  }

  const double base = 0.5;
  const double separation = std::max(5.0 * spec.sigma, 1.0);

  HyperCube cube;
  cube.bands = spec.bands;
  cube.rows = spec.rows;
  cube.cols = spec.cols;
  cube.data.resize(static_cast<std::size_t>(spec.bands) * gt.labels.size());
  Rng rng(spec.seed);
  for (int band = 0; band < spec.bands; ++band) {
    for (int row = 0; row < spec.rows; ++row) {
      for (int col = 0; col < spec.cols; ++col) {
        const int label = gt.at(row, col);
        double mean = base;
        if (informative[static_cast<std::size_t>(band)]) mean += (label - 1) * separation;
        const double noise = spec.sigma > 0.0 ? spec.sigma * rng.normal() : 0.0;
        cube.at(band, row, col) = static_cast<float>(mean + noise);
      }
    }
  }
  return {std::move(cube), std::move(gt)};
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open synthetic spec: " + path);

  SyntheticSpec spec;
  bool have_seed = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "classes") {
        spec.classes = std::stoi(value);
      } else if (key == "bands") {
        spec.bands = std::stoi(value);
      } else if (key == "rows") {
        spec.rows = std::stoi(value);
      } else if (key == "cols") {
        spec.cols = std::stoi(value);
      } else if (key == "sigma") {
        spec.sigma = std::stod(value);
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
        have_seed = true;
      } else if (key == "informative_bands") {
        std::istringstream vs(value);
        std::string tok;
        while (std::getline(vs, tok, ',')) {
          if (!trim(tok).empty()) spec.informative_bands.push_back(std::stoi(trim(tok)));
        }
      } else {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                                 "'");
      }
    } catch (const std::invalid_argument&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad value for '" + key +
                               "'");
    }
  }
  if (!have_seed) throw std::runtime_error(path + ": synthetic spec must set a seed");
  return spec;
}

HyperCube reduce_bands(const HyperCube& cube, const std::vector<int>& bands) {
  if (bands.empty()) throw std::invalid_argument("band list must be non-empty");
  HyperCube out;
  out.bands = static_cast<int>(bands.size());
  out.rows = cube.rows;
  out.cols = cube.cols;
  const std::size_t frame = static_cast<std::size_t>(cube.rows) * static_cast<std::size_t>(cube.cols);
  out.data.resize(static_cast<std::size_t>(out.bands) * frame);
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const int b = bands[i];
    if (b < 0 || b >= cube.bands) {
      throw std::invalid_argument("band " + std::to_string(b) + " out of range");
    }
    std::copy_n(cube.data.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(b) * frame),
                frame, out.data.begin() + static_cast<std::ptrdiff_t>(i * frame));
  }
  return out;
}

double mean_reflectance(const Partition& partition) {
  if (partition.spectra.empty()) throw std::invalid_argument("partition has no spectra");
  double sum = 0.0;
  for (double v : partition.spectra) sum += v;
  return sum / static_cast<double>(partition.spectra.size());
}

}  // namespace dsbs
