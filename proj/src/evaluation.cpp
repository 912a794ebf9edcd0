#include "dsbs/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dsbs/parallel.hpp"
#include "dsbs/rng.hpp"

namespace dsbs {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_bands(const Partition& partition, const std::vector<int>& bands) {
  if (bands.empty()) throw std::invalid_argument("band set must be non-empty");
  for (int b : bands) {
    if (b < 0 || b >= partition.bands) {
      throw std::invalid_argument("band " + std::to_string(b) + " out of range");
    }
  }
}

}  // namespace

Split split(const Partition& partition, int n_train_per_class, std::uint64_t seed) {
  if (n_train_per_class < 1) throw std::invalid_argument("n_train must be positive");

  std::map<int, std::vector<int>> by_class;
  for (int p = 0; p < partition.size(); ++p) {
    by_class[partition.pixels[static_cast<std::size_t>(p)].label].push_back(p);
  }

  Split out;
  Rng rng(seed);
  for (auto& [label, idx] : by_class) {
    if (static_cast<int>(idx.size()) <= n_train_per_class) {
      throw std::runtime_error("class " + std::to_string(label) + " has only " +
                               std::to_string(idx.size()) + " samples, need more than " +
                               std::to_string(n_train_per_class));
    }
    for (int i = 0; i < n_train_per_class; ++i) {
      const int j = i + rng.below(static_cast<int>(idx.size()) - i);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + n_train_per_class);
    out.test.insert(out.test.end(), idx.begin() + n_train_per_class, idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

namespace {

double squared_distance(const Partition& partition, const std::vector<int>& bands, int a, int b) {
  double sum = 0.0;
  for (int band : bands) {
    const double d = partition.reflectance(band, a) - partition.reflectance(band, b);
    sum += d * d;
  }
  return sum;
}

std::vector<int> predict_nearest_neighbor(const Partition& partition, const Split& split,
                                          const std::vector<int>& bands) {
  std::vector<int> predictions;
  predictions.reserve(split.test.size());
  for (int t : split.test) {
    int best = split.train.front();
    double best_d = squared_distance(partition, bands, t, best);
    for (std::size_t i = 1; i < split.train.size(); ++i) {
      const double d = squared_distance(partition, bands, t, split.train[i]);
      if (d < best_d) {  // strict: distance ties keep the lowest train index
        best_d = d;
        best = split.train[i];
      }
    }
    predictions.push_back(partition.pixels[static_cast<std::size_t>(best)].label);
  }
  return predictions;
}

std::vector<int> predict_nearest_class_mean(const Partition& partition, const Split& split,
                                            const std::vector<int>& bands) {
  std::map<int, std::vector<double>> means;
  std::map<int, int> counts;
  for (int t : split.train) {
    const int label = partition.pixels[static_cast<std::size_t>(t)].label;
    auto& m = means[label];
    m.resize(bands.size(), 0.0);
    for (std::size_t b = 0; b < bands.size(); ++b) m[b] += partition.reflectance(bands[b], t);
    counts[label] += 1;
  }
  for (auto& [label, m] : means) {
    for (double& v : m) v /= counts[label];
  }

  std::vector<int> predictions;
  predictions.reserve(split.test.size());
  for (int t : split.test) {
    int best_label = 0;
    double best_d = 0.0;
    bool first = true;
    for (const auto& [label, m] : means) {  // ascending label: ties keep the lowest
      double d = 0.0;
      for (std::size_t b = 0; b < bands.size(); ++b) {
        const double diff = partition.reflectance(bands[b], t) - m[b];
        d += diff * diff;
      }
      if (first || d < best_d) {
        best_label = label;
        best_d = d;
        first = false;
      }
    }
    predictions.push_back(best_label);
  }
  return predictions;
}

void write_pixel_csv(const std::string& path, const Partition& partition,
                     const std::vector<int>& pixels, const std::vector<int>& bands,
                     bool with_labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write classifier csv: " + path);
  out << "label";
  for (int b : bands) out << ",b" << b;
  out << "\n";
  for (int p : pixels) {
    out << (with_labels ? partition.pixels[static_cast<std::size_t>(p)].label : 0);
    for (int b : bands) out << ',' << format_double(partition.reflectance(b, p));
    out << "\n";
  }
}

std::vector<int> predict_external(const Partition& partition, const Split& split,
                                  const std::vector<int>& bands, const std::string& command) {
  static std::atomic<std::uint64_t> invocation{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("dsbs-clf-" + std::to_string(::getpid()) + "-" +
                    std::to_string(invocation.fetch_add(1)));
  std::filesystem::create_directories(dir);
  const std::string train_csv = (dir / "train.csv").string();
  const std::string test_csv = (dir / "test.csv").string();
  const std::string out_csv = (dir / "predictions.csv").string();

  write_pixel_csv(train_csv, partition, split.train, bands, true);
  write_pixel_csv(test_csv, partition, split.test, bands, false);

  const std::string cmd = command + " '" + train_csv + "' '" + test_csv + "' '" + out_csv + "'";
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    std::filesystem::remove_all(dir);
    throw std::runtime_error("external classifier failed (exit " + std::to_string(rc) +
                             "): " + command);
  }

  std::ifstream in(out_csv);
  if (!in) {
    std::filesystem::remove_all(dir);
    throw std::runtime_error("external classifier wrote no predictions: " + out_csv);
  }
  std::vector<int> predictions;
  std::string line;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!header_skipped) {
      header_skipped = true;
      if (line == "label") continue;  // optional header
    }
    predictions.push_back(std::stoi(line));
  }
  std::filesystem::remove_all(dir);
  if (predictions.size() != split.test.size()) {
    throw std::runtime_error("external classifier returned " +
                             std::to_string(predictions.size()) + " predictions for " +
                             std::to_string(split.test.size()) + " test rows");
  }
  return predictions;
}

}  // namespace

double classify_accuracy(const Partition& partition, const Split& split,
                         const std::vector<int>& bands, const ClassifierSpec& classifier) {
  check_bands(partition, bands);
  if (split.train.empty() || split.test.empty()) {
    throw std::invalid_argument("split must have train and test samples");
  }

  std::vector<int> predictions;
  switch (classifier.kind) {
    case ClassifierSpec::Kind::kNearestNeighbor:
      predictions = predict_nearest_neighbor(partition, split, bands);
      break;
    case ClassifierSpec::Kind::kNearestClassMean:
      predictions = predict_nearest_class_mean(partition, split, bands);
      break;
    case ClassifierSpec::Kind::kExternal:
      if (classifier.command.empty()) {
        throw std::invalid_argument("external classifier needs a command");
      }
      predictions = predict_external(partition, split, bands, classifier.command);
      break;
  }

  int correct = 0;
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    if (predictions[i] == partition.pixels[static_cast<std::size_t>(split.test[i])].label) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(split.test.size());
}

std::uint64_t derive_split_seed(std::uint64_t base_seed, int n_train, int repetition) {
  return Rng::mix(Rng::mix(base_seed, static_cast<std::uint64_t>(n_train)),
                  static_cast<std::uint64_t>(repetition));
}

AccuracyCurve accuracy_curve(const Partition& partition, const std::vector<int>& bands,
                             const ClassifierSpec& classifier, const std::vector<int>& n_train_list,
                             int repetitions, std::uint64_t seed, int threads) {
  check_bands(partition, bands);
  if (n_train_list.empty()) throw std::invalid_argument("n_train list must be non-empty");
  for (std::size_t i = 1; i < n_train_list.size(); ++i) {
    if (n_train_list[i] <= n_train_list[i - 1]) {
      throw std::invalid_argument("n_train values must be strictly increasing");
    }
  }
  if (repetitions < 1) throw std::invalid_argument("repetitions must be positive");

  AccuracyCurve curve;
  for (int n_train : n_train_list) {
    std::vector<double> acc(static_cast<std::size_t>(repetitions));
    parallel_for(0, repetitions, threads, [&](int rep) {
      const Split s = split(partition, n_train, derive_split_seed(seed, n_train, rep));
      acc[static_cast<std::size_t>(rep)] = classify_accuracy(partition, s, bands, classifier);
    });
    double mean = 0.0;
    for (double a : acc) mean += a;
    mean /= static_cast<double>(repetitions);
    double var = 0.0;
    for (double a : acc) var += (a - mean) * (a - mean);
    var /= static_cast<double>(repetitions);
    curve.points.push_back({n_train, mean, std::sqrt(var), repetitions});
  }
  return curve;
}

namespace {

const char* curve_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

void write_svg(const std::vector<NamedCurve>& curves, const std::string& path) {
  const double width = 640, height = 480;
  const double left = 70, right = 30, top = 30, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  int x_min = curves.front().curve.points.front().n_train;
  int x_max = x_min;
  for (const auto& c : curves) {
    for (const auto& p : c.curve.points) {
      x_min = std::min(x_min, p.n_train);
      x_max = std::max(x_max, p.n_train);
    }
  }
  const double x_span = x_max > x_min ? static_cast<double>(x_max - x_min) : 1.0;
  const auto sx = [&](int n) { return left + (n - x_min) / x_span * plot_w; };
  const auto sy = [&](double acc) { return top + (1.0 - acc) * plot_h; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report svg: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";

  for (double acc = 0.0; acc <= 1.0001; acc += 0.2) {
    out << "<text x=\"" << left - 10 << "\" y=\"" << sy(acc) + 4
        << "\" text-anchor=\"end\" font-size=\"12\">" << acc << "</text>\n";
    out << "<line x1=\"" << left - 4 << "\" y1=\"" << sy(acc) << "\" x2=\"" << left << "\" y2=\""
        << sy(acc) << "\" stroke=\"black\"/>\n";
  }
  std::vector<int> ticks;
  for (const auto& p : curves.front().curve.points) ticks.push_back(p.n_train);
  for (int t : ticks) {
    out << "<text x=\"" << sx(t) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << t << "</text>\n";
    out << "<line x1=\"" << sx(t) << "\" y1=\"" << top + plot_h << "\" x2=\"" << sx(t)
        << "\" y2=\"" << top + plot_h + 4 << "\" stroke=\"black\"/>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\" font-size=\"14\">training samples per class</text>\n";
  out << "<text x=\"18\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">overall accuracy</text>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    out << "<polyline fill=\"none\" stroke=\"" << curve_color(i) << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : curves[i].curve.points) {
      out << sx(p.n_train) << ',' << sy(p.mean_acc) << ' ';
    }
    out << "\"/>\n";
    const double ly = top + 18 + 18 * static_cast<double>(i);
    out << "<line x1=\"" << left + plot_w - 130 << "\" y1=\"" << ly << "\" x2=\""
        << left + plot_w - 105 << "\" y2=\"" << ly << "\" stroke=\"" << curve_color(i)
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + plot_w - 100 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
        << curves[i].name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

void emit_report(const std::vector<NamedCurve>& curves, const std::string& out_dir,
                 const std::vector<std::pair<std::string, std::string>>& config_echo) {
  if (curves.empty()) throw std::invalid_argument("report needs at least one curve");
  std::filesystem::create_directories(out_dir);

  const std::string csv_path = (std::filesystem::path(out_dir) / "report.csv").string();
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write report csv: " + csv_path);
  for (const auto& [key, value] : config_echo) csv << "# " << key << '=' << value << "\n";
  csv << "method,n_train,mean_acc,std,reps\n";
  for (const auto& c : curves) {
    for (const auto& p : c.curve.points) {
      csv << c.name << ',' << p.n_train << ',' << format_double(p.mean_acc) << ','
          << format_double(p.std_dev) << ',' << p.repetitions << "\n";
    }
  }
  csv.close();
  if (!csv) throw std::runtime_error("short write on report csv: " + csv_path);

  write_svg(curves, (std::filesystem::path(out_dir) / "report.svg").string());
}

std::vector<NamedCurve> parse_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report csv: " + path);

  std::vector<NamedCurve> curves;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "method,n_train,mean_acc,std,reps") {
        throw std::runtime_error(path + ": unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string method, field;
    CurvePoint p;
    std::getline(ls, method, ',');
    std::getline(ls, field, ',');
    p.n_train = std::stoi(field);
    std::getline(ls, field, ',');
    p.mean_acc = std::stod(field);
    std::getline(ls, field, ',');
    p.std_dev = std::stod(field);
    std::getline(ls, field, ',');
    p.repetitions = std::stoi(field);

    if (curves.empty() || curves.back().name != method) {
      curves.push_back({method, {}});
    }
    curves.back().curve.points.push_back(p);
  }
  if (!header_seen) throw std::runtime_error(path + ": missing header");
  return curves;
}

}  // namespace dsbs
