#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dsbs/hsi.hpp"

namespace dsbs {

/// Classifier used by the evaluation protocol and by SFS. The default is a
/// 1-nearest-neighbor on Euclidean distance over the selected bands; an
/// external command can be plugged in (see classify_accuracy).
struct ClassifierSpec {
  enum class Kind { kNearestNeighbor, kNearestClassMean, kExternal };
  Kind kind = Kind::kNearestNeighbor;
  std::string command;  // external plug-in: invoked as `command train.csv test.csv out.csv`
};

/// Disjoint train/test pixel indices into a partition.
struct Split {
  std::vector<int> train;
  std::vector<int> test;
};

struct CurvePoint {
  int n_train = 0;       // training samples per class
  double mean_acc = 0.0;
  double std_dev = 0.0;  // population std over the repetitions
  int repetitions = 0;
};

struct AccuracyCurve {
  std::vector<CurvePoint> points;
};

struct NamedCurve {
  std::string name;
  AccuracyCurve curve;
};

/// Seeded stratified split with exactly n_train samples per class in the
/// training set and everything else in the test set. Fails naming the class
/// when one has too few samples.
Split split(const Partition& partition, int n_train_per_class, std::uint64_t seed);

/// Overall accuracy on the test set using only the listed bands.
double classify_accuracy(const Partition& partition, const Split& split,
                         const std::vector<int>& bands, const ClassifierSpec& classifier);

/// Split seed for one (n_train, repetition) cell. Deliberately independent
/// of the band set so every method is evaluated on identical splits.
std::uint64_t derive_split_seed(std::uint64_t base_seed, int n_train, int repetition);

/// Mean/std accuracy over `repetitions` random splits for each training-set
/// size. n_train values must be strictly increasing.
AccuracyCurve accuracy_curve(const Partition& partition, const std::vector<int>& bands,
                             const ClassifierSpec& classifier, const std::vector<int>& n_train_list,
                             int repetitions, std::uint64_t seed, int threads = 1);

/// Writes report.csv (method,n_train,mean_acc,std,reps) and report.svg under
/// out_dir. config_echo pairs are emitted as leading '#' comment lines.
void emit_report(const std::vector<NamedCurve>& curves, const std::string& out_dir,
                 const std::vector<std::pair<std::string, std::string>>& config_echo = {});

/// Parses a report.csv written by emit_report.
std::vector<NamedCurve> parse_report_csv(const std::string& path);

}  // namespace dsbs
