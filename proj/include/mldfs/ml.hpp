#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mldfs/profile.hpp"

namespace mldfs {

struct Dataset {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  int n_classes = 0;

  size_t size() const { return rows.size(); }
  size_t n_features() const { return rows.empty() ? 0 : rows[0].size(); }
  void validate() const;  // throws std::invalid_argument
};

Dataset to_dataset(std::span<const ProfileRecord> records, FeatureMode mode,
                   int n_classes);

enum class Algo { rf, nn };
enum class TieBreak { lowest, highest };

const char* algo_name(Algo a);
Algo algo_from_name(const std::string& s);

struct HyperParams {
  Algo algo = Algo::rf;
  int n_estimators = 0;      // 0 = auto: 10 for 2 classes, 100 otherwise
  int max_depth = 8;
  int min_leaf = 5;
  int feature_subsample = 0; // 0 = auto: half the features, rounded up (3 for the six)
  TieBreak tie_break = TieBreak::lowest;
  int nn_hidden = 20;
  int nn_epochs = 200;
  double nn_lr = 0.05;
  double nn_momentum = 0.9;
  uint64_t seed = 1;

  int resolved_estimators(int n_classes) const {
    if (n_estimators > 0) return n_estimators;
    return n_classes == 2 ? 10 : 100;
  }
  int resolved_subsample(size_t n_features) const {
    if (feature_subsample > 0) return feature_subsample;
    return static_cast<int>((n_features + 1) / 2);
  }
  void validate() const;  // throws std::invalid_argument
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mldfs
