#pragma once

#include <optional>
#include <string>

#include "mldfs/forest.hpp"
#include "mldfs/net.hpp"

#include <json.hpp>

namespace mldfs {

class ModelIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A trained classifier of either flavor plus everything the simulator needs
// to drive it: boundaries and the hyperparameters it was trained with.
struct Model {
  Algo algo = Algo::rf;
  ClassBoundaries boundaries;
  HyperParams hyper;
  int n_classes = 0;
  size_t n_features = 0;
  FeatureMode features = FeatureMode::six;
  std::optional<TrainedForest> forest;
  std::optional<TrainedNet> net;

  int predict(std::span<const double> row) const;
  static Model from_forest(TrainedForest f, FeatureMode mode);
  static Model from_net(TrainedNet n, const ClassBoundaries& bounds,
                        const HyperParams& hp, FeatureMode mode);
};

nlohmann::json model_to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);  // throws ModelIoError

void save_model(const std::string& path, const Model& m);
Model load_model(const std::string& path);

}  // namespace mldfs
