#include "mldfs/model_io.hpp"

#include <fstream>

namespace mldfs {

using nlohmann::json;

int Model::predict(std::span<const double> row) const {
  if (row.size() != n_features)
    throw ModelIoError("predict: expected " + std::to_string(n_features) +
                       " features, got " + std::to_string(row.size()));
  return algo == Algo::rf ? forest->predict(row) : net->predict(row);
}

Model Model::from_forest(TrainedForest f, FeatureMode mode) {
  Model m;
  m.algo = Algo::rf;
  m.boundaries = f.boundaries;
  m.hyper = f.hyper;
  m.n_classes = f.n_classes;
  m.n_features = f.n_features;
  m.features = mode;
  m.forest = std::move(f);
  return m;
}

Model Model::from_net(TrainedNet n, const ClassBoundaries& bounds,
                      const HyperParams& hp, FeatureMode mode) {
  Model m;
  m.algo = Algo::nn;
  m.boundaries = bounds;
  m.hyper = hp;
  m.n_classes = n.n_classes;
  m.n_features = n.n_in;
  m.features = mode;
  m.net = std::move(n);
  return m;
}

namespace {

json hyper_to_json(const HyperParams& hp) {
  return json{{"algo", algo_name(hp.algo)},
              {"n_estimators", hp.n_estimators},
              {"max_depth", hp.max_depth},
              {"min_leaf", hp.min_leaf},
              {"feature_subsample", hp.feature_subsample},
              {"tie_break", hp.tie_break == TieBreak::lowest ? "lowest" : "highest"},
              {"nn_hidden", hp.nn_hidden},
              {"nn_epochs", hp.nn_epochs},
              {"nn_lr", hp.nn_lr},
              {"nn_momentum", hp.nn_momentum},
              {"seed", hp.seed}};
}

HyperParams hyper_from_json(const json& j) {
  HyperParams hp;
  hp.algo = algo_from_name(j.at("algo").get<std::string>());
  hp.n_estimators = j.at("n_estimators").get<int>();
  hp.max_depth = j.at("max_depth").get<int>();
  hp.min_leaf = j.at("min_leaf").get<int>();
  hp.feature_subsample = j.at("feature_subsample").get<int>();
  hp.tie_break = j.at("tie_break").get<std::string>() == "highest"
                     ? TieBreak::highest
                     : TieBreak::lowest;
  hp.nn_hidden = j.at("nn_hidden").get<int>();
  hp.nn_epochs = j.at("nn_epochs").get<int>();
  hp.nn_lr = j.at("nn_lr").get<double>();
  hp.nn_momentum = j.at("nn_momentum").get<double>();
  hp.seed = j.at("seed").get<uint64_t>();
  return hp;
}

json tree_to_json(const Tree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    if (n.is_leaf())
      nodes.push_back(json{{"counts", n.class_counts}});
    else
      nodes.push_back(json{{"feature", n.feature},
                           {"threshold", n.threshold},
                           {"left", n.left},
                           {"right", n.right}});
  }
  return json{{"nodes", std::move(nodes)}};
}

Tree tree_from_json(const json& j) {
  Tree t;
  for (const auto& jn : j.at("nodes")) {
    TreeNode n;
    if (jn.contains("counts")) {
      n.class_counts = jn.at("counts").get<std::vector<uint32_t>>();
    } else {
      n.feature = jn.at("feature").get<int>();
      n.threshold = jn.at("threshold").get<double>();
      n.left = jn.at("left").get<int>();
      n.right = jn.at("right").get<int>();
    }
    t.nodes.push_back(std::move(n));
  }
  if (t.nodes.empty()) throw ModelIoError("tree with no nodes");
  return t;
}

}  // namespace

json model_to_json(const Model& m) {
  json j{{"format", "mldfs-model-v1"},
         {"algo", algo_name(m.algo)},
         {"boundaries", m.boundaries.uppers},
         {"hyper", hyper_to_json(m.hyper)},
         {"n_classes", m.n_classes},
         {"n_features", m.n_features},
         {"features", m.features == FeatureMode::six ? "six" : "bits"}};
  if (m.algo == Algo::rf) {
    json trees = json::array();
    for (const auto& t : m.forest->trees) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
  } else {
    const TrainedNet& n = *m.net;
    j["net"] = json{{"n_in", n.n_in},       {"n_hidden", n.n_hidden},
                    {"n_classes", n.n_classes}, {"mean", n.mean},
                    {"stdev", n.stdev},     {"w1", n.w1},
                    {"b1", n.b1},           {"w2", n.w2},
                    {"b2", n.b2}};
  }
  return j;
}

Model model_from_json(const json& j) {
  try {
    Model m;
    if (j.at("format").get<std::string>() != "mldfs-model-v1")
      throw ModelIoError("unrecognized model format");
    m.algo = algo_from_name(j.at("algo").get<std::string>());
    m.boundaries.uppers = j.at("boundaries").get<std::vector<double>>();
    m.hyper = hyper_from_json(j.at("hyper"));
    m.n_classes = j.at("n_classes").get<int>();
    m.n_features = j.at("n_features").get<size_t>();
    m.features = j.at("features").get<std::string>() == "bits" ? FeatureMode::bits
                                                               : FeatureMode::six;
    if (m.algo == Algo::rf) {
      TrainedForest f;
      f.boundaries = m.boundaries;
      f.hyper = m.hyper;
      f.n_classes = m.n_classes;
      f.n_features = m.n_features;
      for (const auto& jt : j.at("trees")) f.trees.push_back(tree_from_json(jt));
      if (f.trees.empty()) throw ModelIoError("forest with no trees");
      m.forest = std::move(f);
    } else {
      TrainedNet n;
      const json& jn = j.at("net");
      n.n_in = jn.at("n_in").get<size_t>();
      n.n_hidden = jn.at("n_hidden").get<int>();
      n.n_classes = jn.at("n_classes").get<int>();
      n.mean = jn.at("mean").get<std::vector<double>>();
      n.stdev = jn.at("stdev").get<std::vector<double>>();
      n.w1 = jn.at("w1").get<std::vector<double>>();
      n.b1 = jn.at("b1").get<std::vector<double>>();
      n.w2 = jn.at("w2").get<std::vector<double>>();
      n.b2 = jn.at("b2").get<std::vector<double>>();
      if (n.w1.size() != n.n_in * static_cast<size_t>(n.n_hidden) ||
          n.w2.size() != static_cast<size_t>(n.n_hidden) * n.n_classes)
        throw ModelIoError("net weight shapes inconsistent");
      m.net = std::move(n);
    }
    return m;
  } catch (const json::exception& e) {
    throw ModelIoError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::string& path, const Model& m) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ModelIoError("cannot open " + path + " for writing");
  f << model_to_json(m).dump(2) << "\n";
}

Model load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ModelIoError("cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ModelIoError(std::string("malformed model file: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace mldfs
