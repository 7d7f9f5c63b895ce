#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "mldfs/metrics.hpp"
#include "mldfs/model_io.hpp"
#include "mldfs/workloads.hpp"

using namespace mldfs;

namespace {

Model small_forest_model(uint64_t seed) {
  GenSpec spec;
  spec.n_per_class = 200;
  spec.seed = seed;
  const DelayModelConfig cfg{};
  const ClassBoundaries bounds = default_boundaries(3);
  BalancedSet set = gen_balanced_dataset(spec, cfg, bounds);
  Dataset d = to_dataset(set.records, FeatureMode::six, 3);
  HyperParams hp;
  hp.n_estimators = 5;
  return Model::from_forest(train_forest(d, hp, bounds), FeatureMode::six);
}

Model small_net_model(uint64_t seed) {
  GenSpec spec;
  spec.n_per_class = 100;
  spec.seed = seed;
  const DelayModelConfig cfg{};
  const ClassBoundaries bounds = default_boundaries(2);
  BalancedSet set = gen_balanced_dataset(spec, cfg, bounds);
  Dataset d = to_dataset(set.records, FeatureMode::six, 2);
  HyperParams hp;
  hp.algo = Algo::nn;
  hp.nn_epochs = 20;
  return Model::from_net(train_net(d, hp), bounds, hp, FeatureMode::six);
}

std::vector<std::vector<double>> probe_rows() {
  std::vector<std::vector<double>> rows;
  Rng rng(123);
  for (int i = 0; i < 64; ++i) {
    ProfileRecord r;
    r.op = Opcode::MUL;
    r.a = rng.next_u32();
    r.b = rng.next_u32();
    r.a_prev = rng.next_u32();
    r.b_prev = rng.next_u32();
    r.prev_result = rng.next_u32();
    rows.push_back(feature_row(r, FeatureMode::six));
  }
  return rows;
}

}  // namespace

TEST_CASE("forest model surviving a JSON round-trip is the same function") {
  Model m = small_forest_model(9);
  nlohmann::json j = model_to_json(m);
  Model back = model_from_json(j);

  CHECK(back.algo == Algo::rf);
  CHECK(back.n_classes == 3);
  CHECK(back.boundaries == m.boundaries);
  CHECK(back.features == FeatureMode::six);
  REQUIRE(back.forest.has_value());
  CHECK(back.forest->trees == m.forest->trees);
  for (const auto& row : probe_rows()) CHECK(back.predict(row) == m.predict(row));

  // serialization is canonical: dumping again yields identical bytes
  CHECK(model_to_json(back).dump() == j.dump());
}

TEST_CASE("net model surviving a JSON round-trip is the same function") {
  Model m = small_net_model(11);
  Model back = model_from_json(model_to_json(m));
  REQUIRE(back.net.has_value());
  CHECK(back.net->w1 == m.net->w1);
  CHECK(back.net->b2 == m.net->b2);
  CHECK(back.net->mean == m.net->mean);
  for (const auto& row : probe_rows()) CHECK(back.predict(row) == m.predict(row));
}

TEST_CASE("model files round-trip on disk") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "mldfs_model_io_test";
  fs::create_directories(dir);
  std::string path = (dir / "m.json").string();

  Model m = small_forest_model(13);
  save_model(path, m);
  Model back = load_model(path);
  CHECK(back.forest->trees == m.forest->trees);
  CHECK(back.hyper.n_estimators == m.hyper.n_estimators);
  CHECK(back.hyper.tie_break == m.hyper.tie_break);
  fs::remove_all(dir);
}

TEST_CASE("malformed model documents are rejected") {
  CHECK_THROWS_AS(model_from_json(nlohmann::json{{"algo", "svm"}}), ModelIoError);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::object()), ModelIoError);
  nlohmann::json j = model_to_json(small_forest_model(7));
  j.erase("trees");
  CHECK_THROWS_AS(model_from_json(j), ModelIoError);
  CHECK_THROWS_AS(load_model("/nonexistent/path/model.json"), std::exception);
}

TEST_CASE("predict refuses a model with neither payload") {
  Model empty;
  empty.n_classes = 2;
  CHECK_THROWS(empty.predict(std::vector<double>(6, 0.0)));
}
