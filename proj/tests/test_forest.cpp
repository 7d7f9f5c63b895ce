#include <doctest.h>

#include "mldfs/forest.hpp"
#include "mldfs/metrics.hpp"
#include "mldfs/workloads.hpp"

using namespace mldfs;

namespace {

TreeNode leaf(std::vector<uint32_t> counts) {
  TreeNode n;
  n.class_counts = std::move(counts);
  return n;
}

TreeNode split(int feature, double threshold, int left, int right) {
  TreeNode n;
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  return n;
}

Tree single_leaf_tree(std::vector<uint32_t> counts) {
  Tree t;
  t.nodes.push_back(leaf(std::move(counts)));
  return t;
}

}  // namespace

TEST_CASE("gini impurity") {
  CHECK(gini_impurity(std::vector<uint32_t>{5, 5}) == 0.5);
  CHECK(gini_impurity(std::vector<uint32_t>{10, 0}) == 0.0);
  CHECK(gini_impurity(std::vector<uint32_t>{0, 0}) == 0.0);
  CHECK(gini_impurity(std::vector<uint32_t>{2, 2, 4}) ==
        doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("tree routing and leaf statistics") {
  Tree t;
  t.nodes.push_back(split(0, 5.0, 1, 2));
  t.nodes.push_back(leaf({7, 0}));
  t.nodes.push_back(leaf({1, 6}));

  CHECK(t.predict(std::vector<double>{0.0}) == 0);
  CHECK(t.predict(std::vector<double>{4.999}) == 0);
  CHECK(t.predict(std::vector<double>{5.0}) == 1);  // left is strictly-below
  CHECK(t.predict(std::vector<double>{10.0}) == 1);
  CHECK(t.depth() == 1);
  CHECK(t.mean_leaf_depth() == 1.0);
  CHECK(t.internal_node_count() == 1);

  Tree root_only = single_leaf_tree({3, 9});
  CHECK(root_only.predict(std::vector<double>{123.0}) == 1);
  CHECK(root_only.depth() == 0);
  CHECK(root_only.internal_node_count() == 0);
}

TEST_CASE("leaf ties go to the lower class") {
  Tree t = single_leaf_tree({3, 3});
  CHECK(t.predict(std::vector<double>{0.0}) == 0);
  Tree t2 = single_leaf_tree({0, 4, 4});
  CHECK(t2.predict(std::vector<double>{0.0}) == 1);
}

TEST_CASE("forest voting and tie-break") {
  TrainedForest f;
  f.boundaries = default_boundaries(2);
  f.n_classes = 2;
  f.n_features = 1;
  f.trees.push_back(single_leaf_tree({9, 0}));
  f.trees.push_back(single_leaf_tree({0, 9}));

  std::vector<double> row{1.0};
  CHECK(f.vote(row) == std::vector<uint32_t>{1, 1});
  CHECK(f.predict(row) == 0);  // tie: aggressive lowest-class default

  f.hyper.tie_break = TieBreak::highest;
  CHECK(f.predict(row) == 1);

  f.hyper.tie_break = TieBreak::lowest;
  f.trees.push_back(single_leaf_tree({0, 9}));
  CHECK(f.predict(row) == 1);  // genuine majority beats the tie rule
}

TEST_CASE("training a tree") {
  HyperParams hp;
  Rng rng(1);

  SUBCASE("pure dataset gives a single leaf") {
    Dataset d;
    for (int i = 0; i < 8; ++i) {
      d.rows.push_back({static_cast<double>(i)});
      d.labels.push_back(1);
    }
    d.n_classes = 2;
    Tree t = train_tree(d, hp, rng);
    REQUIRE(t.nodes.size() == 1);
    CHECK(t.nodes[0].is_leaf());
    CHECK(t.predict(std::vector<double>{3.0}) == 1);
  }

  SUBCASE("separable one-feature dataset splits once") {
    Dataset d;
    for (int i = 0; i < 5; ++i) {
      d.rows.push_back({0.0});
      d.labels.push_back(0);
      d.rows.push_back({10.0});
      d.labels.push_back(1);
    }
    d.n_classes = 2;
    Tree t = train_tree(d, hp, rng);
    CHECK(t.depth() == 1);
    REQUIRE(!t.nodes[0].is_leaf());
    CHECK(t.nodes[0].feature == 0);
    CHECK(t.nodes[0].threshold > 0.0);
    CHECK(t.nodes[0].threshold < 10.0);
    CHECK(t.predict(std::vector<double>{0.0}) == 0);
    CHECK(t.predict(std::vector<double>{10.0}) == 1);
  }

  SUBCASE("min_leaf blocks tiny splits") {
    Dataset d;
    d.rows = {{0.0}, {10.0}};
    d.labels = {0, 1};
    d.n_classes = 2;
    Tree t = train_tree(d, hp, rng);  // min_leaf=5 cannot be met
    REQUIRE(t.nodes.size() == 1);
    CHECK(t.nodes[0].is_leaf());
  }

  SUBCASE("max_depth caps growth") {
    HyperParams shallow = hp;
    shallow.max_depth = 1;
    shallow.min_leaf = 1;
    Dataset d;
    for (int i = 0; i < 40; ++i) {
      double x = i % 4;
      d.rows.push_back({x});
      d.labels.push_back(i % 4 == 1 || i % 4 == 2 ? 1 : 0);
    }
    d.n_classes = 2;
    Tree t = train_tree(d, shallow, rng);
    CHECK(t.depth() <= 1);
  }
}

TEST_CASE("hyperparameter resolution and validation") {
  HyperParams hp;
  CHECK(hp.resolved_estimators(2) == 10);
  CHECK(hp.resolved_estimators(3) == 100);
  CHECK(hp.resolved_estimators(4) == 100);
  hp.n_estimators = 7;
  CHECK(hp.resolved_estimators(2) == 7);

  CHECK(hp.resolved_subsample(6) == 3);
  CHECK(hp.resolved_subsample(70) == 35);
  CHECK(hp.resolved_subsample(5) == 3);
  hp.feature_subsample = 2;
  CHECK(hp.resolved_subsample(70) == 2);

  CHECK_NOTHROW(HyperParams{}.validate());
  HyperParams bad;
  bad.max_depth = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  HyperParams badm;
  badm.nn_momentum = 1.0;
  CHECK_THROWS_AS(badm.validate(), std::invalid_argument);
}

TEST_CASE("dataset validation") {
  Dataset d;
  d.rows = {{1.0, 2.0}, {3.0, 4.0}};
  d.labels = {0, 1};
  d.n_classes = 2;
  CHECK_NOTHROW(d.validate());

  Dataset ragged = d;
  ragged.rows[1] = {3.0};
  CHECK_THROWS_AS(ragged.validate(), std::invalid_argument);

  Dataset bad_label = d;
  bad_label.labels[0] = 2;
  CHECK_THROWS_AS(bad_label.validate(), std::invalid_argument);

  CHECK(algo_from_name("rf") == Algo::rf);
  CHECK(algo_from_name("nn") == Algo::nn);
  CHECK_THROWS(algo_from_name("svm"));
  CHECK(std::string(algo_name(Algo::rf)) == "rf");
}

TEST_CASE("forest training on the synthetic balanced set") {
  GenSpec spec;
  spec.n_per_class = 3000;
  spec.seed = 5;
  const DelayModelConfig cfg{};
  const ClassBoundaries bounds = default_boundaries(2);
  BalancedSet set = gen_balanced_dataset(spec, cfg, bounds);
  Dataset d = to_dataset(set.records, FeatureMode::six, 2);

  HyperParams hp;
  TrainedForest f = train_forest(d, hp, bounds);
  CHECK(f.trees.size() == 10);  // auto count for two classes
  CHECK(f.n_features == 6);

  // vote count always equals the tree count
  auto votes = f.vote(d.rows[0]);
  uint32_t total = 0;
  for (uint32_t v : votes) total += v;
  CHECK(total == 10);

  Metrics train_m = evaluate(f, d);
  CHECK(train_m.accuracy >= 0.95);

  // bit-identical retrain under the same seed
  TrainedForest g = train_forest(d, hp, bounds);
  CHECK(g.trees == f.trees);

  HyperParams hp2 = hp;
  hp2.seed = 2;
  TrainedForest h = train_forest(d, hp2, bounds);
  CHECK(h.trees != f.trees);
}
