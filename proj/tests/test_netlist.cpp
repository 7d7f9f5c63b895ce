#include <doctest.h>

#include "mldfs/netlist.hpp"

using namespace mldfs;

namespace {

// Left-leaning chain: internal nodes at depths 0..depth-1, a leaf hanging
// off each level and two at the bottom.
Tree chain_tree(int depth) {
  Tree t;
  if (depth == 0) {
    TreeNode l;
    l.class_counts = {5, 5};
    t.nodes.push_back(l);
    return t;
  }
  for (int d = 0; d < depth; ++d) {
    TreeNode n;
    n.feature = 0;
    n.threshold = static_cast<double>(d);
    n.left = static_cast<int>(t.nodes.size()) + 1;
    n.right = -2;  // patched below
    t.nodes.push_back(n);
  }
  for (int d = 0; d < depth; ++d) {
    TreeNode leaf;
    leaf.class_counts = {1, 2};
    t.nodes[d].right = static_cast<int>(t.nodes.size());
    t.nodes.push_back(leaf);
  }
  TreeNode last;
  last.class_counts = {2, 1};
  t.nodes[depth - 1].left = static_cast<int>(t.nodes.size());
  t.nodes.push_back(last);
  return t;
}

TrainedForest forest_of(int n_trees, int depth) {
  TrainedForest f;
  f.boundaries = default_boundaries(2);
  f.n_classes = 2;
  f.n_features = 1;
  for (int i = 0; i < n_trees; ++i) f.trees.push_back(chain_tree(depth));
  return f;
}

}  // namespace

TEST_CASE("chain tree helper geometry") {
  Tree t = chain_tree(8);
  CHECK(t.depth() == 8);
  CHECK(t.internal_node_count() == 8);
  // leaves at depths 1..8 plus a second one at 8
  CHECK(t.mean_leaf_depth() == doctest::Approx(44.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("netlist worked examples") {
  const NetlistConfig cfg{};
  const ClassBoundaries c2 = default_boundaries(2);

  SUBCASE("single depth-1 tree") {
    ClassifierNetlist n = compile_forest(forest_of(1, 1), c2, cfg);
    CHECK(n.critical_depth == 1);  // no vote levels for a single tree
    CHECK(n.latency_ns == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(n.stages == 1);
    CHECK(n.n_comparators == 1);
    CHECK(n.e_per_classification == doctest::Approx(0.01).epsilon(1e-12));
  }
  SUBCASE("ten trees of depth 8") {
    ClassifierNetlist n = compile_forest(forest_of(10, 8), c2, cfg);
    CHECK(n.critical_depth == 12);  // 8 + ceil(log2 10)
    CHECK(n.latency_ns == doctest::Approx(1.8).epsilon(1e-12));
    CHECK(n.stages == 1);  // 1.8 fits inside the 2.2 fast period
    CHECK(n.n_comparators == 80);
    CHECK(n.e_per_classification ==
          doctest::Approx(0.005 * (44.0 / 9.0 * 10 + 10)).epsilon(1e-12));
  }
  SUBCASE("degenerate single-leaf forest") {
    ClassifierNetlist n = compile_forest(forest_of(4, 0), c2, cfg);
    CHECK(n.n_comparators == 0);
    CHECK(n.critical_depth == 2);  // vote reduction only
    CHECK(n.stages == 1);
    CHECK(n.e_per_classification == doctest::Approx(0.005 * 4).epsilon(1e-12));
  }
  SUBCASE("deep forest needs more stages") {
    ClassifierNetlist n = compile_forest(forest_of(10, 30), c2, cfg);
    CHECK(n.critical_depth == 34);
    CHECK(n.latency_ns == doctest::Approx(5.1).epsilon(1e-12));
    CHECK(n.stages == 3);  // ceil(5.1 / 2.2)
  }
  SUBCASE("stages grow monotonically with depth and tree count") {
    int prev = 0;
    for (int depth : {1, 4, 8, 16, 32}) {
      int s = compile_forest(forest_of(10, depth), c2, cfg).stages;
      CHECK(s >= prev);
      prev = s;
    }
    prev = 0;
    for (int trees : {1, 2, 8, 32, 128}) {
      int s = compile_forest(forest_of(trees, 8), c2, cfg).stages;
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("netlist report text") {
  const NetlistConfig cfg{};
  const ClassBoundaries c2 = default_boundaries(2);
  std::string r = netlist_report(compile_forest(forest_of(10, 8), c2, cfg));
  CHECK(r.find("stages=1") != std::string::npos);
  CHECK(r.find("comparators=80") != std::string::npos);
  CHECK(r.find("critical_depth=12") != std::string::npos);

  std::string z = netlist_report(compile_forest(forest_of(4, 0), c2, cfg));
  CHECK(z.find("comparators=0") != std::string::npos);
}

TEST_CASE("netlist serialization round-trip") {
  const NetlistConfig cfg{};
  ClassifierNetlist n =
      compile_forest(forest_of(10, 8), default_boundaries(3), cfg);
  ClassifierNetlist back = netlist_from_json(netlist_to_json(n));
  CHECK(back == n);
  CHECK(netlist_report(back) == netlist_report(n));
}

TEST_CASE("netlist rejects nonsense") {
  TrainedForest empty;
  empty.n_classes = 2;
  CHECK_THROWS_AS(compile_forest(empty, default_boundaries(2), NetlistConfig{}),
                  ConfigError);
  NetlistConfig bad;
  bad.t_cmp = 0.0;
  CHECK_THROWS_AS(compile_forest(forest_of(1, 1), default_boundaries(2), bad),
                  ConfigError);
}
