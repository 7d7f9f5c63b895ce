#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mldfs/delay_model.hpp"
#include "mldfs/ml.hpp"
#include "mldfs/rng.hpp"

namespace mldfs {

// Nodes in preorder; node 0 is the root. Internal nodes route x[feature] <
// threshold to the left child; leaves carry the training class counts.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<uint32_t> class_counts;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;

  int leaf_for(std::span<const double> row) const;
  // Majority class of the reached leaf; ties go to the lower class index.
  int predict(std::span<const double> row) const;
  int depth() const;             // root-only tree has depth 0
  double mean_leaf_depth() const;
  size_t internal_node_count() const;

  bool operator==(const Tree&) const = default;
};

double gini_impurity(std::span<const uint32_t> counts);

struct TrainedForest {
  ClassBoundaries boundaries;
  HyperParams hyper;
  int n_classes = 0;
  size_t n_features = 0;
  std::vector<Tree> trees;

  std::vector<uint32_t> vote(std::span<const double> row) const;
  int predict(std::span<const double> row) const;
  int max_depth() const;
  double mean_leaf_depth() const;  // averaged over trees
};

// CART with Gini impurity on the given dataset (already bootstrapped by the
// caller). At each node a feature subset is drawn without replacement from
// rng; candidate thresholds are midpoints between consecutive distinct
// values. Ties between equally good splits go to the first one examined.
Tree train_tree(const Dataset& d, const HyperParams& hp, Rng& rng);

// Bags hp.resolved_estimators(n_classes) trees, each on a bootstrap sample
// (with replacement) drawn from its own derived seed stream.
TrainedForest train_forest(const Dataset& d, const HyperParams& hp,
                           const ClassBoundaries& bounds);

}  // namespace mldfs
