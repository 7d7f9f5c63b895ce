#include "mldfs/forest.hpp"

#include <algorithm>
#include <numeric>

namespace mldfs {

void Dataset::validate() const {
  if (rows.size() != labels.size())
    throw std::invalid_argument("dataset: rows/labels size mismatch");
  if (n_classes < 2) throw std::invalid_argument("dataset: need >= 2 classes");
  const size_t f = n_features();
  for (const auto& r : rows)
    if (r.size() != f) throw std::invalid_argument("dataset: ragged rows");
  for (int y : labels)
    if (y < 0 || y >= n_classes)
      throw std::invalid_argument("dataset: label out of range");
}

Dataset to_dataset(std::span<const ProfileRecord> records, FeatureMode mode,
                   int n_classes) {
  Dataset d;
  d.n_classes = n_classes;
  d.rows.reserve(records.size());
  d.labels.reserve(records.size());
  for (const auto& r : records) {
    d.rows.push_back(feature_row(r, mode));
    d.labels.push_back(r.true_class);
  }
  d.validate();
  return d;
}

const char* algo_name(Algo a) { return a == Algo::rf ? "rf" : "nn"; }

Algo algo_from_name(const std::string& s) {
  if (s == "rf") return Algo::rf;
  if (s == "nn") return Algo::nn;
  throw std::invalid_argument("unknown algorithm '" + s + "' (want rf or nn)");
}

void HyperParams::validate() const {
  if (n_estimators < 0 || max_depth < 1 || min_leaf < 1 || feature_subsample < 0)
    throw std::invalid_argument("hyperparameters: negative or zero sizes");
  if (nn_hidden < 1 || nn_epochs < 0)
    throw std::invalid_argument("hyperparameters: bad net shape");
  if (!(nn_lr > 0) || nn_momentum < 0 || nn_momentum >= 1)
    throw std::invalid_argument("hyperparameters: bad optimizer settings");
}

double gini_impurity(std::span<const uint32_t> counts) {
  uint64_t total = 0;
  for (uint32_t c : counts) total += c;
  if (total == 0) return 0.0;
  double g = 1.0;
  for (uint32_t c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

int Tree::leaf_for(std::span<const double> row) const {
  int i = 0;
  while (!nodes[i].is_leaf())
    i = row[nodes[i].feature] < nodes[i].threshold ? nodes[i].left : nodes[i].right;
  return i;
}

int Tree::predict(std::span<const double> row) const {
  const auto& counts = nodes[leaf_for(row)].class_counts;
  int best = 0;
  for (size_t k = 1; k < counts.size(); ++k)
    if (counts[k] > counts[best]) best = static_cast<int>(k);
  return best;
}

namespace {

int node_depth(const std::vector<TreeNode>& nodes, int i) {
  if (nodes[i].is_leaf()) return 0;
  return 1 + std::max(node_depth(nodes, nodes[i].left),
                      node_depth(nodes, nodes[i].right));
}

void leaf_depths(const std::vector<TreeNode>& nodes, int i, int d,
                 uint64_t& sum, uint64_t& count) {
  if (nodes[i].is_leaf()) {
    sum += static_cast<uint64_t>(d);
    ++count;
    return;
  }
  leaf_depths(nodes, nodes[i].left, d + 1, sum, count);
  leaf_depths(nodes, nodes[i].right, d + 1, sum, count);
}

}  // namespace

int Tree::depth() const { return node_depth(nodes, 0); }

double Tree::mean_leaf_depth() const {
  uint64_t sum = 0, count = 0;
  leaf_depths(nodes, 0, 0, sum, count);
  return static_cast<double>(sum) / static_cast<double>(count);
}

size_t Tree::internal_node_count() const {
  size_t n = 0;
  for (const auto& node : nodes)
    if (!node.is_leaf()) ++n;
  return n;
}

namespace {

struct Builder {
  const Dataset& d;
  const HyperParams& hp;
  Rng& rng;
  int k_features;
  std::vector<TreeNode> nodes;
  std::vector<size_t> idx;        // permuted in place while partitioning
  std::vector<size_t> sorted_buf; // scratch for per-feature value sorting

  std::vector<uint32_t> count_classes(size_t lo, size_t hi) const {
    std::vector<uint32_t> counts(d.n_classes, 0);
    for (size_t i = lo; i < hi; ++i) ++counts[d.labels[idx[i]]];
    return counts;
  }

  int make_leaf(std::vector<uint32_t> counts) {
    TreeNode leaf;
    leaf.class_counts = std::move(counts);
    nodes.push_back(std::move(leaf));
    return static_cast<int>(nodes.size()) - 1;
  }

  // Builds the subtree over idx[lo, hi) and returns its node index.
  int build(size_t lo, size_t hi, int depth) {
    const size_t n = hi - lo;
    auto counts = count_classes(lo, hi);
    const double parent_gini = gini_impurity(counts);
    const size_t min_leaf = static_cast<size_t>(hp.min_leaf);

    bool stop = depth >= hp.max_depth || n < 2 * min_leaf || parent_gini == 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = parent_gini - 1e-12;  // require a real decrease

    if (!stop) {
      auto features = rng.sample_without_replacement(
          static_cast<int>(d.n_features()), k_features);
      for (int f : features) {
        sorted_buf.assign(idx.begin() + lo, idx.begin() + hi);
        std::sort(sorted_buf.begin(), sorted_buf.end(), [&](size_t a, size_t b) {
          double va = d.rows[a][f], vb = d.rows[b][f];
          if (va != vb) return va < vb;
          return a < b;  // stable order for determinism
        });
        std::vector<uint32_t> left(d.n_classes, 0);
        std::vector<uint32_t> right = counts;
        for (size_t i = 0; i + 1 < n; ++i) {
          int y = d.labels[sorted_buf[i]];
          ++left[y];
          --right[y];
          double v = d.rows[sorted_buf[i]][f];
          double v_next = d.rows[sorted_buf[i + 1]][f];
          if (v == v_next) continue;
          size_t nl = i + 1, nr = n - nl;
          if (nl < min_leaf || nr < min_leaf) continue;
          double score = (nl * gini_impurity(left) + nr * gini_impurity(right)) /
                         static_cast<double>(n);
          if (score < best_score) {
            best_score = score;
            best_feature = f;
            best_threshold = 0.5 * (v + v_next);
          }
        }
      }
    }

    if (best_feature < 0) return make_leaf(std::move(counts));

    auto mid_it = std::stable_partition(
        idx.begin() + lo, idx.begin() + hi,
        [&](size_t i) { return d.rows[i][best_feature] < best_threshold; });
    size_t mid = static_cast<size_t>(mid_it - idx.begin());

    int self = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[self].feature = best_feature;
    nodes[self].threshold = best_threshold;
    int l = build(lo, mid, depth + 1);
    int r = build(mid, hi, depth + 1);
    nodes[self].left = l;
    nodes[self].right = r;
    return self;
  }
};

}  // namespace

Tree train_tree(const Dataset& d, const HyperParams& hp, Rng& rng) {
  d.validate();
  hp.validate();
  if (d.size() == 0) throw TrainingError("cannot train a tree on no samples");
  Builder b{d, hp, rng, hp.resolved_subsample(d.n_features()), {}, {}, {}};
  b.idx.resize(d.size());
  std::iota(b.idx.begin(), b.idx.end(), size_t{0});
  b.build(0, d.size(), 0);
  Tree t;
  t.nodes = std::move(b.nodes);
  return t;
}

std::vector<uint32_t> TrainedForest::vote(std::span<const double> row) const {
  std::vector<uint32_t> votes(n_classes, 0);
  for (const auto& t : trees) ++votes[t.predict(row)];
  return votes;
}

int TrainedForest::predict(std::span<const double> row) const {
  auto votes = vote(row);
  int best = 0;
  for (int k = 1; k < n_classes; ++k) {
    // ties go to the lower class, or to the higher (safe) one if configured
    bool wins = hyper.tie_break == TieBreak::lowest ? votes[k] > votes[best]
                                                    : votes[k] >= votes[best];
    if (wins) best = k;
  }
  return best;
}

int TrainedForest::max_depth() const {
  int m = 0;
  for (const auto& t : trees) m = std::max(m, t.depth());
  return m;
}

double TrainedForest::mean_leaf_depth() const {
  double s = 0;
  for (const auto& t : trees) s += t.mean_leaf_depth();
  return trees.empty() ? 0.0 : s / static_cast<double>(trees.size());
}

TrainedForest train_forest(const Dataset& d, const HyperParams& hp,
                           const ClassBoundaries& bounds) {
  d.validate();
  hp.validate();
  if (d.n_classes != bounds.n_classes())
    throw TrainingError("dataset classes do not match boundary count");
  TrainedForest m;
  m.boundaries = bounds;
  m.hyper = hp;
  m.n_classes = d.n_classes;
  m.n_features = d.n_features();
  const int n_trees = hp.resolved_estimators(d.n_classes);
  m.trees.reserve(n_trees);
  for (int t = 0; t < n_trees; ++t) {
    Rng rng(derive_seed(hp.seed, static_cast<uint64_t>(t)));
    Dataset boot;
    boot.n_classes = d.n_classes;
    boot.rows.reserve(d.size());
    boot.labels.reserve(d.size());
    for (size_t i = 0; i < d.size(); ++i) {
      size_t j = rng.index(d.size());
      boot.rows.push_back(d.rows[j]);
      boot.labels.push_back(d.labels[j]);
    }
    m.trees.push_back(train_tree(boot, hp, rng));
  }
  return m;
}

}  // namespace mldfs
