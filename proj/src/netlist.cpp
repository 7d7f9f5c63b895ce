#include "mldfs/netlist.hpp"

#include <cmath>
#include <cstdio>

namespace mldfs {

ClassifierNetlist compile_forest(const TrainedForest& f,
                                 const ClassBoundaries& bounds,
                                 const NetlistConfig& cfg) {
  if (f.trees.empty()) throw ConfigError("netlist: forest has no trees");
  if (!(cfg.t_cmp > 0) || !(cfg.e_cmp >= 0))
    throw ConfigError("netlist: bad comparator calibration");

  ClassifierNetlist n;
  n.t_cmp = cfg.t_cmp;
  n.e_cmp = cfg.e_cmp;
  for (const auto& t : f.trees) n.n_comparators += t.internal_node_count();

  const int n_trees = static_cast<int>(f.trees.size());
  int vote_levels = static_cast<int>(std::ceil(std::log2(n_trees)));
  if (n_trees == 1) vote_levels = 0;
  n.critical_depth = f.max_depth() + vote_levels;
  n.latency_ns = n.critical_depth * cfg.t_cmp;
  n.stages = std::max(
      1, static_cast<int>(std::ceil(n.latency_ns / bounds.uppers.front())));

  // Energy: one comparator fires per level along each tree's active path,
  // plus one vote contribution per tree.
  n.e_per_classification =
      cfg.e_cmp * (f.mean_leaf_depth() * n_trees + n_trees);
  return n;
}

std::string netlist_report(const ClassifierNetlist& n) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "comparators=%zu critical_depth=%d latency_ns=%.3f stages=%d "
                "e_per_classification_pj=%.4f",
                n.n_comparators, n.critical_depth, n.latency_ns, n.stages,
                n.e_per_classification);
  return buf;
}

nlohmann::json netlist_to_json(const ClassifierNetlist& n) {
  return nlohmann::json{{"n_comparators", n.n_comparators},
                        {"critical_depth", n.critical_depth},
                        {"t_cmp", n.t_cmp},
                        {"e_cmp", n.e_cmp},
                        {"latency_ns", n.latency_ns},
                        {"stages", n.stages},
                        {"e_per_classification", n.e_per_classification}};
}

ClassifierNetlist netlist_from_json(const nlohmann::json& j) {
  ClassifierNetlist n;
  n.n_comparators = j.at("n_comparators").get<size_t>();
  n.critical_depth = j.at("critical_depth").get<int>();
  n.t_cmp = j.at("t_cmp").get<double>();
  n.e_cmp = j.at("e_cmp").get<double>();
  n.latency_ns = j.at("latency_ns").get<double>();
  n.stages = j.at("stages").get<int>();
  n.e_per_classification = j.at("e_per_classification").get<double>();
  return n;
}

}  // namespace mldfs
