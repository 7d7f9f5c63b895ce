#pragma once

#include <string>

#include "mldfs/forest.hpp"

#include <json.hpp>

namespace mldfs {

struct NetlistConfig {
  double t_cmp = 0.15;   // ns per comparator level
  double e_cmp = 0.005;  // pJ per comparator evaluation
};

// Cost summary of the forest lowered to a comparator netlist: every internal
// node becomes one threshold comparator, the per-tree votes are combined by
// a log2-depth majority reduction.
struct ClassifierNetlist {
  size_t n_comparators = 0;
  int critical_depth = 0;       // deepest tree + vote reduction levels
  double t_cmp = 0.0;
  double e_cmp = 0.0;
  double latency_ns = 0.0;      // critical_depth * t_cmp
  int stages = 0;               // pipeline stages at the fastest class period
  double e_per_classification = 0.0;  // pJ

  bool operator==(const ClassifierNetlist&) const = default;
};

// The stage count divides latency by the fastest class period (uppers[0]):
// the classifier must keep up even when the core runs at its quickest clock.
ClassifierNetlist compile_forest(const TrainedForest& f,
                                 const ClassBoundaries& bounds,
                                 const NetlistConfig& cfg);

std::string netlist_report(const ClassifierNetlist& n);

nlohmann::json netlist_to_json(const ClassifierNetlist& n);
ClassifierNetlist netlist_from_json(const nlohmann::json& j);

}  // namespace mldfs
