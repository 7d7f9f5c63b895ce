#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mldfs/metrics.hpp"
#include "mldfs/model_io.hpp"
#include "mldfs/netlist.hpp"
#include "mldfs/sim.hpp"
#include "mldfs/workloads.hpp"

namespace mldfs {

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The standard experiments: 2, 3 and 4 delay classes.
std::vector<ClassBoundaries> default_experiments();

struct RunConfig {
  DelayModelConfig delay;
  std::vector<ClassBoundaries> experiments = default_experiments();
  HyperParams hyper;
  EnergyConfig energy;
  SimPolicy policy;  // replay_cycles and max_steps; ml_stages is set per experiment
  NetlistConfig netlist;
  FeatureMode features = FeatureMode::six;
  std::array<double, kOpKindCount> kind_weights = GenSpec{}.kind_weights;
  int train_per_class = 3000;
  int test_per_class = 1000;
  size_t bench_n = 100'000;  // synthetic benchmark length
  bool include_random = true;
  bool include_kernels = true;
  uint64_t seed = 1;
  double accuracy_floor = 0.5;   // retrain below this held-out accuracy
  double speedup_floor = 0.0;    // ... or below this estimated speedup (%)
  int max_iterations = 3;
  std::string out_dir = "out";

  void validate() const;  // throws std::invalid_argument
};

// One results-table row; the averages rows are added by the emitters.
struct BenchResult {
  std::string benchmark;
  int classes = 0;
  double accuracy = 0.0;
  double f1_weighted = 0.0;
  double achieved_speedup_pct = 0.0;
  double ideal_speedup_pct = 0.0;
  uint64_t replays = 0;
  double energy_overhead_pct = 0.0;
  uint64_t weight = 0;  // execute events, for the instruction-weighted average
};

// header: benchmark,classes,accuracy,f1_weighted,achieved_speedup_pct,
//         ideal_speedup_pct,replays,energy_overhead_pct
// Rows must be grouped by class count; each group is followed by a "mean"
// (per-benchmark arithmetic) and a "wmean" (execute-event weighted) row.
std::string results_csv(const std::vector<BenchResult>& rows);
std::string results_text(const std::vector<BenchResult>& rows);  // aligned table

struct TrainOutcome {
  Model model;
  Metrics held_out;
  double est_speedup_pct = 0.0;
  int iterations = 0;
};

// Trains, evaluates on the held-out set, and retrains with doubled capacity
// (trees, or epochs for the net) until both floors are met or max_iterations
// is exhausted, which raises FlowError("loop exhausted after N iterations").
TrainOutcome train_with_floor(const Dataset& train, const Dataset& test,
                              HyperParams hp, const ClassBoundaries& bounds,
                              FeatureMode mode, double accuracy_floor,
                              double speedup_floor, int max_iterations,
                              int replay_cycles, std::ostream& log);

struct ExperimentResult {
  int classes = 0;
  Model model;
  std::optional<ClassifierNetlist> netlist;  // absent for the net classifier
  Metrics held_out;
  double est_speedup_pct = 0.0;
  int iterations = 0;
};

struct RunArtifacts {
  std::vector<ExperimentResult> experiments;
  std::vector<BenchResult> rows;
  std::string results_csv_path;
  std::string results_text_path;
};

// The whole flow: generate datasets and benchmarks, train per experiment
// (with the retrain loop), lower the forest to a netlist, then simulate
// baseline / oracle / predicted per benchmark. Writes dataset CSVs, model
// files, netlist reports and the results table under cfg.out_dir. Every
// artifact byte is a pure function of the config.
RunArtifacts run_all(const RunConfig& cfg, std::ostream& log);

}  // namespace mldfs
