#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mldfs/delay_model.hpp"
#include "mldfs/isa.hpp"
#include "mldfs/profile.hpp"

#include <json.hpp>

namespace mldfs {

enum class PolicyMode { baseline, oracle, predicted };

const char* policy_mode_name(PolicyMode m);
PolicyMode policy_mode_from_name(const std::string& s);

struct SimPolicy {
  PolicyMode mode = PolicyMode::baseline;
  int replay_cycles = 4;  // extra worst-case cycles after a timing violation
  int ml_stages = 1;      // classifier pipeline depth (ignored by baseline)
  uint64_t max_steps = 100'000'000;
};

// Per-instruction energies by op kind (OpKind order), leakage per ns of
// execute-stage residency, and the classifier's per-evaluation cost.
struct EnergyConfig {
  std::array<double, kOpKindCount> e_dyn{1.0, 1.5, 2.0, 6.0, 2.0, 2.0};
  double p_leak = 0.5;  // pJ / ns
  double e_ml = 0.0;    // pJ per classification
};

struct SimReport {
  PolicyMode mode = PolicyMode::baseline;
  uint64_t cycles = 0;
  double total_time_ns = 0.0;
  uint64_t retired = 0;
  uint64_t exec_events = 0;
  uint64_t classifications = 0;
  uint64_t conservative = 0;  // predictions forced to the slowest class
  uint64_t replays = 0;
  uint64_t violations = 0;    // always equals replays
  uint64_t stall_cycles = 0;  // load-use bubbles plus replay hold cycles
  uint64_t flushes = 0;
  std::vector<uint64_t> pred_hist;  // per-class assigned periods
  std::vector<uint64_t> true_hist;  // per-class oracle delays
  std::array<uint64_t, kOpKindCount> kind_count{};
  std::array<uint64_t, kOpKindCount> kind_replayed{};
  double charged_time_ns = 0.0;   // per-instruction EXE residency (leakage basis)
  double exe_busy_time_ns = 0.0;  // like total_time_ns but only occupied cycles
  double energy_pj = 0.0;
  MachineState final_state;

  nlohmann::json to_json() const;  // excludes final_state
  std::string summary() const;
};

// Called for instructions whose operands are available at prediction time.
// The record carries operands and history only; result, delay and class are
// zeroed, because prediction happens before execution.
using Predictor = std::function<int(const ProfileRecord&)>;

// Cycle-accounted in-order pipeline: IF, ID, ml_stages classifier slots
// (absent in baseline), EXE, MEM, WB. Every cycle costs the period demanded
// by the EXE occupant (t_wc in baseline, the assigned class bound otherwise,
// uppers[0] when idle). Under-predictions replay: the instruction holds EXE
// for replay_cycles extra worst-case cycles. Branches and jumps resolve at
// EXE; a redirect flushes the younger stages. Architectural results always
// match run_reference.
SimReport simulate(const Program& p, const SimPolicy& policy,
                   const DelayModelConfig& dcfg, const ClassBoundaries& bounds,
                   const EnergyConfig& ecfg, const Predictor& predictor = {},
                   uint32_t mem_words = kDefaultMemWords);

double total_energy_pj(const SimReport& r, const EnergyConfig& cfg);

// One-line CSV form of the headline counters.
std::string sim_csv_header();
std::string sim_csv_row(const SimReport& r);

// Percent speedup of `fast` relative to `slow` on whole-run time. Throws if
// the two runs did not retire the same instruction count.
double compute_speedup(const SimReport& slow, const SimReport& fast);
double compute_exe_speedup(const SimReport& slow, const SimReport& fast);

struct EnergyComparison {
  double policy_pj = 0.0;
  double baseline_pj = 0.0;
  double overhead_pct = 0.0;  // negative when the policy saves energy
};

EnergyComparison compare_energy(const SimReport& policy,
                                const SimReport& baseline);

}  // namespace mldfs
