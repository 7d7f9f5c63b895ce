#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mldfs/delay_model.hpp"
#include "mldfs/profile.hpp"
#include "mldfs/rng.hpp"

namespace mldfs {

class GenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnreachableClassError : public GenError {
 public:
  UnreachableClassError(int class_index, const std::string& msg);
  int class_index;
};

struct GenSpec {
  int n_per_class = 3000;
  int n_classes = 0;  // 0 = follow the boundaries
  uint64_t seed = 1;
  int max_attempts_per_sample = 10000;
  uint32_t mem_words = kDefaultMemWords;
  // Relative share of each op kind within a class (renormalized over the
  // kinds that can reach it; zero excludes a kind). Defaults weight up the
  // kinds with structure the trees must tile densely: multiply's class edge
  // is a ridge in (msb a + msb b), and logic/shift dominate real traces but
  // can only ever reach the fastest class.
  std::array<double, kOpKindCount> kind_weights{3.0, 3.0, 1.0, 3.0, 1.0, 1.0};
};

// A class-balanced labeled sample set plus a straight-line program that
// realizes it: each record's (op, a, b) is produced, with identical history
// and therefore identical delay, by the instruction at sample_indices[i].
struct BalancedSet {
  std::vector<ProfileRecord> records;  // seq = dataset row index
  Program program;
  std::vector<uint32_t> sample_indices;
};

// Draws operands per class from targeted per-kind generators (rejection
// sampling against the delay oracle). Throws UnreachableClassError when no
// op kind can reach a class; GenError when attempts run out.
BalancedSet gen_balanced_dataset(const GenSpec& spec,
                                 const DelayModelConfig& cfg,
                                 const ClassBoundaries& bounds);

// n ALU/shift/multiply instructions over random registers; ADDI immediates
// are drawn with log-uniform magnitudes so operand widths stay varied.
// Branch-free: retires exactly n instructions.
Program gen_random_program(size_t n, uint64_t seed);

struct Kernel {
  std::string name;
  std::string source;
  std::string expectation;  // human summary of the postcondition
  std::function<bool(const MachineState&)> check;
};

const std::vector<Kernel>& kernel_suite();

}  // namespace mldfs
