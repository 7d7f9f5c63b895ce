#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mldfs/isa.hpp"

namespace mldfs {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedOpcode : public std::runtime_error {
 public:
  explicit UnsupportedOpcode(Opcode op);
};

// Execute-unit functional families. The enum value doubles as the op-kind
// feature fed to the classifiers, so the order is load-bearing.
enum class OpKind : int { logic = 0, shift, addsub, mul, memaddr, cmp };

constexpr int kOpKindCount = 6;

const char* op_kind_name(OpKind k);
OpKind op_kind(Opcode op);  // throws UnsupportedOpcode for J and NOP

// Calibrated to a 4 ns worst case: a full 32-bit carry chain lands exactly
// on t_wc; history crosstalk is clipped there.
struct DelayModelConfig {
  double t_wc = 4.0;          // ns
  double add_base = 0.4;
  double add_per_carry = 0.1125;
  double logic_delay = 0.4;
  double shift_base = 0.4;
  double shift_per_bit = 0.06;
  double mul_base = 0.4;
  double mul_per_msb = 3.6 / 62.0;
  double history_weight = 0.3;

  void validate() const;  // throws ConfigError
};

// Upper delay bounds per class, ascending; the last equals t_wc. Class k
// covers (uppers[k-1], uppers[k]], class 0 covers [0, uppers[0]].
struct ClassBoundaries {
  std::vector<double> uppers;

  int n_classes() const { return static_cast<int>(uppers.size()); }
  double t_wc() const { return uppers.back(); }
  void validate(double t_wc) const;  // throws ConfigError

  static ClassBoundaries parse(const std::string& csv);  // "2.2,4.0"
  std::string to_string() const;

  bool operator==(const ClassBoundaries&) const = default;
};

ClassBoundaries default_boundaries(int n_classes);  // 2, 3 or 4 classes

// Longest carry chain of a + b: for each generate bit (a_i & b_i), one plus
// the run of propagate bits (a_j ^ b_j) immediately above it.
int carry_chain_length(uint32_t a, uint32_t b);

// 1-based index of the highest set bit; 0 for x == 0.
int msb1(uint32_t x);

// Operand-dependent settling time of the execute unit, before history
// effects. Subtract-like ops (SUB SLT BEQ BNE) chain a against -b.
double raw_delay(Opcode op, uint32_t a, uint32_t b, const DelayModelConfig& cfg);

// raw_delay plus crosstalk from input toggling relative to the previous
// operands, clipped to t_wc.
double delay_with_history(Opcode op, uint32_t a, uint32_t b, uint32_t a_prev,
                          uint32_t b_prev, const DelayModelConfig& cfg);

// Index of the first class whose upper bound is >= d (boundaries are
// inclusive from below). Throws std::out_of_range outside [0, t_wc].
int classify_delay(double d, const ClassBoundaries& bounds);

}  // namespace mldfs
