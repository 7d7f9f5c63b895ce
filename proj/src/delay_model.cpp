#include "mldfs/delay_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace mldfs {

UnsupportedOpcode::UnsupportedOpcode(Opcode op)
    : std::runtime_error(std::string("opcode ") + opcode_name(op) +
                         " does not use the execute unit") {}

const char* op_kind_name(OpKind k) {
  static const char* names[kOpKindCount] = {"logic",  "shift", "addsub",
                                            "mul", "memaddr", "cmp"};
  return names[static_cast<int>(k)];
}

OpKind op_kind(Opcode op) {
  switch (op) {
    case Opcode::AND: case Opcode::OR: case Opcode::XOR: case Opcode::NOR:
      return OpKind::logic;
    case Opcode::SLL: case Opcode::SRL: case Opcode::SRA:
      return OpKind::shift;
    case Opcode::ADD: case Opcode::SUB: case Opcode::ADDI:
      return OpKind::addsub;
    case Opcode::MUL:
      return OpKind::mul;
    case Opcode::LW: case Opcode::SW:
      return OpKind::memaddr;
    case Opcode::SLT: case Opcode::BEQ: case Opcode::BNE:
      return OpKind::cmp;
    case Opcode::J: case Opcode::NOP:
      throw UnsupportedOpcode(op);
  }
  throw UnsupportedOpcode(op);
}

void DelayModelConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("delay model: " + m); };
  if (!(t_wc > 0)) fail("t_wc must be positive");
  for (double v : {add_base, logic_delay, shift_base, mul_base})
    if (!(v > 0) || v > t_wc) fail("base delays must lie in (0, t_wc]");
  for (double v : {add_per_carry, shift_per_bit, mul_per_msb, history_weight})
    if (v < 0) fail("slopes must be non-negative");
  // The calibration contract: a full 32-bit carry chain settles exactly at
  // t_wc (history crosstalk clips there), and the short families stay below
  // it even with maximum toggling.
  double worst_add = add_base + 32 * add_per_carry;
  double worst_shift = shift_base + 5 * shift_per_bit + history_weight;
  double worst_logic = logic_delay + history_weight;
  if (std::abs(worst_add - t_wc) > 1e-9)
    fail("adder worst case does not land on t_wc");
  if (worst_shift > t_wc || worst_logic > t_wc)
    fail("family worst case exceeds t_wc");
}

void ClassBoundaries::validate(double t_wc) const {
  if (uppers.empty()) throw ConfigError("boundaries: empty");
  for (size_t i = 0; i < uppers.size(); ++i) {
    if (!(uppers[i] > 0)) throw ConfigError("boundaries: must be positive");
    if (i && !(uppers[i] > uppers[i - 1]))
      throw ConfigError("boundaries: must be strictly ascending");
  }
  if (std::abs(uppers.back() - t_wc) > 1e-12)
    throw ConfigError("boundaries: last bound must equal t_wc");
}

ClassBoundaries ClassBoundaries::parse(const std::string& csv) {
  ClassBoundaries b;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      size_t used = 0;
      double v = std::stod(tok, &used);
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
        ++used;
      if (used != tok.size()) throw std::invalid_argument(tok);
      b.uppers.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("boundaries: cannot parse '" + tok + "'");
    }
  }
  if (b.uppers.empty()) throw ConfigError("boundaries: empty");
  return b;
}

std::string ClassBoundaries::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < uppers.size(); ++i) {
    if (i) os << ",";
    os << uppers[i];
  }
  return os.str();
}

ClassBoundaries default_boundaries(int n_classes) {
  switch (n_classes) {
    case 2: return {{2.2, 4.0}};
    case 3: return {{1.8, 2.6, 4.0}};
    case 4: return {{1.0, 2.0, 3.0, 4.0}};
    default:
      throw ConfigError("no default boundaries for " +
                        std::to_string(n_classes) + " classes");
  }
}

int msb1(uint32_t x) { return 32 - std::countl_zero(x); }

int carry_chain_length(uint32_t a, uint32_t b) {
  const uint32_t gen = a & b;
  const uint32_t prop = a ^ b;
  int best = 0;
  for (int i = 0; i < 32; ++i) {
    if (!((gen >> i) & 1)) continue;
    int len = 1;
    for (int j = i + 1; j < 32 && ((prop >> j) & 1); ++j) ++len;
    best = std::max(best, len);
  }
  return best;
}

double raw_delay(Opcode op, uint32_t a, uint32_t b, const DelayModelConfig& cfg) {
  // Subtract-like ops share the adder; their chain sees b's two's complement.
  const bool subtracts = op == Opcode::SUB || op == Opcode::SLT ||
                         op == Opcode::BEQ || op == Opcode::BNE;
  switch (op_kind(op)) {
    case OpKind::logic:
      return cfg.logic_delay;
    case OpKind::shift:
      return cfg.shift_base + cfg.shift_per_bit * std::popcount(b & 31u);
    case OpKind::addsub:
    case OpKind::memaddr:
    case OpKind::cmp:
      return cfg.add_base +
             cfg.add_per_carry * carry_chain_length(a, subtracts ? ~b + 1 : b);
    case OpKind::mul:
      return cfg.mul_base + cfg.mul_per_msb * (msb1(a) + msb1(b));
  }
  throw UnsupportedOpcode(op);
}

double delay_with_history(Opcode op, uint32_t a, uint32_t b, uint32_t a_prev,
                          uint32_t b_prev, const DelayModelConfig& cfg) {
  int toggles = std::popcount(a ^ a_prev) + std::popcount(b ^ b_prev);
  double d = raw_delay(op, a, b, cfg) + cfg.history_weight * (toggles / 64.0);
  return std::min(d, cfg.t_wc);
}

int classify_delay(double d, const ClassBoundaries& bounds) {
  if (!(d >= 0.0) || d > bounds.uppers.back())
    throw std::out_of_range("delay " + std::to_string(d) +
                            " outside [0, t_wc]");
  for (size_t k = 0; k < bounds.uppers.size(); ++k) {
    if (d <= bounds.uppers[k]) return static_cast<int>(k);
  }
  return bounds.n_classes() - 1;
}

}  // namespace mldfs
