#include <doctest.h>

#include <cmath>

#include "mldfs/delay_model.hpp"
#include "mldfs/rng.hpp"

using namespace mldfs;

namespace {

// Independent oracle: time-step the ripple adder. Each sweep applies
// c[i+1] = g[i] | (p[i] & c[i]) to all positions at once, so the carry
// wavefront advances one position per sweep; the number of sweeps until the
// carry vector stops changing is the settle time in full-adder delays.
int ripple_chain(uint32_t a, uint32_t b) {
  const uint64_t gen = a & b;
  const uint64_t prop = a ^ b;
  uint64_t carry = 0;
  int sweeps = 0;
  for (;;) {
    const uint64_t next = (gen | (prop & carry)) << 1;
    if (next == carry) break;
    carry = next;
    ++sweeps;
  }
  return sweeps;
}

const DelayModelConfig kCfg{};

}  // namespace

TEST_CASE("carry chain fixtures") {
  CHECK(carry_chain_length(0, 0) == 0);
  CHECK(carry_chain_length(1, 1) == 1);
  CHECK(carry_chain_length(0xFFFFFFFFu, 1) == 32);
  CHECK(carry_chain_length(0x80000000u, 0x80000000u) == 1);
  CHECK(carry_chain_length(0b0101, 0b0101) == 1);  // two isolated generates
  CHECK(carry_chain_length(0b0011, 0b0001) == 2);  // generate + one propagate
  CHECK(carry_chain_length(0x0000FFFFu, 1) == 16);
}

TEST_CASE("carry chain matches the ripple simulation exhaustively for 8 bits") {
  for (uint32_t a = 0; a < 256; ++a)
    for (uint32_t b = 0; b < 256; ++b) {
      if (carry_chain_length(a, b) != ripple_chain(a, b)) {
        CAPTURE(a);
        CAPTURE(b);
        REQUIRE(carry_chain_length(a, b) == ripple_chain(a, b));
      }
    }
  CHECK(true);
}

TEST_CASE("carry chain matches the ripple simulation on random 32-bit pairs") {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    uint32_t a = rng.next_u32(), b = rng.next_u32();
    if (carry_chain_length(a, b) != ripple_chain(a, b)) {
      CAPTURE(a);
      CAPTURE(b);
      REQUIRE(carry_chain_length(a, b) == ripple_chain(a, b));
    }
  }
  CHECK(true);
}

TEST_CASE("msb1 fixtures") {
  CHECK(msb1(0) == 0);
  CHECK(msb1(1) == 1);
  CHECK(msb1(2) == 2);
  CHECK(msb1(3) == 2);
  CHECK(msb1(0x80000000u) == 32);
  CHECK(msb1(0xFFFFFFFFu) == 32);
}

TEST_CASE("raw delay fixtures") {
  CHECK(raw_delay(Opcode::AND, 0xDEADBEEFu, 0x12345678u, kCfg) == 0.4);
  CHECK(raw_delay(Opcode::XOR, 0, 0, kCfg) == 0.4);
  CHECK(std::abs(raw_delay(Opcode::ADD, 0xFFFFFFFFu, 1, kCfg) - 4.0) < 1e-9);
  CHECK(raw_delay(Opcode::MUL, 0, 0, kCfg) == 0.4);
  // msb1 sum 33: 0.4 + 33 * 3.6/62
  CHECK(raw_delay(Opcode::MUL, 0x80000000u, 1, kCfg) ==
        doctest::Approx(0.4 + 33.0 * 3.6 / 62.0).epsilon(1e-12));
  // shift cost follows set bits in the low five bits of the amount
  CHECK(raw_delay(Opcode::SLL, 123, 0, kCfg) == 0.4);
  CHECK(raw_delay(Opcode::SLL, 123, 31, kCfg) ==
        doctest::Approx(0.4 + 5 * 0.06).epsilon(1e-12));
  CHECK(raw_delay(Opcode::SRL, 123, 32 + 3, kCfg) ==
        doctest::Approx(0.4 + 2 * 0.06).epsilon(1e-12));  // 35 & 31 = 3, two bits
  // address adds share the adder
  CHECK(std::abs(raw_delay(Opcode::LW, 0xFFFFFFFFu, 1, kCfg) - 4.0) < 1e-9);
}

TEST_CASE("subtract-like ops chain against the two's complement") {
  // 1 - 1: a=1 against ~1+1=0xFFFFFFFF generates at bit 0 and propagates
  // through the whole word, the adder's true worst case.
  CHECK(std::abs(raw_delay(Opcode::SUB, 1, 1, kCfg) - 4.0) < 1e-9);
  // 0 - 1: no generate bits at all.
  CHECK(raw_delay(Opcode::SUB, 0, 1, kCfg) == 0.4);
  CHECK(std::abs(raw_delay(Opcode::SLT, 5, 5, kCfg) -
                 raw_delay(Opcode::SUB, 5, 5, kCfg)) == 0.0);
  CHECK(raw_delay(Opcode::BEQ, 7, 7, kCfg) == raw_delay(Opcode::SUB, 7, 7, kCfg));
  // plain ADD of the same operands is cheap: 1+1 has a single generate
  CHECK(raw_delay(Opcode::ADD, 1, 1, kCfg) ==
        doctest::Approx(0.4 + 0.1125).epsilon(1e-12));
}

TEST_CASE("history adds scaled toggle crosstalk and clips at t_wc") {
  // all 64 bits toggled on a logic op: 0.4 + 0.3
  CHECK(delay_with_history(Opcode::AND, 0xFFFFFFFFu, 0xFFFFFFFFu, 0, 0, kCfg) ==
        doctest::Approx(0.7).epsilon(1e-12));
  CHECK(delay_with_history(Opcode::AND, 5, 6, 5, 6, kCfg) == 0.4);
  CHECK(delay_with_history(Opcode::AND, 1, 0, 0, 0, kCfg) ==
        doctest::Approx(0.4 + 0.3 / 64.0).epsilon(1e-12));
  // worst-case adder inputs with toggling on top stay pinned at t_wc
  CHECK(delay_with_history(Opcode::ADD, 0xFFFFFFFFu, 1, 0x7FFFFFFFu, 0xFFFFu,
                           kCfg) == 4.0);
  CHECK(delay_with_history(Opcode::MUL, 0xFFFFFFFFu, 0xFFFFFFFFu, 0, 0, kCfg) ==
        4.0);
}

TEST_CASE("delay is bounded over a randomized sweep") {
  Rng rng(11);
  const Opcode pool[] = {Opcode::ADD, Opcode::SUB,  Opcode::AND, Opcode::OR,
                         Opcode::XOR, Opcode::NOR,  Opcode::SLL, Opcode::SRL,
                         Opcode::SRA, Opcode::SLT,  Opcode::MUL, Opcode::LW,
                         Opcode::SW,  Opcode::ADDI, Opcode::BEQ, Opcode::BNE};
  double lo = 99.0, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    Opcode op = pool[rng.below(16)];
    double d = delay_with_history(op, rng.next_u32(), rng.next_u32(),
                                  rng.next_u32(), rng.next_u32(), kCfg);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  CHECK(lo >= 0.4);
  CHECK(hi <= 4.0);
}

TEST_CASE("config validation enforces the calibration contract") {
  DelayModelConfig ok{};
  CHECK_NOTHROW(ok.validate());

  DelayModelConfig bad_add{};
  bad_add.add_per_carry = 0.1;  // 0.4 + 3.2 != 4.0
  CHECK_THROWS_AS(bad_add.validate(), ConfigError);

  DelayModelConfig bad_hist{};
  bad_hist.history_weight = 3.5;  // shift worst case 0.7 + 3.5 > t_wc
  CHECK_THROWS_AS(bad_hist.validate(), ConfigError);

  DelayModelConfig bad_base{};
  bad_base.logic_delay = 0.0;
  CHECK_THROWS_AS(bad_base.validate(), ConfigError);

  DelayModelConfig scaled{};
  scaled.t_wc = 8.0;
  scaled.add_per_carry = 7.6 / 32.0;
  scaled.history_weight = 1.0;
  CHECK_NOTHROW(scaled.validate());
}

TEST_CASE("op kinds partition the opcode set") {
  CHECK(op_kind(Opcode::AND) == OpKind::logic);
  CHECK(op_kind(Opcode::NOR) == OpKind::logic);
  CHECK(op_kind(Opcode::SRA) == OpKind::shift);
  CHECK(op_kind(Opcode::ADDI) == OpKind::addsub);
  CHECK(op_kind(Opcode::MUL) == OpKind::mul);
  CHECK(op_kind(Opcode::LW) == OpKind::memaddr);
  CHECK(op_kind(Opcode::SW) == OpKind::memaddr);
  CHECK(op_kind(Opcode::SLT) == OpKind::cmp);
  CHECK(op_kind(Opcode::BNE) == OpKind::cmp);
  CHECK_THROWS_AS(op_kind(Opcode::J), UnsupportedOpcode);
  CHECK_THROWS_AS(op_kind(Opcode::NOP), UnsupportedOpcode);
  CHECK(std::string(op_kind_name(OpKind::memaddr)) == "memaddr");
}

TEST_CASE("classification boundaries") {
  const ClassBoundaries c2 = default_boundaries(2);
  const ClassBoundaries c3 = default_boundaries(3);
  const ClassBoundaries c4 = default_boundaries(4);

  SUBCASE("paper sets") {
    CHECK(c2.uppers == std::vector<double>{2.2, 4.0});
    CHECK(c3.uppers == std::vector<double>{1.8, 2.6, 4.0});
    CHECK(c4.uppers == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK_THROWS_AS(default_boundaries(5), ConfigError);
  }
  SUBCASE("boundary values are inclusive from below") {
    CHECK(classify_delay(0.0, c2) == 0);
    CHECK(classify_delay(2.2, c2) == 0);
    CHECK(classify_delay(std::nextafter(2.2, 5.0), c2) == 1);
    CHECK(classify_delay(4.0, c2) == 1);

    CHECK(classify_delay(1.8, c3) == 0);
    CHECK(classify_delay(2.6, c3) == 1);
    CHECK(classify_delay(std::nextafter(2.6, 5.0), c3) == 2);

    CHECK(classify_delay(1.0, c4) == 0);
    CHECK(classify_delay(2.0, c4) == 1);
    CHECK(classify_delay(3.0, c4) == 2);
    CHECK(classify_delay(3.5, c4) == 3);
  }
  SUBCASE("out of range throws") {
    CHECK_THROWS_AS(classify_delay(-0.1, c2), std::out_of_range);
    CHECK_THROWS_AS(classify_delay(4.0000001, c2), std::out_of_range);
  }
  SUBCASE("parse and print round-trip") {
    ClassBoundaries b = ClassBoundaries::parse("1.8, 2.6, 4.0");
    CHECK(b == c3);
    CHECK(ClassBoundaries::parse(c4.to_string()) == c4);
    CHECK_THROWS_AS(ClassBoundaries::parse("1.8,zap,4.0"), ConfigError);
    CHECK_THROWS_AS(ClassBoundaries::parse(""), ConfigError);
  }
  SUBCASE("validation") {
    CHECK_NOTHROW(c3.validate(4.0));
    CHECK_THROWS_AS(c3.validate(5.0), ConfigError);  // last bound must be t_wc
    ClassBoundaries unsorted{{2.6, 1.8, 4.0}};
    CHECK_THROWS_AS(unsorted.validate(4.0), ConfigError);
  }
}
