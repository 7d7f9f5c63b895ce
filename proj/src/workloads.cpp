#include "mldfs/workloads.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <optional>

namespace mldfs {

UnreachableClassError::UnreachableClassError(int class_index_,
                                             const std::string& msg)
    : GenError(msg), class_index(class_index_) {}

namespace {

const std::vector<Opcode>& kind_opcodes(OpKind k) {
  static const std::vector<Opcode> table[kOpKindCount] = {
      {Opcode::AND, Opcode::OR, Opcode::XOR, Opcode::NOR},
      {Opcode::SLL, Opcode::SRL, Opcode::SRA},
      {Opcode::ADD, Opcode::ADDI, Opcode::SUB},
      {Opcode::MUL},
      {Opcode::LW, Opcode::SW},
      {Opcode::SLT, Opcode::BEQ, Opcode::BNE},
  };
  return table[static_cast<int>(k)];
}

bool is_reg_imm(Opcode op) {
  switch (op) {
    case Opcode::ADDI: case Opcode::SLL: case Opcode::SRL: case Opcode::SRA:
    case Opcode::LW: case Opcode::SW:
      return true;
    default:
      return false;
  }
}

// Delay interval a kind can reach. Every realization fragment ends with a
// history-shaping ADDI, so the previous event is (0, h, h) for a free h:
// pop(a ^ 0) spans [0, 32] via a and pop(b ^ h) spans [0, 32] via h, which
// puts the full toggle range [0, 64] in reach for every kind.
struct KindRange {
  double lo, hi;
};

KindRange kind_delay_range(OpKind k, const DelayModelConfig& c) {
  const double hw = c.history_weight;
  switch (k) {
    case OpKind::logic:
      return {c.logic_delay, std::min(c.t_wc, c.logic_delay + hw)};
    case OpKind::shift:
      return {c.shift_base,
              std::min(c.t_wc, c.shift_base + 5 * c.shift_per_bit + hw)};
    case OpKind::addsub:
    case OpKind::memaddr:
    case OpKind::cmp:
      return {c.add_base,
              std::min(c.t_wc, c.add_base + 32 * c.add_per_carry + hw)};
    case OpKind::mul:
      return {c.mul_base,
              std::min(c.t_wc, c.mul_base + 64 * c.mul_per_msb + hw)};
  }
  return {0, 0};
}

uint32_t value_with_msb(int w, Rng& rng) {
  if (w <= 0) return 0;
  uint32_t top = 1u << (w - 1);
  return top | (rng.next_u32() & (top - 1));
}

// log-uniform magnitudes: bit width first, then a value of that width
uint32_t logu32(Rng& rng) { return value_with_msb(static_cast<int>(rng.below(33)), rng); }

uint32_t value_with_popcount(int p, Rng& rng) {
  uint32_t v = 0;
  for (int bit : rng.sample_without_replacement(32, p)) v |= 1u << bit;
  return v;
}

// Overwrites a window of (a, b) so that a + b carries for exactly cc bits
// starting at bit s: generate at s, propagate above it, kill at the top.
void force_chain_window(uint32_t& a, uint32_t& b, int cc, int s) {
  uint32_t run = 0;
  for (int j = s + 1; j <= s + cc - 1; ++j) run |= 1u << j;
  const uint32_t gen = 1u << s;
  a = (a & ~gen) | run | gen;
  b = (b & ~run) | gen;
  if (s + cc <= 31) {
    a &= ~(1u << (s + cc));
    b &= ~(1u << (s + cc));
  }
}

struct Proposal {
  uint32_t a = 0;
  uint32_t b = 0;
  uint32_t h = 0;  // loaded by the fragment's last setup ADDI
};

// History value for the shaping ADDI: half the draws pin pop(b ^ h)
// exactly so the second toggle feature spans its whole range, half are
// natural magnitudes.
uint32_t history_value(uint32_t b, Rng& rng) {
  if (rng.below(2) == 0) return logu32(rng);
  return b ^ value_with_popcount(static_cast<int>(rng.below(33)), rng);
}

// Toggle totals t that land base + hw * t / 64 inside (lo, hi], if any.
bool toggle_band(double lo, double hi, double base, double hw,
                 int& tmin, int& tmax) {
  if (hw <= 0.0) return false;
  tmin = static_cast<int>(std::floor((lo - base) * 64.0 / hw)) + 1;
  tmax = static_cast<int>(std::floor((hi - base) * 64.0 / hw));
  tmin = std::clamp(tmin, 0, 64);
  tmax = std::clamp(tmax, 0, 64);
  return tmin <= tmax;
}

// Splits a toggle total into pop(a ^ 0) and pop(b ^ h), then realizes both.
void apply_toggles(Proposal& p, int t, Rng& rng) {
  int ta = std::clamp(static_cast<int>(rng.below(t + 1)), t - 32, 32);
  p.a = value_with_popcount(ta, rng);
  p.h = p.b ^ value_with_popcount(t - ta, rng);
}

// One candidate operand pair (plus history value) for the kind. Even
// attempts draw naturally; odd attempts steer toward the target interval
// so extreme classes stay reachable. Acceptance is decided by the caller
// against the real delay.
Proposal propose(OpKind kind, double lo, double hi, bool steered,
                 const DelayModelConfig& c, uint32_t mem_words, Rng& rng) {
  Proposal p;
  const double hw = c.history_weight;
  switch (kind) {
    case OpKind::logic: {
      int tmin, tmax;
      if (steered && toggle_band(lo, hi, c.logic_delay, hw, tmin, tmax)) {
        p.b = logu32(rng);
        apply_toggles(p, tmin + static_cast<int>(rng.below(tmax - tmin + 1)),
                      rng);
        return p;
      }
      p.a = logu32(rng);
      p.b = logu32(rng);
      p.h = history_value(p.b, rng);
      return p;
    }
    case OpKind::shift: {
      p.b = rng.below(32);
      int tmin, tmax;
      if (steered &&
          toggle_band(lo, hi,
                      c.shift_base + c.shift_per_bit * std::popcount(p.b & 31u),
                      hw, tmin, tmax)) {
        apply_toggles(p, tmin + static_cast<int>(rng.below(tmax - tmin + 1)),
                      rng);
        return p;
      }
      p.a = logu32(rng);
      p.h = history_value(p.b, rng);
      return p;
    }
    case OpKind::mul: {
      if (steered) {
        int mmin = static_cast<int>(
            std::floor((lo - c.mul_base) / c.mul_per_msb)) - 1;
        int mmax = static_cast<int>(
            std::ceil((hi - c.mul_base) / c.mul_per_msb)) + 1;
        mmin = std::clamp(mmin, 0, 64);
        mmax = std::clamp(mmax, mmin, 64);
        int m = mmin + static_cast<int>(rng.below(mmax - mmin + 1));
        int wa = std::clamp(static_cast<int>(rng.below(m + 1)), m - 32, 32);
        p.a = value_with_msb(wa, rng);
        p.b = value_with_msb(m - wa, rng);
      } else {
        p.a = logu32(rng);
        p.b = logu32(rng);
      }
      p.h = history_value(p.b, rng);
      return p;
    }
    case OpKind::addsub:
    case OpKind::memaddr:
    case OpKind::cmp: {
      if (!steered) {
        p.a = logu32(rng);
        p.b = logu32(rng);
        p.h = history_value(p.b, rng);
        return p;
      }
      int cc_lo = static_cast<int>(
                      std::floor((lo - c.add_base) / c.add_per_carry)) - 2;
      int cc_hi = static_cast<int>(
                      std::ceil((hi - c.add_base) / c.add_per_carry)) + 1;
      cc_lo = std::clamp(cc_lo, 0, 32);
      cc_hi = std::clamp(cc_hi, cc_lo, 32);
      int cc = cc_lo + static_cast<int>(rng.below(cc_hi - cc_lo + 1));
      // Slow-class chains ride on high-activity operands so a deliberately
      // slow sample is not a width lookalike of an ordinary wide operand;
      // fast-class draws are wide with natural bit density, landing in the
      // same cells as the plain wide values real traces produce.
      uint32_t a = lo > 0.0 ? value_with_popcount(
                                  25 + static_cast<int>(rng.below(8)), rng)
                            : value_with_msb(
                                  25 + static_cast<int>(rng.below(8)), rng);
      uint32_t b = lo > 0.0 ? rng.next_u32() & rng.next_u32() & rng.next_u32()
                            : value_with_msb(
                                  25 + static_cast<int>(rng.below(8)), rng) &
                                  rng.next_u32();
      if (cc == 0) {
        b &= ~a;  // no generate bit anywhere
      } else {
        int s = kind == OpKind::memaddr
                    ? 32 - cc  // carry out of bit 31 keeps the address small
                    : static_cast<int>(rng.below(33 - cc));
        force_chain_window(a, b, cc, s);
        if (kind == OpKind::memaddr) {
          uint32_t low_mask = s ? (1u << s) - 1 : 0;
          a &= ~low_mask;
          b &= ~low_mask;
          if (s >= 1) {
            uint32_t cap = static_cast<uint32_t>(std::min<uint64_t>(
                std::max<uint64_t>(1, mem_words / 2), 1ull << (s - 1)));
            a |= rng.below(cap);
            b |= rng.below(cap);
          }
        }
      }
      if (kind == OpKind::cmp) b = ~b + 1;  // chain target is -b
      p.a = a;
      p.b = b;
      // High history toggles to match: gives slow chains a second
      // high-activity coordinate, so trees that skip one toggle feature
      // can still tell them from natural operands.
      p.h = lo > 0.0 ? p.b ^ value_with_popcount(
                                 25 + static_cast<int>(rng.below(8)), rng)
                     : history_value(p.b, rng);
      return p;
    }
  }
  return p;
}

Instruction instruction_for(Opcode op, uint32_t b) {
  Instruction ins;
  ins.op = op;
  switch (op) {
    case Opcode::ADDI: case Opcode::SLL: case Opcode::SRL: case Opcode::SRA:
      ins.rd = 3;
      ins.rs = 1;
      ins.imm = static_cast<int32_t>(b);
      break;
    case Opcode::LW:
      ins.rd = 3;
      ins.rs = 1;
      ins.imm = static_cast<int32_t>(b);
      break;
    case Opcode::SW:
      ins.rt = 3;
      ins.rs = 1;
      ins.imm = static_cast<int32_t>(b);
      break;
    case Opcode::BEQ: case Opcode::BNE:
      ins.rs = 1;
      ins.rt = 2;
      break;
    default:
      ins.rd = 3;
      ins.rs = 1;
      ins.rt = 2;
      break;
  }
  return ins;
}

// Builds the record exactly as the realization fragment will produce it.
// Every fragment ends with `ADDI r4, r0, h`, so the event preceding the
// sample is (0, h, h) for every kind. Result is filled later, only for
// accepted samples, so the scratch machine's memory and r3 evolve in
// lockstep with the assembled program.
ProfileRecord make_candidate(Opcode op, uint32_t a, uint32_t b, uint32_t h,
                             const DelayModelConfig& cfg,
                             const ClassBoundaries& bounds) {
  ProfileRecord r;
  r.op = op;
  r.a = a;
  r.b = b;
  r.a_prev = 0;
  r.b_prev = h;
  r.prev_result = h;
  r.delay_ns = delay_with_history(op, a, b, r.a_prev, r.b_prev, cfg);
  r.true_class = classify_delay(r.delay_ns, bounds);
  return r;
}

void exec_sample(ProfileRecord& r, MachineState& scratch) {
  scratch.pc = 0;
  scratch.regs[1] = r.a;
  if (!is_reg_imm(r.op)) scratch.regs[2] = r.b;  // r3 carries over, as in the program
  auto ev = exec_instruction(instruction_for(r.op, r.b), scratch);
  r.result = ev->result;
}

}  // namespace

BalancedSet gen_balanced_dataset(const GenSpec& spec,
                                 const DelayModelConfig& cfg,
                                 const ClassBoundaries& bounds) {
  cfg.validate();
  bounds.validate(cfg.t_wc);
  const int C = bounds.n_classes();
  if (spec.n_classes != 0 && spec.n_classes != C)
    throw GenError("dataset spec asks for " + std::to_string(spec.n_classes) +
                   " classes but boundaries define " + std::to_string(C));
  if (spec.n_per_class < 1) throw GenError("n_per_class must be >= 1");
  if (spec.max_attempts_per_sample < 1)
    throw GenError("max_attempts_per_sample must be >= 1");
  for (double w : spec.kind_weights)
    if (!(w >= 0.0)) throw GenError("kind weights must be non-negative");

  Rng rng(spec.seed);
  MachineState scratch(spec.mem_words);
  std::array<size_t, kOpKindCount> rotation{};
  std::vector<ProfileRecord> records;
  records.reserve(static_cast<size_t>(spec.n_per_class) * C);

  for (int k = 0; k < C; ++k) {
    const double lo = k == 0 ? 0.0 : bounds.uppers[k - 1];
    const double hi = bounds.uppers[k];

    std::vector<OpKind> elig;
    for (int ki = 0; ki < kOpKindCount; ++ki) {
      KindRange r = kind_delay_range(static_cast<OpKind>(ki), cfg);
      if (r.lo <= hi && r.hi > lo) elig.push_back(static_cast<OpKind>(ki));
    }
    if (elig.empty()) {
      KindRange all{kind_delay_range(OpKind::logic, cfg).lo,
                    kind_delay_range(OpKind::addsub, cfg).hi};
      for (int ki = 0; ki < kOpKindCount; ++ki) {
        KindRange r = kind_delay_range(static_cast<OpKind>(ki), cfg);
        all.lo = std::min(all.lo, r.lo);
        all.hi = std::max(all.hi, r.hi);
      }
      throw UnreachableClassError(
          k, "class " + std::to_string(k) + " covers (" + std::to_string(lo) +
                 ", " + std::to_string(hi) + "] ns but attainable delays lie in [" +
                 std::to_string(all.lo) + ", " + std::to_string(all.hi) + "]");
    }

    // Weighted quota per eligible kind (largest remainder), laid out as a
    // shuffled schedule so the realized program interleaves kinds.
    double wsum = 0.0;
    for (OpKind kind : elig) wsum += spec.kind_weights[static_cast<int>(kind)];
    if (wsum <= 0.0)
      throw GenError("class " + std::to_string(k) +
                     ": every eligible kind has zero weight");
    std::vector<int> quota(elig.size(), 0);
    std::vector<std::pair<double, size_t>> frac;
    int assigned = 0;
    for (size_t i = 0; i < elig.size(); ++i) {
      double share = spec.kind_weights[static_cast<int>(elig[i])] / wsum *
                     spec.n_per_class;
      quota[i] = static_cast<int>(share);
      assigned += quota[i];
      frac.emplace_back(share - quota[i], i);
    }
    std::stable_sort(frac.begin(), frac.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (size_t r = 0; assigned < spec.n_per_class; ++assigned, ++r)
      ++quota[frac[r % frac.size()].second];
    std::vector<size_t> schedule;
    schedule.reserve(static_cast<size_t>(spec.n_per_class));
    for (size_t i = 0; i < elig.size(); ++i)
      schedule.insert(schedule.end(), quota[i], i);
    for (size_t i = schedule.size(); i > 1; --i)
      std::swap(schedule[i - 1], schedule[rng.below(static_cast<uint32_t>(i))]);

    std::vector<bool> dead(elig.size(), false);
    size_t rr = 0;  // fallback rotation once a scheduled kind is spent
    for (size_t slot : schedule) {
      std::optional<ProfileRecord> got;
      while (!got) {
        if (std::all_of(dead.begin(), dead.end(), [](bool d) { return d; }))
          throw GenError("class " + std::to_string(k) +
                         ": every op kind ran out of attempts (" +
                         std::to_string(spec.max_attempts_per_sample) +
                         " per sample)");
        size_t idx = slot;
        if (dead[idx])
          do idx = rr++ % elig.size(); while (dead[idx]);
        OpKind kind = elig[idx];
        const auto& ops = kind_opcodes(kind);
        Opcode op = ops[rotation[static_cast<int>(kind)] % ops.size()];

        for (int attempt = 0; attempt < spec.max_attempts_per_sample; ++attempt) {
          Proposal pr = propose(kind, lo, hi, attempt % 2 == 1, cfg,
                                spec.mem_words, rng);
          if (kind == OpKind::memaddr && pr.a + pr.b >= spec.mem_words) continue;
          ProfileRecord rec = make_candidate(op, pr.a, pr.b, pr.h, cfg, bounds);
          if (rec.delay_ns > lo && rec.delay_ns <= hi) {
            exec_sample(rec, scratch);
            got = rec;
            break;
          }
        }
        if (!got) {
          dead[idx] = true;
          continue;
        }
        assert(got->true_class == k);
        ++rotation[static_cast<int>(kind)];
        records.push_back(*got);
      }
    }
  }

  // Assemble the matching straight-line program.
  BalancedSet set;
  set.sample_indices.reserve(records.size());
  auto setup = [](uint8_t rd, uint32_t value) {
    Instruction ins;
    ins.op = Opcode::ADDI;
    ins.rd = rd;
    ins.imm = static_cast<int32_t>(value);
    return ins;  // rs defaults to r0
  };
  for (size_t i = 0; i < records.size(); ++i) {
    ProfileRecord& r = records[i];
    r.seq = i;
    auto& code = set.program.instructions;
    code.push_back(setup(1, r.a));
    if (!is_reg_imm(r.op)) code.push_back(setup(2, r.b));
    code.push_back(setup(4, r.prev_result));  // the (0, h, h) event
    Instruction ins = instruction_for(r.op, r.b);
    if (ins.op == Opcode::BEQ || ins.op == Opcode::BNE)
      ins.imm = static_cast<int32_t>(code.size()) + 1;  // fall through either way
    set.sample_indices.push_back(static_cast<uint32_t>(code.size()));
    code.push_back(ins);
  }
  set.records = std::move(records);
  return set;
}

Program gen_random_program(size_t n, uint64_t seed) {
  if (n == 0) throw GenError("random program needs at least one instruction");
  static constexpr Opcode kPool[12] = {
      Opcode::ADD, Opcode::SUB, Opcode::ADDI, Opcode::AND,
      Opcode::OR,  Opcode::XOR, Opcode::NOR,  Opcode::SLL,
      Opcode::SRL, Opcode::SRA, Opcode::SLT,  Opcode::MUL};
  Rng rng(seed);
  Program p;
  p.instructions.reserve(n);
  // seed the register file with random values first (counts toward n)
  for (uint8_t r = 1; r <= 31 && p.instructions.size() < n; ++r) {
    Instruction ins;
    ins.op = Opcode::ADDI;
    ins.rd = r;
    ins.imm = static_cast<int32_t>(rng.next_u32());
    p.instructions.push_back(ins);
  }
  while (p.instructions.size() < n) {
    Instruction ins;
    ins.op = kPool[rng.below(12)];
    ins.rd = static_cast<uint8_t>(1 + rng.below(31));
    ins.rs = static_cast<uint8_t>(rng.below(32));
    switch (ins.op) {
      case Opcode::ADDI:
        ins.imm = static_cast<int32_t>(logu32(rng));
        break;
      case Opcode::SLL: case Opcode::SRL: case Opcode::SRA:
        ins.imm = static_cast<int32_t>(rng.below(32));
        break;
      default:
        ins.rt = static_cast<uint8_t>(rng.below(32));
        break;
    }
    p.instructions.push_back(ins);
  }
  return p;
}

namespace {

const char* kFibSource = R"(# iterative fibonacci: r5 = fib(12)
ADDI r4, r0, 12
ADDI r2, r0, 0       # fib(0)
ADDI r5, r0, 1       # fib(1)
ADDI r1, r0, 1       # i
loop: BEQ r1, r4, done
ADD r3, r2, r5
ADD r2, r5, r0
ADD r5, r3, r0
ADDI r1, r1, 1
J loop
done:
)";

const char* kFirSource = R"(# 4-tap fir filter: y[n] = sum h[t] * x[n-t]
# taps h = {1,2,3,4} at 0, signal x[i] = i*i + 3 at 8, output y at 32
ADDI r1, r0, 0
ADDI r9, r0, 4
hinit: ADDI r3, r1, 1
SW r3, 0(r1)
ADDI r1, r1, 1
BNE r1, r9, hinit
ADDI r1, r0, 0
ADDI r9, r0, 16
xinit: MUL r3, r1, r1
ADDI r3, r3, 3
SW r3, 8(r1)
ADDI r1, r1, 1
BNE r1, r9, xinit
ADDI r1, r0, 3       # n
fout: ADDI r5, r0, 0
ADDI r2, r0, 0       # t
ftap: LW r3, 0(r2)   # h[t]
SUB r4, r1, r2
LW r6, 8(r4)         # x[n-t]
MUL r3, r3, r6
ADD r5, r5, r3
ADDI r2, r2, 1
ADDI r9, r0, 4
BNE r2, r9, ftap
SW r5, 32(r1)        # y[n]
ADDI r1, r1, 1
ADDI r9, r0, 16
BNE r1, r9, fout
)";

const char* kMatmulSource = R"(# 8x8 integer matrix multiply: C = A * B
# A at 0 (2 * identity), B at 64 (B[i][j] = 8i + j + 1), C at 128
ADDI r1, r0, 0
ADDI r9, r0, 8
diag: SLL r2, r1, 3
ADD r2, r2, r1
ADDI r3, r0, 2
SW r3, 0(r2)
ADDI r1, r1, 1
BNE r1, r9, diag
ADDI r1, r0, 0
ADDI r9, r0, 64
binit: ADDI r3, r1, 1
SW r3, 64(r1)
ADDI r1, r1, 1
BNE r1, r9, binit
ADDI r9, r0, 8
ADDI r1, r0, 0       # i
iloop: ADDI r2, r0, 0
jloop: ADDI r5, r0, 0
ADDI r3, r0, 0       # k
kloop: SLL r6, r1, 3
ADD r6, r6, r3
LW r7, 0(r6)         # A[i][k]
SLL r6, r3, 3
ADD r6, r6, r2
LW r8, 64(r6)        # B[k][j]
MUL r7, r7, r8
ADD r5, r5, r7
ADDI r3, r3, 1
BNE r3, r9, kloop
SLL r6, r1, 3
ADD r6, r6, r2
SW r5, 128(r6)       # C[i][j]
ADDI r2, r2, 1
BNE r2, r9, jloop
ADDI r1, r1, 1
BNE r1, r9, iloop
)";

const char* kCrcSource = R"(# crc-style bit loop over one word, reflected polynomial
ADDI r1, r0, 0x12345678
ADDI r2, r0, 0xFFFFFFFF
ADDI r9, r0, 32
ADDI r3, r0, 0
crcbit: XOR r4, r2, r1
ADDI r5, r0, 1
AND r4, r4, r5
SRL r2, r2, 1
BEQ r4, r0, skip
ADDI r6, r0, 0xEDB88320
XOR r2, r2, r6
skip: SRL r1, r1, 1
ADDI r3, r3, 1
BNE r3, r9, crcbit
SW r2, 4(r0)
)";

const char* kSortSource = R"(# bubble sort 16 words at address 0, filled from an LCG
ADDI r1, r0, 0
ADDI r9, r0, 16
ADDI r2, r0, 12345
fill: ADDI r3, r0, 1103515245
MUL r2, r2, r3
ADDI r2, r2, 12345
SRL r3, r2, 16
ADDI r4, r0, 0x7FFF
AND r3, r3, r4
SW r3, 0(r1)
ADDI r1, r1, 1
BNE r1, r9, fill
ADDI r8, r0, 15
ADDI r1, r0, 0       # pass
outer: ADDI r2, r0, 0
inner: LW r3, 0(r2)
LW r4, 1(r2)
SLT r5, r4, r3
BEQ r5, r0, noswap
SW r4, 0(r2)
SW r3, 1(r2)
noswap: ADDI r2, r2, 1
BNE r2, r8, inner
ADDI r1, r1, 1
BNE r1, r8, outer
)";

const char* kDotSource = R"(# dot product of two generated 32-element vectors
ADDI r1, r0, 0
ADDI r9, r0, 32
vinit: ADDI r3, r0, 3
MUL r3, r3, r1
ADDI r3, r3, 7
SW r3, 64(r1)        # v1[i] = 3i + 7
ADDI r4, r0, 5
MUL r4, r4, r1
ADDI r5, r0, 3
XOR r4, r4, r5
SW r4, 128(r1)       # v2[i] = (5i) ^ 3
ADDI r1, r1, 1
BNE r1, r9, vinit
ADDI r1, r0, 0
ADDI r6, r0, 0
dloop: LW r3, 64(r1)
LW r4, 128(r1)
MUL r3, r3, r4
ADD r6, r6, r3
ADDI r1, r1, 1
BNE r1, r9, dloop
SW r6, 160(r0)
)";

const char* kPopcntSource = R"(# population count of a constant via shift-and-mask
ADDI r1, r0, 0xA5C3F107
ADDI r5, r0, 0
ADDI r9, r0, 32
ADDI r2, r0, 0
ploop: ADDI r3, r0, 1
AND r3, r1, r3
ADD r5, r5, r3
SRL r1, r1, 1
ADDI r2, r2, 1
BNE r2, r9, ploop
SW r5, 0(r0)
)";

const char* kChecksumSource = R"(# rotate-xor checksum over a generated block
ADDI r1, r0, 0
ADDI r9, r0, 24
ADDI r2, r0, 99991
csfill: ADDI r3, r0, 1103515245
MUL r2, r2, r3
ADDI r2, r2, 12345
SW r2, 32(r1)
ADDI r1, r1, 1
BNE r1, r9, csfill
ADDI r1, r0, 0
ADDI r6, r0, 0
csloop: LW r3, 32(r1)
SLL r4, r6, 5
SRL r5, r6, 27
OR r6, r4, r5
XOR r6, r6, r3
ADDI r1, r1, 1
BNE r1, r9, csloop
SW r6, 8(r0)
)";

const char* kRevCopySource = R"(# reverse copy of a generated 20-word block
ADDI r1, r0, 0
ADDI r9, r0, 20
rfill: MUL r3, r1, r1
ADDI r3, r3, 17
SW r3, 200(r1)       # src[i] = i*i + 17
ADDI r1, r1, 1
BNE r1, r9, rfill
ADDI r1, r0, 0
rloop: LW r3, 200(r1)
SUB r4, r9, r1
ADDI r4, r4, -1
SW r3, 240(r4)       # dst[19 - i] = src[i]
ADDI r1, r1, 1
BNE r1, r9, rloop
)";

}  // namespace

const std::vector<Kernel>& kernel_suite() {
  static const std::vector<Kernel> kernels = [] {
    std::vector<Kernel> ks;

    ks.push_back({"fib", kFibSource, "r5 == fib(12) == 144",
                  [](const MachineState& s) { return s.regs[5] == 144; }});

    ks.push_back({"fir4", kFirSource,
                  "y[n] == sum of (t+1) * ((n-t)^2 + 3) for n in 3..15",
                  [](const MachineState& s) {
                    for (uint32_t n = 3; n < 16; ++n) {
                      uint32_t want = 0;
                      for (uint32_t t = 0; t < 4; ++t)
                        want += (t + 1) * ((n - t) * (n - t) + 3);
                      if (s.mem[32 + n] != want) return false;
                    }
                    return true;
                  }});

    ks.push_back({"matmul8", kMatmulSource, "C == 2 * B, element-wise",
                  [](const MachineState& s) {
                    for (uint32_t i = 0; i < 8; ++i)
                      for (uint32_t j = 0; j < 8; ++j)
                        if (s.mem[128 + 8 * i + j] != 2 * (8 * i + j + 1))
                          return false;
                    return true;
                  }});

    ks.push_back({"crc", kCrcSource,
                  "mem[4] == bitwise crc of 0x12345678, init 0xFFFFFFFF",
                  [](const MachineState& s) {
                    uint32_t data = 0x12345678, crc = 0xFFFFFFFFu;
                    for (int i = 0; i < 32; ++i) {
                      uint32_t bit = (crc ^ data) & 1u;
                      crc >>= 1;
                      if (bit) crc ^= 0xEDB88320u;
                      data >>= 1;
                    }
                    return s.mem[4] == crc;
                  }});

    ks.push_back({"sort16", kSortSource,
                  "mem[0..15] is the sorted LCG sequence",
                  [](const MachineState& s) {
                    std::vector<uint32_t> want;
                    uint32_t x = 12345;
                    for (int i = 0; i < 16; ++i) {
                      x = x * 1103515245u + 12345u;
                      want.push_back((x >> 16) & 0x7FFFu);
                    }
                    std::sort(want.begin(), want.end());
                    for (int i = 0; i < 16; ++i)
                      if (s.mem[i] != want[i]) return false;
                    return true;
                  }});

    ks.push_back({"dot32", kDotSource,
                  "mem[160] == sum of (3i+7) * ((5i)^3)",
                  [](const MachineState& s) {
                    uint32_t want = 0;
                    for (uint32_t i = 0; i < 32; ++i)
                      want += (3 * i + 7) * ((5 * i) ^ 3u);
                    return s.mem[160] == want && s.regs[6] == want;
                  }});

    ks.push_back({"popcnt", kPopcntSource, "mem[0] == popcount(0xA5C3F107)",
                  [](const MachineState& s) {
                    return s.mem[0] == static_cast<uint32_t>(
                                           std::popcount(0xA5C3F107u));
                  }});

    ks.push_back({"checksum", kChecksumSource,
                  "mem[8] == rotate-xor checksum of the block",
                  [](const MachineState& s) {
                    uint32_t x = 99991, cs = 0;
                    for (int i = 0; i < 24; ++i) {
                      x = x * 1103515245u + 12345u;
                      cs = ((cs << 5) | (cs >> 27)) ^ x;
                    }
                    return s.mem[8] == cs;
                  }});

    ks.push_back({"revcopy", kRevCopySource, "dst[19-i] == i*i + 17",
                  [](const MachineState& s) {
                    for (uint32_t i = 0; i < 20; ++i)
                      if (s.mem[240 + 19 - i] != i * i + 17) return false;
                    return true;
                  }});

    return ks;
  }();
  return kernels;
}

}  // namespace mldfs
