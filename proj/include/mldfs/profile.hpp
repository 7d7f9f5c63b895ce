#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mldfs/delay_model.hpp"
#include "mldfs/isa.hpp"

namespace mldfs {

// One execute-unit event: operands, the operands/result of the previous
// event (zero before the first), the settled delay and its class.
struct ProfileRecord {
  uint64_t seq = 0;
  Opcode op = Opcode::ADD;
  uint32_t a = 0;
  uint32_t b = 0;
  uint32_t a_prev = 0;
  uint32_t b_prev = 0;
  uint32_t prev_result = 0;
  uint32_t result = 0;
  double delay_ns = 0.0;
  int true_class = 0;

  bool operator==(const ProfileRecord&) const = default;
};

// The six classifier inputs. Only operand values and history are visible;
// the delay itself never leaks into the features.
struct FeatureVector {
  int op_kind;          // OpKind id
  int msb_a;            // 1-based index of a's highest set bit, 0 if a == 0
  int msb_b;
  int toggles_a;        // popcount(a ^ a_prev)
  int toggles_b;        // popcount(b ^ b_prev)
  int prev_result_pop;  // popcount(prev_result)

  bool operator==(const FeatureVector&) const = default;
};

FeatureVector extract_features(const ProfileRecord& r);

// "bits" appends the 64 raw operand bits (a then b, LSB first) to the six.
enum class FeatureMode { six, bits };

size_t feature_count(FeatureMode mode);
std::vector<double> feature_row(const ProfileRecord& r, FeatureMode mode);

struct ProfileResult {
  std::vector<ProfileRecord> records;
  RunResult run;
};

// Runs the program on the reference interpreter, recording one ProfileRecord
// per execute-unit event in retirement order.
ProfileResult profile_program(const Program& p, const DelayModelConfig& cfg,
                              const ClassBoundaries& bounds, uint64_t max_steps,
                              uint32_t mem_words = kDefaultMemWords);

struct OutlierResult {
  std::vector<ProfileRecord> kept;
  size_t dropped = 0;
};

// Drops records whose delay falls outside (0, t_wc] or whose opcode has no
// execute event. Order of survivors is preserved.
OutlierResult eliminate_outliers(std::vector<ProfileRecord> records,
                                 const DelayModelConfig& cfg);

// CSV with header seq,op,a,b,a_prev,b_prev,prev_result,result,delay_ns,class;
// operands in hex, delay to 4 decimals.
void write_profile_csv(std::ostream& os, std::span<const ProfileRecord> records);
std::vector<ProfileRecord> read_profile_csv(std::istream& is);

void save_profile_csv(const std::string& path,
                      std::span<const ProfileRecord> records);
std::vector<ProfileRecord> load_profile_csv(const std::string& path);

}  // namespace mldfs
