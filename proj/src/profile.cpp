#include "mldfs/profile.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mldfs {

FeatureVector extract_features(const ProfileRecord& r) {
  FeatureVector f;
  f.op_kind = static_cast<int>(op_kind(r.op));
  f.msb_a = msb1(r.a);
  f.msb_b = msb1(r.b);
  f.toggles_a = std::popcount(r.a ^ r.a_prev);
  f.toggles_b = std::popcount(r.b ^ r.b_prev);
  f.prev_result_pop = std::popcount(r.prev_result);
  return f;
}

size_t feature_count(FeatureMode mode) {
  return mode == FeatureMode::six ? 6 : 70;
}

std::vector<double> feature_row(const ProfileRecord& r, FeatureMode mode) {
  FeatureVector f = extract_features(r);
  std::vector<double> row;
  row.reserve(feature_count(mode));
  row.push_back(f.op_kind);
  row.push_back(f.msb_a);
  row.push_back(f.msb_b);
  row.push_back(f.toggles_a);
  row.push_back(f.toggles_b);
  row.push_back(f.prev_result_pop);
  if (mode == FeatureMode::bits) {
    for (int i = 0; i < 32; ++i) row.push_back((r.a >> i) & 1u);
    for (int i = 0; i < 32; ++i) row.push_back((r.b >> i) & 1u);
  }
  return row;
}

ProfileResult profile_program(const Program& p, const DelayModelConfig& cfg,
                              const ClassBoundaries& bounds, uint64_t max_steps,
                              uint32_t mem_words) {
  MachineState s(mem_words);
  for (const auto& [addr, val] : p.data_init) {
    if (addr >= mem_words) throw MemoryError(addr, 0);
    s.mem[addr] = val;
  }
  ProfileResult out;
  const uint32_t n = static_cast<uint32_t>(p.instructions.size());
  uint64_t retired = 0;
  uint32_t a_prev = 0, b_prev = 0, prev_result = 0;
  while (s.pc < n) {
    if (retired >= max_steps) throw StepLimitError(max_steps);
    const Instruction& ins = p.instructions[s.pc];
    auto ev = exec_instruction(ins, s);
    ++retired;
    if (ev) {
      ProfileRecord r;
      r.seq = out.records.size();
      r.op = ins.op;
      r.a = ev->a;
      r.b = ev->b;
      r.a_prev = a_prev;
      r.b_prev = b_prev;
      r.prev_result = prev_result;
      r.result = ev->result;
      r.delay_ns = delay_with_history(ins.op, ev->a, ev->b, a_prev, b_prev, cfg);
      r.true_class = classify_delay(r.delay_ns, bounds);
      out.records.push_back(r);
      a_prev = ev->a;
      b_prev = ev->b;
      prev_result = ev->result;
    }
  }
  out.run = {std::move(s), retired};
  return out;
}

OutlierResult eliminate_outliers(std::vector<ProfileRecord> records,
                                 const DelayModelConfig& cfg) {
  OutlierResult out;
  out.kept.reserve(records.size());
  for (auto& r : records) {
    bool ok = has_exec_event(r.op) && r.delay_ns > 0.0 && r.delay_ns <= cfg.t_wc;
    if (ok)
      out.kept.push_back(r);
    else
      ++out.dropped;
  }
  return out;
}

void write_profile_csv(std::ostream& os, std::span<const ProfileRecord> records) {
  os << "seq,op,a,b,a_prev,b_prev,prev_result,result,delay_ns,class\n";
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf),
                  "%llu,%s,0x%08x,0x%08x,0x%08x,0x%08x,0x%08x,0x%08x,%.4f,%d\n",
                  static_cast<unsigned long long>(r.seq), opcode_name(r.op),
                  r.a, r.b, r.a_prev, r.b_prev, r.prev_result, r.result,
                  r.delay_ns, r.true_class);
    os << buf;
  }
}

namespace {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

uint32_t parse_hex_u32(const std::string& s, size_t lineno) {
  try {
    return static_cast<uint32_t>(std::stoul(s, nullptr, 0));
  } catch (const std::exception&) {
    throw CsvError("profile csv line " + std::to_string(lineno) +
                   ": bad value '" + s + "'");
  }
}

}  // namespace

std::vector<ProfileRecord> read_profile_csv(std::istream& is) {
  std::vector<ProfileRecord> out;
  std::string line;
  size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("seq,", 0) == 0) continue;  // header row
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 10)
      throw CsvError("profile csv line " + std::to_string(lineno) +
                     ": expected 10 fields, got " + std::to_string(fields.size()));
    ProfileRecord r;
    try {
      r.seq = std::stoull(fields[0]);
      r.delay_ns = std::stod(fields[8]);
      r.true_class = std::stoi(fields[9]);
    } catch (const std::exception&) {
      throw CsvError("profile csv line " + std::to_string(lineno) +
                     ": bad numeric field");
    }
    auto op = opcode_from_name(fields[1]);
    if (!op)
      throw CsvError("profile csv line " + std::to_string(lineno) +
                     ": unknown opcode '" + fields[1] + "'");
    r.op = *op;
    r.a = parse_hex_u32(fields[2], lineno);
    r.b = parse_hex_u32(fields[3], lineno);
    r.a_prev = parse_hex_u32(fields[4], lineno);
    r.b_prev = parse_hex_u32(fields[5], lineno);
    r.prev_result = parse_hex_u32(fields[6], lineno);
    r.result = parse_hex_u32(fields[7], lineno);
    out.push_back(r);
  }
  return out;
}

void save_profile_csv(const std::string& path,
                      std::span<const ProfileRecord> records) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_profile_csv(f, records);
}

std::vector<ProfileRecord> load_profile_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_profile_csv(f);
}

}  // namespace mldfs
