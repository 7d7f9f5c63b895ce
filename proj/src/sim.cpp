#include "mldfs/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace mldfs {

const char* policy_mode_name(PolicyMode m) {
  switch (m) {
    case PolicyMode::baseline: return "baseline";
    case PolicyMode::oracle: return "oracle";
    case PolicyMode::predicted: return "predicted";
  }
  return "?";
}

PolicyMode policy_mode_from_name(const std::string& s) {
  if (s == "baseline") return PolicyMode::baseline;
  if (s == "oracle") return PolicyMode::oracle;
  if (s == "predicted") return PolicyMode::predicted;
  throw std::invalid_argument("unknown policy '" + s +
                              "' (want baseline, oracle or predicted)");
}

namespace {

struct Slot {
  bool valid = false;
  uint32_t idx = 0;  // instruction index in the program
  Instruction ins;
  bool entered_ml = false;
  bool conservative = false;
  bool done = false;  // executed; waiting out replay or ready to move on
  bool redirect = false;
  uint32_t redirect_target = 0;
};

}  // namespace

SimReport simulate(const Program& p, const SimPolicy& policy,
                   const DelayModelConfig& dcfg, const ClassBoundaries& bounds,
                   const EnergyConfig& ecfg, const Predictor& predictor,
                   uint32_t mem_words) {
  dcfg.validate();
  bounds.validate(dcfg.t_wc);
  if (policy.replay_cycles < 1)
    throw ConfigError("pipeline: replay_cycles must be >= 1");
  if (policy.mode != PolicyMode::baseline && policy.ml_stages < 1)
    throw ConfigError("pipeline: need at least one classifier stage");
  if (policy.mode == PolicyMode::predicted && !predictor)
    throw ConfigError("pipeline: predicted policy needs a predictor");

  const PolicyMode mode = policy.mode;
  const int ml = mode == PolicyMode::baseline ? 0 : policy.ml_stages;
  const int kIF = 0, kML1 = 2;
  const int kEXE = 2 + ml, kMEM = kEXE + 1, kWB = kMEM + 1;
  const int depth = kWB + 1;
  const int n_classes = bounds.n_classes();
  const double t_wc = dcfg.t_wc;
  const uint32_t n = static_cast<uint32_t>(p.instructions.size());

  SimReport rep;
  rep.mode = mode;
  rep.pred_hist.assign(n_classes, 0);
  rep.true_hist.assign(n_classes, 0);
  rep.final_state = MachineState(mem_words);
  MachineState& st = rep.final_state;
  for (const auto& [addr, val] : p.data_init) {
    if (addr >= mem_words) throw MemoryError(addr, 0);
    st.mem[addr] = val;
  }

  std::vector<Slot> pipe(depth);
  uint32_t fetch_pc = 0;
  uint64_t executed = 0;
  int replay_left = 0;
  uint32_t last_a = 0, last_b = 0, last_result = 0;  // history register

  // Was r written by an in-flight older instruction whose value a classifier
  // reading register operands this coming cycle could not yet see?
  auto operand_available = [&](int r) {
    if (r <= 0) return true;  // r0 is constant
    for (int pos = kML1 + 1; pos <= kWB; ++pos) {
      const Slot& s = pipe[pos];
      if (!s.valid || !writes_reg(s.ins.op) || s.ins.rd != r) continue;
      if (pos < kEXE) return false;   // still ahead of the execute unit
      if (pos == kEXE) return false;  // executing concurrently with the read
      if (pos == kMEM && s.ins.op == Opcode::LW) return false;  // data in flight
      return true;  // forwarded or architecturally visible
    }
    return true;
  };

  if (fetch_pc < n) {
    pipe[kIF] = Slot{true, fetch_pc, p.instructions[fetch_pc]};
    ++fetch_pc;
  }

  auto any_valid = [&] {
    return std::any_of(pipe.begin(), pipe.end(),
                       [](const Slot& s) { return s.valid; });
  };

  while (any_valid() || fetch_pc < n) {
    // --- the cycle itself: execute-stage work and clock accounting ---
    double period;
    if (replay_left > 0) {
      --replay_left;
      period = t_wc;
      ++rep.stall_cycles;
      rep.charged_time_ns += period;
      rep.exe_busy_time_ns += period;
    } else if (pipe[kEXE].valid) {
      Slot& e = pipe[kEXE];
      st.pc = e.idx;
      auto ev = exec_instruction(e.ins, st);
      if (++executed > policy.max_steps) throw StepLimitError(policy.max_steps);
      if (st.pc != e.idx + 1) {
        e.redirect = true;
        e.redirect_target = st.pc;
      }
      if (ev) {
        const OpKind kind = op_kind(e.ins.op);
        const double true_delay =
            delay_with_history(e.ins.op, ev->a, ev->b, last_a, last_b, dcfg);
        const int true_class = classify_delay(true_delay, bounds);
        ++rep.true_hist[true_class];
        ++rep.kind_count[static_cast<int>(kind)];
        ++rep.exec_events;

        if (mode == PolicyMode::baseline) {
          period = t_wc;
        } else {
          int assigned;
          if (mode == PolicyMode::oracle) {
            assigned = true_class;
          } else if (e.conservative) {
            assigned = n_classes - 1;
            ++rep.conservative;
          } else {
            ProfileRecord proto;
            proto.seq = rep.exec_events - 1;
            proto.op = e.ins.op;
            proto.a = ev->a;
            proto.b = ev->b;
            proto.a_prev = last_a;
            proto.b_prev = last_b;
            proto.prev_result = last_result;
            assigned = predictor(proto);
            if (assigned < 0 || assigned >= n_classes)
              throw SimError("predictor returned class " +
                             std::to_string(assigned));
          }
          ++rep.pred_hist[assigned];
          period = bounds.uppers[assigned];
          if (true_class > assigned) {
            // double-sampling catches the late value; replay at worst case
            ++rep.replays;
            ++rep.violations;
            ++rep.kind_replayed[static_cast<int>(kind)];
            replay_left = policy.replay_cycles;
          }
        }
        last_a = ev->a;
        last_b = ev->b;
        last_result = ev->result;
      } else {
        period = mode == PolicyMode::baseline ? t_wc : bounds.uppers[0];
      }
      rep.charged_time_ns += period;
      rep.exe_busy_time_ns += period;
      e.done = true;
    } else {
      period = mode == PolicyMode::baseline ? t_wc : bounds.uppers[0];
    }
    ++rep.cycles;
    rep.total_time_ns += period;

    // --- end of cycle: advance the pipeline ---
    const Slot exe_during = pipe[kEXE];  // occupant of EXE this cycle

    if (pipe[kWB].valid) {
      ++rep.retired;
      pipe[kWB].valid = false;
    }
    if (pipe[kMEM].valid) {
      pipe[kWB] = pipe[kMEM];
      pipe[kMEM].valid = false;
    }
    if (pipe[kEXE].valid && pipe[kEXE].done && replay_left == 0) {
      const bool redirect = pipe[kEXE].redirect;
      const uint32_t target = pipe[kEXE].redirect_target;
      pipe[kMEM] = pipe[kEXE];
      pipe[kEXE].valid = false;
      if (redirect) {
        for (int i = 0; i < kEXE; ++i) pipe[i].valid = false;
        fetch_pc = target;
        ++rep.flushes;
      }
    }
    if (!pipe[kEXE].valid && pipe[kEXE - 1].valid) {
      // one-cycle load-use stall: the load's data lands at the end of its
      // MEM cycle, one cycle too late for an immediately dependent EXE
      const Slot& cand = pipe[kEXE - 1];
      bool hazard = false;
      if (exe_during.valid && exe_during.ins.op == Opcode::LW &&
          exe_during.ins.rd != 0) {
        for (int r : exec_source_regs(cand.ins))
          if (r == exe_during.ins.rd) hazard = true;
      }
      if (hazard) {
        ++rep.stall_cycles;
      } else {
        pipe[kEXE] = cand;
        pipe[kEXE - 1].valid = false;
      }
    }
    for (int pos = kEXE - 1; pos >= 1; --pos) {
      if (!pipe[pos].valid && pipe[pos - 1].valid) {
        pipe[pos] = pipe[pos - 1];
        pipe[pos - 1].valid = false;
      }
    }
    if (!pipe[kIF].valid && fetch_pc < n) {
      pipe[kIF] = Slot{true, fetch_pc, p.instructions[fetch_pc]};
      ++fetch_pc;
    }
    if (ml > 0 && pipe[kML1].valid && !pipe[kML1].entered_ml) {
      Slot& s = pipe[kML1];
      s.entered_ml = true;
      if (has_exec_event(s.ins.op)) {
        ++rep.classifications;
        if (mode == PolicyMode::predicted) {
          auto srcs = exec_source_regs(s.ins);
          s.conservative =
              !(operand_available(srcs[0]) && operand_available(srcs[1]));
        }
      }
    }
  }

  rep.energy_pj = total_energy_pj(rep, ecfg);
  return rep;
}

double total_energy_pj(const SimReport& r, const EnergyConfig& cfg) {
  double e = 0.0;
  for (int k = 0; k < kOpKindCount; ++k)
    e += cfg.e_dyn[k] * static_cast<double>(r.kind_count[k] + r.kind_replayed[k]);
  e += cfg.p_leak * r.charged_time_ns;
  e += cfg.e_ml * static_cast<double>(r.classifications);
  return e;
}

double compute_speedup(const SimReport& slow, const SimReport& fast) {
  if (slow.retired != fast.retired)
    throw SimError("speedup: runs retired different instruction counts");
  if (!(fast.total_time_ns > 0)) throw SimError("speedup: empty run");
  return 100.0 * (slow.total_time_ns / fast.total_time_ns - 1.0);
}

double compute_exe_speedup(const SimReport& slow, const SimReport& fast) {
  if (slow.retired != fast.retired)
    throw SimError("speedup: runs retired different instruction counts");
  if (!(fast.exe_busy_time_ns > 0)) throw SimError("speedup: empty run");
  return 100.0 * (slow.exe_busy_time_ns / fast.exe_busy_time_ns - 1.0);
}

EnergyComparison compare_energy(const SimReport& policy,
                                const SimReport& baseline) {
  if (policy.retired != baseline.retired)
    throw SimError("energy comparison: runs retired different instruction counts");
  if (!(baseline.energy_pj > 0)) throw SimError("energy comparison: empty run");
  EnergyComparison c;
  c.policy_pj = policy.energy_pj;
  c.baseline_pj = baseline.energy_pj;
  c.overhead_pct = 100.0 * (policy.energy_pj / baseline.energy_pj - 1.0);
  return c;
}

nlohmann::json SimReport::to_json() const {
  nlohmann::json kind_counts, kind_replays;
  for (int k = 0; k < kOpKindCount; ++k) {
    kind_counts[op_kind_name(static_cast<OpKind>(k))] = kind_count[k];
    kind_replays[op_kind_name(static_cast<OpKind>(k))] = kind_replayed[k];
  }
  return nlohmann::json{{"policy", policy_mode_name(mode)},
                        {"cycles", cycles},
                        {"total_time_ns", total_time_ns},
                        {"retired", retired},
                        {"exec_events", exec_events},
                        {"classifications", classifications},
                        {"conservative", conservative},
                        {"replays", replays},
                        {"violations", violations},
                        {"stall_cycles", stall_cycles},
                        {"flushes", flushes},
                        {"pred_hist", pred_hist},
                        {"true_hist", true_hist},
                        {"kind_count", kind_counts},
                        {"kind_replayed", kind_replays},
                        {"charged_time_ns", charged_time_ns},
                        {"exe_busy_time_ns", exe_busy_time_ns},
                        {"energy_pj", energy_pj}};
}

std::string SimReport::summary() const {
  std::ostringstream os;
  os << policy_mode_name(mode) << ": " << retired << " retired in " << cycles
     << " cycles, " << total_time_ns << " ns";
  if (mode != PolicyMode::baseline)
    os << ", " << replays << " replays, " << conservative << " conservative";
  os << ", " << energy_pj << " pJ";
  return os.str();
}

std::string sim_csv_header() {
  return "policy,cycles,total_time_ns,retired,classifications,conservative,"
         "replays,flushes,stall_cycles,charged_time_ns,energy_pj";
}

std::string sim_csv_row(const SimReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%llu,%.4f,%llu,%llu,%llu,%llu,%llu,%llu,%.4f,%.4f",
                policy_mode_name(r.mode), static_cast<unsigned long long>(r.cycles),
                r.total_time_ns, static_cast<unsigned long long>(r.retired),
                static_cast<unsigned long long>(r.classifications),
                static_cast<unsigned long long>(r.conservative),
                static_cast<unsigned long long>(r.replays),
                static_cast<unsigned long long>(r.flushes),
                static_cast<unsigned long long>(r.stall_cycles),
                r.charged_time_ns, r.energy_pj);
  return buf;
}

}  // namespace mldfs
