#include "mldfs/flow.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <utility>

namespace mldfs {

namespace {

std::string num(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

constexpr const char* kResultsHeader =
    "benchmark,classes,accuracy,f1_weighted,achieved_speedup_pct,"
    "ideal_speedup_pct,replays,energy_overhead_pct";

std::vector<std::pair<size_t, size_t>> block_ranges(
    const std::vector<BenchResult>& rows) {
  std::vector<std::pair<size_t, size_t>> blocks;
  for (size_t i = 0; i < rows.size();) {
    size_t j = i;
    while (j < rows.size() && rows[j].classes == rows[i].classes) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }
  return blocks;
}

struct AvgRow {
  double accuracy = 0, f1 = 0, achieved = 0, ideal = 0, replays = 0, energy = 0;
};

AvgRow average(const std::vector<BenchResult>& rows, size_t lo, size_t hi,
               bool weighted) {
  AvgRow a;
  double tw = 0;
  for (size_t k = lo; k < hi; ++k) {
    const BenchResult& r = rows[k];
    const double w = weighted ? static_cast<double>(r.weight) : 1.0;
    a.accuracy += w * r.accuracy;
    a.f1 += w * r.f1_weighted;
    a.achieved += w * r.achieved_speedup_pct;
    a.ideal += w * r.ideal_speedup_pct;
    a.replays += w * static_cast<double>(r.replays);
    a.energy += w * r.energy_overhead_pct;
    tw += w;
  }
  if (tw <= 0) tw = 1;
  a.accuracy /= tw;
  a.f1 /= tw;
  a.achieved /= tw;
  a.ideal /= tw;
  a.replays /= tw;
  a.energy /= tw;
  return a;
}

using Cells = std::array<std::string, 8>;

Cells data_cells(const BenchResult& r) {
  return {r.benchmark,
          std::to_string(r.classes),
          num(r.accuracy, 4),
          num(r.f1_weighted, 4),
          num(r.achieved_speedup_pct, 1),
          num(r.ideal_speedup_pct, 1),
          std::to_string(r.replays),
          num(r.energy_overhead_pct, 1)};
}

Cells avg_cells(const char* name, int classes, const AvgRow& a) {
  return {name,
          std::to_string(classes),
          num(a.accuracy, 4),
          num(a.f1, 4),
          num(a.achieved, 1),
          num(a.ideal, 1),
          num(a.replays, 1),
          num(a.energy, 1)};
}

// All table lines in order, with an empty benchmark cell marking a block
// separator (text emitter only).
std::vector<Cells> table_lines(const std::vector<BenchResult>& rows) {
  if (rows.empty()) throw FlowError("results table needs at least one row");
  std::vector<Cells> lines;
  bool first = true;
  for (auto [lo, hi] : block_ranges(rows)) {
    if (!first) lines.push_back(Cells{});
    first = false;
    for (size_t k = lo; k < hi; ++k) lines.push_back(data_cells(rows[k]));
    const int c = rows[lo].classes;
    lines.push_back(avg_cells("mean", c, average(rows, lo, hi, false)));
    lines.push_back(avg_cells("wmean", c, average(rows, lo, hi, true)));
  }
  return lines;
}

}  // namespace

std::vector<ClassBoundaries> default_experiments() {
  return {default_boundaries(2), default_boundaries(3), default_boundaries(4)};
}

void RunConfig::validate() const {
  delay.validate();
  if (experiments.empty())
    throw std::invalid_argument("config needs at least one boundary set");
  for (const ClassBoundaries& b : experiments) b.validate(delay.t_wc);
  hyper.validate();
  if (train_per_class < 1 || test_per_class < 1)
    throw std::invalid_argument("per-class sample counts must be >= 1");
  if (max_iterations < 1)
    throw std::invalid_argument("max_iterations must be >= 1");
  if (!include_random && !include_kernels)
    throw std::invalid_argument("no benchmarks selected");
  if (include_random && bench_n < 1)
    throw std::invalid_argument("benchmark length must be >= 1");
  if (out_dir.empty()) throw std::invalid_argument("output directory is empty");
}

std::string results_csv(const std::vector<BenchResult>& rows) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const Cells& c : table_lines(rows)) {
    if (c[0].empty()) continue;  // block separators are a text-table nicety
    for (size_t i = 0; i < c.size(); ++i) {
      if (i) out += ',';
      out += c[i];
    }
    out += '\n';
  }
  return out;
}

std::string results_text(const std::vector<BenchResult>& rows) {
  static const Cells header = {
      "benchmark", "classes",       "accuracy", "f1_weighted",
      "achieved%", "ideal%",        "replays",  "energy_ovh%"};
  std::vector<Cells> lines = table_lines(rows);
  lines.insert(lines.begin(), header);

  std::array<size_t, 8> width{};
  for (const Cells& c : lines)
    for (size_t i = 0; i < c.size(); ++i) width[i] = std::max(width[i], c[i].size());

  std::string out;
  for (const Cells& c : lines) {
    if (c[0].empty()) {
      out += '\n';
      continue;
    }
    for (size_t i = 0; i < c.size(); ++i) {
      if (i) out += "  ";
      if (i == 0) {  // names left, numbers right
        out += c[i];
        out.append(width[i] - c[i].size(), ' ');
      } else {
        out.append(width[i] - c[i].size(), ' ');
        out += c[i];
      }
    }
    // the benchmark column is left-padded, so trim the trailing run on
    // rows whose name is shorter than the widest one
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

TrainOutcome train_with_floor(const Dataset& train, const Dataset& test,
                              HyperParams hp, const ClassBoundaries& bounds,
                              FeatureMode mode, double accuracy_floor,
                              double speedup_floor, int max_iterations,
                              int replay_cycles, std::ostream& log) {
  const int base_estimators = hp.resolved_estimators(bounds.n_classes());
  const int base_epochs = hp.nn_epochs;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    if (hp.algo == Algo::rf)
      hp.n_estimators = base_estimators << (iter - 1);
    else
      hp.nn_epochs = base_epochs << (iter - 1);

    TrainOutcome out;
    if (hp.algo == Algo::rf) {
      out.model = Model::from_forest(train_forest(train, hp, bounds), mode);
    } else {
      out.model = Model::from_net(train_net(train, hp), bounds, hp, mode);
    }
    out.held_out = evaluate(out.model, test);
    std::vector<int> preds = predict_all(out.model, test);
    out.est_speedup_pct =
        estimate_static_speedup(preds, test.labels, bounds, replay_cycles);
    out.iterations = iter;

    log << "  iteration " << iter << " ("
        << (hp.algo == Algo::rf
                ? std::to_string(hp.n_estimators) + " trees"
                : std::to_string(hp.nn_epochs) + " epochs")
        << "): held-out accuracy " << num(out.held_out.accuracy, 4)
        << ", f1 " << num(out.held_out.f1_weighted, 4) << ", est. speedup "
        << num(out.est_speedup_pct, 1) << "%\n";

    if (out.held_out.accuracy >= accuracy_floor &&
        out.est_speedup_pct >= speedup_floor)
      return out;
  }
  throw FlowError("loop exhausted after " + std::to_string(max_iterations) +
                  " iterations");
}

namespace {

bool same_state(const MachineState& a, const MachineState& b) {
  return a.regs == b.regs && a.mem == b.mem && a.pc == b.pc;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  os << content;
  if (!os) throw FlowError("cannot write " + path);
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

RunArtifacts run_all(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec)
    throw FlowError("cannot create output directory " + cfg.out_dir + ": " +
                    ec.message());

  struct Bench {
    std::string name;
    Program prog;
  };
  std::vector<Bench> benches;
  try {
    if (cfg.include_random)
      benches.push_back(
          {"random", gen_random_program(cfg.bench_n, derive_seed(cfg.seed, 300))});
    if (cfg.include_kernels)
      for (const Kernel& k : kernel_suite())
        benches.push_back({k.name, parse_program(k.source)});
  } catch (const std::exception& e) {
    throw FlowError(std::string("phase 1 (workloads): ") + e.what());
  }

  RunArtifacts art;
  for (const ClassBoundaries& bounds : cfg.experiments) {
    const int C = bounds.n_classes();
    const std::string tag = "_c" + std::to_string(C);

    BalancedSet train_set, test_set;
    try {
      GenSpec tspec;
      tspec.n_per_class = cfg.train_per_class;
      tspec.seed = derive_seed(cfg.seed, 100 + static_cast<uint64_t>(C));
      tspec.kind_weights = cfg.kind_weights;
      train_set = gen_balanced_dataset(tspec, cfg.delay, bounds);
      GenSpec hspec;
      hspec.n_per_class = cfg.test_per_class;
      hspec.seed = derive_seed(cfg.seed, 200 + static_cast<uint64_t>(C));
      hspec.kind_weights = cfg.kind_weights;
      test_set = gen_balanced_dataset(hspec, cfg.delay, bounds);
      save_profile_csv(join(cfg.out_dir, "dataset_train" + tag + ".csv"),
                       train_set.records);
      save_profile_csv(join(cfg.out_dir, "dataset_test" + tag + ".csv"),
                       test_set.records);
    } catch (const std::exception& e) {
      throw FlowError("phase 1 (datasets, " + std::to_string(C) +
                      " classes): " + e.what());
    }
    log << "[" << C << " classes] " << train_set.records.size()
        << " training / " << test_set.records.size() << " held-out samples\n";

    ExperimentResult ex;
    ex.classes = C;
    try {
      Dataset train_d = to_dataset(train_set.records, cfg.features, C);
      Dataset test_d = to_dataset(test_set.records, cfg.features, C);
      HyperParams hp = cfg.hyper;
      hp.seed = derive_seed(cfg.seed, 400 + static_cast<uint64_t>(C));
      TrainOutcome out = train_with_floor(
          train_d, test_d, hp, bounds, cfg.features, cfg.accuracy_floor,
          cfg.speedup_floor, cfg.max_iterations, cfg.policy.replay_cycles, log);
      ex.model = std::move(out.model);
      ex.held_out = std::move(out.held_out);
      ex.est_speedup_pct = out.est_speedup_pct;
      ex.iterations = out.iterations;
      save_model(join(cfg.out_dir, "model" + tag + ".json"), ex.model);
    } catch (const FlowError&) {
      throw;
    } catch (const std::exception& e) {
      throw FlowError("phase 2 (train, " + std::to_string(C) +
                      " classes): " + e.what());
    }

    int ml_stages = 1;
    EnergyConfig ecfg = cfg.energy;
    ecfg.e_ml = 0.0;
    try {
      if (ex.model.algo == Algo::rf) {
        ClassifierNetlist nl =
            compile_forest(*ex.model.forest, bounds, cfg.netlist);
        ex.netlist = nl;
        write_file(join(cfg.out_dir, "netlist" + tag + ".txt"),
                   netlist_report(nl) + "\n");
        write_file(join(cfg.out_dir, "netlist" + tag + ".json"),
                   netlist_to_json(nl).dump(2) + "\n");
        ml_stages = nl.stages;
        ecfg.e_ml = nl.e_per_classification;
        log << "  netlist: " << netlist_report(nl) << "\n";
      } else {
        log << "  net classifier: no comparator netlist; one classifier stage, "
               "zero per-classification energy\n";
      }
    } catch (const FlowError&) {
      throw;
    } catch (const std::exception& e) {
      throw FlowError("phase 2 (netlist, " + std::to_string(C) +
                      " classes): " + e.what());
    }

    for (const Bench& b : benches) {
      try {
        ProfileResult prof =
            profile_program(b.prog, cfg.delay, bounds, cfg.policy.max_steps);
        Dataset bench_d = to_dataset(prof.records, cfg.features, C);
        Metrics bm = evaluate(ex.model, bench_d);

        SimPolicy base = cfg.policy;
        base.mode = PolicyMode::baseline;
        SimPolicy orac = cfg.policy;
        orac.mode = PolicyMode::oracle;
        orac.ml_stages = ml_stages;
        SimPolicy pred = cfg.policy;
        pred.mode = PolicyMode::predicted;
        pred.ml_stages = ml_stages;

        const Model& model = ex.model;
        const FeatureMode mode = cfg.features;
        Predictor predictor = [&model, mode](const ProfileRecord& r) {
          return model.predict(feature_row(r, mode));
        };

        SimReport rb = simulate(b.prog, base, cfg.delay, bounds, ecfg);
        SimReport ro = simulate(b.prog, orac, cfg.delay, bounds, ecfg);
        SimReport rp = simulate(b.prog, pred, cfg.delay, bounds, ecfg, predictor);
        for (const SimReport* r : {&rb, &ro, &rp})
          if (!same_state(r->final_state, prof.run.state))
            throw FlowError("architectural mismatch on " + b.name + " under " +
                            policy_mode_name(r->mode) + " policy");

        BenchResult row;
        row.benchmark = b.name;
        row.classes = C;
        row.accuracy = bm.accuracy;
        row.f1_weighted = bm.f1_weighted;
        row.achieved_speedup_pct = compute_speedup(rb, rp);
        row.ideal_speedup_pct = compute_speedup(rb, ro);
        row.replays = rp.replays;
        row.energy_overhead_pct = compare_energy(rp, rb).overhead_pct;
        row.weight = prof.records.size();
        log << "  " << b.name << ": achieved "
            << num(row.achieved_speedup_pct, 1) << "%, ideal "
            << num(row.ideal_speedup_pct, 1) << "%, replays " << row.replays
            << ", energy " << num(row.energy_overhead_pct, 1) << "%\n";
        art.rows.push_back(std::move(row));
      } catch (const FlowError&) {
        throw;
      } catch (const std::exception& e) {
        throw FlowError("phase 3 (simulate, " + b.name + "): " + e.what());
      }
    }
    art.experiments.push_back(std::move(ex));
  }

  art.results_csv_path = join(cfg.out_dir, "results.csv");
  art.results_text_path = join(cfg.out_dir, "results.txt");
  write_file(art.results_csv_path, results_csv(art.rows));
  write_file(art.results_text_path, results_text(art.rows));
  log << "results: " << art.results_csv_path << "\n";
  return art;
}

}  // namespace mldfs
