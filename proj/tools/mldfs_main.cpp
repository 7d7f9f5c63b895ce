#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "mldfs/flow.hpp"

using namespace mldfs;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  os << content;
  if (!os) throw std::runtime_error("cannot write " + path);
}

// Options shared by every subcommand. RunConfig already aggregates all the
// tunable sections; single-model commands additionally pick one boundary set.
struct Shared {
  RunConfig run;
  std::string boundaries;  // explicit upper bounds, e.g. "1.8,2.6,4.0"
  int classes = 2;
  uint32_t mem_words = kDefaultMemWords;

  ClassBoundaries bounds() const {
    return boundaries.empty() ? default_boundaries(classes)
                              : ClassBoundaries::parse(boundaries);
  }
};

void add_shared_options(CLI::App& app, Shared& s) {
  app.add_option("--classes", s.classes,
                 "delay class count for single-model commands")
      ->check(CLI::Range(2, 8))
      ->capture_default_str();
  app.add_option("--boundaries", s.boundaries,
                 "explicit class upper bounds, overriding --classes");
  app.add_option("--features", s.run.features, "feature set fed to the classifier")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, FeatureMode>{{"six", FeatureMode::six},
                                             {"bits", FeatureMode::bits}}))
      ->default_str("six");
  app.add_option("--seed", s.run.seed, "master seed for every derived stream")
      ->capture_default_str();
  app.add_option("--mem-words", s.mem_words, "data memory size in words")
      ->capture_default_str();
  app.add_option("--gen.kind-weights", s.run.kind_weights,
                 "dataset share per op kind: logic shift addsub mul memaddr cmp");

  DelayModelConfig& d = s.run.delay;
  app.add_option("--delay.t_wc", d.t_wc, "worst-case execute delay (ns)")
      ->capture_default_str();
  app.add_option("--delay.add_base", d.add_base)->capture_default_str();
  app.add_option("--delay.add_per_carry", d.add_per_carry)->capture_default_str();
  app.add_option("--delay.logic_delay", d.logic_delay)->capture_default_str();
  app.add_option("--delay.shift_base", d.shift_base)->capture_default_str();
  app.add_option("--delay.shift_per_bit", d.shift_per_bit)->capture_default_str();
  app.add_option("--delay.mul_base", d.mul_base)->capture_default_str();
  app.add_option("--delay.mul_per_msb", d.mul_per_msb)->capture_default_str();
  app.add_option("--delay.history_weight", d.history_weight)->capture_default_str();

  EnergyConfig& e = s.run.energy;
  app.add_option("--energy.e_dyn_logic", e.e_dyn[0])->capture_default_str();
  app.add_option("--energy.e_dyn_shift", e.e_dyn[1])->capture_default_str();
  app.add_option("--energy.e_dyn_addsub", e.e_dyn[2])->capture_default_str();
  app.add_option("--energy.e_dyn_mul", e.e_dyn[3])->capture_default_str();
  app.add_option("--energy.e_dyn_memaddr", e.e_dyn[4])->capture_default_str();
  app.add_option("--energy.e_dyn_cmp", e.e_dyn[5])->capture_default_str();
  app.add_option("--energy.p_leak", e.p_leak, "leakage power (pJ/ns)")
      ->capture_default_str();
  app.add_option("--energy.e_ml", e.e_ml, "per-classification energy (pJ)")
      ->capture_default_str();

  SimPolicy& p = s.run.policy;
  app.add_option("--policy.replay_cycles", p.replay_cycles)->capture_default_str();
  app.add_option("--policy.ml_stages", p.ml_stages)->capture_default_str();
  app.add_option("--policy.max_steps", p.max_steps)->capture_default_str();

  NetlistConfig& n = s.run.netlist;
  app.add_option("--netlist.t_cmp", n.t_cmp, "comparator level delay (ns)")
      ->capture_default_str();
  app.add_option("--netlist.e_cmp", n.e_cmp, "comparator energy (pJ)")
      ->capture_default_str();

  HyperParams& h = s.run.hyper;
  app.add_option("--hyper.algo", h.algo, "classifier flavor")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Algo>{{"rf", Algo::rf}, {"nn", Algo::nn}}))
      ->default_str("rf");
  app.add_option("--hyper.n_estimators", h.n_estimators,
                 "trees in the forest (0 = 10 for 2 classes, 100 otherwise)")
      ->capture_default_str();
  app.add_option("--hyper.max_depth", h.max_depth)->capture_default_str();
  app.add_option("--hyper.min_leaf", h.min_leaf)->capture_default_str();
  app.add_option("--hyper.feature_subsample", h.feature_subsample,
                 "features tried per split (0 = half of them, 3 for the six)")
      ->capture_default_str();
  app.add_option("--hyper.tie_break", h.tie_break, "vote tie resolution")
      ->transform(CLI::CheckedTransformer(std::map<std::string, TieBreak>{
          {"lowest", TieBreak::lowest}, {"highest", TieBreak::highest}}))
      ->default_str("lowest");
  app.add_option("--hyper.nn_hidden", h.nn_hidden)->capture_default_str();
  app.add_option("--hyper.nn_epochs", h.nn_epochs)->capture_default_str();
  app.add_option("--hyper.nn_lr", h.nn_lr)->capture_default_str();
  app.add_option("--hyper.nn_momentum", h.nn_momentum)->capture_default_str();
  app.add_option("--hyper.seed", h.seed, "training seed for standalone train")
      ->capture_default_str();
}

Predictor model_predictor(const Model& model) {
  const FeatureMode mode = model.features;
  return [&model, mode](const ProfileRecord& r) {
    return model.predict(feature_row(r, mode));
  };
}

}  // namespace

int main(int argc, char** argv) {
  Shared s;
  CLI::App app{
      "execute-delay class prediction: dataset generation, classifier "
      "training, comparator-netlist costing and pipeline simulation"};
  app.set_config("--config", "", "read options from an INI file");
  app.require_subcommand(1);
  add_shared_options(app, s);

  // gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand(
      "gen", "generate a balanced dataset, a random program or the kernel files");
  struct {
    std::string dataset, program, random, kernels;
    int per_class = 3000;
    uint64_t n = 100'000;
  } g;
  gen->add_option("--dataset", g.dataset, "balanced dataset CSV to write");
  gen->add_option("--program", g.program,
                  "also write the dataset's matching assembly program");
  gen->add_option("--per-class", g.per_class, "samples per class")
      ->capture_default_str();
  gen->add_option("--random", g.random, "random straight-line program to write");
  gen->add_option("--n", g.n, "random program length")->capture_default_str();
  gen->add_option("--kernels", g.kernels, "directory for the kernel suite");
  gen->callback([&] {
    bool did = false;
    if (!g.dataset.empty()) {
      GenSpec spec;
      spec.n_per_class = g.per_class;
      spec.seed = s.run.seed;
      spec.mem_words = s.mem_words;
      spec.kind_weights = s.run.kind_weights;
      BalancedSet set = gen_balanced_dataset(spec, s.run.delay, s.bounds());
      save_profile_csv(g.dataset, set.records);
      std::cout << "wrote " << set.records.size() << " records to " << g.dataset
                << "\n";
      if (!g.program.empty()) {
        spit(g.program, write_program_asm(set.program));
        std::cout << "wrote matching program (" << set.program.instructions.size()
                  << " instructions) to " << g.program << "\n";
      }
      did = true;
    }
    if (!g.random.empty()) {
      spit(g.random, write_program_asm(gen_random_program(g.n, s.run.seed)));
      std::cout << "wrote " << g.n << "-instruction program to " << g.random
                << "\n";
      did = true;
    }
    if (!g.kernels.empty()) {
      std::filesystem::create_directories(g.kernels);
      for (const Kernel& k : kernel_suite()) {
        spit((std::filesystem::path(g.kernels) / (k.name + ".asm")).string(),
             k.source);
        std::cout << "wrote kernel " << k.name << "\n";
      }
      did = true;
    }
    if (!did)
      throw std::runtime_error("gen: pick --dataset, --random or --kernels");
  });

  // profile -----------------------------------------------------------
  auto* profile = app.add_subcommand(
      "profile", "run a program on the reference interpreter and record delays");
  struct {
    std::string program, out;
  } pf;
  profile->add_option("--program", pf.program, "assembly file")->required();
  profile->add_option("--out", pf.out, "profile CSV to write")->required();
  profile->callback([&] {
    Program prog = parse_program(slurp(pf.program));
    ProfileResult res = profile_program(prog, s.run.delay, s.bounds(),
                                        s.run.policy.max_steps, s.mem_words);
    save_profile_csv(pf.out, res.records);
    std::vector<uint64_t> hist(s.bounds().n_classes(), 0);
    for (const ProfileRecord& r : res.records) ++hist[r.true_class];
    std::cout << res.run.retired << " retired, " << res.records.size()
              << " execute events; class counts:";
    for (uint64_t h : hist) std::cout << " " << h;
    std::cout << "\n";
  });

  // train -------------------------------------------------------------
  auto* train = app.add_subcommand("train", "fit a classifier on a dataset CSV");
  struct {
    std::string dataset, test, model;
    double accuracy_floor = 0.0;
    double speedup_floor = -1e300;
    int max_iterations = 3;
  } tr;
  train->add_option("--dataset", tr.dataset, "training CSV")->required();
  train->add_option("--test", tr.test,
                    "held-out CSV (defaults to the training set)");
  train->add_option("--model", tr.model, "model JSON to write")->required();
  train->add_option("--accuracy-floor", tr.accuracy_floor,
                    "retrain with doubled capacity below this accuracy")
      ->capture_default_str();
  train->add_option("--speedup-floor", tr.speedup_floor,
                    "retrain below this estimated speedup (%)");
  train->add_option("--max-iterations", tr.max_iterations)->capture_default_str();
  train->callback([&] {
    ClassBoundaries bounds = s.bounds();
    const int C = bounds.n_classes();
    Dataset train_d = to_dataset(load_profile_csv(tr.dataset), s.run.features, C);
    Dataset test_d = tr.test.empty()
                         ? train_d
                         : to_dataset(load_profile_csv(tr.test), s.run.features, C);
    TrainOutcome out = train_with_floor(
        train_d, test_d, s.run.hyper, bounds, s.run.features, tr.accuracy_floor,
        tr.speedup_floor, tr.max_iterations, s.run.policy.replay_cycles,
        std::cout);
    save_model(tr.model, out.model);
    std::cout << "model written to " << tr.model << " (accuracy "
              << out.held_out.accuracy << ", f1 " << out.held_out.f1_weighted
              << ")\n";
  });

  // compile -----------------------------------------------------------
  auto* compile = app.add_subcommand(
      "compile", "lower a forest model to its comparator-netlist cost summary");
  struct {
    std::string model, out, json;
  } cp;
  compile->add_option("--model", cp.model, "model JSON")->required();
  compile->add_option("--out", cp.out, "report text file");
  compile->add_option("--json", cp.json, "netlist JSON file");
  compile->callback([&] {
    Model m = load_model(cp.model);
    if (m.algo != Algo::rf || !m.forest)
      throw std::runtime_error("compile: only forest models lower to a netlist");
    ClassifierNetlist nl =
        compile_forest(*m.forest, m.boundaries, s.run.netlist);
    std::cout << netlist_report(nl) << "\n";
    if (!cp.out.empty()) spit(cp.out, netlist_report(nl) + "\n");
    if (!cp.json.empty()) spit(cp.json, netlist_to_json(nl).dump(2) + "\n");
  });

  // simulate ----------------------------------------------------------
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "cycle-accounted pipeline run under a clocking policy");
  struct {
    std::string program, model, json;
    std::string policy = "baseline";
    bool netlist_costs = false;
    bool csv = false;
  } sm;
  simulate_cmd->add_option("--program", sm.program, "assembly file")->required();
  simulate_cmd->add_option("--policy", sm.policy, "baseline, oracle or predicted")
      ->check(CLI::IsMember({"baseline", "oracle", "predicted"}))
      ->capture_default_str();
  simulate_cmd->add_option("--model", sm.model,
                           "model JSON (required for the predicted policy)");
  simulate_cmd->add_flag(
      "--netlist-costs", sm.netlist_costs,
      "derive ml_stages and e_ml from the model's netlist (forest only)");
  simulate_cmd->add_option("--json", sm.json, "write the full report as JSON");
  simulate_cmd->add_flag("--csv", sm.csv, "print the report as a CSV row");
  simulate_cmd->callback([&] {
    Program prog = parse_program(slurp(sm.program));
    SimPolicy pol = s.run.policy;
    pol.mode = policy_mode_from_name(sm.policy);
    EnergyConfig ecfg = s.run.energy;

    Model model;
    Predictor predictor{};
    ClassBoundaries bounds;
    if (pol.mode == PolicyMode::predicted) {
      if (sm.model.empty())
        throw std::runtime_error("simulate: the predicted policy needs --model");
      model = load_model(sm.model);
      bounds = model.boundaries;
      predictor = model_predictor(model);
    } else {
      bounds = s.bounds();
    }
    if (sm.netlist_costs) {
      if (sm.model.empty())
        throw std::runtime_error("simulate: --netlist-costs needs --model");
      if (model.n_classes == 0) model = load_model(sm.model);
      if (model.algo != Algo::rf || !model.forest)
        throw std::runtime_error(
            "simulate: --netlist-costs needs a forest model");
      ClassifierNetlist nl =
          compile_forest(*model.forest, model.boundaries, s.run.netlist);
      pol.ml_stages = nl.stages;
      ecfg.e_ml = nl.e_per_classification;
    }
    SimReport rep =
        simulate(prog, pol, s.run.delay, bounds, ecfg, predictor, s.mem_words);
    std::cout << rep.summary() << "\n";
    if (sm.csv)
      std::cout << sim_csv_header() << "\n" << sim_csv_row(rep) << "\n";
    if (!sm.json.empty()) spit(sm.json, rep.to_json().dump(2) + "\n");
  });

  // evaluate ----------------------------------------------------------
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "score a saved model against a profile CSV");
  struct {
    std::string model, dataset, dump;
  } ev;
  evaluate_cmd->add_option("--model", ev.model, "model JSON")->required();
  evaluate_cmd->add_option("--dataset", ev.dataset, "profile CSV")->required();
  evaluate_cmd->add_option("--dump", ev.dump,
                           "write per-record seq,op,true,predicted CSV");
  evaluate_cmd->callback([&] {
    Model m = load_model(ev.model);
    std::vector<ProfileRecord> recs = load_profile_csv(ev.dataset);
    Dataset d = to_dataset(recs, m.features, m.n_classes);
    Metrics met = evaluate(m, d);
    std::vector<int> preds = predict_all(m, d);
    double est = estimate_static_speedup(preds, d.labels, m.boundaries,
                                         s.run.policy.replay_cycles);
    std::cout << "accuracy " << met.accuracy << ", weighted f1 "
              << met.f1_weighted << ", estimated speedup " << est << "%\n";
    std::cout << "confusion (true rows, predicted columns):\n";
    for (const auto& row : met.confusion) {
      for (uint64_t v : row) std::cout << "  " << v;
      std::cout << "\n";
    }
    if (!ev.dump.empty()) {
      std::ofstream out(ev.dump);
      if (!out) throw std::runtime_error("cannot write " + ev.dump);
      out << "seq,op,true,predicted\n";
      for (size_t i = 0; i < preds.size(); ++i)
        out << recs[i].seq << ',' << opcode_name(recs[i].op) << ','
            << d.labels[i] << ',' << preds[i] << '\n';
    }
  });

  // run-all -----------------------------------------------------------
  auto* runall = app.add_subcommand(
      "run-all", "full flow: datasets, training, netlists, simulations, tables");
  struct {
    std::vector<int> class_counts = {2, 3, 4};
    std::vector<std::string> boundary_sets;
    bool no_random = false, no_kernels = false;
  } ra;
  runall->add_option("--out-dir", s.run.out_dir, "artifact directory")
      ->capture_default_str();
  runall->add_option("--train-per-class", s.run.train_per_class)
      ->capture_default_str();
  runall->add_option("--test-per-class", s.run.test_per_class)
      ->capture_default_str();
  runall->add_option("--bench-n", s.run.bench_n,
                     "synthetic benchmark length (e.g. 1000000 for the large run)")
      ->capture_default_str();
  runall->add_flag("--no-random", ra.no_random, "skip the synthetic benchmark");
  runall->add_flag("--no-kernels", ra.no_kernels, "skip the kernel suite");
  runall->add_option("--accuracy-floor", s.run.accuracy_floor)
      ->capture_default_str();
  runall->add_option("--speedup-floor", s.run.speedup_floor)
      ->capture_default_str();
  runall->add_option("--max-iterations", s.run.max_iterations)
      ->capture_default_str();
  runall->add_option("--class-counts", ra.class_counts,
                     "experiments to run, by class count")
      ->capture_default_str();
  runall->add_option("--boundary-set", ra.boundary_sets,
                     "explicit boundary sets (repeatable), overriding "
                     "--class-counts");
  runall->callback([&] {
    s.run.include_random = !ra.no_random;
    s.run.include_kernels = !ra.no_kernels;
    s.run.experiments.clear();
    if (!ra.boundary_sets.empty())
      for (const std::string& b : ra.boundary_sets)
        s.run.experiments.push_back(ClassBoundaries::parse(b));
    else
      for (int c : ra.class_counts)
        s.run.experiments.push_back(default_boundaries(c));
    run_all(s.run, std::cout);
  });

  // shared options may follow the subcommand name
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
