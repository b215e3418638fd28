#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "reform/anytime.hpp"
#include "reform/control.hpp"
#include "reform/csv.hpp"
#include "reform/error.hpp"
#include "reform/harness.hpp"
#include "reform/inference.hpp"
#include "reform/jointree.hpp"
#include "reform/metareason.hpp"
#include "reform/network.hpp"
#include "reform/profiler.hpp"
#include "reform/value.hpp"

namespace fs = std::filesystem;
using namespace reform;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string clock = "sim";
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool out_required) {
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--clock", c.clock, "Clock mode")->check(CLI::IsMember({"wall", "sim"}))->capture_default_str();
  auto* out = cmd->add_option("--out", c.out, "Output path");
  if (out_required) out->required();
}

std::unique_ptr<Clock> clock_for(const Common& c, double candidate_cost, double tau) {
  if (parse_clock_mode(c.clock) == ClockMode::Wall) return std::make_unique<WallClock>();
  return std::make_unique<SimClock>(candidate_cost, tau);
}

std::string short_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// gen
struct GenArgs {
  Common common;
  std::string manifest;
  GeneratorParams params;
  std::size_t count = 200;
};

int run_gen(const GenArgs& a) {
  Corpus corpus;
  if (!a.manifest.empty()) {
    corpus = read_corpus_manifest(read_text_file(a.manifest));
  } else {
    corpus.params = a.params;
    corpus.seed = a.common.seed;
    corpus.count = a.count;
    corpus = read_corpus_manifest(write_corpus_manifest(corpus));
  }
  const fs::path dir(a.common.out);
  write_text_file(dir / "manifest.json", write_corpus_manifest(corpus));
  for (std::size_t i = 0; i < corpus.count; ++i) {
    save_network(corpus.network(i), dir / ("network_" + std::to_string(i) + ".json"));
  }
  std::cout << "wrote " << corpus.count << " networks to " << dir.string() << "\n";
  return 0;
}

// reformulate
struct ReformulateArgs {
  Common common;
  std::string network;
  double budget = 1.0;
  double candidate_cost = SimClock::kDefaultCandidateCost;
  std::string tree_out;
};

int run_reformulate(const ReformulateArgs& a) {
  const auto net = load_network(a.network);
  auto clock = clock_for(a.common, a.candidate_cost, SimClock::kDefaultTau);
  const auto state = anytime_reformulate(net, a.budget, a.common.seed, *clock);
  write_text_file(a.common.out, write_trajectory_csv(state.trajectory));
  if (!a.tree_out.empty()) write_text_file(a.tree_out, write_join_tree(state.best_tree));
  std::cout << "best_estimate=" << state.best_estimate.cells << " candidates=" << state.trajectory.size()
            << " t_r=" << short_number(state.elapsed_t_r) << "\n";
  return 0;
}

// infer
struct InferArgs {
  Common common;
  std::string network;
  std::string tree;
  std::string evidence;
};

int run_infer(const InferArgs& a) {
  const auto net = load_network(a.network);
  const auto tree = a.tree.empty() ? first_tree(net) : read_join_tree(read_text_file(a.tree));
  const auto ev = parse_evidence(a.evidence);
  auto clock = clock_for(a.common, SimClock::kDefaultCandidateCost, SimClock::kDefaultTau);
  const auto pots = assign_potentials(net, tree);
  const auto result = propagate(pots, tree, ev, *clock);
  const auto post = all_marginals(result.calibrated);
  if (!a.common.out.empty()) write_text_file(a.common.out, write_marginals_csv(post));
  for (std::size_t v = 0; v < post.marginals.size(); ++v) {
    for (std::size_t s = 0; s < post.marginals[v].size(); ++s) {
      std::cout << "P(" << net.variables[v].name << "=" << s << ")=" << short_number(post.marginals[v][s]) << "\n";
    }
  }
  std::cout << "P(evidence)=" << short_number(post.evidence_probability) << " t_e_seconds=" << short_number(result.t_e)
            << "\n";
  return 0;
}

// profile
struct ProfileArgs {
  Common common;
  std::string manifest;
  double horizon = 10.0;
  double step = 0.5;
  double delta = 0.5;
  double bin_width = 0.0;
  std::size_t bins = kDefaultBinCount;
  double evidence_fraction = 0.1;
  ProfileClock clock;
};

int run_profile(ProfileArgs a) {
  const auto corpus = read_corpus_manifest(read_text_file(a.manifest));
  a.clock.mode = parse_clock_mode(a.common.clock);
  const fs::path dir(a.common.out);
  const auto trajs = collect_trajectories(corpus, a.horizon, a.step, a.clock, a.common.seed);
  write_trajectory_archive(trajs, dir / "trajectories");

  const double width = a.bin_width > 0.0 ? a.bin_width : a.step;
  const auto tm = fit_transition_model(trajs, a.delta, transition_bin_edges(a.horizon, width, a.delta), a.bins);
  write_text_file(dir / "transition.json", write_transition_model(tm));

  const auto pu = collect_exec_per_unit(corpus, a.clock, a.common.seed, a.evidence_fraction, a.bins);
  write_text_file(dir / "exec_per_unit.json", write_exec_per_unit(pu));

  std::vector<double> grid;
  for (const auto& s : trajs.front().samples) grid.push_back(s.t_r);
  const auto fam = derive_exec_family(trajs, pu, grid, a.bins);
  write_text_file(dir / "exec_family.json", write_exec_family(fam));
  std::cout << "profiled " << corpus.count << " networks into " << dir.string() << "\n";
  return 0;
}

// optimize
struct OptimizeArgs {
  Common common;
  std::string family;
  std::string vf;
};

int run_optimize(const OptimizeArgs& a) {
  const auto fam = read_exec_family(read_text_file(a.family));
  const auto vf = parse_value_function(a.vf);
  const auto best = optimize_apriori(vf, fam);
  std::cout << "t_r*=" << short_number(best.t_r) << " EV*=" << short_number(best.ev) << "\n";

  CsvTable table;
  table.header = {"t_r", "ev"};
  const auto* poly = std::get_if<Polynomial>(&vf);
  if (poly) table.header.push_back("foc_residual");
  for (std::size_t i = 0; i < fam.grid.size(); ++i) {
    std::vector<std::string> row{format_double(fam.grid[i]), format_double(best.ev_curve[i])};
    if (poly) {
      const bool interior = i > 0 && i + 1 < fam.grid.size();
      row.push_back(interior ? format_double(polynomial_foc_residual(*poly, fam, fam.grid[i])) : "nan");
    }
    table.rows.push_back(std::move(row));
  }
  if (const auto* d = std::get_if<Deadline>(&vf)) {
    const auto r = deadline_optimum(fam, d->a, d->k);
    std::cout << "deadline t_r*=" << short_number(r.t_r) << " P(complete)=" << short_number(r.probability) << "\n";
  }
  if (const auto* t = std::get_if<Target>(&vf)) {
    const auto r = target_optimum(fam, t->a);
    std::cout << "mode t_r*=" << short_number(r.t_r) << " density=" << short_number(r.density) << "\n";
  }
  if (!a.common.out.empty()) write_text_file(a.common.out, write_csv(table));
  return 0;
}

// control
struct ControlArgs {
  Common common;
  std::string network;
  std::string vf;
  std::string transition;
  std::string per_unit;
  std::string policy = "incremental";
  std::string evidence;
  double delta = 0.0;
  double candidate_cost = SimClock::kDefaultCandidateCost;
  double tau = SimClock::kDefaultTau;
};

int run_control(const ControlArgs& a) {
  const auto net = load_network(a.network);
  const auto vf = parse_value_function(a.vf);
  ControlOptions options;
  options.evidence = parse_evidence(a.evidence);
  auto clock = clock_for(a.common, a.candidate_cost, a.tau);
  ControlTrace trace;
  if (parse_policy(a.policy) == Policy::Default) {
    trace = default_policy(net, vf, a.common.seed, *clock, options);
  } else {
    if (a.transition.empty() || a.per_unit.empty()) throw ConfigError("control: --transition and --per-unit are required");
    ControlModels models{read_transition_model(read_text_file(a.transition)), read_exec_per_unit(read_text_file(a.per_unit))};
    const double delta = a.delta > 0.0 ? a.delta : models.transition.delta;
    trace = incremental_control(net, vf, models, delta, a.common.seed, *clock, options);
  }
  write_text_file(a.common.out, write_trace_csv(trace));
  if (!trace.outcome.error.empty()) throw Error("propagation failed: " + trace.outcome.error);
  std::cout << "comparisons=" << trace.steps.size() << " t_r=" << short_number(trace.outcome.t_r_total)
            << " t_e=" << short_number(trace.outcome.t_e) << " value=" << short_number(trace.outcome.value) << "\n";
  return 0;
}

// experiment
struct ExperimentArgs {
  Common common;
  std::string config;
  std::optional<unsigned> threads;
};

int run_experiment_cmd(const ExperimentArgs& a, bool seed_given, bool clock_given) {
  auto cfg = load_experiment_config(a.config);
  if (seed_given) cfg.master_seed = a.common.seed;
  if (clock_given) cfg.clock.mode = parse_clock_mode(a.common.clock);
  if (a.threads) cfg.clock.threads = *a.threads;
  const auto result = run_experiment(cfg);
  const fs::path dir(a.common.out);
  write_text_file(dir / "scores.csv", write_score_csv(result.scores));
  write_text_file(dir / "summary.csv", write_summary_csv(result.summary));
  for (const auto& s : result.summary) {
    std::cout << s.vf_id << " " << to_string(s.policy) << " mean_value=" << short_number(s.mean_value)
              << " n=" << s.n_trials << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-bounded join-tree reformulation with metareasoning control"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a corpus of random networks");
  add_common(gen_cmd, gen.common, true);
  gen_cmd->add_option("--manifest", gen.manifest, "Corpus manifest (overrides the generator flags)");
  gen_cmd->add_option("--nodes", gen.params.n_nodes)->capture_default_str();
  gen_cmd->add_option("--max-parents", gen.params.max_parents)->capture_default_str();
  gen_cmd->add_option("--max-cardinality", gen.params.max_cardinality)->capture_default_str();
  gen_cmd->add_option("--edge-density", gen.params.edge_density)->capture_default_str();
  gen_cmd->add_option("--count", gen.count)->capture_default_str();

  ReformulateArgs ref;
  auto* ref_cmd = app.add_subcommand("reformulate", "Anytime join-tree search on one network");
  add_common(ref_cmd, ref.common, true);
  ref_cmd->add_option("--network", ref.network)->required();
  ref_cmd->add_option("--budget", ref.budget, "Seconds of reformulation")->capture_default_str();
  ref_cmd->add_option("--candidate-cost", ref.candidate_cost, "Simulated seconds per candidate")->capture_default_str();
  ref_cmd->add_option("--tree-out", ref.tree_out, "Write the best join tree here");

  InferArgs inf;
  auto* inf_cmd = app.add_subcommand("infer", "Posterior marginals by join-tree propagation");
  add_common(inf_cmd, inf.common, false);
  inf_cmd->add_option("--network", inf.network)->required();
  inf_cmd->add_option("--tree", inf.tree, "Join tree (default: first K-search tree)");
  inf_cmd->add_option("--evidence", inf.evidence, "e.g. 3=1,5=0");

  ProfileArgs prof;
  auto* prof_cmd = app.add_subcommand("profile", "Fit transition, per-unit and execution-time models");
  add_common(prof_cmd, prof.common, true);
  prof_cmd->add_option("--manifest", prof.manifest)->required();
  prof_cmd->add_option("--horizon", prof.horizon)->capture_default_str();
  prof_cmd->add_option("--step", prof.step, "Trajectory sample step")->capture_default_str();
  prof_cmd->add_option("--delta", prof.delta, "Controller increment")->capture_default_str();
  prof_cmd->add_option("--bin-width", prof.bin_width, "Width of t_r bins (default: step)");
  prof_cmd->add_option("--bins", prof.bins, "Histogram bins")->capture_default_str();
  prof_cmd->add_option("--evidence-fraction", prof.evidence_fraction)->capture_default_str();
  prof_cmd->add_option("--candidate-cost", prof.clock.candidate_cost)->capture_default_str();
  prof_cmd->add_option("--tau-median", prof.clock.tau.median)->capture_default_str();
  prof_cmd->add_option("--tau-log-sigma", prof.clock.tau.log_sigma)->capture_default_str();
  prof_cmd->add_option("--materialize-cap", prof.clock.materialize_cap)->capture_default_str();
  prof_cmd->add_option("--threads", prof.clock.threads, "0 = all cores")->capture_default_str();

  OptimizeArgs opt;
  auto* opt_cmd = app.add_subcommand("optimize", "A-priori reformulation time for a value function");
  add_common(opt_cmd, opt.common, false);
  opt_cmd->add_option("--family", opt.family)->required();
  opt_cmd->add_option("--vf", opt.vf, "e.g. deadline:k=1,a=5")->required();

  ControlArgs ctl;
  auto* ctl_cmd = app.add_subcommand("control", "Run the halt/continue controller on one network");
  add_common(ctl_cmd, ctl.common, true);
  ctl_cmd->add_option("--network", ctl.network)->required();
  ctl_cmd->add_option("--vf", ctl.vf)->required();
  ctl_cmd->add_option("--transition", ctl.transition);
  ctl_cmd->add_option("--per-unit", ctl.per_unit);
  ctl_cmd->add_option("--policy", ctl.policy)->check(CLI::IsMember({"default", "incremental"}))->capture_default_str();
  ctl_cmd->add_option("--evidence", ctl.evidence);
  ctl_cmd->add_option("--delta", ctl.delta, "Increment (default: the transition model's)");
  ctl_cmd->add_option("--candidate-cost", ctl.candidate_cost)->capture_default_str();
  ctl_cmd->add_option("--tau", ctl.tau, "Simulated seconds per state-space cell")->capture_default_str();

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Default vs incremental policy over a corpus");
  add_common(exp_cmd, exp.common, true);
  exp_cmd->add_option("--config", exp.config)->required();
  exp_cmd->add_option("--threads", exp.threads, "0 = all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& ch : msg) {
      if (ch == '\n') ch = ' ';
    }
    std::cerr << "reform: " << msg << "\n";
    return e.get_exit_code() ? e.get_exit_code() : 2;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*ref_cmd) return run_reformulate(ref);
    if (*inf_cmd) return run_infer(inf);
    if (*prof_cmd) return run_profile(prof);
    if (*opt_cmd) return run_optimize(opt);
    if (*ctl_cmd) return run_control(ctl);
    if (*exp_cmd) {
      return run_experiment_cmd(exp, exp_cmd->count("--seed") > 0, exp_cmd->count("--clock") > 0);
    }
  } catch (const std::exception& e) {
    std::cerr << "reform: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
