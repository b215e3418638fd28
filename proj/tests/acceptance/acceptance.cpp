#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../support/oracles.hpp"
#include "reform/anytime.hpp"
#include "reform/control.hpp"
#include "reform/csv.hpp"
#include "reform/error.hpp"
#include "reform/graph.hpp"
#include "reform/harness.hpp"
#include "reform/inference.hpp"
#include "reform/jointree.hpp"
#include "reform/metareason.hpp"
#include "reform/profiler.hpp"

namespace fs = std::filesystem;
using namespace reform;

namespace {

struct Options {
  std::string cli;
  fs::path work;
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

// 1
Outcome pipeline_diamond(const Options&) {
  const auto net = oracle::diamond();
  const auto t0 = std::chrono::steady_clock::now();
  const auto moral = moralize(net);
  const auto cards = net.cardinalities();
  const auto ord = k_search_order(moral, cards, kFirstCandidateSeed);
  const auto filled = fill_in(moral, ord);
  auto cliques = identify_cliques(filled.graph, ord);
  auto tree = build_join_tree(cliques, cards, &filled.graph);
  const auto estimate = estimate_runtime(tree, cards);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  std::sort(cliques.begin(), cliques.end());
  const bool ok_cliques = cliques == std::vector<std::vector<int>>{{0, 1, 2}, {1, 2, 3}};
  const bool ok_sep = tree.edges.size() == 1 && tree.edges[0].separator == std::vector<int>{1, 2};
  Outcome o;
  o.pass = ok_cliques && ok_sep && estimate.cells == 16 && filled.fill_edges == 0 && ms < 1.0;
  o.detail = std::string("cliques ") + (ok_cliques ? "{A,B,C},{B,C,D}" : "WRONG") + ", separator " +
             (ok_sep ? "{B,C}" : "WRONG") + ", E=" + std::to_string(estimate.cells) +
             ", fill=" + std::to_string(filled.fill_edges) + ", " + fmt(ms) + " ms";
  return o;
}

// 2
Outcome inference_oracle(const Options&) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  double worst = 0.0;
  std::size_t nets = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    GeneratorParams p;
    p.n_nodes = rng.between(2, 12);
    p.max_cardinality = p.n_nodes > 9 ? 3 : 4;
    p.max_parents = 3;
    p.edge_density = 0.2 + 0.6 * rng.uniform();
    const auto net = generate_random(p, derive_seed({99, s}));
    const auto ev = random_evidence(net, 0.4 * rng.uniform(), derive_seed({98, s}));
    const auto ref = oracle::brute_posterior(net, ev.assignments);
    const auto got = infer(net, first_tree(net), ev);
    worst = std::max(worst, std::abs(got.evidence_probability - ref.evidence_probability));
    for (std::size_t v = 0; v < ref.marginals.size(); ++v) {
      for (std::size_t k = 0; k < ref.marginals[v].size(); ++k) {
        worst = std::max(worst, std::abs(got.marginals[v][k] - ref.marginals[v][k]));
      }
    }
    ++nets;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-9 && secs < 60.0,
          std::to_string(nets) + " networks, max |error| " + fmt(worst) + ", " + fmt(secs) + " s"};
}

bool perfect_elimination(const UndirectedGraph& g, const EliminationOrdering& ord) {
  const auto pos = ord.position();
  for (int v = 0; v < g.size(); ++v) {
    std::vector<int> later;
    for (int u = 0; u < g.size(); ++u) {
      if (u != v && g.has_edge(u, v) && pos[idx(u)] < pos[idx(v)]) later.push_back(u);
    }
    for (std::size_t i = 0; i < later.size(); ++i) {
      for (std::size_t j = i + 1; j < later.size(); ++j) {
        if (!g.has_edge(later[i], later[j])) return false;
      }
    }
  }
  return true;
}

// 3
Outcome chordality(const Options&) {
  Rng rng(303);
  std::size_t peo_fail = 0, chordal_fail = 0, clique_fail = 0, rip_fail = 0;
  const std::size_t pairs = 500;
  for (std::size_t i = 0; i < pairs; ++i) {
    GeneratorParams p;
    p.n_nodes = rng.between(3, 14);
    p.max_parents = rng.between(1, 4);
    p.max_cardinality = rng.between(2, 4);
    p.edge_density = 0.1 + 0.8 * rng.uniform();
    const auto net = generate_random(p, derive_seed({303, i}));
    const auto moral = moralize(net);
    const auto cards = net.cardinalities();
    const EliminationOrdering ord{oracle::random_permutation(rng, net.size())};
    const auto filled = fill_in(moral, ord);
    if (!perfect_elimination(filled.graph, ord)) ++peo_fail;
    if (!oracle::is_chordal(filled.graph)) ++chordal_fail;
    auto cliques = identify_cliques(filled.graph, ord);
    auto sorted = cliques;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != oracle::maximal_cliques(filled.graph)) ++clique_fail;
    const auto tree = build_join_tree(cliques, cards, &filled.graph);
    if (!oracle::running_intersection(tree)) ++rip_fail;
  }
  const bool pass = peo_fail + chordal_fail + clique_fail + rip_fail == 0;
  return {pass, std::to_string(pairs) + " pairs; failures: elimination " + std::to_string(peo_fail) + ", chordality " +
                    std::to_string(chordal_fail) + ", cliques " + std::to_string(clique_fail) +
                    ", running intersection " + std::to_string(rip_fail)};
}

// 4
Outcome anytime_monotone(const Options&) {
  std::size_t runs = 0, non_monotone = 0, mismatched = 0, chordal_inputs = 0, filled_chordal = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    GeneratorParams p;
    const auto net = generate_random(p, derive_seed({404, s}));
    SimClock clock;
    const auto state = anytime_reformulate(net, 2.0, s, clock);
    ++runs;
    for (std::size_t j = 1; j < state.trajectory.size(); ++j) {
      if (state.trajectory[j].best > state.trajectory[j - 1].best) ++non_monotone;
    }
    if (estimate_runtime(state.best_tree, net.cardinalities()) != state.best_estimate) ++mismatched;
  }
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto net = oracle::random_chordal_network(derive_seed({405, s}), 8 + static_cast<int>(s % 13));
    const auto moral = moralize(net);
    if (!oracle::is_chordal(moral)) continue;
    ++chordal_inputs;
    const auto cards = net.cardinalities();
    bool zero = true;
    for (std::uint64_t tie = 0; tie < 5; ++tie) zero = zero && fill_in(moral, k_search_order(moral, cards, tie)).fill_edges == 0;
    if (zero) ++filled_chordal;
  }
  const bool pass = non_monotone == 0 && mismatched == 0 && chordal_inputs == 100 && filled_chordal == chordal_inputs;
  return {pass, std::to_string(runs) + " runs, " + std::to_string(non_monotone) + " increases, " + std::to_string(mismatched) +
                    " estimate mismatches; zero fill on " + std::to_string(filled_chordal) + "/" +
                    std::to_string(chordal_inputs) + " chordal moral graphs"};
}

Histogram random_histogram(Rng& rng, double scale) {
  const int n = rng.between(1, 6);
  std::vector<Bin> bins;
  double x = scale * rng.uniform();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    Bin b;
    if (rng.bernoulli(0.4)) {
      b = {x, x, x, 0.0};
    } else {
      const double w = scale * 0.5 * (0.05 + rng.uniform());
      b = {x, x + w, x + w * rng.uniform(), 0.0};
    }
    b.mass = 0.05 + rng.uniform();
    total += b.mass;
    bins.push_back(b);
    x = b.hi + scale * 0.3 * rng.uniform() + 1e-3;
  }
  for (auto& b : bins) b.mass /= total;
  return Histogram(std::move(bins));
}

ExecTimeFamily random_family(Rng& rng) {
  ExecTimeFamily fam;
  const int n = rng.between(3, 15);
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    fam.grid.push_back(t);
    fam.dists.push_back({random_histogram(rng, 1.0 + 4.0 * rng.uniform()), ""});
    t += 0.1 + rng.uniform();
  }
  return fam;
}

// 5
Outcome deadline_equivalence(const Options&) {
  Rng rng(505);
  std::size_t cases = 0, mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const auto fam = random_family(rng);
    for (int j = 0; j < 3; ++j) {
      const double a = (fam.grid.back() + 6.0) * rng.uniform();
      const double k = 0.1 + 10.0 * rng.uniform();
      ++cases;
      if (optimize_apriori(Deadline{k, a}, fam).t_r != deadline_optimum(fam, a, k).t_r) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(cases) + " (family, deadline) cases, " + std::to_string(mismatches) + " mismatches"};
}

// 6
Outcome foc_consistency(const Options&) {
  ExecTimeFamily fam;
  for (int i = 0; i <= 8; ++i) {
    const double t = 0.5 * i;
    const double mu = 10.0 - 2.0 * t;
    fam.grid.push_back(t);
    fam.dists.push_back({Histogram::atoms(std::vector<double>{mu - 1, mu + 1}, std::vector<double>{0.5, 0.5}), ""});
  }
  double worst = 0.0;
  std::size_t points = 0;
  for (auto [t, r] : polynomial_foc_curve(Polynomial{0, {-1}}, fam)) {
    worst = std::max(worst, std::abs(r - 1.0));
    ++points;
  }
  return {points == 7 && worst <= 1e-9, std::to_string(points) + " interior points, max |residual - 1| " + fmt(worst)};
}

// 7
Outcome target_mode(const Options&) {
  const auto dist = Histogram::centred(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{0.1, 0.2, 0.4, 0.2, 0.1}, 1.0);
  ExecTimeFamily fam;
  for (int i = 0; i <= 20; ++i) {
    fam.grid.push_back(0.5 * i);
    fam.dists.push_back({dist, ""});
  }
  const double mode_t = target_optimum(fam, 10.0).t_r;
  std::string sweep;
  bool converged = true;
  for (double w : {0.5, 0.75, 0.9, 0.99, 1.0}) {
    const double t = optimize_apriori(Target{10.0, w, 1.0}, fam).t_r;
    sweep += (sweep.empty() ? "" : ",") + fmt(t);
    converged = converged && t == mode_t;
  }
  return {mode_t == 7.0 && converged, "target_optimum t_r*=" + fmt(mode_t) + "; box t_r* for w=0.5..1: " + sweep};
}

ControlModels point_models(double rho, const Histogram& tau, double delta) {
  ControlModels m;
  m.transition.delta = delta;
  m.transition.t_r_bin_edges = {0.0};
  m.transition.rho = {Histogram::atoms(std::vector<double>{rho}, std::vector<double>{1.0})};
  m.transition.inherited = {false};
  m.per_unit.tau = tau;
  return m;
}

// 8
Outcome myopic_soundness(const Options&) {
  const auto tau = Histogram::atoms(std::vector<double>{5e-7, 1e-6, 2e-6}, std::vector<double>{0.25, 0.5, 0.25});
  const auto models = point_models(1.0, tau, 0.5);
  const std::vector<ValueFunction> vfs{Polynomial{0, {-1}}, Exponential{1, 0.3}, Polynomial{5, {-0.5, -0.1}}};
  std::size_t first_halts = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    GeneratorParams p;
    p.n_nodes = 16;
    const auto net = generate_random(p, derive_seed({808, s}));
    SimClock clock;
    ControlOptions opt;
    opt.materialize = false;
    const auto trace = incremental_control(net, vfs[s % vfs.size()], models, 0.5, s, clock, opt);
    if (trace.steps.size() == 1 && trace.steps[0].decision == Decision::Halt) ++first_halts;
  }
  const auto chain = oracle::chain(4);
  SimClock clock(SimClock::kDefaultCandidateCost, 1.0);
  const auto pinned = point_models(0.5, Histogram::atoms(std::vector<double>{1.0}, std::vector<double>{1.0}), 1.0);
  const auto trace = incremental_control(chain, Deadline{1, 10}, pinned, 1.0, 1, clock);
  const auto& first = trace.steps.front();
  const bool pinned_ok = first.estimate.cells == 12 && first.t_r == 1.0 && first.ev_halt == 0.0 && first.ev_continue == 1.0 &&
                         first.decision == Decision::Continue;
  return {first_halts == 100 && pinned_ok,
          std::to_string(first_halts) + "/100 halt at the first comparison; pinned deadline: E=" +
              std::to_string(first.estimate.cells) + " EV_halt=" + fmt(first.ev_halt) + " EV_continue=" +
              fmt(first.ev_continue) + " -> " + std::string(to_string(first.decision))};
}

Polynomial shifted(const Polynomial& p, double b) {
  auto q = p;
  q.constant += b;
  return q;
}

std::string decisions_of(const ControlTrace& t) {
  std::string s;
  for (const auto& step : t.steps) s += format_double(step.t_r) + (step.decision == Decision::Halt ? "H;" : "C;");
  return s + std::to_string(t.outcome.tree.estimate.cells);
}

// 9
Outcome invariances(const Options&) {
  Rng rng(909);
  const std::vector<double> scales{0.01, 3.5, 1000.0};
  const std::vector<double> shifts{-40.0, 0.5, 250.0};
  std::size_t checks = 0, changed = 0, continues = 0;

  for (int i = 0; i < 40; ++i) {
    const auto fam = random_family(rng);
    const double a = (fam.grid.back() + 6.0) * rng.uniform();
    const std::vector<ValueFunction> vfs{Deadline{1, a}, Polynomial{0, {-1}}, Polynomial{2, {1.5, -0.4}},
                                         Polynomial{0, {0, -1}}, Exponential{2, 0.4}, Target{a, 0.5, 1},
                                         Target{a, 1.5, 2}};
    for (const auto& vf : vfs) {
      const double base = optimize_apriori(vf, fam).t_r;
      for (double c : scales) {
        ++checks;
        if (optimize_apriori(scaled(vf, c), fam).t_r != base) ++changed;
      }
      if (const auto* poly = std::get_if<Polynomial>(&vf)) {
        for (double b : shifts) {
          ++checks;
          if (optimize_apriori(shifted(*poly, b), fam).t_r != base) ++changed;
        }
      }
    }
    const double d_base = deadline_optimum(fam, a, 1.0).t_r;
    for (double c : scales) {
      ++checks;
      if (deadline_optimum(fam, a, c).t_r != d_base) ++changed;
    }
  }

  ControlModels models;
  models.transition.delta = 0.5;
  models.transition.t_r_bin_edges = {0.0, 1.0, 3.0};
  models.transition.rho = {Histogram({{0.2, 0.6, 0.4, 0.3}, {0.6, 1.0, 0.8, 0.3}, {1, 1, 1, 0.4}}),
                           Histogram({{0.5, 1.0, 0.9, 0.2}, {1, 1, 1, 0.8}}),
                           Histogram::atoms(std::vector<double>{1.0}, std::vector<double>{1.0})};
  models.transition.inherited = {false, false, false};
  models.per_unit.tau = Histogram::atoms(std::vector<double>{2e-7, 1e-6, 4e-6}, std::vector<double>{0.3, 0.5, 0.2});
  const std::vector<ValueFunction> ctl_vfs{Polynomial{0, {-1}}, Polynomial{0, {0, -1}}, Exponential{1, 0.2},
                                           Deadline{1, 1.5}, Target{2.0, 1.0, 1.0}};
  for (std::uint64_t s = 0; s < 10; ++s) {
    GeneratorParams p;
    p.n_nodes = 24;
    const auto net = generate_random(p, derive_seed({910, s}));
    ControlOptions opt;
    opt.materialize = false;
    opt.max_increments = 40;
    auto run = [&](const ValueFunction& vf) {
      SimClock clock(SimClock::kDefaultCandidateCost, 1e-6);
      return decisions_of(incremental_control(net, vf, models, 0.5, s, clock, opt));
    };
    for (const auto& vf : ctl_vfs) {
      const auto base = run(vf);
      continues += static_cast<std::size_t>(std::count(base.begin(), base.end(), 'C'));
      for (double c : scales) {
        ++checks;
        if (run(scaled(vf, c)) != base) ++changed;
      }
      if (const auto* poly = std::get_if<Polynomial>(&vf)) {
        for (double b : shifts) {
          ++checks;
          if (run(shifted(*poly, b)) != base) ++changed;
        }
      }
    }
  }
  return {changed == 0, std::to_string(checks) + " transformed runs (optimizers and controller, " + std::to_string(continues) +
                            " continue decisions in the base controller runs), " + std::to_string(changed) + " changed outputs"};
}

struct PolicyStats {
  double mean = 0.0;
  double first_halt_rate = 0.0;
  double hit_rate = 0.0;
};

PolicyStats stats_of(const std::vector<ScoreRow>& rows, const std::string& vf, Policy p) {
  PolicyStats s;
  std::size_t n = 0, first = 0, hits = 0;
  for (const auto& r : rows) {
    if (r.vf_id != vf || r.policy != p) continue;
    ++n;
    s.mean += r.value;
    if (r.comparisons == 1) ++first;
    if (r.value > 0.0) ++hits;
  }
  s.mean /= static_cast<double>(n);
  s.first_halt_rate = static_cast<double>(first) / static_cast<double>(n);
  s.hit_rate = static_cast<double>(hits) / static_cast<double>(n);
  return s;
}

// 10
Outcome qualitative_replication(const Options&) {
  Corpus corpus;
  corpus.seed = 7;
  corpus.count = 200;
  ProfileClock clock;
  const double delta = 0.5, horizon = 10.0;
  const std::uint64_t profile_seed = 1;

  const auto trajs = collect_trajectories(corpus, horizon, delta, clock, profile_seed);
  ControlModels models{fit_transition_model(trajs, delta, transition_bin_edges(horizon, delta, delta)),
                       collect_exec_per_unit(corpus, clock, profile_seed)};

  ExperimentConfig cfg;
  cfg.corpus = corpus;
  cfg.clock = clock;
  cfg.delta = delta;
  cfg.master_seed = 1;
  cfg.models = models;

  // Deadlines at quantiles of the default policy's completion time.
  cfg.policies = {Policy::Default};
  cfg.value_functions = {{"probe", Polynomial{0, {-1}}}};
  std::vector<double> totals;
  for (const auto& r : run_experiment(cfg).scores) totals.push_back(r.t_total);
  std::sort(totals.begin(), totals.end());
  auto quantile = [&](double q) { return totals[static_cast<std::size_t>(q * static_cast<double>(totals.size() - 1))]; };

  cfg.policies = {Policy::Default, Policy::Incremental};
  cfg.value_functions = {{"linear", Polynomial{100, {-0.1}}}, {"exponential", Exponential{100, 0.001}},
                         {"quadratic", Polynomial{0, {0, -1}}}};
  const std::vector<double> qs{0.1, 0.25, 0.5, 0.75, 0.9};
  for (double q : qs) cfg.value_functions.push_back({"deadline_q" + fmt(q * 100), Deadline{1, quantile(q)}});
  const auto rows = run_experiment(cfg).scores;

  std::ostringstream d;
  bool pass_a = true;
  for (const std::string vf : {"linear", "exponential"}) {
    const auto def = stats_of(rows, vf, Policy::Default);
    const auto inc = stats_of(rows, vf, Policy::Incremental);
    const bool ok = inc.first_halt_rate >= 0.9 && inc.mean >= def.mean - 0.05 * std::abs(def.mean);
    pass_a = pass_a && ok;
    d << "(a) " << vf << ": first-increment halts " << fmt(100 * inc.first_halt_rate) << "%, mean inc " << fmt(inc.mean)
      << " vs def " << fmt(def.mean) << "; ";
  }
  const auto qdef = stats_of(rows, "quadratic", Policy::Default);
  const auto qinc = stats_of(rows, "quadratic", Policy::Incremental);
  const bool pass_b = qinc.mean >= qdef.mean;
  d << "(b) quadratic: inc " << fmt(qinc.mean) << " vs def " << fmt(qdef.mean) << "; (c)";
  bool pass_c = true;
  for (double q : qs) {
    const std::string id = "deadline_q" + fmt(q * 100);
    const double hd = stats_of(rows, id, Policy::Default).hit_rate;
    const double hi = stats_of(rows, id, Policy::Incremental).hit_rate;
    const double pooled = 0.5 * (hd + hi);
    const double sd = std::sqrt(pooled * (1.0 - pooled));
    pass_c = pass_c && std::abs(hd - hi) < sd;
    d << " a=" << fmt(quantile(q)) << ": hit " << fmt(hd) << "/" << fmt(hi) << " sd " << fmt(sd) << ";";
  }
  return {pass_a && pass_b && pass_c, d.str()};
}

int sh(const std::string& cmd) { return std::system(cmd.c_str()); }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = read_text_file(e.path());
  }
  return out;
}

// 11
Outcome determinism(const Options& opt) {
  if (opt.cli.empty()) return {false, "no CLI path given (--cli)"};
  const auto root = opt.work / "determinism";
  fs::remove_all(root);
  const std::string cli = "'" + fs::absolute(opt.cli).string() + "'";
  const std::vector<std::pair<std::string, std::string>> steps{
      {"gen", cli + " gen --seed 5 --nodes 20 --count 12 --out corpus > gen.txt"},
      {"profile", cli + " profile --manifest corpus/manifest.json --seed 3 --horizon 4 --threads THREADS --out models > profile.txt"},
      {"optimize", cli + " optimize --family models/exec_family.json --vf poly:a0=0,a1=0,a2=-1 --out optimize.csv > optimize.txt"},
      {"control", cli + " control --network corpus/network_0.json --vf exp:k=1,lambda=0.1 --transition models/transition.json "
                        "--per-unit models/exec_per_unit.json --seed 4 --out trace.csv > control.txt"},
      {"experiment", cli + " experiment --config experiment.json --threads THREADS --out results > experiment.txt"},
  };
  const std::string config = R"({"corpus": "corpus/manifest.json",
    "value_functions": [{"id": "lin", "vf": "poly:a0=10,a1=-1"}, {"id": "dl", "vf": "deadline:k=1,a=1.5"}],
    "master_seed": 9, "models": {"transition": "models/transition.json", "exec_per_unit": "models/exec_per_unit.json"}})";
  std::vector<std::string> failed;
  for (const char* run : {"a", "b"}) {
    const auto dir = root / run;
    fs::create_directories(dir);
    write_text_file(dir / "experiment.json", config);
    const std::string threads = std::string(run) == "a" ? "0" : "1";
    for (auto [name, cmd] : steps) {
      for (auto pos = cmd.find("THREADS"); pos != std::string::npos; pos = cmd.find("THREADS")) cmd.replace(pos, 7, threads);
      if (sh("cd '" + dir.string() + "' && " + cmd) != 0) failed.push_back(name + " (run " + run + " failed)");
    }
  }
  const auto a = snapshot(root / "a");
  const auto b = snapshot(root / "b");
  std::size_t differing = 0;
  for (const auto& [name, content] : a) {
    auto it = b.find(name);
    if (it == b.end() || it->second != content) {
      ++differing;
      if (differing <= 3) failed.push_back(name + " differs");
    }
  }
  if (a.size() != b.size()) failed.push_back("file sets differ");
  std::string detail = std::to_string(a.size()) + " files compared across two runs (gen, profile, optimize, control, experiment)";
  for (const auto& f : failed) detail += "; " + f;
  return {failed.empty() && a.size() > 20, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  Options opt;
  std::string work;
  app.add_option("--criterion", only, "Run a single criterion (1-11)");
  app.add_option("--cli", opt.cli, "Path to the reform executable");
  app.add_option("--work", work, "Scratch directory");
  CLI11_PARSE(app, argc, argv);
  opt.work = work.empty() ? fs::temp_directory_path() / "reform_acceptance" : fs::path(work);
  fs::create_directories(opt.work);

  const std::vector<Outcome (*)(const Options&)> criteria{
      pipeline_diamond, inference_oracle, chordality,        anytime_monotone, deadline_equivalence, foc_consistency,
      target_mode,      myopic_soundness, invariances,       qualitative_replication, determinism};
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "acceptance: no criterion " << only << "\n";
    return 2;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i](opt);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
