#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "reform/anytime.hpp"
#include "reform/control.hpp"
#include "reform/error.hpp"
#include "reform/harness.hpp"
#include "reform/inference.hpp"
#include "reform/jointree.hpp"
#include "reform/metareason.hpp"
#include "reform/network.hpp"
#include "reform/profiler.hpp"
#include "reform/value.hpp"

namespace py = pybind11;
using namespace reform;

namespace {

Evidence to_evidence(const std::map<int, int>& ev) { return Evidence{ev}; }

py::dict trace_dict(const ControlTrace& t) {
  py::list steps;
  for (const auto& s : t.steps) {
    py::dict d;
    d["step"] = s.step;
    d["t_r"] = s.t_r;
    d["estimate"] = s.estimate.cells;
    d["ev_halt"] = s.ev_halt;
    d["ev_continue"] = s.ev_continue;
    d["decision"] = std::string(to_string(s.decision));
    steps.append(d);
  }
  py::dict out;
  out["steps"] = steps;
  out["t_r"] = t.outcome.t_r_total;
  out["t_e"] = t.outcome.t_e;
  out["value"] = t.outcome.value;
  out["estimate"] = t.outcome.tree.estimate.cells;
  out["error"] = t.outcome.error;
  out["csv"] = write_trace_csv(t);
  return out;
}

GeneratorParams params(int n_nodes, int max_parents, int max_cardinality, double edge_density) {
  GeneratorParams p;
  p.n_nodes = n_nodes;
  p.max_parents = max_parents;
  p.max_cardinality = max_cardinality;
  p.edge_density = edge_density;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Join-tree reformulation under time pressure";

  auto base = py::register_exception<Error>(m, "ReformError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
  py::register_exception<InconsistentEvidence>(m, "InconsistentEvidence", base.ptr());
  py::register_exception<JointTooLarge>(m, "JointTooLarge", base.ptr());
  py::register_exception<OverflowError>(m, "EstimateOverflow", base.ptr());
  py::register_exception<BoundaryError>(m, "BoundaryError", base.ptr());
  py::register_exception<NoFeasibleTarget>(m, "NoFeasibleTarget", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<BeliefNetwork>(m, "Network")
      .def_static("from_json", [](const std::string& text) { return read_network(text); })
      .def_static("load", [](const std::filesystem::path& p) { return load_network(p); })
      .def_static("random", [](std::uint64_t seed, int n_nodes, int max_parents, int max_cardinality,
                               double edge_density) { return generate_random(params(n_nodes, max_parents, max_cardinality, edge_density), seed); },
                  py::arg("seed"), py::arg("n_nodes") = 30, py::arg("max_parents") = 4, py::arg("max_cardinality") = 4,
                  py::arg("edge_density") = 0.3)
      .def("to_json", [](const BeliefNetwork& n) { return write_network(n); })
      .def("__len__", &BeliefNetwork::size)
      .def_property_readonly("names", [](const BeliefNetwork& n) {
        std::vector<std::string> out;
        for (const auto& v : n.variables) out.push_back(v.name);
        return out;
      })
      .def_property_readonly("cardinalities", &BeliefNetwork::cardinalities)
      .def_readonly("parents", &BeliefNetwork::parents)
      .def_readonly("cpts", &BeliefNetwork::cpts)
      .def("validate", [](const BeliefNetwork& n) {
        std::vector<std::string> out;
        for (const auto& v : validate(n)) out.push_back(v.kind + ": " + v.message);
        return out;
      });

  py::class_<JoinTree>(m, "JoinTree")
      .def_static("from_json", [](const std::string& text) { return read_join_tree(text); })
      .def("to_json", [](const JoinTree& t) { return write_join_tree(t); })
      .def_readonly("cliques", &JoinTree::cliques)
      .def_property_readonly("separators", [](const JoinTree& t) {
        std::vector<std::tuple<int, int, std::vector<int>>> out;
        for (const auto& e : t.edges) out.emplace_back(e.a, e.b, e.separator);
        return out;
      })
      .def_property_readonly("estimate", [](const JoinTree& t) { return t.estimate.cells; });

  m.def("moralize_edges", [](const BeliefNetwork& net) {
    const auto g = moralize(net);
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < g.size(); ++a) {
      for (int b = a + 1; b < g.size(); ++b) {
        if (g.has_edge(a, b)) edges.emplace_back(a, b);
      }
    }
    return edges;
  });
  m.def("first_tree", &first_tree, "Deterministic K-search join tree");
  m.def("join_tree_for_ordering", [](const BeliefNetwork& net, const std::vector<int>& order) {
    return join_tree_from_ordering(moralize(net), EliminationOrdering{order}, net.cardinalities());
  });

  m.def(
      "reformulate",
      [](const BeliefNetwork& net, double budget, std::uint64_t seed, double candidate_cost) {
        SimClock clock(candidate_cost);
        auto state = anytime_reformulate(net, budget, seed, clock);
        std::vector<std::tuple<double, std::uint64_t, std::string>> traj;
        for (const auto& p : state.trajectory) traj.emplace_back(p.t_r, p.best.cells, std::string(to_string(p.strategy)));
        return py::make_tuple(state.best_tree, state.elapsed_t_r, traj);
      },
      py::arg("network"), py::arg("budget"), py::arg("seed") = 0, py::arg("candidate_cost") = SimClock::kDefaultCandidateCost,
      "Anytime search on the simulated clock: (best tree, t_r, [(t_r, best estimate, strategy)])");

  m.def(
      "infer",
      [](const BeliefNetwork& net, const std::optional<JoinTree>& tree, const std::map<int, int>& evidence) {
        auto post = infer(net, tree ? *tree : first_tree(net), to_evidence(evidence));
        return py::make_tuple(post.marginals, post.evidence_probability);
      },
      py::arg("network"), py::arg("tree") = std::nullopt, py::arg("evidence") = std::map<int, int>{},
      "Posterior marginals and P(evidence) by join-tree propagation");
  m.def(
      "brute_force_marginals",
      [](const BeliefNetwork& net, const std::map<int, int>& evidence) {
        auto post = oracle_marginals(net, to_evidence(evidence));
        return py::make_tuple(post.marginals, post.evidence_probability);
      },
      py::arg("network"), py::arg("evidence") = std::map<int, int>{});

  m.def("value", [](const std::string& vf, double t) { return eval_value(parse_value_function(vf), t); },
        py::arg("vf"), py::arg("t"));
  m.def(
      "optimize",
      [](const std::string& family_json, const std::string& vf) {
        auto r = optimize_apriori(parse_value_function(vf), read_exec_family(family_json));
        return py::make_tuple(r.t_r, r.ev, r.ev_curve);
      },
      py::arg("family_json"), py::arg("vf"), "Grid argmax of expected value: (t_r*, EV*, EV curve)");
  m.def(
      "deadline_optimum",
      [](const std::string& family_json, double a, double k) {
        auto r = deadline_optimum(read_exec_family(family_json), a, k);
        return py::make_tuple(r.t_r, r.probability);
      },
      py::arg("family_json"), py::arg("a"), py::arg("k") = 1.0);
  m.def(
      "target_optimum",
      [](const std::string& family_json, double a) {
        auto r = target_optimum(read_exec_family(family_json), a);
        return py::make_tuple(r.t_r, r.density);
      },
      py::arg("family_json"), py::arg("a"));
  m.def(
      "foc_residual",
      [](const std::string& family_json, const std::string& vf, double t_r) {
        auto parsed = parse_value_function(vf);
        const auto* poly = std::get_if<Polynomial>(&parsed);
        if (!poly) throw ConfigError("foc_residual needs a polynomial value function");
        return polynomial_foc_residual(*poly, read_exec_family(family_json), t_r);
      },
      py::arg("family_json"), py::arg("vf"), py::arg("t_r"));

  m.def(
      "control",
      [](const BeliefNetwork& net, const std::string& vf, const std::string& policy, const std::string& transition_json,
         const std::string& per_unit_json, std::uint64_t seed, double candidate_cost, double tau,
         const std::map<int, int>& evidence) {
        SimClock clock(candidate_cost, tau);
        ControlOptions options;
        options.evidence = to_evidence(evidence);
        const auto parsed = parse_value_function(vf);
        if (parse_policy(policy) == Policy::Default) return trace_dict(default_policy(net, parsed, seed, clock, options));
        ControlModels models{read_transition_model(transition_json), read_exec_per_unit(per_unit_json)};
        return trace_dict(incremental_control(net, parsed, models, models.transition.delta, seed, clock, options));
      },
      py::arg("network"), py::arg("vf"), py::arg("policy") = "incremental", py::arg("transition_json") = "",
      py::arg("per_unit_json") = "", py::arg("seed") = 0, py::arg("candidate_cost") = SimClock::kDefaultCandidateCost,
      py::arg("tau") = SimClock::kDefaultTau, py::arg("evidence") = std::map<int, int>{},
      "Run one policy on the simulated clock and return its trace");

  m.def(
      "profile",
      [](const std::string& manifest_json, std::uint64_t seed, double horizon, double step, double delta,
         unsigned threads) {
        const auto corpus = read_corpus_manifest(manifest_json);
        ProfileClock clock;
        clock.threads = threads;
        const auto trajs = collect_trajectories(corpus, horizon, step, clock, seed);
        const auto tm = fit_transition_model(trajs, delta, transition_bin_edges(horizon, step, delta));
        const auto pu = collect_exec_per_unit(corpus, clock, seed);
        std::vector<double> grid;
        for (const auto& s : trajs.front().samples) grid.push_back(s.t_r);
        py::dict out;
        out["transition"] = write_transition_model(tm);
        out["exec_per_unit"] = write_exec_per_unit(pu);
        out["exec_family"] = write_exec_family(derive_exec_family(trajs, pu, grid));
        return out;
      },
      py::arg("manifest_json"), py::arg("seed") = 0, py::arg("horizon") = 10.0, py::arg("step") = 0.5,
      py::arg("delta") = 0.5, py::arg("threads") = 0u,
      "Fit transition, per-unit and execution-time models on the simulated clock; returns JSON documents");

  m.def(
      "corpus_manifest",
      [](std::uint64_t seed, std::size_t count, int n_nodes, int max_parents, int max_cardinality, double edge_density) {
        Corpus c;
        c.seed = seed;
        c.count = count;
        c.params = params(n_nodes, max_parents, max_cardinality, edge_density);
        return write_corpus_manifest(read_corpus_manifest(write_corpus_manifest(c)));
      },
      py::arg("seed"), py::arg("count") = 200, py::arg("n_nodes") = 30, py::arg("max_parents") = 4,
      py::arg("max_cardinality") = 4, py::arg("edge_density") = 0.3);

  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::filesystem::path& base_dir) {
        const auto result = run_experiment(read_experiment_config(config_json, base_dir));
        return py::make_tuple(write_score_csv(result.scores), write_summary_csv(result.summary));
      },
      py::arg("config_json"), py::arg("base_dir") = std::filesystem::path{},
      "Run the policy comparison; returns (scores csv, summary csv)");
}
