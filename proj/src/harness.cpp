#include "reform/harness.hpp"

#include <cmath>
#include <map>

#include <json.hpp>

#include "parallel.hpp"
#include "reform/csv.hpp"
#include "reform/error.hpp"
#include "reform/random.hpp"

namespace reform {

using json = nlohmann::json;

std::string_view to_string(Policy p) { return p == Policy::Default ? "default" : "incremental"; }

Policy parse_policy(std::string_view s) {
  if (s == "default") return Policy::Default;
  if (s == "incremental") return Policy::Incremental;
  throw ConfigError("unknown policy '" + std::string(s) + "' (expected default or incremental)");
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace

ExperimentConfig read_experiment_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    const auto& corpus = doc.at("corpus");
    if (corpus.is_string()) {
      cfg.corpus = read_corpus_manifest(read_text_file(resolve(base_dir, corpus.get<std::string>())));
    } else {
      cfg.corpus = read_corpus_manifest(corpus.dump());
    }
    for (const auto& v : doc.at("value_functions")) {
      cfg.value_functions.push_back({v.at("id").get<std::string>(), parse_value_function(v.at("vf").get<std::string>())});
    }
    if (doc.contains("policies")) {
      cfg.policies.clear();
      for (const auto& p : doc["policies"]) cfg.policies.push_back(parse_policy(p.get<std::string>()));
    }
    cfg.delta = doc.value("delta_seconds", cfg.delta);
    cfg.clock.mode = parse_clock_mode(doc.value("clock", std::string("sim")));
    cfg.master_seed = doc.value("master_seed", cfg.master_seed);
    cfg.evidence_fraction = doc.value("evidence_fraction", cfg.evidence_fraction);
    cfg.max_increments = doc.value("max_increments", cfg.max_increments);
    cfg.clock.threads = doc.value("threads", cfg.clock.threads);
    if (doc.contains("sim")) {
      const auto& sim = doc["sim"];
      cfg.clock.candidate_cost = sim.value("candidate_cost", cfg.clock.candidate_cost);
      cfg.clock.tau.median = sim.value("tau_median", cfg.clock.tau.median);
      cfg.clock.tau.log_sigma = sim.value("tau_log_sigma", cfg.clock.tau.log_sigma);
      cfg.clock.materialize_cap = sim.value("materialize_cap", cfg.clock.materialize_cap);
    }
    if (doc.contains("models")) {
      const auto& m = doc["models"];
      if (m.contains("transition")) cfg.transition_path = resolve(base_dir, m["transition"].get<std::string>());
      if (m.contains("exec_per_unit")) cfg.per_unit_path = resolve(base_dir, m["exec_per_unit"].get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  std::map<std::string, int> seen;
  for (const auto& v : cfg.value_functions) {
    if (v.id.empty() || v.id.find_first_of(",\n\"") != std::string::npos) {
      throw ConfigError("experiment config: value function id '" + v.id + "' is empty or has CSV metacharacters");
    }
    if (seen[v.id]++) throw ConfigError("experiment config: duplicate value function id '" + v.id + "'");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return read_experiment_config(read_text_file(path), path.parent_path());
}

ControlModels resolve_models(const ExperimentConfig& cfg) {
  if (cfg.models) return *cfg.models;
  auto need = [](const std::filesystem::path& p, const char* what) {
    if (p.empty()) throw ConfigError(std::string("experiment config: incremental policy needs a ") + what + " model file");
    if (!std::filesystem::is_regular_file(p)) throw ConfigError(std::string(what) + " model file not found: " + p.string());
  };
  need(cfg.transition_path, "transition");
  need(cfg.per_unit_path, "exec_per_unit");
  return {read_transition_model(read_text_file(cfg.transition_path)),
          read_exec_per_unit(read_text_file(cfg.per_unit_path))};
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t network_id, Policy policy, std::string_view vf_id) {
  return derive_seed({master, network_id, hash_string(to_string(policy)), hash_string(vf_id)});
}

std::vector<SummaryRow> summarize(const std::vector<ScoreRow>& scores, const std::vector<NamedValueFunction>& vfs,
                                  const std::vector<Policy>& policies) {
  std::vector<SummaryRow> out;
  for (const auto& v : vfs) {
    for (auto p : policies) {
      SummaryRow s{v.id, p, 0.0, 0};
      double sum = 0.0;
      for (const auto& r : scores) {
        if (r.vf_id == v.id && r.policy == p) {
          sum += r.value;
          ++s.n_trials;
        }
      }
      s.mean_value = s.n_trials ? sum / static_cast<double>(s.n_trials) : std::nan("");
      out.push_back(s);
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.value_functions.empty()) throw ConfigError("experiment: no value functions");
  if (cfg.policies.empty()) throw ConfigError("experiment: no policies");
  if (!(cfg.delta > 0.0)) throw ConfigError("experiment: delta must be positive");
  for (const auto& v : cfg.value_functions) check(v.vf);
  std::optional<ControlModels> models;
  for (auto p : cfg.policies) {
    if (p == Policy::Incremental && !models) models = resolve_models(cfg);
  }

  const std::size_t per_network = cfg.value_functions.size() * cfg.policies.size();
  std::vector<ScoreRow> rows(cfg.corpus.count * per_network);
  const unsigned threads = cfg.clock.mode == ClockMode::Wall ? 1u : cfg.clock.threads;
  detail::parallel_for(cfg.corpus.count, threads, [&](std::size_t i) {
    const auto net = cfg.corpus.network(i);
    ControlOptions options;
    options.evidence =
        random_evidence(net, cfg.evidence_fraction, derive_seed({cfg.master_seed, cfg.corpus.network_seed(i), hash_string("evidence")}));
    options.max_increments = cfg.max_increments;
    options.materialize_cap = cfg.clock.materialize_cap;
    std::size_t slot = i * per_network;
    for (const auto& v : cfg.value_functions) {
      for (auto p : cfg.policies) {
        auto clock = make_clock(cfg.clock, cfg.corpus, i);
        const auto seed = trial_seed(cfg.master_seed, i, p, v.id);
        auto trace = p == Policy::Default ? default_policy(net, v.vf, seed, *clock, options)
                                          : incremental_control(net, v.vf, *models, cfg.delta, seed, *clock, options);
        auto& row = rows[slot++];
        row.network_id = i;
        row.vf_id = v.id;
        row.policy = p;
        row.t_r = trace.outcome.t_r_total;
        row.t_e = trace.outcome.t_e;
        row.t_total = row.t_r + row.t_e;
        row.value = trace.outcome.value;
        row.comparisons = p == Policy::Default ? 0 : trace.steps.size();
      }
    }
  });
  ExperimentResult result;
  result.summary = summarize(rows, cfg.value_functions, cfg.policies);
  result.scores = std::move(rows);
  return result;
}

std::string write_score_csv(const std::vector<ScoreRow>& scores) {
  CsvTable t;
  t.header = {"network_id", "vf_id", "policy", "t_r", "t_e", "t_total", "value"};
  for (const auto& r : scores) {
    t.rows.push_back({std::to_string(r.network_id), r.vf_id, std::string(to_string(r.policy)), format_double(r.t_r),
                      format_double(r.t_e), format_double(r.t_total), format_double(r.value)});
  }
  return write_csv(t);
}

std::vector<ScoreRow> read_score_csv(std::string_view text) {
  auto t = read_csv(text);
  std::vector<ScoreRow> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    ScoreRow row;
    row.network_id = static_cast<std::size_t>(parse_int(t.text(r, "network_id")));
    row.vf_id = t.text(r, "vf_id");
    row.policy = parse_policy(t.text(r, "policy"));
    row.t_r = t.number(r, "t_r");
    row.t_e = t.number(r, "t_e");
    row.t_total = t.number(r, "t_total");
    row.value = t.number(r, "value");
    out.push_back(std::move(row));
  }
  return out;
}

std::string write_summary_csv(const std::vector<SummaryRow>& summary) {
  CsvTable t;
  t.header = {"vf_id", "policy", "mean_value", "n_trials"};
  for (const auto& s : summary) {
    t.rows.push_back({s.vf_id, std::string(to_string(s.policy)), format_double(s.mean_value), std::to_string(s.n_trials)});
  }
  return write_csv(t);
}

std::vector<SummaryRow> read_summary_csv(std::string_view text) {
  auto t = read_csv(text);
  std::vector<SummaryRow> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out.push_back({t.text(r, "vf_id"), parse_policy(t.text(r, "policy")), t.number(r, "mean_value"),
                   static_cast<std::size_t>(parse_int(t.text(r, "n_trials")))});
  }
  return out;
}

}  // namespace reform
