#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reform/control.hpp"
#include "reform/profiler.hpp"
#include "reform/value.hpp"

namespace reform {

enum class Policy { Default, Incremental };

std::string_view to_string(Policy p);
Policy parse_policy(std::string_view s);

struct NamedValueFunction {
  std::string id;
  ValueFunction vf;
};

struct ExperimentConfig {
  Corpus corpus;
  std::vector<NamedValueFunction> value_functions;
  std::vector<Policy> policies{Policy::Default, Policy::Incremental};
  double delta = 0.5;
  ProfileClock clock;
  std::uint64_t master_seed = 0;
  double evidence_fraction = 0.1;
  std::size_t max_increments = 100000;
  /// Model files for the incremental policy. Ignored when `models` is set.
  std::filesystem::path transition_path;
  std::filesystem::path per_unit_path;
  std::optional<ControlModels> models;
};

/// Reads the JSON config. Relative paths resolve against `base_dir`.
ExperimentConfig read_experiment_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ScoreRow {
  std::size_t network_id = 0;
  std::string vf_id;
  Policy policy = Policy::Default;
  double t_r = 0.0;
  double t_e = 0.0;
  double t_total = 0.0;
  double value = 0.0;
  /// Halt/continue comparisons made; not part of the CSV.
  std::size_t comparisons = 0;
};

struct SummaryRow {
  std::string vf_id;
  Policy policy = Policy::Default;
  double mean_value = 0.0;
  std::size_t n_trials = 0;
};

struct ExperimentResult {
  std::vector<ScoreRow> scores;
  std::vector<SummaryRow> summary;
};

/// Both policies on every (network, value function) pair, each trial seeded by
/// hash(master seed, network, policy, value function). Rows are ordered by
/// network, then value function, then policy.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Loads the incremental policy's models or throws ConfigError.
ControlModels resolve_models(const ExperimentConfig& cfg);

std::uint64_t trial_seed(std::uint64_t master, std::size_t network_id, Policy policy, std::string_view vf_id);

std::vector<SummaryRow> summarize(const std::vector<ScoreRow>& scores, const std::vector<NamedValueFunction>& vfs,
                                  const std::vector<Policy>& policies);

/// network_id,vf_id,policy,t_r,t_e,t_total,value
std::string write_score_csv(const std::vector<ScoreRow>& scores);
std::vector<ScoreRow> read_score_csv(std::string_view text);
/// vf_id,policy,mean_value,n_trials
std::string write_summary_csv(const std::vector<SummaryRow>& summary);
std::vector<SummaryRow> read_summary_csv(std::string_view text);

}  // namespace reform
