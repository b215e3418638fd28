#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "reform/clock.hpp"
#include "reform/metareason.hpp"
#include "reform/network.hpp"

namespace reform {

/// Reproducible set of random networks: network i is generated from
/// derive_seed({seed, i}).
struct Corpus {
  GeneratorParams params;
  std::uint64_t seed = 0;
  std::size_t count = 200;

  BeliefNetwork network(std::size_t index) const;
  std::uint64_t network_seed(std::size_t index) const;
  bool operator==(const Corpus&) const = default;
};

std::string write_corpus_manifest(const Corpus& corpus);
Corpus read_corpus_manifest(std::string_view text);

/// Per-network ground truth for simulated execution time: tau is lognormal
/// with the given median and log-space spread, drawn once per network.
struct TauSpec {
  double median = 1e-6;
  double log_sigma = 0.5;

  double draw(std::uint64_t seed) const;
  bool operator==(const TauSpec&) const = default;
};

/// The simulated tau of corpus network `index`. Depends only on the network,
/// so profiling and experiments see the same machine.
double network_tau(const Corpus& corpus, const TauSpec& spec, std::size_t index);

/// How profiling runs are clocked.
struct ProfileClock {
  ClockMode mode = ClockMode::Sim;
  double candidate_cost = SimClock::kDefaultCandidateCost;
  TauSpec tau;
  std::uint64_t materialize_cap = std::uint64_t{1} << 20;
  /// Worker threads for simulated mode (0 = hardware concurrency). Wall mode
  /// always runs serially.
  unsigned threads = 0;
};

/// Clock for one corpus network: a SimClock with that network's tau, or a WallClock.
std::unique_ptr<Clock> make_clock(const ProfileClock& clock, const Corpus& corpus, std::size_t index);

struct TrajectorySample {
  double t_r = 0.0;
  double estimate = 0.0;
  bool operator==(const TrajectorySample&) const = default;
};

struct Trajectory {
  std::size_t network_id = 0;
  std::vector<TrajectorySample> samples;

  /// Estimates divided by the first estimate.
  std::vector<double> normalized() const;
  bool operator==(const Trajectory&) const = default;
};

/// Best estimate of each corpus network sampled every `sample_step` up to
/// `horizon`, with the search seeded per network.
std::vector<Trajectory> collect_trajectories(const Corpus& corpus, double horizon, double sample_step,
                                             const ProfileClock& clock, std::uint64_t seed);

/// Left edges k * width, k >= 1, of every t_r bin whose transition ends by `horizon`.
std::vector<double> transition_bin_edges(double horizon, double width, double delta);

/// Histogram of rho = E(t + delta) / E(t) per t_r bin. Observations of exactly
/// 1 stay a point mass; the rest go into `nbins` bins over [0, 1]. Empty bins
/// copy the nearest non-empty bin (lower one on ties) and are flagged.
TransitionModel fit_transition_model(const std::vector<Trajectory>& trajectories, double delta,
                                     std::vector<double> t_r_bin_edges, std::size_t nbins = kDefaultBinCount);

/// tau = t_e / E of the first K-search tree of every corpus network, with
/// random evidence on `evidence_fraction` of the variables.
ExecPerUnitModel collect_exec_per_unit(const Corpus& corpus, const ProfileClock& clock, std::uint64_t seed,
                                       double evidence_fraction = 0.1, std::size_t nbins = kDefaultBinCount);

/// p(t_e | t_r): equal-weight mixture over trajectories of the tau model
/// scaled by each trajectory's best estimate at t_r.
ExecTimeFamily derive_exec_family(const std::vector<Trajectory>& trajectories, const ExecPerUnitModel& pu,
                                  const std::vector<double>& grid, std::size_t nbins = kDefaultBinCount);

/// One CSV per network (t_r_seconds,best_estimate,normalized) plus index.csv.
void write_trajectory_archive(const std::vector<Trajectory>& trajectories, const std::filesystem::path& dir);
std::vector<Trajectory> read_trajectory_archive(const std::filesystem::path& dir);

}  // namespace reform
