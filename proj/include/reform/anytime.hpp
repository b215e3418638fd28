#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "reform/clock.hpp"
#include "reform/jointree.hpp"
#include "reform/network.hpp"
#include "reform/random.hpp"

namespace reform {

enum class Strategy { KSearch, Mcs };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

struct TrajectoryPoint {
  double t_r = 0.0;
  RuntimeEstimate best;
  std::size_t candidate_index = 0;
  Strategy strategy = Strategy::KSearch;

  bool operator==(const TrajectoryPoint&) const = default;
};

/// Best reformulation found so far. `trajectory` gets one point per candidate.
struct ReformulationState {
  double elapsed_t_r = 0.0;
  JoinTree best_tree;
  RuntimeEstimate best_estimate;
  std::vector<TrajectoryPoint> trajectory;

  bool has_tree() const noexcept { return !trajectory.empty(); }
};

/// Tie-break seed of the first candidate. Fixed so every run (and the default
/// policy) starts from the same K-search tree.
inline constexpr std::uint64_t kFirstCandidateSeed = 0;

/// Flexible generate-and-test search over join trees.
///
/// The first candidate is a K-search ordering with fixed tie-breaks. Every
/// later candidate picks K-search (fresh tie-break seed) or MCS (random start
/// node) with equal probability. The best tree can be read between any two
/// steps.
class AnytimeReformulator {
 public:
  AnytimeReformulator(const BeliefNetwork& net, std::uint64_t seed, Clock& clock);

  /// Evaluates one candidate and returns its estimate.
  RuntimeEstimate step();
  /// Steps until `seconds` have elapsed since this call began (at least one step).
  void run_for(double seconds);
  /// Steps until the search has consumed `t_r` seconds in total (at least one tree).
  void run_until(double t_r);

  const ReformulationState& state() const noexcept { return state_; }
  std::size_t candidates() const noexcept { return candidates_; }

 private:
  double elapsed() const { return clock_.now() - start_; }

  const BeliefNetwork& net_;
  UndirectedGraph moral_;
  std::vector<int> cards_;
  Rng rng_;
  Clock& clock_;
  double start_;
  std::size_t candidates_ = 0;
  ReformulationState state_;
};

/// Runs the flexible search for `budget` seconds of clock time.
ReformulationState anytime_reformulate(const BeliefNetwork& net, double budget, std::uint64_t seed, Clock& clock);

/// Runs until `keep_going(state)` returns false; it is consulted after every candidate.
ReformulationState anytime_reformulate(const BeliefNetwork& net,
                                       const std::function<bool(const ReformulationState&)>& keep_going,
                                       std::uint64_t seed, Clock& clock);

/// The deterministic first K-search tree.
JoinTree first_tree(const BeliefNetwork& net);

/// CSV with columns t_r_seconds,best_estimate,candidate_index,strategy.
std::string write_trajectory_csv(const std::vector<TrajectoryPoint>& trajectory);
std::vector<TrajectoryPoint> read_trajectory_csv(std::string_view text);

}  // namespace reform
