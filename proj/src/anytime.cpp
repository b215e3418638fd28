#include "reform/anytime.hpp"

#include "reform/csv.hpp"
#include "reform/error.hpp"

namespace reform {

std::string_view to_string(Strategy s) { return s == Strategy::KSearch ? "ksearch" : "mcs"; }

Strategy parse_strategy(std::string_view s) {
  if (s == "ksearch") return Strategy::KSearch;
  if (s == "mcs") return Strategy::Mcs;
  throw ParseError("unknown strategy '" + std::string(s) + "'");
}

ClockMode parse_clock_mode(const std::string& s) {
  if (s == "wall") return ClockMode::Wall;
  if (s == "sim") return ClockMode::Sim;
  throw ConfigError("unknown clock mode '" + s + "' (expected wall or sim)");
}

std::string to_string(ClockMode m) { return m == ClockMode::Wall ? "wall" : "sim"; }

AnytimeReformulator::AnytimeReformulator(const BeliefNetwork& net, std::uint64_t seed, Clock& clock)
    : net_(net), moral_(moralize(net)), cards_(net.cardinalities()), rng_(seed), clock_(clock), start_(clock.now()) {}

RuntimeEstimate AnytimeReformulator::step() {
  const std::size_t index = candidates_++;
  Strategy strategy = Strategy::KSearch;
  EliminationOrdering ord;
  if (index == 0) {
    ord = k_search_order(moral_, cards_, kFirstCandidateSeed);
  } else if (rng_.bernoulli(0.5)) {
    ord = k_search_order(moral_, cards_, rng_.next());
  } else {
    strategy = Strategy::Mcs;
    ord = mcs_order(moral_, static_cast<int>(rng_.below(static_cast<std::uint64_t>(net_.size()))));
  }
  JoinTree tree = join_tree_from_ordering(moral_, ord, cards_);
  clock_.charge_candidate();
  const RuntimeEstimate estimate = tree.estimate;
  if (!state_.has_tree() || estimate < state_.best_estimate) {
    state_.best_estimate = estimate;
    state_.best_tree = std::move(tree);
  }
  state_.elapsed_t_r = elapsed();
  state_.trajectory.push_back({state_.elapsed_t_r, state_.best_estimate, index, strategy});
  return estimate;
}

void AnytimeReformulator::run_for(double seconds) {
  const double target = elapsed() + seconds;
  do {
    step();
  } while (elapsed() < target);
}

void AnytimeReformulator::run_until(double t_r) {
  while (!state_.has_tree() || elapsed() < t_r) step();
}

ReformulationState anytime_reformulate(const BeliefNetwork& net, double budget, std::uint64_t seed, Clock& clock) {
  if (!(budget > 0.0)) throw ConfigError("anytime_reformulate: budget must be positive");
  AnytimeReformulator search(net, seed, clock);
  search.run_until(budget);
  return search.state();
}

ReformulationState anytime_reformulate(const BeliefNetwork& net,
                                       const std::function<bool(const ReformulationState&)>& keep_going,
                                       std::uint64_t seed, Clock& clock) {
  if (!keep_going) throw ConfigError("anytime_reformulate: callback required");
  AnytimeReformulator search(net, seed, clock);
  do {
    search.step();
  } while (keep_going(search.state()));
  return search.state();
}

JoinTree first_tree(const BeliefNetwork& net) {
  auto moral = moralize(net);
  auto cards = net.cardinalities();
  return join_tree_from_ordering(moral, k_search_order(moral, cards, kFirstCandidateSeed), cards);
}

std::string write_trajectory_csv(const std::vector<TrajectoryPoint>& trajectory) {
  CsvTable t;
  t.header = {"t_r_seconds", "best_estimate", "candidate_index", "strategy"};
  for (const auto& p : trajectory) {
    t.rows.push_back({format_double(p.t_r), std::to_string(p.best.cells), std::to_string(p.candidate_index),
                      std::string(to_string(p.strategy))});
  }
  return write_csv(t);
}

std::vector<TrajectoryPoint> read_trajectory_csv(std::string_view text) {
  auto t = read_csv(text);
  std::vector<TrajectoryPoint> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out.push_back({t.number(r, "t_r_seconds"),
                   {static_cast<std::uint64_t>(parse_int(t.text(r, "best_estimate")))},
                   static_cast<std::size_t>(parse_int(t.text(r, "candidate_index"))),
                   parse_strategy(t.text(r, "strategy"))});
  }
  return out;
}

}  // namespace reform
