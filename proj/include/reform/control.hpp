#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "reform/clock.hpp"
#include "reform/inference.hpp"
#include "reform/jointree.hpp"
#include "reform/metareason.hpp"
#include "reform/network.hpp"
#include "reform/value.hpp"

namespace reform {

enum class Decision { Continue, Halt };

std::string_view to_string(Decision d);

struct ControlStep {
  std::size_t step = 0;
  double t_r = 0.0;
  RuntimeEstimate estimate;
  double ev_halt = 0.0;
  double ev_continue = 0.0;
  Decision decision = Decision::Halt;

  bool operator==(const ControlStep&) const = default;
};

struct ControlOutcome {
  double t_r_total = 0.0;
  double t_e = 0.0;
  double value = 0.0;
  JoinTree tree;
  /// Empty on success; otherwise the propagation failure message.
  std::string error;
};

/// Every comparison made by a policy; `continue` until exactly one final `halt`.
struct ControlTrace {
  std::vector<ControlStep> steps;
  ControlOutcome outcome;
};

struct ControlModels {
  TransitionModel transition;
  ExecPerUnitModel per_unit;
};

struct ControlOptions {
  Evidence evidence;
  /// Upper bound on increments; the comparison that hits it is recorded as a halt.
  std::size_t max_increments = 100000;
  /// Build and calibrate the clique tables. With a simulated clock t_e does
  /// not depend on them, so large trees can skip the work.
  bool materialize = true;
  std::uint64_t materialize_cap = kDefaultPotentialCap;
};

/// Myopic halt/continue control of the anytime search in increments of
/// `delta` (which must equal the transition model's increment). The first
/// increment always runs, then EV_halt and EV_continue are compared after
/// every increment until EV_halt >= EV_continue; the best tree is then
/// propagated and scored by V(t_r + t_e).
ControlTrace incremental_control(const BeliefNetwork& net, const ValueFunction& vf, const ControlModels& models,
                                 double delta, std::uint64_t seed, Clock& clock, const ControlOptions& options = {});

/// Halts after the first (deterministic K-search) tree; EV columns are NaN.
ControlTrace default_policy(const BeliefNetwork& net, const ValueFunction& vf, std::uint64_t seed, Clock& clock,
                            const ControlOptions& options = {});

/// Propagates `tree` with the clock and fills t_e, value and error.
ControlOutcome execute_tree(const BeliefNetwork& net, const ValueFunction& vf, const JoinTree& tree, double t_r,
                            Clock& clock, const ControlOptions& options);

/// step,t_r,estimate,ev_halt,ev_continue,decision rows, then a
/// t_r_total,t_e,value header and one line of values.
std::string write_trace_csv(const ControlTrace& trace);
ControlTrace read_trace_csv(std::string_view text);

}  // namespace reform
