#include "reform/control.hpp"

#include <cmath>
#include <limits>

#include "reform/anytime.hpp"
#include "reform/csv.hpp"
#include "reform/error.hpp"

namespace reform {

std::string_view to_string(Decision d) { return d == Decision::Continue ? "continue" : "halt"; }

ControlOutcome execute_tree(const BeliefNetwork& net, const ValueFunction& vf, const JoinTree& tree, double t_r,
                            Clock& clock, const ControlOptions& options) {
  ControlOutcome out;
  out.t_r_total = t_r;
  out.tree = tree;
  const bool skip_tables = clock.simulated() && (!options.materialize || tree.estimate.cells > options.materialize_cap);
  try {
    if (skip_tables) {
      out.t_e = clock.time_execution(tree.estimate, nullptr);
    } else {
      // Table construction is part of the inference cycle, so it is timed too.
      SimClock inner;
      out.t_e = clock.time_execution(tree.estimate, [&] {
        auto pots = assign_potentials(net, tree);
        propagate(pots, tree, options.evidence, inner);
      });
    }
    out.value = eval_value(vf, out.t_r_total + out.t_e);
  } catch (const Error& e) {
    out.error = e.what();
    out.t_e = std::numeric_limits<double>::quiet_NaN();
    out.value = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

ControlTrace incremental_control(const BeliefNetwork& net, const ValueFunction& vf, const ControlModels& models,
                                 double delta, std::uint64_t seed, Clock& clock, const ControlOptions& options) {
  if (!(delta > 0.0)) throw ConfigError("incremental_control: delta must be positive");
  if (std::abs(delta - models.transition.delta) > 1e-12 * std::max(1.0, delta)) {
    throw ConfigError("incremental_control: delta differs from the transition model's increment");
  }
  models.transition.check();
  models.per_unit.check();

  ControlTrace trace;
  AnytimeReformulator search(net, seed, clock);
  std::size_t increments = 1;
  search.run_until(scheduled_time(1, delta));
  while (true) {
    const auto& state = search.state();
    ControlStep step;
    step.step = trace.steps.size();
    step.t_r = state.elapsed_t_r;
    step.estimate = state.best_estimate;
    step.ev_halt = ev_halt(vf, step.t_r, step.estimate, models.per_unit);
    step.ev_continue = ev_continue(vf, step.t_r, step.estimate, models.transition, models.per_unit);
    const bool halt = should_halt(step.ev_halt, step.ev_continue) || increments >= options.max_increments;
    step.decision = halt ? Decision::Halt : Decision::Continue;
    trace.steps.push_back(step);
    if (halt) break;
    ++increments;
    search.run_until(scheduled_time(static_cast<std::int64_t>(increments), delta));
  }
  const auto& state = search.state();
  trace.outcome = execute_tree(net, vf, state.best_tree, state.elapsed_t_r, clock, options);
  return trace;
}

ControlTrace default_policy(const BeliefNetwork& net, const ValueFunction& vf, std::uint64_t seed, Clock& clock,
                            const ControlOptions& options) {
  AnytimeReformulator search(net, seed, clock);
  search.step();
  const auto& state = search.state();
  ControlTrace trace;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  trace.steps.push_back({0, state.elapsed_t_r, state.best_estimate, nan, nan, Decision::Halt});
  trace.outcome = execute_tree(net, vf, state.best_tree, state.elapsed_t_r, clock, options);
  return trace;
}

std::string write_trace_csv(const ControlTrace& trace) {
  CsvTable steps;
  steps.header = {"step", "t_r", "estimate", "ev_halt", "ev_continue", "decision"};
  for (const auto& s : trace.steps) {
    steps.rows.push_back({std::to_string(s.step), format_double(s.t_r), std::to_string(s.estimate.cells),
                          format_double(s.ev_halt), format_double(s.ev_continue), std::string(to_string(s.decision))});
  }
  CsvTable final_line;
  final_line.header = {"t_r_total", "t_e", "value"};
  final_line.rows.push_back({format_double(trace.outcome.t_r_total), format_double(trace.outcome.t_e),
                             format_double(trace.outcome.value)});
  return write_csv(steps) + write_csv(final_line);
}

ControlTrace read_trace_csv(std::string_view text) {
  auto split = text.find("\nt_r_total,");
  if (split == std::string_view::npos) throw ParseError("trace csv: missing t_r_total section");
  auto steps = read_csv(text.substr(0, split + 1));
  auto tail = read_csv(text.substr(split + 1));
  ControlTrace trace;
  for (std::size_t r = 0; r < steps.rows.size(); ++r) {
    ControlStep s;
    s.step = static_cast<std::size_t>(parse_int(steps.text(r, "step")));
    s.t_r = steps.number(r, "t_r");
    s.estimate.cells = static_cast<std::uint64_t>(parse_int(steps.text(r, "estimate")));
    s.ev_halt = steps.number(r, "ev_halt");
    s.ev_continue = steps.number(r, "ev_continue");
    const auto& d = steps.text(r, "decision");
    if (d != "halt" && d != "continue") throw ParseError("trace csv: bad decision '" + d + "'");
    s.decision = d == "halt" ? Decision::Halt : Decision::Continue;
    trace.steps.push_back(s);
  }
  if (tail.rows.size() != 1) throw ParseError("trace csv: expected one final line");
  trace.outcome.t_r_total = tail.number(0, "t_r_total");
  trace.outcome.t_e = tail.number(0, "t_e");
  trace.outcome.value = tail.number(0, "value");
  return trace;
}

}  // namespace reform
