#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reform/histogram.hpp"
#include "reform/jointree.hpp"
#include "reform/value.hpp"

namespace reform {

/// p(t_e | t_r, context) as a histogram over execution seconds.
struct ExecTimeDistribution {
  Histogram hist;
  std::string context;
};

/// One execution-time distribution per point of an increasing t_r grid.
struct ExecTimeFamily {
  std::vector<double> grid;
  std::vector<ExecTimeDistribution> dists;
  std::string context;

  /// Throws ValidationError unless the grid is strictly increasing and matches dists.
  void check() const;
};

/// Distribution of rho = E(t_r + delta) / E(t_r), binned by t_r.
///
/// Bin b covers [t_r_bin_edges[b], t_r_bin_edges[b+1]); the last bin extends
/// to infinity and times before the first edge use bin 0.
struct TransitionModel {
  double delta = 0.5;
  std::vector<double> t_r_bin_edges;
  std::vector<Histogram> rho;
  /// True where a bin had no observations and copied its nearest neighbour.
  std::vector<bool> inherited;

  std::size_t bin_for(double t_r) const;
  void check() const;
};

/// Distribution of tau = t_e / E, seconds per state-space cell.
struct ExecPerUnitModel {
  Histogram tau;
  std::string context;

  void check() const;
};

/// Tie rule shared by every optimizer and by the halting test: values within
/// a relative 1e-12 of each other are equal.
bool values_tie(double x, double y);

/// m^(1..n): element i-1 is sum_bins p * t^i.
std::vector<double> moments(const Histogram& d, int n);

/// sum_bins V(t_r + t_e) p(t_e).
double expected_value(const ValueFunction& vf, double t_r, const Histogram& d);

struct AprioriResult {
  double t_r = 0.0;
  double ev = 0.0;
  std::vector<double> ev_curve;  // parallel to the family's grid
};

/// Grid argmax of expected value; ties go to the smallest t_r.
AprioriResult optimize_apriori(const ValueFunction& vf, const ExecTimeFamily& fam);

struct DeadlineResult {
  double t_r = 0.0;
  double probability = 0.0;
};

/// Grid argmax of P(t_r + t_e <= a | t_r); ties go to the smallest t_r.
DeadlineResult deadline_optimum(const ExecTimeFamily& fam, double a, double k = 1.0);

/// Derivative of the polynomial expected value with respect to t_r at grid
/// point t_r, from the family's moments and central differences of the
/// moments across neighbouring grid points. Zero at an interior optimum.
/// Throws BoundaryError unless t_r is an interior grid point.
double polynomial_foc_residual(const Polynomial& poly, const ExecTimeFamily& fam, double t_r);

/// (t_r, residual) for every interior grid point.
std::vector<std::pair<double, double>> polynomial_foc_curve(const Polynomial& poly, const ExecTimeFamily& fam);

struct TargetResult {
  double t_r = 0.0;
  double density = 0.0;
};

/// Grid argmax of the density of t_e at a - t_r; ties go to the smallest
/// t_r. Throws NoFeasibleTarget when a - t_r leaves every bin at every grid point.
TargetResult target_optimum(const ExecTimeFamily& fam, double a);

/// sum_tau V(t_r + tau * E) p(tau).
double ev_halt(const ValueFunction& vf, double t_r, double estimate, const ExecPerUnitModel& pu);
inline double ev_halt(const ValueFunction& vf, double t_r, RuntimeEstimate e, const ExecPerUnitModel& pu) {
  return ev_halt(vf, t_r, e.value(), pu);
}

/// sum_rho p(rho | t_r) sum_tau V(t_r + delta + tau * rho * E) p(tau).
double ev_continue(const ValueFunction& vf, double t_r, double estimate, const TransitionModel& tm,
                   const ExecPerUnitModel& pu);
inline double ev_continue(const ValueFunction& vf, double t_r, RuntimeEstimate e, const TransitionModel& tm,
                          const ExecPerUnitModel& pu) {
  return ev_continue(vf, t_r, e.value(), tm, pu);
}

/// Halting criterion: EV_halt >= EV_continue, with ties counted as halting.
bool should_halt(double ev_halt_value, double ev_continue_value);

// Model documents (JSON).
std::string write_transition_model(const TransitionModel& tm);
TransitionModel read_transition_model(std::string_view text);
std::string write_exec_per_unit(const ExecPerUnitModel& pu);
ExecPerUnitModel read_exec_per_unit(std::string_view text);
std::string write_exec_family(const ExecTimeFamily& fam);
ExecTimeFamily read_exec_family(std::string_view text);

}  // namespace reform
